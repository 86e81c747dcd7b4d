//! Stochastic bandits with one-sided full-information feedback: playing arm
//! `i` reveals the rewards of every arm `j >= i` in that round.
//!
//! The crate holds the environments (Bernoulli and reserve-price auction),
//! the elimination policy with its doubling variant and the UCB/EXP3
//! baselines, closed-form regret bounds with an exact integer-program
//! oracle, event monitors, exact binomial tail checks, and the experiment
//! runner used by the `osfib` binary.

pub mod bandit;
pub mod bounds;
pub mod env;
mod error;
pub mod lowerbound;
pub mod policy;
pub mod runner;
pub mod verify;

pub use bandit::{
    best_arm, gap_profile, observation_slice, Arm, Family, GapProfile, InstanceSpec,
    ObservationSlice, RegretRow, RegretTrace,
};
pub use env::{stream, Lane, Stream};
pub use error::{Error, Result};
pub use policy::{Policy, PolicyKind};
