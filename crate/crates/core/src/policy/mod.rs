//! Decision policies for the one-sided bandit loop.

mod doubling;
mod elim;
mod exp3rtb;
mod ftl;
mod ucb;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use doubling::{doubling_position, DoublingPosition, ElimDoubling};
pub use elim::{confidence_radius, log_k_t2, Elim, ElimSnapshot, ElimState, Radius};
pub use exp3rtb::Exp3Rtb;
pub use ftl::{ftl_predict, FollowTheLeader};
pub use ucb::{Ucb1, UcbN, UcbStats};

use crate::bandit::{Arm, ObservationSlice};
use crate::env::Stream;
use crate::error::{Error, Result};

/// A policy plays one arm per round and then receives the rewards of that
/// arm and every arm above it.
pub trait Policy: Send {
    fn name(&self) -> &'static str;

    /// Arm to play at round `t` (1-based). `rng` is the policy's own stream.
    fn select(&mut self, t: u64, rng: &mut Stream) -> Result<Arm>;

    fn observe(&mut self, t: u64, slice: &ObservationSlice<'_>) -> Result<()>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    Elim,
    ElimDoubling,
    #[serde(rename = "ucbn")]
    UcbN,
    Ucb1,
    Exp3rtb,
    Ftl,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::Elim,
        PolicyKind::ElimDoubling,
        PolicyKind::UcbN,
        PolicyKind::Ucb1,
        PolicyKind::Exp3rtb,
        PolicyKind::Ftl,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Elim => "elim",
            PolicyKind::ElimDoubling => "elim-doubling",
            PolicyKind::UcbN => "ucbn",
            PolicyKind::Ucb1 => "ucb1",
            PolicyKind::Exp3rtb => "exp3rtb",
            PolicyKind::Ftl => "ftl",
        }
    }

    pub fn build(self, k: usize, horizon: u64) -> Box<dyn Policy> {
        match self {
            PolicyKind::Elim => Box::new(Elim::new(k, horizon)),
            PolicyKind::ElimDoubling => Box::new(ElimDoubling::new(k)),
            PolicyKind::UcbN => Box::new(UcbN::new(k)),
            PolicyKind::Ucb1 => Box::new(Ucb1::new(k)),
            PolicyKind::Exp3rtb => Box::new(Exp3Rtb::new(k, horizon)),
            PolicyKind::Ftl => Box::new(FollowTheLeader::new(k)),
        }
    }

    /// Free-text note written into run metadata.
    pub fn description(self) -> &'static str {
        match self {
            PolicyKind::Elim => "arm elimination with known horizon",
            PolicyKind::ElimDoubling => "arm elimination restarted on segments of length 2^i",
            PolicyKind::UcbN => "UCB updating every observed arm, exploration sqrt(2 ln t / n)",
            PolicyKind::Ucb1 => "UCB1 with bandit feedback",
            PolicyKind::Exp3rtb => {
                "exponential-weights baseline standing in for EXP3-RTB: one-sided importance \
                 weighting, eta = sqrt(ln K / T), gamma = min(1, eta)"
            }
            PolicyKind::Ftl => "greedy on empirical means of observed rewards",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown policy {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in PolicyKind::ALL {
            assert_eq!(p.as_str().parse::<PolicyKind>().unwrap(), p);
            assert_eq!(p.build(3, 10).name(), p.as_str());
            assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{p}\""));
        }
        assert!("thompson".parse::<PolicyKind>().is_err());
    }
}
