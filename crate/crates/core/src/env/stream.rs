//! Deterministic random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the master seed (expanded
//! with `SeedableRng::seed_from_u64`) and positioned on ChaCha stream id
//! `4 * run + lane`. Two streams therefore never overlap, and the stream of
//! a run depends only on `(master seed, run index, lane)`, not on how runs
//! are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// What a stream is used for within one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Lane {
    /// Round samples: arms 1..K (or bidders 1..n) in order, every round.
    Environment = 0,
    /// Internal randomization of a policy (one draw per round for EXP3-RTB).
    Policy = 1,
    /// Instance construction (random means, member selection).
    Instance = 2,
    Aux = 3,
}

pub fn stream(master_seed: u64, run: u64, lane: Lane) -> Stream {
    debug_assert!(run < 1 << 62);
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream((run << 2) | lane as u64);
    rng
}
