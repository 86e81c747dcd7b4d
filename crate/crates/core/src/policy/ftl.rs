use crate::bandit::{argmax_first, Arm, ObservationSlice};
use crate::env::Stream;
use crate::error::{Error, Result};

use super::{Policy, UcbStats};

/// Arm with the largest cumulative reward, smallest index on ties.
pub fn ftl_predict(cumulative: &[f64]) -> Result<Arm> {
    if cumulative.is_empty() {
        return Err(Error::Precondition("no arms to predict from".into()));
    }
    Ok(Arm::from_index(argmax_first(cumulative)))
}

/// Greedy play on empirical means of everything observed so far. Round 1
/// plays arm 1, which observes every arm.
#[derive(Debug, Clone)]
pub struct FollowTheLeader {
    stats: UcbStats,
}

impl FollowTheLeader {
    pub fn new(k: usize) -> Self {
        FollowTheLeader {
            stats: UcbStats::new(k),
        }
    }
}

impl Policy for FollowTheLeader {
    fn name(&self) -> &'static str {
        "ftl"
    }

    fn select(&mut self, t: u64, _rng: &mut Stream) -> Result<Arm> {
        if t == 1 {
            return Ok(Arm::new(1));
        }
        ftl_predict(self.stats.emp_means())
    }

    fn observe(&mut self, _t: u64, slice: &ObservationSlice<'_>) -> Result<()> {
        for (arm, x) in slice.iter() {
            self.stats.record(arm, x);
        }
        Ok(())
    }
}
