//! Upper-confidence-bound baselines: UCB-N folds in every observed arm,
//! UCB1 only the played one.

use crate::bandit::{Arm, ObservationSlice};
use crate::env::Stream;
use crate::error::Result;

use super::Policy;

/// Per-arm sample counts and running means.
#[derive(Debug, Clone, PartialEq)]
pub struct UcbStats {
    counts: Vec<u64>,
    emp_means: Vec<f64>,
}

impl UcbStats {
    pub fn new(k: usize) -> Self {
        UcbStats {
            counts: vec![0; k],
            emp_means: vec![0.0; k],
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn emp_means(&self) -> &[f64] {
        &self.emp_means
    }

    pub fn record(&mut self, arm: Arm, x: f64) {
        let i = arm.index();
        self.counts[i] += 1;
        self.emp_means[i] += (x - self.emp_means[i]) / self.counts[i] as f64;
    }

    /// `argmax_i mu_hat_i + sqrt(2 ln t / n_i)`, unvisited arms first,
    /// smallest index on ties.
    pub fn argmax_index(&self, t: u64) -> Arm {
        let log_t = (t as f64).ln();
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (i, (&n, &m)) in self.counts.iter().zip(&self.emp_means).enumerate() {
            let val = if n == 0 {
                f64::INFINITY
            } else {
                m + (2.0 * log_t / n as f64).sqrt()
            };
            if val > best_val {
                best = i;
                best_val = val;
            }
        }
        Arm::from_index(best)
    }
}

#[derive(Debug, Clone)]
pub struct UcbN {
    stats: UcbStats,
}

impl UcbN {
    pub fn new(k: usize) -> Self {
        UcbN {
            stats: UcbStats::new(k),
        }
    }

    pub fn stats(&self) -> &UcbStats {
        &self.stats
    }
}

impl Policy for UcbN {
    fn name(&self) -> &'static str {
        "ucbn"
    }

    fn select(&mut self, t: u64, _rng: &mut Stream) -> Result<Arm> {
        // Arm 1 observes every arm, which initializes all counters at once.
        if t == 1 {
            return Ok(Arm::new(1));
        }
        Ok(self.stats.argmax_index(t))
    }

    fn observe(&mut self, _t: u64, slice: &ObservationSlice<'_>) -> Result<()> {
        for (arm, x) in slice.iter() {
            self.stats.record(arm, x);
        }
        Ok(())
    }
}

/// Classical UCB1 with bandit feedback.
#[derive(Debug, Clone)]
pub struct Ucb1 {
    stats: UcbStats,
}

impl Ucb1 {
    pub fn new(k: usize) -> Self {
        Ucb1 {
            stats: UcbStats::new(k),
        }
    }

    pub fn stats(&self) -> &UcbStats {
        &self.stats
    }
}

impl Policy for Ucb1 {
    fn name(&self) -> &'static str {
        "ucb1"
    }

    fn select(&mut self, t: u64, _rng: &mut Stream) -> Result<Arm> {
        let k = self.stats.counts.len() as u64;
        if t <= k {
            return Ok(Arm::new(t as usize));
        }
        Ok(self.stats.argmax_index(t))
    }

    fn observe(&mut self, _t: u64, slice: &ObservationSlice<'_>) -> Result<()> {
        let played = slice.first();
        self.stats.record(played, slice.values()[0]);
        Ok(())
    }
}
