//! Exponential-weights baseline for one-sided feedback.
//!
//! This is a stand-in for EXP3-RTB, whose exact tuning is not reproduced
//! here: exponential weights mixed with uniform exploration, where the
//! reward of arm `i` is importance-weighted by the probability that `i` is
//! observed, `q_i = p_1 + ... + p_i`.

use rand::Rng;

use crate::bandit::{Arm, ObservationSlice};
use crate::env::Stream;
use crate::error::{Error, Result};

use super::Policy;

#[derive(Debug, Clone)]
pub struct Exp3Rtb {
    /// Kept normalized so the largest weight is 1.
    weights: Vec<f64>,
    eta: f64,
    gamma: f64,
    probs: Vec<f64>,
    /// `q_i`, cumulative sums of `probs`.
    observe_probs: Vec<f64>,
    last_arm: Option<Arm>,
}

impl Exp3Rtb {
    /// `eta = sqrt(ln K / T)`, `gamma = min(1, eta)`.
    pub fn new(k: usize, horizon: u64) -> Self {
        let eta = ((k as f64).ln() / horizon as f64).sqrt();
        Self::with_params(k, eta, eta.min(1.0))
    }

    pub fn with_params(k: usize, eta: f64, gamma: f64) -> Self {
        assert!(k >= 1 && eta >= 0.0 && (0.0..=1.0).contains(&gamma));
        let mut s = Exp3Rtb {
            weights: vec![1.0; k],
            eta,
            gamma,
            probs: vec![0.0; k],
            observe_probs: vec![0.0; k],
            last_arm: None,
        };
        s.refresh_probs();
        s
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sampling distribution for the next round.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability that each arm is observed next round.
    pub fn observe_probs(&self) -> &[f64] {
        &self.observe_probs
    }

    fn refresh_probs(&mut self) {
        let k = self.weights.len() as f64;
        let total: f64 = self.weights.iter().sum();
        let mut acc = 0.0;
        for ((p, q), w) in self
            .probs
            .iter_mut()
            .zip(&mut self.observe_probs)
            .zip(&self.weights)
        {
            *p = (1.0 - self.gamma) * w / total + self.gamma / k;
            acc += *p;
            *q = acc;
        }
        // Pin the last cumulative probability to exactly 1.
        if let Some(last) = self.observe_probs.last_mut() {
            *last = 1.0;
        }
    }

    /// Arm whose cumulative interval contains `u` in [0, 1).
    pub fn arm_for_draw(&self, u: f64) -> Arm {
        let i = self.observe_probs.partition_point(|&q| q <= u);
        Arm::from_index(i.min(self.observe_probs.len() - 1))
    }

    /// Importance-weighted reward estimates for one observed slice.
    pub fn estimates(&self, slice: &ObservationSlice<'_>) -> Vec<f64> {
        let mut est = vec![0.0; self.weights.len()];
        for (arm, x) in slice.iter() {
            est[arm.index()] = x / self.observe_probs[arm.index()];
        }
        est
    }
}

impl Policy for Exp3Rtb {
    fn name(&self) -> &'static str {
        "exp3rtb"
    }

    fn select(&mut self, _t: u64, rng: &mut Stream) -> Result<Arm> {
        let arm = self.arm_for_draw(rng.random::<f64>());
        self.last_arm = Some(arm);
        Ok(arm)
    }

    fn observe(&mut self, _t: u64, slice: &ObservationSlice<'_>) -> Result<()> {
        if self.last_arm.take() != Some(slice.first()) {
            return Err(Error::Feedback(
                "feedback does not start at the sampled arm".into(),
            ));
        }
        let mut top = 0.0f64;
        for (arm, x) in slice.iter() {
            let i = arm.index();
            self.weights[i] *= (self.eta * x / self.observe_probs[i]).exp();
        }
        for &w in &self.weights {
            top = top.max(w);
        }
        for w in &mut self.weights {
            *w /= top;
        }
        self.refresh_probs();
        Ok(())
    }
}
