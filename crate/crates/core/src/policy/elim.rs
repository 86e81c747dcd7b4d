//! Arm elimination with a known horizon.
//!
//! The policy keeps a surviving set `S`, always plays `min S`, and after each
//! round drops every arm whose empirical mean trails the leader's by more
//! than twice the confidence radius. Every surviving arm is `>= min S`, so
//! it is observed every round and its running average is its full-history
//! mean.

use crate::bandit::{argmax_first, Arm, ObservationSlice};
use crate::env::Stream;
use crate::error::{Error, Result};

use super::Policy;

/// Confidence radius at round `t`. Round 1 has no radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Unbounded,
    Finite(f64),
}

impl Radius {
    pub fn value(self) -> f64 {
        match self {
            Radius::Unbounded => f64::INFINITY,
            Radius::Finite(r) => r,
        }
    }

    /// `gap <= multiple * radius`, true for any gap when unbounded.
    pub fn covers(self, gap: f64, multiple: f64) -> bool {
        match self {
            Radius::Unbounded => true,
            Radius::Finite(r) => gap <= multiple * r,
        }
    }
}

/// `sqrt(ln(K T^2) / (2 (t - 1)))`.
pub fn confidence_radius(t: u64, k: usize, horizon: u64) -> Radius {
    assert!(t >= 1 && k >= 1 && horizon >= 1);
    if t == 1 {
        return Radius::Unbounded;
    }
    Radius::Finite((log_k_t2(k, horizon) / (2.0 * (t - 1) as f64)).sqrt())
}

/// `ln(K T^2)` without overflowing `T^2`.
pub fn log_k_t2(k: usize, horizon: u64) -> f64 {
    (k as f64).ln() + 2.0 * (horizon as f64).ln()
}

/// What the elimination test saw at the start of round `t`: `S_{t-1}`, the
/// empirical means after `t - 1` rounds, and the filtered set `S_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElimSnapshot {
    pub t: u64,
    pub prev_active: Vec<Arm>,
    /// Indexed by arm - 1; entries of eliminated arms are frozen.
    pub prev_means: Vec<f64>,
    pub active: Vec<Arm>,
}

#[derive(Debug, Clone)]
pub struct ElimState {
    k: usize,
    horizon: u64,
    /// Rounds folded into the means so far.
    round: u64,
    /// Sorted ascending, never empty.
    active: Vec<Arm>,
    emp_means: Vec<f64>,
    log_term: f64,
    snapshots: Option<Vec<ElimSnapshot>>,
}

impl ElimState {
    pub fn new(k: usize, horizon: u64) -> Self {
        assert!(k >= 1 && horizon >= 1);
        ElimState {
            k,
            horizon,
            round: 0,
            active: (1..=k).map(Arm::new).collect(),
            emp_means: vec![0.0; k],
            log_term: log_k_t2(k, horizon),
            snapshots: None,
        }
    }

    /// Records an [`ElimSnapshot`] for every round up to the horizon.
    pub fn with_recording(mut self) -> Self {
        let all: Vec<Arm> = (1..=self.k).map(Arm::new).collect();
        self.snapshots = Some(vec![ElimSnapshot {
            t: 1,
            prev_active: all.clone(),
            prev_means: self.emp_means.clone(),
            active: all,
        }]);
        self
    }

    #[cfg(test)]
    pub(crate) fn from_parts(
        k: usize,
        horizon: u64,
        round: u64,
        active: Vec<Arm>,
        emp_means: Vec<f64>,
    ) -> Self {
        let mut s = Self::new(k, horizon);
        s.round = round;
        s.active = active;
        s.emp_means = emp_means;
        s
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn active(&self) -> &[Arm] {
        &self.active
    }

    pub fn emp_mean(&self, arm: Arm) -> f64 {
        self.emp_means[arm.index()]
    }

    pub fn emp_means(&self) -> &[f64] {
        &self.emp_means
    }

    pub fn snapshots(&self) -> Option<&[ElimSnapshot]> {
        self.snapshots.as_deref()
    }

    pub fn take_snapshots(&mut self) -> Vec<ElimSnapshot> {
        self.snapshots.take().unwrap_or_default()
    }

    /// Smallest surviving arm.
    pub fn select(&self) -> Result<Arm> {
        self.active
            .first()
            .copied()
            .ok_or_else(|| Error::Invariant("elimination emptied the active set".into()))
    }

    /// Folds round `t` into the means, then filters the active set with the
    /// radius of round `t + 1`.
    pub fn update(&mut self, t: u64, slice: &ObservationSlice<'_>) -> Result<()> {
        if t != self.round + 1 {
            return Err(Error::Feedback(format!(
                "expected round {}, got {t}",
                self.round + 1
            )));
        }
        let lowest = self.select()?;
        if slice.first() > lowest || slice.last().get() != self.k {
            return Err(Error::Feedback(format!(
                "observed arms {}..={} do not cover the active set starting at {lowest}",
                slice.first(),
                slice.last()
            )));
        }
        let tf = t as f64;
        for &arm in &self.active {
            let x = slice.get(arm).expect("coverage checked above");
            let m = &mut self.emp_means[arm.index()];
            *m = *m * ((tf - 1.0) / tf) + x / tf;
        }
        self.round = t;

        let before = self.snapshots.as_ref().map(|_| self.active.clone());
        self.eliminate(self.radius_for(t + 1));
        if let (Some(snaps), Some(prev_active)) = (self.snapshots.as_mut(), before) {
            if t < self.horizon {
                snaps.push(ElimSnapshot {
                    t: t + 1,
                    prev_active,
                    prev_means: self.emp_means.clone(),
                    active: self.active.clone(),
                });
            }
        }
        Ok(())
    }

    fn radius_for(&self, t: u64) -> Radius {
        if t == 1 {
            Radius::Unbounded
        } else {
            Radius::Finite((self.log_term / (2.0 * (t - 1) as f64)).sqrt())
        }
    }

    /// Keeps `{i : mu_hat(m) - mu_hat(i) <= 2 radius}` with `m` the empirical
    /// leader (smallest index on ties).
    pub(crate) fn eliminate(&mut self, radius: Radius) {
        let Radius::Finite(r) = radius else { return };
        let means: Vec<f64> = self
            .active
            .iter()
            .map(|a| self.emp_means[a.index()])
            .collect();
        let leader = means[argmax_first(&means)];
        let threshold = 2.0 * r;
        let emp = &self.emp_means;
        self.active.retain(|a| leader - emp[a.index()] <= threshold);
    }
}

/// [`ElimState`] behind the [`Policy`] interface.
#[derive(Debug, Clone)]
pub struct Elim {
    state: ElimState,
}

impl Elim {
    pub fn new(k: usize, horizon: u64) -> Self {
        Elim {
            state: ElimState::new(k, horizon),
        }
    }

    pub fn recording(k: usize, horizon: u64) -> Self {
        Elim {
            state: ElimState::new(k, horizon).with_recording(),
        }
    }

    pub fn state(&self) -> &ElimState {
        &self.state
    }

    pub fn into_state(self) -> ElimState {
        self.state
    }
}

impl Policy for Elim {
    fn name(&self) -> &'static str {
        "elim"
    }

    fn select(&mut self, t: u64, _rng: &mut Stream) -> Result<Arm> {
        debug_assert_eq!(t, self.state.round + 1);
        self.state.select()
    }

    fn observe(&mut self, t: u64, slice: &ObservationSlice<'_>) -> Result<()> {
        self.state.update(t, slice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::observation_slice;
    use proptest::prelude::*;

    #[test]
    fn radius_examples() {
        assert_eq!(confidence_radius(1, 20, 100_000), Radius::Unbounded);
        assert_eq!(confidence_radius(1, 1, 1).value(), f64::INFINITY);
        let r2 = confidence_radius(2, 20, 100_000).value();
        approx::assert_abs_diff_eq!(r2, 3.607047490919301, epsilon = 1e-12);
        let rl = confidence_radius(100_001, 20, 100_000).value();
        approx::assert_abs_diff_eq!(rl, 0.01140648569970051, epsilon = 1e-15);
        approx::assert_abs_diff_eq!(log_k_t2(20, 100_000), 26.021583203494448, epsilon = 1e-12);
    }

    #[test]
    fn select_examples() {
        let s = ElimState::from_parts(
            10,
            100,
            5,
            vec![Arm::new(3), Arm::new(7), Arm::new(9)],
            vec![0.0; 10],
        );
        assert_eq!(s.select().unwrap(), Arm::new(3));
        assert_eq!(ElimState::new(8, 100).select().unwrap(), Arm::new(1));
        let s = ElimState::from_parts(10, 100, 5, vec![Arm::new(5)], vec![0.0; 10]);
        assert_eq!(s.select().unwrap(), Arm::new(5));
        let s = ElimState::from_parts(10, 100, 5, vec![], vec![0.0; 10]);
        assert!(matches!(s.select(), Err(Error::Invariant(_))));
    }

    #[test]
    fn filter_example() {
        let mut s = ElimState::from_parts(
            3,
            100,
            4,
            vec![Arm::new(1), Arm::new(2), Arm::new(3)],
            vec![0.9, 0.5, 0.8],
        );
        s.eliminate(Radius::Finite(0.35 / 2.0));
        assert_eq!(s.active(), &[Arm::new(1), Arm::new(3)]);
    }

    #[test]
    fn identical_rewards_never_eliminate() {
        let mut s = ElimState::new(4, 1000);
        let rewards = [0.3; 4];
        for t in 1..=1000 {
            let arm = s.select().unwrap();
            s.update(t, &observation_slice(4, arm, &rewards).unwrap())
                .unwrap();
        }
        assert_eq!(s.active().len(), 4);
    }

    #[test]
    fn first_round_keeps_everything() {
        // The radius of round 2 is sqrt(ln(K T^2) / 2) > 1/2, so one round of
        // 0/1 rewards cannot eliminate anything when K T^2 > e.
        let mut s = ElimState::new(3, 10).with_recording();
        assert_eq!(s.select().unwrap(), Arm::new(1));
        let rewards = [0.0, 1.0, 1.0];
        s.update(1, &observation_slice(3, Arm::new(1), &rewards).unwrap())
            .unwrap();
        assert_eq!(s.active().len(), 3);
        let snaps = s.snapshots().unwrap();
        assert_eq!(snaps[0].t, 1);
        assert_eq!(snaps[0].prev_active, snaps[0].active);
        assert_eq!(snaps[1].prev_means, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn rejects_feedback_that_misses_active_arms() {
        let mut s = ElimState::new(3, 10);
        let rewards = [0.0, 1.0, 1.0];
        let err = s.update(1, &observation_slice(3, Arm::new(2), &rewards).unwrap());
        assert!(matches!(err, Err(Error::Feedback(_))));
        let err = s.update(2, &observation_slice(3, Arm::new(1), &rewards).unwrap());
        assert!(matches!(err, Err(Error::Feedback(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn running_average_and_nesting(
            k in 1usize..6,
            rounds in prop::collection::vec(prop::collection::vec(0u8..=4, 6), 1..200),
        ) {
            let horizon = rounds.len() as u64;
            let mut s = ElimState::new(k, horizon);
            let mut sums = vec![0.0f64; k];
            let mut prev_active = s.active().to_vec();
            let mut prev_play = Arm::new(1);
            for (t, row) in rounds.iter().enumerate() {
                let t = t as u64 + 1;
                let rewards: Vec<f64> = row[..k].iter().map(|&v| v as f64 / 4.0).collect();
                let arm = s.select().unwrap();
                prop_assert!(arm >= prev_play);
                prev_play = arm;
                for (acc, x) in sums.iter_mut().zip(&rewards) {
                    *acc += x;
                }
                s.update(t, &observation_slice(k, arm, &rewards).unwrap()).unwrap();
                prop_assert!(!s.active().is_empty());
                prop_assert!(s.active().iter().all(|a| prev_active.contains(a)));
                prev_active = s.active().to_vec();
                for &a in s.active() {
                    let direct = sums[a.index()] / t as f64;
                    prop_assert!((s.emp_mean(a) - direct).abs() < 1e-9);
                }
            }
        }
    }
}
