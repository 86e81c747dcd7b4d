//! Per-round monitors for the two "nice" events of an elimination run.
//!
//! Sampling is nice at round `t` when every arm of `S_{t-1}` has its
//! empirical mean within `rho_t` of its true mean. The procedure is nice at
//! round `t` when the best arm survives in `S_t` and every survivor's true
//! gap is at most `4 rho_t`. `M_t` holds while the procedure has been nice
//! at every round so far.

use serde::Serialize;

use crate::bandit::{observation_slice, InstanceSpec};
use crate::env::{sample_round_into, stream, Lane, RoundSample};
use crate::error::{Error, Result};
use crate::policy::{confidence_radius, ElimSnapshot, ElimState};

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct EventLog {
    /// Index `t - 1` holds round `t`.
    pub sampling_nice: Vec<bool>,
    pub procedure_nice: Vec<bool>,
    /// Running conjunction of `procedure_nice`.
    pub all_nice: Vec<bool>,
}

impl EventLog {
    pub fn rounds(&self) -> usize {
        self.sampling_nice.len()
    }

    /// `M_T`.
    pub fn final_all_nice(&self) -> bool {
        self.all_nice.last().copied().unwrap_or(true)
    }

    /// Rounds `t` where the procedure stopped being nice without a sampling
    /// failure at the same round. Always empty for a sound monitor.
    pub fn implication_violations(&self) -> Vec<u64> {
        (1..self.rounds())
            .filter(|&i| {
                self.procedure_nice[i - 1] && !self.procedure_nice[i] && self.sampling_nice[i]
            })
            .map(|i| i as u64 + 1)
            .collect()
    }

    /// Rounds where the procedure went from nice to not nice.
    pub fn procedure_breaks(&self) -> usize {
        (1..self.rounds())
            .filter(|&i| self.procedure_nice[i - 1] && !self.procedure_nice[i])
            .count()
    }
}

/// Evaluates both events on a recorded run of horizon `horizon`.
pub fn monitor_run(inst: &InstanceSpec, horizon: u64, trace: &[ElimSnapshot]) -> Result<EventLog> {
    let k = inst.k();
    let best = inst.best();
    let top = inst.best_mean();
    let mut log = EventLog::default();
    let mut all = true;
    for (i, snap) in trace.iter().enumerate() {
        if snap.t != i as u64 + 1 {
            return Err(Error::Feedback(format!(
                "snapshot {i} is for round {}",
                snap.t
            )));
        }
        if snap.prev_means.len() != k
            || snap
                .prev_active
                .iter()
                .chain(&snap.active)
                .any(|a| a.get() > k)
        {
            return Err(Error::InvalidInstance(format!(
                "trace for round {} does not match a {k}-arm instance",
                snap.t
            )));
        }
        let radius = confidence_radius(snap.t, k, horizon);
        let sampling = match radius.value() {
            r if r.is_infinite() => true,
            r => snap
                .prev_active
                .iter()
                .all(|a| (snap.prev_means[a.index()] - inst.mean(*a)).abs() < r),
        };
        let procedure = snap.active.contains(&best)
            && snap
                .active
                .iter()
                .all(|a| radius.covers(top - inst.mean(*a), 4.0));
        all &= procedure;
        log.sampling_nice.push(sampling);
        log.procedure_nice.push(procedure);
        log.all_nice.push(all);
    }
    Ok(log)
}

/// Runs recorded elimination for `horizon` rounds on stream `(seed, run)`
/// and monitors it.
pub fn monitored_elim_run(
    inst: &InstanceSpec,
    horizon: u64,
    seed: u64,
    run: u64,
) -> Result<EventLog> {
    let k = inst.k();
    let mut state = ElimState::new(k, horizon).with_recording();
    let mut rng = stream(seed, run, Lane::Environment);
    let mut sample = RoundSample::for_instance(inst);
    for t in 1..=horizon {
        let arm = state.select()?;
        sample_round_into(inst, &mut rng, &mut sample);
        state.update(t, &observation_slice(k, arm, &sample.rewards)?)?;
    }
    monitor_run(inst, horizon, &state.take_snapshots())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorSummary {
    pub runs: u64,
    pub horizon: u64,
    /// Runs where `M_T` failed.
    pub not_all_nice: u64,
    /// Runs where sampling was not nice at round `T`.
    pub not_sampling_nice_at_t: u64,
    /// Runs containing a procedure break without a sampling failure.
    pub implication_violations: u64,
    /// Runs containing at least one procedure break.
    pub flagged_runs: u64,
}

impl MonitorSummary {
    pub fn not_all_nice_freq(&self) -> f64 {
        self.not_all_nice as f64 / self.runs as f64
    }

    pub fn not_sampling_nice_freq(&self) -> f64 {
        self.not_sampling_nice_at_t as f64 / self.runs as f64
    }

    /// Binomial standard error of [`not_sampling_nice_freq`](Self::not_sampling_nice_freq).
    pub fn not_sampling_nice_se(&self) -> f64 {
        let p = self.not_sampling_nice_freq();
        (p * (1.0 - p) / self.runs as f64).sqrt()
    }
}

/// Monitors `runs` independent runs (streams `(seed, 0..runs)`).
pub fn monitor_many(
    inst: &InstanceSpec,
    horizon: u64,
    runs: u64,
    seed: u64,
) -> Result<MonitorSummary> {
    use rayon::prelude::*;
    let logs: Vec<EventLog> = (0..runs)
        .into_par_iter()
        .map(|run| monitored_elim_run(inst, horizon, seed, run))
        .collect::<Result<_>>()?;
    let mut s = MonitorSummary {
        runs,
        horizon,
        not_all_nice: 0,
        not_sampling_nice_at_t: 0,
        implication_violations: 0,
        flagged_runs: 0,
    };
    for log in &logs {
        s.not_all_nice += u64::from(!log.final_all_nice());
        s.not_sampling_nice_at_t += u64::from(!log.sampling_nice.last().copied().unwrap_or(true));
        s.implication_violations += u64::from(!log.implication_violations().is_empty());
        s.flagged_runs += u64::from(log.procedure_breaks() > 0);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::Arm;
    use crate::env::make_uniform_gap_instance;

    fn snap(t: u64, prev: &[usize], means: &[f64], active: &[usize]) -> ElimSnapshot {
        ElimSnapshot {
            t,
            prev_active: prev.iter().copied().map(Arm::new).collect(),
            prev_means: means.to_vec(),
            active: active.iter().copied().map(Arm::new).collect(),
        }
    }

    #[test]
    fn exact_means_are_always_nice() {
        // Deterministic rewards equal to the means: mu_hat = mu after round 1.
        let inst = InstanceSpec::bernoulli(vec![0.5, 0.75, 0.25], "det").unwrap();
        let mut state = ElimState::new(3, 50).with_recording();
        for t in 1..=50 {
            let arm = state.select().unwrap();
            state
                .update(t, &observation_slice(3, arm, inst.means()).unwrap())
                .unwrap();
        }
        let log = monitor_run(&inst, 50, &state.take_snapshots()).unwrap();
        assert_eq!(log.rounds(), 50);
        assert!(log.sampling_nice.iter().all(|&b| b));
        assert!(log.final_all_nice());
    }

    #[test]
    fn off_by_more_than_radius_fails_sampling() {
        let inst = InstanceSpec::bernoulli(vec![0.5, 0.6], "x").unwrap();
        let horizon = 100;
        let r = confidence_radius(2, 2, horizon).value();
        let trace = vec![
            snap(1, &[1, 2], &[0.0, 0.0], &[1, 2]),
            snap(2, &[1, 2], &[0.5 + r + 0.01, 0.6], &[1, 2]),
        ];
        let log = monitor_run(&inst, horizon, &trace).unwrap();
        assert_eq!(log.sampling_nice, vec![true, false]);
    }

    #[test]
    fn losing_the_best_arm_breaks_the_procedure() {
        let inst = InstanceSpec::bernoulli(vec![0.5, 0.6], "x").unwrap();
        let trace = vec![
            snap(1, &[1, 2], &[0.0, 0.0], &[1, 2]),
            snap(2, &[1, 2], &[0.5, 0.6], &[1]),
        ];
        let log = monitor_run(&inst, 100, &trace).unwrap();
        assert_eq!(log.procedure_nice, vec![true, false]);
        assert_eq!(log.all_nice, vec![true, false]);
        // sampling was nice, so this fabricated trace violates the implication
        assert_eq!(log.implication_violations(), vec![2]);
    }

    #[test]
    fn arm_count_mismatch() {
        let inst = InstanceSpec::bernoulli(vec![0.5, 0.6], "x").unwrap();
        let trace = vec![snap(1, &[1, 2, 3], &[0.0; 3], &[1, 2, 3])];
        assert!(monitor_run(&inst, 10, &trace).is_err());
    }

    #[test]
    fn random_runs_are_sound() {
        let inst = make_uniform_gap_instance(6, Arm::new(4), 0.5, 0.2).unwrap();
        for run in 0..20 {
            let log = monitored_elim_run(&inst, 300, 9, run).unwrap();
            assert_eq!(log.rounds(), 300);
            assert!(log.implication_violations().is_empty());
            for w in log.all_nice.windows(2) {
                assert!(w[0] || !w[1]);
            }
        }
    }
}
