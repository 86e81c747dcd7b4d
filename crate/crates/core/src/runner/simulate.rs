use rayon::prelude::*;

use crate::bandit::{gap_profile, observation_slice, InstanceSpec, RegretTrace};
use crate::env::{sample_round_into, stream, Lane, RoundSample};
use crate::error::Result;
use crate::policy::PolicyKind;

/// One replication: `horizon` rounds of play, feedback and regret
/// accounting. Rows are recorded at `checkpoints` (sorted ascending).
///
/// The environment reads stream `(seed, run, Environment)` and the policy
/// `(seed, run, Policy)`, so every policy faces the same reward sequence in
/// a given run.
pub fn simulate_run(
    inst: &InstanceSpec,
    policy: PolicyKind,
    horizon: u64,
    seed: u64,
    run: u64,
    checkpoints: &[u64],
) -> Result<RegretTrace> {
    let k = inst.k();
    let gaps = gap_profile(inst);
    let mut env_rng = stream(seed, run, Lane::Environment);
    let mut pol_rng = stream(seed, run, Lane::Policy);
    let mut pol = policy.build(k, horizon);
    let mut sample = RoundSample::for_instance(inst);
    let mut trace = RegretTrace::new(run);
    let mut next_cp = checkpoints.iter().peekable();
    for t in 1..=horizon {
        let arm = pol.select(t, &mut pol_rng)?;
        sample_round_into(inst, &mut env_rng, &mut sample);
        pol.observe(t, &observation_slice(k, arm, &sample.rewards)?)?;
        let record = next_cp.peek() == Some(&&t);
        if record {
            next_cp.next();
        }
        trace.accumulate_sparse(&gaps, t, arm, record);
    }
    Ok(trace)
}

/// Runs `0..runs` with [`simulate_run`]; results are in run order whether
/// or not they were computed in parallel.
pub fn run_replications(
    inst: &InstanceSpec,
    policy: PolicyKind,
    horizon: u64,
    runs: u64,
    seed: u64,
    checkpoints: &[u64],
    parallel: bool,
) -> Result<Vec<RegretTrace>> {
    let one = |run| simulate_run(inst, policy, horizon, seed, run, checkpoints);
    if parallel {
        (0..runs).into_par_iter().map(one).collect()
    } else {
        (0..runs).map(one).collect()
    }
}

/// Final cumulative regret of each trace.
pub fn final_regrets(traces: &[RegretTrace]) -> Vec<f64> {
    traces.iter().map(RegretTrace::total).collect()
}
