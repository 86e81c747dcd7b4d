//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Criteria 1-4 share one set of simulations on the uniform-gap instance
//! (K = 20, Delta = 0.1, best arm 17, T = 1e5, 100 runs, seed 42).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use osfib_core::bandit::{gap_profile, observation_slice, Arm, RegretTrace};
use osfib_core::bounds::{bound_doubling, bound_indep, gap_constant};
use osfib_core::env::{
    make_random_mean_instance, make_uniform_gap_instance, sample_round_into, stream, AuctionSpec,
    Lane, RoundSample, ValueDist,
};
use osfib_core::lowerbound::{bwp_accuracy, make_family, Predictor};
use osfib_core::policy::{ElimState, Exp3Rtb, Policy, PolicyKind};
use osfib_core::runner::{final_regrets, mean_ci, run_replications};
use osfib_core::verify::{
    all_pass, chernoff_suite, lp_suite, monitor_suite, stirling_suite, CheckRow,
};
use osfib_core::Result;

const SEED: u64 = 42;
const K: usize = 20;
const HORIZON: u64 = 100_000;
const RUNS: u64 = 100;
const PROPERTY_CASES: u32 = 2_000;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict {
        pass,
        detail: detail.into(),
    })
}

#[derive(Clone, Copy)]
struct Final {
    mean: f64,
    lo: f64,
    hi: f64,
    elapsed: Duration,
}

fn finals(inst: &osfib_core::InstanceSpec, policy: PolicyKind) -> Result<Final> {
    let start = Instant::now();
    let traces = run_replications(inst, policy, HORIZON, RUNS, SEED, &[HORIZON], true)?;
    let (mean, lo, hi) = mean_ci(&final_regrets(&traces))?;
    Ok(Final {
        mean,
        lo,
        hi,
        elapsed: start.elapsed(),
    })
}

struct UniformGapRuns {
    elim: Final,
    doubling: Final,
    ucbn: Final,
    exp3: Final,
}

fn uniform_gap_runs() -> Result<UniformGapRuns> {
    let inst = make_uniform_gap_instance(K, Arm::new(17), 0.6, 0.1)?;
    Ok(UniformGapRuns {
        elim: finals(&inst, PolicyKind::Elim)?,
        doubling: finals(&inst, PolicyKind::ElimDoubling)?,
        ucbn: finals(&inst, PolicyKind::UcbN)?,
        exp3: finals(&inst, PolicyKind::Exp3rtb)?,
    })
}

fn c1(f: &UniformGapRuns) -> Result<Verdict> {
    let bound = bound_indep(HORIZON, K);
    let fast = f.elim.elapsed <= Duration::from_secs(120);
    verdict(
        f.elim.mean <= bound && fast,
        format!(
            "ELIM mean {:.2} <= gap-free bound {bound:.2}; {RUNS} runs in {:.1?}",
            f.elim.mean, f.elim.elapsed
        ),
    )
}

fn c2(f: &UniformGapRuns) -> Result<Verdict> {
    let bound = gap_constant(HORIZON, K) / 0.1 + 2.0 + 0.1;
    verdict(
        f.elim.hi <= bound,
        format!(
            "ELIM mean + 99% half-width {:.2} <= gap-dependent bound {bound:.2}",
            f.elim.hi
        ),
    )
}

fn c3(f: &UniformGapRuns) -> Result<Verdict> {
    let bound = bound_doubling(HORIZON, K);
    verdict(
        f.doubling.mean <= bound,
        format!("doubling mean {:.2} <= {bound:.2}", f.doubling.mean),
    )
}

fn c4(f: &UniformGapRuns) -> Result<Verdict> {
    let ordered = f.ucbn.mean < f.elim.mean && f.elim.mean < f.exp3.mean;
    let separated = f.elim.hi < f.exp3.lo;
    verdict(
        ordered && separated,
        format!(
            "UCB-N {:.1} [{:.1}, {:.1}] < ELIM {:.1} [{:.1}, {:.1}] < EXP3 baseline {:.1} [{:.1}, {:.1}]",
            f.ucbn.mean, f.ucbn.lo, f.ucbn.hi, f.elim.mean, f.elim.lo, f.elim.hi, f.exp3.mean,
            f.exp3.lo, f.exp3.hi
        ),
    )
}

fn c5() -> Result<Verdict> {
    let at = |best| -> Result<Final> {
        let inst = make_random_mean_instance(K, Arm::new(best), 0.1, 0.2, 0.6, SEED)?;
        finals(&inst, PolicyKind::Elim)
    };
    let (early, late) = (at(3)?, at(17)?);
    verdict(
        early.mean <= late.mean,
        format!(
            "random means, lambda 0.1: best=3 mean {:.2} <= best=17 mean {:.2}",
            early.mean, late.mean
        ),
    )
}

fn summarize_rows(rows: &[CheckRow]) -> String {
    let failed: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
    match failed.first() {
        None => format!("{} checks hold", rows.len()),
        Some(r) => format!(
            "{}/{} checks fail, first: {} [{}] lhs {} rhs {}",
            failed.len(),
            rows.len(),
            r.check_name,
            r.params,
            r.lhs,
            r.rhs
        ),
    }
}

fn timed_suite(limit: Duration, run: impl FnOnce() -> Result<Vec<CheckRow>>) -> Result<Verdict> {
    let start = Instant::now();
    let rows = run()?;
    let elapsed = start.elapsed();
    verdict(
        all_pass(&rows) && elapsed <= limit,
        format!(
            "{} in {elapsed:.1?} (limit {limit:?})",
            summarize_rows(&rows)
        ),
    )
}

fn c6() -> Result<Verdict> {
    timed_suite(Duration::from_secs(60), || lp_suite(200, SEED))
}

fn c7() -> Result<Verdict> {
    let rows = monitor_suite(1000, 1000, SEED)?;
    let detail = rows
        .iter()
        .map(|r| format!("{} {:.3e} <= {:.3e}", r.check_name, r.lhs, r.rhs))
        .collect::<Vec<_>>()
        .join("; ");
    verdict(all_pass(&rows), detail)
}

fn c8() -> Result<Verdict> {
    timed_suite(Duration::from_secs(10), chernoff_suite)
}

fn c9() -> Result<Verdict> {
    let rows = stirling_suite(200)?;
    verdict(
        all_pass(&rows),
        format!("n = 2..=200: {}", summarize_rows(&rows)),
    )
}

/// Runs `test` on `PROPERTY_CASES` generated inputs; returns the case count
/// or the first failure.
fn property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>,
) -> std::result::Result<u32, String> {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, test)
        .map(|()| PROPERTY_CASES)
        .map_err(|e| format!("{name}: {e}"))
}

fn elim_structure(
    (k, horizon, seed, base, delta, best): (usize, u64, u64, f64, f64, usize),
) -> std::result::Result<(), TestCaseError> {
    let best = best.min(k);
    let inst = make_uniform_gap_instance(k, Arm::new(best), base, delta).unwrap();
    let gaps = gap_profile(&inst);
    let mut state = ElimState::new(k, horizon).with_recording();
    let mut rng = stream(seed, 0, Lane::Environment);
    let mut sample = RoundSample::for_instance(&inst);
    let mut trace = RegretTrace::new(0);
    let mut last_arm = Arm::new(1);
    let mut last_total = 0.0;
    for t in 1..=horizon {
        let arm = state.select().unwrap();
        prop_assert!(
            arm >= last_arm,
            "played arm went from {} to {}",
            last_arm,
            arm
        );
        last_arm = arm;
        sample_round_into(&inst, &mut rng, &mut sample);
        state
            .update(t, &observation_slice(k, arm, &sample.rewards).unwrap())
            .unwrap();
        let total = trace.accumulate(&gaps, t, arm);
        prop_assert!(total >= last_total);
        last_total = total;
    }
    for snap in state.take_snapshots() {
        prop_assert!(!snap.active.is_empty());
        prop_assert!(snap.active.iter().all(|a| snap.prev_active.contains(a)));
    }
    Ok(())
}

fn exp3_structure(
    (k, gamma, seed, steps): (usize, f64, u64, u64),
) -> std::result::Result<(), TestCaseError> {
    let mut s = Exp3Rtb::with_params(k, 0.3, gamma);
    let mut rng = stream(seed, 0, Lane::Policy);
    let mut env = stream(seed, 0, Lane::Environment);
    let mut rewards = vec![0.0; k];
    for t in 1..=steps {
        let p = s.probs().to_vec();
        let q = s.observe_probs().to_vec();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert_eq!(q[k - 1], 1.0);
        for r in rewards.iter_mut() {
            *r = rand::Rng::random::<f64>(&mut env);
        }
        // Exact expectation over the played arm.
        let mut expect = vec![0.0; k];
        for (j, pj) in p.iter().enumerate() {
            let est = s.estimates(&observation_slice(k, Arm::from_index(j), &rewards).unwrap());
            for (e, x) in expect.iter_mut().zip(est) {
                *e += pj * x;
            }
        }
        for (e, r) in expect.iter().zip(&rewards) {
            prop_assert!(
                (e - r).abs() <= 1e-12 * r.max(1.0),
                "E[estimate] {} vs reward {}",
                e,
                r
            );
        }
        let arm = s.select(t, &mut rng).unwrap();
        s.observe(t, &observation_slice(k, arm, &rewards).unwrap())
            .unwrap();
    }
    Ok(())
}

fn auction_structure(
    (k, bids, pick): (usize, Vec<f64>, usize),
) -> std::result::Result<(), TestCaseError> {
    let spec = AuctionSpec::evenly_spaced(k, bids.len(), ValueDist::Uniform).unwrap();
    let full = spec.auction_round(&bids).unwrap();
    let played = Arm::new(pick % k + 1);
    let floor = spec.reserves()[played.index()];
    let visible: Vec<f64> = bids.iter().copied().filter(|&b| b >= floor).collect();
    let censored = spec.censored_revenue(played, &visible).unwrap();
    prop_assert_eq!(&censored[..], &full[played.index()..]);
    Ok(())
}

fn c10() -> Result<Verdict> {
    let results = [
        property(
            "elimination structure",
            (
                2usize..8,
                1u64..400,
                any::<u64>(),
                0.0f64..0.5,
                0.0f64..0.5,
                1usize..8,
            ),
            elim_structure,
        ),
        property(
            "elimination structure, small gaps",
            (
                2usize..6,
                1u64..300,
                any::<u64>(),
                0.3f64..0.5,
                0.0f64..0.05,
                1usize..6,
            ),
            elim_structure,
        ),
        property(
            "exp3 probabilities and unbiasedness",
            (1usize..10, 0.0f64..=1.0, any::<u64>(), 1u64..30),
            exp3_structure,
        ),
        property(
            "censored auction revenue",
            (
                1usize..12,
                prop::collection::vec(0.0f64..=1.0, 1..6),
                any::<usize>(),
            ),
            auction_structure,
        ),
        property(
            "regret of every policy is nondecreasing",
            (
                0usize..PolicyKind::ALL.len(),
                2usize..8,
                1u64..200,
                any::<u64>(),
            ),
            |(p, k, horizon, seed)| {
                let inst = make_uniform_gap_instance(k, Arm::new(k), 0.4, 0.2).unwrap();
                let gaps = gap_profile(&inst);
                let mut pol = PolicyKind::ALL[p].build(k, horizon);
                let mut env = stream(seed, 0, Lane::Environment);
                let mut prng = stream(seed, 0, Lane::Policy);
                let mut sample = RoundSample::for_instance(&inst);
                let mut trace = RegretTrace::new(0);
                let mut last = 0.0;
                for t in 1..=horizon {
                    let arm = pol.select(t, &mut prng).unwrap();
                    sample_round_into(&inst, &mut env, &mut sample);
                    pol.observe(t, &observation_slice(k, arm, &sample.rewards).unwrap())
                        .unwrap();
                    let total = trace.accumulate(&gaps, t, arm);
                    prop_assert!(total >= last);
                    last = total;
                }
                Ok(())
            },
        ),
    ];
    let mut cases = 0;
    for r in &results {
        match r {
            Ok(n) => cases += n,
            Err(e) => return verdict(false, e.clone()),
        }
    }
    verdict(
        cases >= 10_000,
        format!(
            "{cases} randomized cases across {} properties",
            results.len()
        ),
    )
}

fn c11() -> Result<Verdict> {
    let family = make_family(20, 0.2)?;
    let ftl = bwp_accuracy(&family, 10_000, 200, Predictor::FollowTheLeader, SEED)?;
    let constant = bwp_accuracy(&family, 10_000, 200, Predictor::Constant(Arm::new(4)), SEED)?;
    let target = 1.0 / 20.0;
    let anchor_ok = ftl.aggregate >= 0.99
        && (constant.aggregate - target).abs() <= 3.0 * constant.aggregate_se.max(f64::EPSILON);
    let sweep: Vec<String> = [10u64, 30, 100, 300, 1000, 3000]
        .iter()
        .map(|&t| {
            bwp_accuracy(&family, t, 200, Predictor::FollowTheLeader, SEED)
                .map(|r| format!("T={t}:{:.3}", r.aggregate))
        })
        .collect::<Result<_>>()?;
    verdict(
        anchor_ok,
        format!(
            "FTL accuracy {:.4} >= 0.99; constant predictor {:.4} vs 1/K = {target} (se {:.4}); sweep (reported only) {}",
            ftl.aggregate,
            constant.aggregate,
            constant.aggregate_se,
            sweep.join(" ")
        ),
    )
}

fn main() -> ExitCode {
    let runs = uniform_gap_runs();
    let shared = |f: fn(&UniformGapRuns) -> Result<Verdict>| match &runs {
        Ok(runs) => f(runs),
        Err(e) => Err(osfib_core::Error::Invariant(format!(
            "shared simulation failed: {e}"
        ))),
    };
    let outcomes: Vec<(u32, &str, Result<Verdict>)> = vec![
        (1, "gap-free regret bound", shared(c1)),
        (2, "gap-dependent regret bound", shared(c2)),
        (3, "doubling regret bound", shared(c3)),
        (4, "policy ordering", shared(c4)),
        (5, "best-arm position effect", c5()),
        (6, "integer-program oracle", c6()),
        (7, "event monitors", c7()),
        (8, "exact reverse Chernoff", c8()),
        (9, "Stirling lower bound", c9()),
        (10, "structural properties", c10()),
        (11, "prediction-game anchors", c11()),
    ];
    let mut failures = 0;
    for (id, name, outcome) in outcomes {
        let (pass, detail) = match outcome {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += u32::from(!pass);
        println!(
            "{} criterion {id:>2} ({name}): {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
