//! Named numerical checks, grouped into suites. Every check reduces to a
//! row `(check_name, params, lhs, rhs, pass)`; a suite passes when every
//! row does.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::bandit::{gap_profile, Arm};
use crate::bounds::{
    bound_dep, bound_doubling, bound_indep, gap_constant, lp_bruteforce, lp_closed_form,
    lp_enumerate, monitor_many, LpInstance, MAX_ORACLE_CAP,
};
use crate::env::{make_uniform_gap_instance, stream, Lane, Stream};
use crate::error::{Error, Result};
use crate::lowerbound::{
    check_reverse_chernoff, check_reverse_chernoff_upper, check_stirling_corollary,
};
use crate::policy::PolicyKind;
use crate::runner::{csv_writer, final_regrets, fmt_real, mean_ci, run_replications};

pub const CHECK_HEADER: [&str; 5] = ["check_name", "params", "lhs", "rhs", "pass"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub check_name: String,
    /// `key=value` pairs joined by `;`.
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl CheckRow {
    fn new(name: &str, params: String, lhs: f64, rhs: f64, pass: bool) -> Self {
        CheckRow {
            check_name: name.to_string(),
            params,
            lhs,
            rhs,
            pass,
        }
    }

    /// `lhs <= rhs`.
    fn le(name: &str, params: String, lhs: f64, rhs: f64) -> Self {
        Self::new(name, params, lhs, rhs, lhs <= rhs)
    }
}

pub fn all_pass(rows: &[CheckRow]) -> bool {
    rows.iter().all(|r| r.pass)
}

pub fn write_checks<W: Write>(w: W, rows: &[CheckRow]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(CHECK_HEADER)?;
    for r in rows {
        out.write_record([
            r.check_name.as_str(),
            r.params.as_str(),
            &fmt_real(r.lhs),
            &fmt_real(r.rhs),
            if r.pass { "true" } else { "false" },
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Bounds,
    Lp,
    Monitor,
    Chernoff,
    Stirling,
    Regret,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Bounds,
        Suite::Lp,
        Suite::Monitor,
        Suite::Chernoff,
        Suite::Stirling,
        Suite::Regret,
        Suite::All,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Lp => "lp",
            Suite::Monitor => "monitor",
            Suite::Chernoff => "chernoff",
            Suite::Stirling => "stirling",
            Suite::Regret => "regret",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// Knobs for the Monte Carlo suites. The defaults are the desk-scale
/// settings; `regret` uses a shorter horizon than the full experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub lp_instances: u64,
    pub monitor_runs: u64,
    pub monitor_horizon: u64,
    pub regret_horizon: u64,
    pub regret_runs: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 42,
            lp_instances: 200,
            monitor_runs: 1000,
            monitor_horizon: 1000,
            regret_horizon: 10_000,
            regret_runs: 20,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    match suite {
        Suite::Bounds => bounds_suite(),
        Suite::Lp => lp_suite(opts.lp_instances, opts.seed),
        Suite::Monitor => monitor_suite(opts.monitor_horizon, opts.monitor_runs, opts.seed),
        Suite::Chernoff => chernoff_suite(),
        Suite::Stirling => stirling_suite(200),
        Suite::Regret => regret_suite(opts.regret_horizon, opts.regret_runs, opts.seed),
        Suite::All => {
            let mut rows = Vec::new();
            for s in &Suite::ALL[..Suite::ALL.len() - 1] {
                rows.extend(run_suite(*s, opts)?);
            }
            Ok(rows)
        }
    }
}

/// Closed-form identities: the gap-dependent bound equals the program's
/// closed form plus 2, and the uniform-gap form `C / eps + 2 + eps`.
pub fn bounds_suite() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for &(k, best, delta, horizon) in &[
        (20usize, 17usize, 0.1, 100_000u64),
        (20, 3, 0.1, 100_000),
        (10, 10, 0.05, 1_000),
        (5, 2, 0.3, 10_000),
        (8, 1, 0.2, 5_000),
    ] {
        let inst = make_uniform_gap_instance(k, Arm::new(best), 0.6, delta)?;
        let gaps = gap_profile(&inst);
        let params = format!("k={k};best={best};delta={delta};T={horizon}");
        let dep = bound_dep(&gaps, horizon, k)?;
        let c = gap_constant(horizon, k);
        let lp = LpInstance::new(gaps.sorted_prefix().to_vec(), c)?;
        let via_lp = lp_closed_form(&lp)? + 2.0;
        rows.push(CheckRow::new(
            "dep_equals_lp_closed_form_plus_2",
            params.clone(),
            dep,
            via_lp,
            close(dep, via_lp),
        ));
        let uniform = if best == 1 {
            2.0
        } else {
            c / delta + 2.0 + delta
        };
        rows.push(CheckRow::new(
            "dep_uniform_gap_form",
            params.clone(),
            dep,
            uniform,
            close(dep, uniform),
        ));
        rows.push(CheckRow::le(
            "indep_below_doubling",
            params,
            bound_indep(horizon, k),
            bound_doubling(horizon, k),
        ));
    }
    Ok(rows)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// A program with best arm at position 1..=6, gaps drawn from (0.05, 1)
/// and sorted descending, and `C` from [0.5, 10]. Redrawn until it fits the
/// oracle guard.
pub fn random_lp_instance(rng: &mut Stream) -> Result<LpInstance> {
    loop {
        let i_star = rng.random_range(1..=6usize);
        let mut gaps: Vec<f64> = (1..i_star)
            .map(|_| loop {
                let d = rng.random_range(0.05..1.0);
                if d > 0.05 {
                    break d;
                }
            })
            .collect();
        gaps.sort_by(|a, b| b.total_cmp(a));
        gaps.push(0.0);
        let c = rng.random_range(0.5..=10.0);
        let min_gap = gaps[..gaps.len() - 1].iter().copied().fold(1.0, f64::min);
        if c / (min_gap * min_gap) + 1.0 <= MAX_ORACLE_CAP as f64 {
            return LpInstance::new(gaps, c);
        }
    }
}

/// Worked examples, then `n` seeded random programs: exact optimum below
/// the closed form, and a shuffled copy below the sorted optimum.
pub fn lp_suite(n: u64, seed: u64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (gaps, want) in [(vec![0.5, 0.0], 2.5), (vec![0.5, 0.25, 0.0], 5.5)] {
        let params = format!("gaps={gaps:?};C=1");
        let inst = LpInstance::new(gaps, 1.0)?;
        let got = lp_bruteforce(&inst)?.value;
        rows.push(CheckRow::new(
            "lp_worked_example",
            params.clone(),
            got,
            want,
            got == want,
        ));
        let cf = lp_closed_form(&inst)?;
        rows.push(CheckRow::new(
            "lp_worked_closed_form",
            params,
            cf,
            want,
            cf == want,
        ));
    }
    let mut rng = stream(seed, 0, Lane::Aux);
    for i in 0..n {
        let inst = random_lp_instance(&mut rng)?;
        let params = format!("instance={i};gaps={:?};C={}", inst.gaps(), inst.c());
        let opt = lp_bruteforce(&inst)?.value;
        let cf = lp_closed_form(&inst)?;
        rows.push(CheckRow::le(
            "lp_bruteforce_le_closed_form",
            params.clone(),
            opt,
            cf * (1.0 + 1e-12),
        ));

        let mut shuffled = inst.gaps()[..inst.gaps().len() - 1].to_vec();
        shuffled.shuffle(&mut rng);
        shuffled.push(0.0);
        let perm = lp_bruteforce(&LpInstance::new(shuffled, inst.c())?)?.value;
        rows.push(CheckRow::le(
            "lp_permuted_le_sorted",
            params.clone(),
            perm,
            opt * (1.0 + 1e-12),
        ));

        if let Ok(en) = lp_enumerate(&inst) {
            rows.push(CheckRow::new(
                "lp_dp_equals_enumeration",
                params,
                opt,
                en.value,
                close(opt, en.value),
            ));
        }
    }
    Ok(rows)
}

/// High-probability events of the elimination analysis on the uniform-gap
/// instance with `K = 10`, best arm last.
pub fn monitor_suite(horizon: u64, runs: u64, seed: u64) -> Result<Vec<CheckRow>> {
    let k = 10;
    let inst = make_uniform_gap_instance(k, Arm::new(k), 0.6, 0.1)?;
    let s = monitor_many(&inst, horizon, runs, seed)?;
    let params = format!("k={k};T={horizon};runs={runs};seed={seed}");
    let tf = horizon as f64;
    Ok(vec![
        CheckRow::le(
            "not_all_nice_freq",
            params.clone(),
            s.not_all_nice_freq(),
            2.0 / tf,
        ),
        CheckRow::le(
            "not_sampling_nice_freq_at_T",
            params.clone(),
            s.not_sampling_nice_freq(),
            2.0 / (tf * tf) + 3.0 * s.not_sampling_nice_se(),
        ),
        CheckRow::le(
            "procedure_break_implies_sampling_failure",
            format!("{params};flagged_runs={}", s.flagged_runs),
            s.implication_violations as f64,
            0.0,
        ),
    ])
}

/// Exact lower tail against `exp(-9/2 n delta^2)` over the grid
/// `n = 25..=500 step 25`, `delta = 0.15..=0.5 step 0.05`, plus the
/// `n = 30, delta = 1/2` spot value and its upper-tail mirror. Grid points
/// outside the stated conditions are skipped.
pub fn chernoff_suite() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for n in (25..=500u64).step_by(25) {
        for step in 3..=10u32 {
            let delta = f64::from(step) * 0.05;
            let r = check_reverse_chernoff(n, delta)?;
            if r.precondition_met {
                rows.push(CheckRow::new(
                    "reverse_chernoff",
                    format!("n={n};delta={delta}"),
                    r.exact_tail,
                    r.bound,
                    r.holds,
                ));
            }
        }
    }
    let spot = check_reverse_chernoff(30, 0.5)?;
    let want = 2_804_012.0 / 2f64.powi(30);
    rows.push(CheckRow::new(
        "reverse_chernoff_spot_value",
        "n=30;delta=0.5".into(),
        spot.exact_tail,
        want,
        close(spot.exact_tail, want) && spot.holds,
    ));
    let upper = check_reverse_chernoff_upper(30, 0.25)?;
    rows.push(CheckRow::new(
        "upper_tail_mirror",
        "n=30;eps=0.25".into(),
        upper.exact_tail,
        spot.exact_tail,
        upper.exact.numerator == spot.exact.numerator,
    ));
    Ok(rows)
}

/// One row per `n`: the worst log-margin `ln C(n, l) - ln rhs` over
/// `1 <= l <= n - 1` must be nonnegative.
pub fn stirling_suite(max_n: u64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for n in 2..=max_n {
        let mut worst: Option<(f64, f64, u64)> = None;
        let mut all = true;
        for l in 1..n {
            let c = check_stirling_corollary(n, l)?;
            all &= c.holds;
            let margin = c.ln_lhs - c.ln_rhs;
            if worst.is_none_or(|(m, _, _)| margin < m) {
                worst = Some((margin, c.ln_lhs, l));
            }
        }
        let (margin, ln_lhs, l) = worst.expect("n >= 2 has at least one l");
        rows.push(CheckRow::new(
            "stirling_corollary_ln",
            format!("n={n};worst_l={l}"),
            ln_lhs,
            ln_lhs - margin,
            all,
        ));
    }
    Ok(rows)
}

/// Mean regret of the elimination policies on the uniform-gap instance
/// `K = 20, Delta = 0.1, best = 17` against their bounds.
pub fn regret_suite(horizon: u64, runs: u64, seed: u64) -> Result<Vec<CheckRow>> {
    let k = 20;
    let inst = make_uniform_gap_instance(k, Arm::new(17), 0.6, 0.1)?;
    let gaps = gap_profile(&inst);
    let params = format!("k={k};best=17;delta=0.1;T={horizon};runs={runs};seed={seed}");
    let mean_of = |policy| -> Result<(f64, f64)> {
        let traces = run_replications(&inst, policy, horizon, runs, seed, &[horizon], true)?;
        let (mean, _, hi) = mean_ci(&final_regrets(&traces))?;
        Ok((mean, hi))
    };
    let (elim, elim_hi) = mean_of(PolicyKind::Elim)?;
    let (doubling, _) = mean_of(PolicyKind::ElimDoubling)?;
    Ok(vec![
        CheckRow::le(
            "elim_mean_le_indep",
            params.clone(),
            elim,
            bound_indep(horizon, k),
        ),
        CheckRow::le(
            "elim_mean_ci_le_dep",
            params.clone(),
            elim_hi,
            bound_dep(&gaps, horizon, k)?,
        ),
        CheckRow::le(
            "doubling_mean_le_bound",
            params,
            doubling,
            bound_doubling(horizon, k),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn bounds_and_chernoff_hold() {
        assert!(all_pass(&bounds_suite().unwrap()));
        let rows = chernoff_suite().unwrap();
        assert!(rows.len() > 100);
        assert!(all_pass(&rows));
    }

    #[test]
    fn small_lp_suite() {
        let rows = lp_suite(20, 7).unwrap();
        assert!(all_pass(&rows), "{:?}", rows.iter().find(|r| !r.pass));
        assert!(rows
            .iter()
            .any(|r| r.check_name == "lp_dp_equals_enumeration"));
    }

    #[test]
    fn random_instances_respect_ranges() {
        let mut rng = stream(3, 0, Lane::Aux);
        for _ in 0..500 {
            let inst = random_lp_instance(&mut rng).unwrap();
            let g = inst.gaps();
            assert!((1..=6).contains(&g.len()));
            assert_eq!(*g.last().unwrap(), 0.0);
            assert!(g[..g.len() - 1].iter().all(|&d| d > 0.05 && d < 1.0));
            assert!(g.windows(2).all(|w| w[0] >= w[1]));
            assert!((0.5..=10.0).contains(&inst.c()));
        }
    }

    #[test]
    fn check_csv_layout() {
        let rows = vec![CheckRow::le("x", "a=1;b=2".into(), 1.0, 2.0)];
        let mut buf = Vec::new();
        write_checks(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "check_name,params,lhs,rhs,pass\nx,a=1;b=2,1.0000000000000000e0,2.0000000000000000e0,true\n"
        );
    }
}
