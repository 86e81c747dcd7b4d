use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use osfib_core::lowerbound::{
    bwp_accuracy, check_reverse_chernoff, check_reverse_chernoff_upper, check_stirling_corollary,
    make_family, regret_scaling_probe, Predictor,
};
use osfib_core::runner::{csv_writer, fmt_real};
use osfib_core::verify::{all_pass, run_suite, write_checks, Suite, VerifyOptions};
use osfib_core::{Arm, PolicyKind, Result};

use crate::{usage, Status};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// bounds, lp, monitor, chernoff, stirling, regret or all.
    #[arg(long, default_value = "all")]
    pub suite: String,

    /// Write the check CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Random programs in the lp suite.
    #[arg(long, default_value_t = 200)]
    pub lp_instances: u64,

    #[arg(long, default_value_t = 1000)]
    pub monitor_runs: u64,

    #[arg(long, default_value_t = 1000)]
    pub monitor_horizon: u64,

    #[arg(long, default_value_t = 10_000)]
    pub regret_horizon: u64,

    #[arg(long, default_value_t = 20)]
    pub regret_runs: u64,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn verify(args: VerifyArgs) -> Result<Status> {
    let suite: Suite = args.suite.parse()?;
    let opts = VerifyOptions {
        seed: args.seed,
        lp_instances: args.lp_instances,
        monitor_runs: args.monitor_runs,
        monitor_horizon: args.monitor_horizon,
        regret_horizon: args.regret_horizon,
        regret_runs: args.regret_runs,
    };
    if opts.monitor_runs == 0 || opts.regret_runs == 0 {
        return Err(usage("run counts must be positive"));
    }
    let rows = run_suite(suite, &opts)?;
    write_checks(output(&args.out)?, &rows)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    eprintln!("{suite}: {} checks, {failed} failed", rows.len());
    Ok(if all_pass(&rows) {
        Status::Ok
    } else {
        Status::ChecksFailed
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LbSuite {
    /// Exact lower tail against exp(-9/2 n delta^2) on the (n, delta) grid.
    Tail,
    /// The upper-tail form with eps = delta / 2 and constant 18.
    UpperTail,
    /// Stirling lower bound on C(n, l) for every 1 <= l < n.
    Stirling,
    /// Follow-the-leader accuracy on each member of the hard family.
    Bwp,
    /// Accuracy over a list of horizons.
    Sweep,
    /// Mean regret of a policy on the hard family with eps = sqrt(ln K / T).
    Scaling,
}

#[derive(Debug, Args)]
pub struct LowerBoundArgs {
    #[arg(long, value_enum)]
    pub suite: LbSuite,

    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Largest n for the tail and Stirling suites [default: 500 and 200].
    #[arg(long)]
    pub n_max: Option<u64>,

    /// Arms in the hard family.
    #[arg(long, default_value_t = 20)]
    pub k: usize,

    /// Advantage of the special arm: mean (1 + eps) / 2.
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,

    #[arg(long, default_value_t = 10_000)]
    pub horizon: u64,

    /// Comma-separated horizons for the sweep.
    #[arg(long, default_value = "10,30,100,300,1000,3000,10000")]
    pub horizons: String,

    /// Comma-separated arm counts for the scaling probe.
    #[arg(long, default_value = "1,2,5,10,20,50")]
    pub ks: String,

    #[arg(long, default_value_t = 200)]
    pub runs: u64,

    /// Policy for the scaling probe.
    #[arg(long, default_value = "elim")]
    pub algo: String,

    /// `ftl`, or `constant:J` to always name arm J.
    #[arg(long, default_value = "ftl")]
    pub predictor: String,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| usage(format!("bad list entry {p:?}")))
        })
        .collect()
}

fn parse_predictor(s: &str) -> Result<Predictor> {
    match s {
        "ftl" => Ok(Predictor::FollowTheLeader),
        _ => s
            .strip_prefix("constant:")
            .and_then(|j| j.parse().ok())
            .filter(|&j| j >= 1)
            .map(|j| Predictor::Constant(Arm::new(j)))
            .ok_or_else(|| usage(format!("unknown predictor {s:?}"))),
    }
}

/// Grid of `delta = 0.15, 0.20, ..., 0.50`.
fn delta_grid() -> impl Iterator<Item = f64> {
    (3..=10u32).map(|s| f64::from(s) * 0.05)
}

pub fn lower_bound(args: LowerBoundArgs) -> Result<Status> {
    if args.runs == 0 {
        return Err(usage("--runs must be positive"));
    }
    let mut out = csv_writer(output(&args.out)?);
    let mut ok = true;
    match args.suite {
        LbSuite::Tail | LbSuite::UpperTail => {
            let n_max = args.n_max.unwrap_or(500);
            out.write_record(["n", "delta", "exact_tail", "bound", "holds"])?;
            for n in (25..=n_max).step_by(25) {
                for delta in delta_grid() {
                    let r = if args.suite == LbSuite::Tail {
                        check_reverse_chernoff(n, delta)?
                    } else {
                        check_reverse_chernoff_upper(n, delta / 2.0)?
                    };
                    // Points outside the stated conditions carry no claim.
                    if !r.precondition_met {
                        continue;
                    }
                    ok &= r.holds;
                    out.write_record([
                        n.to_string(),
                        fmt_real(r.delta),
                        fmt_real(r.exact_tail),
                        fmt_real(r.bound),
                        r.holds.to_string(),
                    ])?;
                }
            }
        }
        LbSuite::Stirling => {
            let n_max = args.n_max.unwrap_or(200);
            out.write_record(["n", "l", "ln_lhs", "ln_rhs", "holds"])?;
            for n in 2..=n_max {
                for l in 1..n {
                    let c = check_stirling_corollary(n, l)?;
                    ok &= c.holds;
                    out.write_record([
                        n.to_string(),
                        l.to_string(),
                        fmt_real(c.ln_lhs),
                        fmt_real(c.ln_rhs),
                        c.holds.to_string(),
                    ])?;
                }
            }
        }
        LbSuite::Bwp | LbSuite::Sweep => {
            let family = make_family(args.k, args.eps)?;
            let predictor = parse_predictor(&args.predictor)?;
            let horizons = if args.suite == LbSuite::Bwp {
                vec![args.horizon]
            } else {
                parse_list(&args.horizons)?
            };
            out.write_record(["K", "T", "member", "success_freq"])?;
            for t in horizons {
                let report = bwp_accuracy(&family, t, args.runs, predictor, args.seed)?;
                for m in &report.per_member {
                    out.write_record([
                        report.k.to_string(),
                        t.to_string(),
                        m.member.to_string(),
                        fmt_real(m.freq),
                    ])?;
                }
                eprintln!(
                    "K={} eps={} T={t}: aggregate accuracy {:.4} (se {:.4})",
                    report.k, report.eps, report.aggregate, report.aggregate_se
                );
            }
        }
        LbSuite::Scaling => {
            let policy: PolicyKind = args.algo.parse()?;
            let ks: Vec<usize> = parse_list(&args.ks)?;
            out.write_record(["K", "T", "eps", "mean", "ci_low", "ci_high", "runs"])?;
            for r in regret_scaling_probe(&ks, args.horizon, args.runs, policy, args.seed)? {
                out.write_record([
                    r.k.to_string(),
                    r.horizon.to_string(),
                    fmt_real(r.eps),
                    fmt_real(r.mean_regret),
                    fmt_real(r.ci_low),
                    fmt_real(r.ci_high),
                    r.runs.to_string(),
                ])?;
            }
        }
    }
    out.flush()?;
    Ok(if ok { Status::Ok } else { Status::ChecksFailed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predictor_names() {
        assert_eq!(parse_predictor("ftl").unwrap(), Predictor::FollowTheLeader);
        assert_eq!(
            parse_predictor("constant:3").unwrap(),
            Predictor::Constant(Arm::new(3))
        );
        assert!(parse_predictor("constant:0").is_err());
        assert!(parse_predictor("oracle").is_err());
    }

    #[test]
    fn delta_grid_values() {
        let g: Vec<f64> = delta_grid().collect();
        assert_eq!(g.len(), 8);
        assert!((g[0] - 0.15).abs() < 1e-15 && (g[7] - 0.5).abs() < 1e-15);
    }
}
