use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde::Deserialize;

use osfib_core::env::ValueDist;
use osfib_core::runner::{run_experiment, CheckpointSpec, ExperimentConfig, InstanceConfig};
use osfib_core::{Error, PolicyKind, Result};

use crate::{usage, Status};

/// Seed used when neither `--seed`, the config file nor `OSFIB_SEED` sets one.
const DEFAULT_SEED: u64 = 0;

/// Experiment settings. A TOML config file may set any of these under the
/// same (kebab-case) names; flags given on the command line win.
#[derive(Debug, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunArgs {
    /// TOML file whose keys mirror these flags.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Policy: elim, elim-doubling, ucbn, ucb1, exp3rtb or ftl [default: elim].
    #[arg(long)]
    pub algo: Option<String>,

    /// Instance kind: uniform-gap, random-mean or auction [default: uniform-gap].
    #[arg(long)]
    pub instance: Option<String>,

    /// Number of arms [default: 20].
    #[arg(long)]
    pub k: Option<usize>,

    /// Horizon T [default: 100000].
    #[arg(long)]
    pub horizon: Option<u64>,

    /// Independent replications [default: 100].
    #[arg(long)]
    pub runs: Option<u64>,

    /// Gap of the best arm on uniform-gap instances [default: 0.1].
    #[arg(long)]
    pub delta: Option<f64>,

    /// Margin of the best arm over 0.6 on random-mean instances [default: 0.1].
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Mean of the suboptimal arms on uniform-gap instances [default: 0.6].
    #[arg(long)]
    pub base: Option<f64>,

    /// Lower end of the random suboptimal means [default: 0.2].
    #[arg(long)]
    pub lo: Option<f64>,

    /// Upper end of the random suboptimal means [default: 0.6].
    #[arg(long)]
    pub hi: Option<f64>,

    /// Position of the best arm, 1-based [default: K].
    #[arg(long)]
    pub best: Option<usize>,

    /// Master seed [default: $OSFIB_SEED, else 0].
    #[arg(long)]
    pub seed: Option<u64>,

    /// Seed for drawing random-mean instances [default: the master seed].
    #[arg(long)]
    pub instance_seed: Option<u64>,

    /// Bidders per auction round [default: 2].
    #[arg(long)]
    pub bidders: Option<usize>,

    /// Comma-separated increasing reserve prices; overrides --k for auctions.
    #[arg(long)]
    pub reserves: Option<String>,

    /// Bidder values have CDF x^p instead of uniform.
    #[arg(long)]
    pub value_power: Option<f64>,

    /// default, geometric, every:N, or a comma-separated list of rounds.
    #[arg(long)]
    pub checkpoints: Option<String>,

    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Run replications on one thread.
    #[arg(long)]
    #[serde(skip)]
    pub serial: bool,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),+) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )+
    };
}

impl RunArgs {
    /// Reads `--config` if given and lays the command-line flags over it.
    pub fn resolve(self) -> Result<RunArgs> {
        let Some(path) = &self.config else {
            return Ok(self);
        };
        let text = fs::read_to_string(path)?;
        let mut base: RunArgs = toml::from_str(&text)
            .map_err(|e| usage(format!("{}: {}", path.display(), e.message())))?;
        let top = self;
        overlay!(
            base,
            top,
            algo,
            instance,
            k,
            horizon,
            runs,
            delta,
            lambda,
            base,
            lo,
            hi,
            best,
            seed,
            instance_seed,
            bidders,
            reserves,
            value_power,
            checkpoints,
            out
        );
        base.config = top.config;
        base.serial = top.serial;
        Ok(base)
    }

    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let algo: PolicyKind = self.algo.as_deref().unwrap_or("elim").parse()?;
        let k = self.k.unwrap_or(20);
        let best = self.best.unwrap_or(k);
        let seed = match self.seed {
            Some(s) => s,
            None => env_seed()?,
        };
        let instance = match self.instance.as_deref().unwrap_or("uniform-gap") {
            "uniform-gap" => InstanceConfig::UniformGap {
                k,
                best,
                base: self.base.unwrap_or(0.6),
                delta: self.delta.unwrap_or(0.1),
            },
            "random-mean" => InstanceConfig::RandomMean {
                k,
                best,
                lambda: self.lambda.unwrap_or(0.1),
                lo: self.lo.unwrap_or(0.2),
                hi: self.hi.unwrap_or(0.6),
                instance_seed: self.instance_seed.unwrap_or(seed),
            },
            "auction" => InstanceConfig::Auction {
                reserves: match &self.reserves {
                    Some(list) => parse_reals(list)?,
                    None => Vec::new(),
                },
                k,
                bidders: self.bidders.unwrap_or(2),
                value_dist: match self.value_power {
                    Some(exponent) => ValueDist::Power { exponent },
                    None => ValueDist::Uniform,
                },
            },
            other => return Err(usage(format!("unknown instance kind {other:?}"))),
        };
        let checkpoints: CheckpointSpec = match &self.checkpoints {
            Some(s) => s.parse()?,
            None => CheckpointSpec::Default,
        };
        let out = self
            .out
            .clone()
            .ok_or_else(|| usage("--out is required (or `out` in the config file)"))?;
        Ok(ExperimentConfig {
            algo,
            instance,
            horizon: self.horizon.unwrap_or(100_000),
            runs: self.runs.unwrap_or(100),
            seed,
            checkpoints,
            out,
        })
    }
}

fn env_seed() -> Result<u64> {
    match std::env::var("OSFIB_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("OSFIB_SEED={s:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

pub fn parse_reals(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| usage(format!("{p:?} is not a number")))
        })
        .collect()
}

pub fn run(args: RunArgs) -> Result<Status> {
    let args = args.resolve()?;
    let cfg = args.to_config()?;
    let out = run_experiment(&cfg, !args.serial)?;
    let last = out
        .summary
        .last()
        .ok_or_else(|| Error::Invariant("empty summary".into()))?;
    eprintln!(
        "{} on {}: mean regret at T={} is {:.4} (99% CI [{:.4}, {:.4}], {} runs); wrote {}",
        cfg.algo,
        out.instance.label,
        last.t,
        last.mean,
        last.ci_low,
        last.ci_high,
        last.runs,
        cfg.out.display()
    );
    Ok(Status::Ok)
}
