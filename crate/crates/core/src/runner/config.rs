use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bandit::{Arm, InstanceSpec, RegretTrace};
use crate::env::{
    make_auction_instance, make_random_mean_instance, make_uniform_gap_instance, AuctionSpec,
    ValueDist,
};
use crate::error::{Error, Result};
use crate::policy::PolicyKind;

use super::checkpoints::CheckpointSpec;
use super::io::{write_summary, write_trace};
use super::simulate::run_replications;
use super::summary::{summarize, SummaryRow, Z_99};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceConfig {
    UniformGap {
        k: usize,
        best: usize,
        base: f64,
        delta: f64,
    },
    RandomMean {
        k: usize,
        best: usize,
        lambda: f64,
        lo: f64,
        hi: f64,
        instance_seed: u64,
    },
    Auction {
        /// Evenly spaced on `[0, 1)` when empty.
        reserves: Vec<f64>,
        k: usize,
        bidders: usize,
        value_dist: ValueDist,
    },
}

impl InstanceConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceConfig::UniformGap { .. } => "uniform-gap",
            InstanceConfig::RandomMean { .. } => "random-mean",
            InstanceConfig::Auction { .. } => "auction",
        }
    }

    pub fn build(&self) -> Result<InstanceSpec> {
        let arm = |best: usize, k: usize| Arm::checked(best, k);
        match *self {
            InstanceConfig::UniformGap {
                k,
                best,
                base,
                delta,
            } => make_uniform_gap_instance(k, arm(best, k)?, base, delta),
            InstanceConfig::RandomMean {
                k,
                best,
                lambda,
                lo,
                hi,
                instance_seed,
            } => make_random_mean_instance(k, arm(best, k)?, lambda, lo, hi, instance_seed),
            InstanceConfig::Auction {
                ref reserves,
                k,
                bidders,
                value_dist,
            } => {
                let spec = if reserves.is_empty() {
                    AuctionSpec::evenly_spaced(k, bidders, value_dist)?
                } else {
                    AuctionSpec::new(reserves.clone(), bidders, value_dist)?
                };
                make_auction_instance(spec)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algo: PolicyKind,
    pub instance: InstanceConfig,
    pub horizon: u64,
    pub runs: u64,
    pub seed: u64,
    pub checkpoints: CheckpointSpec,
    pub out: PathBuf,
}

impl ExperimentConfig {
    /// Checks the config and returns the instance and resolved checkpoints.
    pub fn validate(&self) -> Result<(InstanceSpec, Vec<u64>)> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        let checkpoints = self.checkpoints.resolve(self.horizon)?;
        Ok((self.instance.build()?, checkpoints))
    }
}

/// Everything `run_experiment` produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub instance: InstanceSpec,
    pub traces: Vec<RegretTrace>,
    pub summary: Vec<SummaryRow>,
    pub files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a ExperimentConfig,
    policy: &'static str,
    instance_label: &'a str,
    means: &'a [f64],
    best_arm: Arm,
    checkpoints: &'a [u64],
    confidence_interval: String,
    rng: &'static str,
    files: Files,
}

#[derive(Serialize)]
struct Files {
    traces: &'static str,
    summary: &'static str,
}

pub fn trace_file_name(run: u64) -> String {
    format!("run_{run:04}.csv")
}

/// Runs every replication and writes `traces/run_NNNN.csv`, `summary.csv`
/// and `metadata.json` under `cfg.out`. Output bytes depend only on the
/// config and the crate version.
pub fn run_experiment(cfg: &ExperimentConfig, parallel: bool) -> Result<ExperimentOutput> {
    let (instance, checkpoints) = cfg.validate()?;
    let traces = run_replications(
        &instance,
        cfg.algo,
        cfg.horizon,
        cfg.runs,
        cfg.seed,
        &checkpoints,
        parallel,
    )?;
    let summary = summarize(&traces)?;

    let trace_dir = cfg.out.join("traces");
    fs::create_dir_all(&trace_dir)?;
    let mut files = Vec::with_capacity(traces.len() + 2);
    for trace in &traces {
        let path = trace_dir.join(trace_file_name(trace.run_id));
        write_trace(BufWriter::new(fs::File::create(&path)?), trace)?;
        files.push(path);
    }
    let summary_path = cfg.out.join("summary.csv");
    write_summary(BufWriter::new(fs::File::create(&summary_path)?), &summary)?;
    files.push(summary_path);

    let meta = Metadata {
        tool: "osfib",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        policy: cfg.algo.description(),
        instance_label: &instance.label,
        means: instance.means(),
        best_arm: instance.best(),
        checkpoints: &checkpoints,
        confidence_interval: format!(
            "99% normal approximation: mean +- {Z_99} * sample_std / sqrt(runs)"
        ),
        rng: "ChaCha8 keyed by seed_from_u64(seed); stream id 4*run + lane \
              (0 environment, 1 policy, 2 instance)",
        files: Files {
            traces: "traces/run_NNNN.csv: run,t,arm,cum_regret",
            summary: "summary.csv: t,mean,ci_low,ci_high,runs",
        },
    };
    let meta_path = cfg.out.join("metadata.json");
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    fs::write(&meta_path, text)?;
    files.push(meta_path);

    Ok(ExperimentOutput {
        instance,
        traces,
        summary,
        files,
    })
}

/// Reads the algorithm name back from a run directory's metadata.
pub fn algo_of_run_dir(dir: &Path) -> Result<String> {
    let text = fs::read_to_string(dir.join("metadata.json"))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    value["config"]["algo"]
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| Error::Parse(format!("{} has no config.algo", dir.display())))
}
