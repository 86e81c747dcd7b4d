use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which rounds get a row in the per-run trace files.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum CheckpointSpec {
    /// Powers of two, every multiple of `T / 100`, and `T`.
    #[default]
    Default,
    /// Powers of two and `T`.
    Geometric,
    /// Every multiple of the step, and `T`.
    Every(u64),
    /// Explicit rounds; `T` is added if missing.
    List(Vec<u64>),
}

impl CheckpointSpec {
    /// Sorted, deduplicated rounds in `[1, horizon]`, always ending at `horizon`.
    pub fn resolve(&self, horizon: u64) -> Result<Vec<u64>> {
        if horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        let geometric = || (0..64).map(|i| 1u64 << i).take_while(|&p| p <= horizon);
        let mut out: Vec<u64> = match self {
            CheckpointSpec::Default => {
                let step = (horizon / 100).max(1);
                geometric()
                    .chain((1..=horizon / step).map(|m| m * step))
                    .collect()
            }
            CheckpointSpec::Geometric => geometric().collect(),
            CheckpointSpec::Every(0) => {
                return Err(Error::Config("checkpoint step must be positive".into()))
            }
            CheckpointSpec::Every(step) => (1..=horizon / step).map(|m| m * step).collect(),
            CheckpointSpec::List(list) => {
                if let Some(&bad) = list.iter().find(|&&t| t == 0 || t > horizon) {
                    return Err(Error::Config(format!(
                        "checkpoint {bad} outside [1, {horizon}]"
                    )));
                }
                list.clone()
            }
        };
        out.push(horizon);
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for CheckpointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckpointSpec::Default => f.write_str("default"),
            CheckpointSpec::Geometric => f.write_str("geometric"),
            CheckpointSpec::Every(step) => write!(f, "every:{step}"),
            CheckpointSpec::List(list) => {
                let parts: Vec<String> = list.iter().map(u64::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for CheckpointSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "default" => return Ok(CheckpointSpec::Default),
            "geometric" => return Ok(CheckpointSpec::Geometric),
            _ => {}
        }
        let bad = || Error::Config(format!("bad checkpoint spec {s:?}"));
        if let Some(step) = s.strip_prefix("every:") {
            return step.parse().map(CheckpointSpec::Every).map_err(|_| bad());
        }
        s.split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(CheckpointSpec::List)
            .map_err(|_| bad())
    }
}

impl From<CheckpointSpec> for String {
    fn from(c: CheckpointSpec) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for CheckpointSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
