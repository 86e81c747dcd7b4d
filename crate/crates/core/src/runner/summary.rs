use serde::Serialize;

use crate::bandit::RegretTrace;
use crate::error::{Error, Result};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.576;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryRow {
    pub t: u64,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub runs: u64,
}

impl SummaryRow {
    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// Mean and normal-approximation 99% interval of `values`:
/// `mean +- 2.576 s / sqrt(n)` with the unbiased sample deviation `s`.
/// A single value gets a zero-width interval.
pub fn mean_ci(values: &[f64]) -> Result<(f64, f64, f64)> {
    if values.is_empty() {
        return Err(Error::Precondition("no runs to summarize".into()));
    }
    let n = values.len() as f64;
    // Identical runs (common at early checkpoints) get their exact value
    // and a zero-width interval instead of summation rounding noise.
    if values.iter().all(|v| v.to_bits() == values[0].to_bits()) {
        return Ok((values[0], values[0], values[0]));
    }
    let rough = values.iter().sum::<f64>() / n;
    let mean = rough + values.iter().map(|v| v - rough).sum::<f64>() / n;
    let half = if values.len() < 2 {
        0.0
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Z_99 * (var / n).sqrt()
    };
    Ok((mean, mean - half, mean + half))
}

/// Per-checkpoint mean and 99% interval across runs. All traces must have
/// rows at the same rounds.
pub fn summarize(traces: &[RegretTrace]) -> Result<Vec<SummaryRow>> {
    let first = traces
        .first()
        .ok_or_else(|| Error::Precondition("no runs to summarize".into()))?;
    let rounds: Vec<u64> = first.rows().iter().map(|r| r.t).collect();
    for trace in traces {
        if trace.rows().len() != rounds.len()
            || trace.rows().iter().zip(&rounds).any(|(r, &t)| r.t != t)
        {
            return Err(Error::Precondition(format!(
                "run {} has different checkpoints than run {}",
                trace.run_id, first.run_id
            )));
        }
    }
    let mut column = Vec::with_capacity(traces.len());
    rounds
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            column.clear();
            column.extend(traces.iter().map(|tr| tr.rows()[i].cumulative));
            let (mean, ci_low, ci_high) = mean_ci(&column)?;
            Ok(SummaryRow {
                t,
                mean,
                ci_low,
                ci_high,
                runs: traces.len() as u64,
            })
        })
        .collect()
}
