//! Closed-form regret bounds for arm elimination.

use serde::Serialize;

use crate::bandit::GapProfile;
use crate::error::{Error, Result};
use crate::policy::log_k_t2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundName {
    /// Gap-free bound with known horizon.
    Indep,
    /// Gap-dependent bound with known horizon.
    Dep,
    /// Gap-free bound of the doubling variant.
    Doubling,
    /// Coarser gap-dependent bound.
    Corollary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: BoundName,
    pub k: usize,
    pub horizon: u64,
    pub sorted_gaps: Vec<f64>,
    pub value: f64,
}

/// `C = 8 ln(K T^2)`.
pub fn gap_constant(horizon: u64, k: usize) -> f64 {
    8.0 * log_k_t2(k, horizon)
}

/// `4 sqrt(2 T ln(K T^2)) + 3`.
pub fn bound_indep(horizon: u64, k: usize) -> f64 {
    4.0 * (2.0 * horizon as f64 * log_k_t2(k, horizon)).sqrt() + 3.0
}

/// `20 sqrt(T ln(K T^2)) + 3 log2 T + 3`.
pub fn bound_doubling(horizon: u64, k: usize) -> f64 {
    20.0 * (horizon as f64 * log_k_t2(k, horizon)).sqrt() + 3.0 * (horizon as f64).log2() + 3.0
}

/// Gap-dependent bound with `C = 8 ln(K T^2)`.
pub fn bound_dep(gaps: &GapProfile, horizon: u64, k: usize) -> Result<f64> {
    bound_dep_with_constant(gaps.sorted_prefix(), gap_constant(horizon, k))
}

/// Gap-dependent bound for an explicit `C`. `sorted` is the descending gap
/// prefix ending in the best arm's zero.
pub fn bound_dep_with_constant(sorted: &[f64], c: f64) -> Result<f64> {
    Ok(gap_sum(sorted, c)? + 2.0)
}

/// `Delta_(1) + C / Delta_(1) + C sum_{i=2}^{i*-1} (1/Delta_(i)^2 - 1/Delta_(i-1)^2) Delta_(i)`,
/// or 0 when the best arm is arm 1.
pub(crate) fn gap_sum(sorted: &[f64], c: f64) -> Result<f64> {
    check_sorted_prefix(sorted)?;
    let head = &sorted[..sorted.len() - 1];
    let Some(&d1) = head.first() else {
        return Ok(0.0);
    };
    let tail: f64 = head
        .windows(2)
        .map(|w| (w[1].powi(-2) - w[0].powi(-2)) * w[1])
        .sum();
    Ok(d1 + c / d1 + c * tail)
}

/// `(C / Delta_(i*-1)^2 + 1) Delta_(1) + 2`, or 2 when the best arm is arm 1.
pub fn bound_corollary(gaps: &GapProfile, horizon: u64, k: usize) -> Result<f64> {
    bound_corollary_with_constant(gaps.sorted_prefix(), gap_constant(horizon, k))
}

pub fn bound_corollary_with_constant(sorted: &[f64], c: f64) -> Result<f64> {
    check_sorted_prefix(sorted)?;
    let head = &sorted[..sorted.len() - 1];
    match (head.first(), head.last()) {
        (Some(&first), Some(&smallest)) => Ok((c / (smallest * smallest) + 1.0) * first + 2.0),
        _ => Ok(2.0),
    }
}

pub fn report(name: BoundName, gaps: &GapProfile, horizon: u64, k: usize) -> Result<BoundReport> {
    let value = match name {
        BoundName::Indep => bound_indep(horizon, k),
        BoundName::Dep => bound_dep(gaps, horizon, k)?,
        BoundName::Doubling => bound_doubling(horizon, k),
        BoundName::Corollary => bound_corollary(gaps, horizon, k)?,
    };
    Ok(BoundReport {
        name,
        k,
        horizon,
        sorted_gaps: gaps.sorted_prefix().to_vec(),
        value,
    })
}

fn check_sorted_prefix(sorted: &[f64]) -> Result<()> {
    let Some((&last, head)) = sorted.split_last() else {
        return Err(Error::InvalidInstance("empty gap prefix".into()));
    };
    if last != 0.0 {
        return Err(Error::InvalidInstance(
            "gap prefix must end with the best arm's 0".into(),
        ));
    }
    if sorted.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidInstance(
            "gap prefix must be sorted descending".into(),
        ));
    }
    if let Some(pos) = head.iter().position(|&d| d <= 0.0) {
        return Err(Error::DegenerateGap { position: pos + 1 });
    }
    Ok(())
}
