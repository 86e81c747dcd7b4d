//! Domain types shared by every other module: arms, instances, gaps,
//! one-sided feedback and pseudo-regret traces.
//!
//! Arms are 1-indexed at every public boundary. Playing arm `i` reveals the
//! rewards of arms `i, i+1, ..., K` for that round.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::env::AuctionSpec;
use crate::error::{Error, Result};

/// A 1-based arm index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Arm(usize);

impl Arm {
    /// Builds an arm from its 1-based index. Panics on zero.
    pub fn new(one_based: usize) -> Self {
        assert!(one_based >= 1, "arms are 1-indexed");
        Arm(one_based)
    }

    pub fn checked(one_based: usize, k: usize) -> Result<Self> {
        if one_based == 0 || one_based > k {
            return Err(Error::InvalidArm { arm: one_based, k });
        }
        Ok(Arm(one_based))
    }

    pub fn from_index(zero_based: usize) -> Self {
        Arm(zero_based + 1)
    }

    /// 1-based value.
    pub fn get(self) -> usize {
        self.0
    }

    /// 0-based storage offset.
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Reward distribution family of an instance.
///
/// `Auction` is also the correlated family: all arms share the same bids in
/// a round, so their rewards are dependent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// Independent Bernoulli arms with the instance means.
    Bernoulli,
    /// Second-price auction revenue, one arm per reserve price.
    Auction(AuctionSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    means: Vec<f64>,
    family: Family,
    best: Arm,
    pub label: String,
}

impl InstanceSpec {
    pub fn new(means: Vec<f64>, family: Family, label: impl Into<String>) -> Result<Self> {
        let best = best_arm(&means)?;
        if let Family::Auction(spec) = &family {
            if spec.reserves().len() != means.len() {
                return Err(Error::InvalidInstance(format!(
                    "{} reserves for {} arms",
                    spec.reserves().len(),
                    means.len()
                )));
            }
        }
        Ok(InstanceSpec {
            means,
            family,
            best,
            label: label.into(),
        })
    }

    pub fn bernoulli(means: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        Self::new(means, Family::Bernoulli, label)
    }

    pub fn k(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn mean(&self, arm: Arm) -> f64 {
        self.means[arm.index()]
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn best(&self) -> Arm {
        self.best
    }

    pub fn best_mean(&self) -> f64 {
        self.means[self.best.index()]
    }
}

/// Smallest index attaining the maximum mean.
pub fn best_arm(means: &[f64]) -> Result<Arm> {
    if means.is_empty() {
        return Err(Error::InvalidInstance("no arms".into()));
    }
    if let Some(bad) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
        return Err(Error::InvalidInstance(format!("mean {bad} outside [0, 1]")));
    }
    Ok(Arm::from_index(argmax_first(means)))
}

/// Index of the first maximum. NaN entries never win.
pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    gaps: Vec<f64>,
    sorted_prefix: Vec<f64>,
}

impl GapProfile {
    /// `gaps[i]` is the gap of arm `i + 1`.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn gap(&self, arm: Arm) -> f64 {
        self.gaps[arm.index()]
    }

    /// Gaps of arms `1..=best`, sorted descending. The last entry is 0.
    pub fn sorted_prefix(&self) -> &[f64] {
        &self.sorted_prefix
    }
}

pub fn gap_profile(inst: &InstanceSpec) -> GapProfile {
    let top = inst.best_mean();
    let gaps: Vec<f64> = inst.means().iter().map(|m| top - m).collect();
    let mut sorted_prefix = gaps[..inst.best().get()].to_vec();
    sorted_prefix.sort_by(|a, b| b.total_cmp(a));
    GapProfile {
        gaps,
        sorted_prefix,
    }
}

/// One round of one-sided feedback: rewards of arms `first..=K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationSlice<'a> {
    first: Arm,
    values: &'a [f64],
}

impl<'a> ObservationSlice<'a> {
    pub fn first(&self) -> Arm {
        self.first
    }

    pub fn values(&self) -> &'a [f64] {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Highest observed arm.
    pub fn last(&self) -> Arm {
        Arm::new(self.first.get() + self.values.len() - 1)
    }

    /// Reward of `arm`, or `None` if the arm was not observed.
    pub fn get(&self, arm: Arm) -> Option<f64> {
        arm.get()
            .checked_sub(self.first.get())
            .and_then(|offset| self.values.get(offset).copied())
    }

    /// `(arm, reward)` pairs in arm order.
    pub fn iter(&self) -> impl Iterator<Item = (Arm, f64)> + 'a {
        let start = self.first.index();
        self.values
            .iter()
            .enumerate()
            .map(move |(offset, &x)| (Arm::from_index(start + offset), x))
    }
}

/// Restricts a full reward vector to what the player of `played` observes.
pub fn observation_slice(k: usize, played: Arm, rewards: &[f64]) -> Result<ObservationSlice<'_>> {
    if played.get() > k {
        return Err(Error::InvalidArm {
            arm: played.get(),
            k,
        });
    }
    if rewards.len() != k {
        return Err(Error::Feedback(format!(
            "reward vector has {} entries for {k} arms",
            rewards.len()
        )));
    }
    let values = &rewards[played.index()..];
    if let Some(bad) = values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::Feedback(format!("reward {bad} outside [0, 1]")));
    }
    Ok(ObservationSlice {
        first: played,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegretRow {
    pub t: u64,
    pub arm: Arm,
    pub increment: f64,
    pub cumulative: f64,
}

/// Pseudo-regret of one run. Rows may be recorded for every round or only
/// at checkpoints; the running total always covers every round.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegretTrace {
    pub run_id: u64,
    rows: Vec<RegretRow>,
    total: f64,
}

impl RegretTrace {
    pub fn new(run_id: u64) -> Self {
        RegretTrace {
            run_id,
            rows: Vec::new(),
            total: 0.0,
        }
    }

    /// Adds the gap of `arm` at round `t` and appends a row.
    pub fn accumulate(&mut self, gaps: &GapProfile, t: u64, arm: Arm) -> f64 {
        self.accumulate_sparse(gaps, t, arm, true)
    }

    /// Adds the gap of `arm`; appends a row only if `record` is set.
    pub fn accumulate_sparse(&mut self, gaps: &GapProfile, t: u64, arm: Arm, record: bool) -> f64 {
        let increment = gaps.gap(arm);
        self.total += increment;
        if record {
            self.rows.push(RegretRow {
                t,
                arm,
                increment,
                cumulative: self.total,
            });
        }
        self.total
    }

    pub fn push_row(&mut self, row: RegretRow) {
        self.total = row.cumulative;
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[RegretRow] {
        &self.rows
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}
