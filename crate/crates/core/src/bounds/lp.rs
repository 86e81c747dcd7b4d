//! The integer program behind the gap-dependent bound.
//!
//! Arm `j` is played `a_j` times. An arm that is played at all must have
//! been eliminated by the time its prefix of plays ran out, so
//! `a_1 + ... + a_j <= C / Delta_j^2 + 1` whenever `a_j > 0`. The program
//! maximizes `sum_j a_j Delta_j` over arms left of the best arm. Its
//! closed-form upper bound sorts the gaps descending.

use serde::Serialize;

use crate::error::{Error, Result};

use super::closed_form::gap_sum;

/// Largest best-arm position the exact solver accepts.
pub const MAX_ORACLE_ARMS: usize = 8;
/// Largest prefix cap `floor(C / Delta_min^2) + 1` the exact solver accepts.
pub const MAX_ORACLE_CAP: u64 = 10_000;
/// Largest search space the literal enumerator walks.
pub const MAX_ENUMERATION_POINTS: f64 = 5e7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpInstance {
    /// `Delta_1..Delta_{i*}` in arm order, last entry 0.
    gaps: Vec<f64>,
    c: f64,
}

impl LpInstance {
    pub fn new(gaps: Vec<f64>, c: f64) -> Result<Self> {
        match gaps.last() {
            Some(&0.0) => {}
            _ => {
                return Err(Error::InvalidInstance(
                    "gaps must end with the best arm's 0".into(),
                ))
            }
        }
        if gaps.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::InvalidInstance(
                "gaps must be finite and nonnegative".into(),
            ));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidInstance(format!(
                "C must be positive, got {c}"
            )));
        }
        Ok(LpInstance { gaps, c })
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Same program with the gaps sorted descending.
    pub fn sorted(&self) -> Self {
        let mut gaps = self.gaps.clone();
        gaps.sort_by(|a, b| b.total_cmp(a));
        LpInstance { gaps, c: self.c }
    }

    /// `floor(C / Delta_j^2 + 1)` for every payoff-relevant arm; `None` for
    /// zero gaps, which are never worth playing.
    fn caps(&self) -> Vec<Option<u64>> {
        let payoff = &self.gaps[..self.gaps.len() - 1];
        payoff
            .iter()
            .map(|&d| (d > 0.0).then(|| floor_snapped(self.c / (d * d) + 1.0)))
            .collect()
    }
}

/// Floor that treats values within 1e-9 (relative) of an integer as that
/// integer, so `C / Delta^2` landing a rounding error below an integer
/// keeps its intended cap.
fn floor_snapped(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as u64
    } else {
        x.floor() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    /// `a_1..a_{i*}`; the best arm's entry is always 0.
    pub assignment: Vec<u64>,
}

fn objective(gaps: &[f64], assignment: &[u64]) -> f64 {
    gaps.iter()
        .zip(assignment)
        .map(|(d, &a)| a as f64 * d)
        .sum()
}

/// Whether an assignment satisfies every active prefix constraint.
pub fn is_feasible(inst: &LpInstance, assignment: &[u64]) -> bool {
    let caps = inst.caps();
    let mut prefix = 0u64;
    for (j, &a) in assignment.iter().enumerate() {
        prefix += a;
        if a == 0 || j >= caps.len() {
            continue;
        }
        match caps[j] {
            Some(cap) if prefix > cap => return false,
            _ => {}
        }
    }
    true
}

fn guard(inst: &LpInstance) -> Result<Vec<Option<u64>>> {
    if inst.gaps.len() > MAX_ORACLE_ARMS {
        return Err(Error::OracleTooLarge(format!(
            "best arm at position {} > {MAX_ORACLE_ARMS}",
            inst.gaps.len()
        )));
    }
    let caps = inst.caps();
    if let Some(&cap) = caps.iter().flatten().max() {
        if cap > MAX_ORACLE_CAP {
            return Err(Error::OracleTooLarge(format!(
                "prefix cap {cap} > {MAX_ORACLE_CAP}"
            )));
        }
    }
    Ok(caps)
}

/// Exact optimum over all nonnegative integer assignments.
///
/// Exhaustive over the lattice via a table indexed by (arm, prefix sum):
/// `best[j][s]` is the most payoff arms `j..` can add after `s` plays of the
/// earlier arms. Once `s` exceeds every later cap the later arms are stuck
/// at zero, so the table only needs prefix sums up to the largest cap.
pub fn lp_bruteforce(inst: &LpInstance) -> Result<OracleResult> {
    let caps = guard(inst)?;
    let m = caps.len();
    let width = caps.iter().flatten().max().map_or(1, |&c| c as usize + 1);
    // next[s]: best continuation value from arm j+1 onward given prefix s.
    let mut next = vec![0.0f64; width];
    // choice[j][s]: prefix sum after arm j in the optimum (== s means a_j = 0).
    let mut choice = vec![vec![0usize; width]; m];
    for j in (0..m).rev() {
        let mut cur = next.clone();
        for (s, slot) in choice[j].iter_mut().enumerate() {
            *slot = s;
        }
        if let Some(cap) = caps[j] {
            let d = inst.gaps[j];
            let cap = cap as usize;
            // Walk s downward, tracking the best landing point s' in (s, cap].
            let mut best_val = f64::NEG_INFINITY;
            let mut best_at = 0;
            for s in (0..cap).rev() {
                let sp = s + 1;
                let g = sp as f64 * d + next[sp];
                if g > best_val {
                    best_val = g;
                    best_at = sp;
                }
                let take = best_val - s as f64 * d;
                if take > cur[s] {
                    cur[s] = take;
                    choice[j][s] = best_at;
                }
            }
        }
        next = cur;
    }

    let mut assignment = vec![0u64; inst.gaps.len()];
    let mut s = 0usize;
    for (j, row) in choice.iter().enumerate() {
        let after = row[s];
        assignment[j] = (after - s) as u64;
        s = after;
    }
    debug_assert!(is_feasible(inst, &assignment));
    Ok(OracleResult {
        value: objective(&inst.gaps, &assignment),
        assignment,
    })
}

/// Literal enumeration of every assignment in lexicographic order, pruning
/// a branch as soon as its prefix sum breaks the branch arm's cap.
pub fn lp_enumerate(inst: &LpInstance) -> Result<OracleResult> {
    let caps = guard(inst)?;
    let points: f64 = caps.iter().flatten().map(|&c| c as f64 + 1.0).product();
    if points > MAX_ENUMERATION_POINTS {
        return Err(Error::OracleTooLarge(format!(
            "{points:.0} assignments to enumerate"
        )));
    }
    let mut current = vec![0u64; inst.gaps.len()];
    let mut best = OracleResult {
        value: 0.0,
        assignment: current.clone(),
    };
    walk(inst, &caps, 0, 0, &mut current, &mut best);
    Ok(best)
}

fn walk(
    inst: &LpInstance,
    caps: &[Option<u64>],
    j: usize,
    prefix: u64,
    current: &mut [u64],
    best: &mut OracleResult,
) {
    if j == caps.len() {
        let v = objective(&inst.gaps, current);
        if v > best.value {
            best.value = v;
            best.assignment = current.to_vec();
        }
        return;
    }
    let Some(cap) = caps[j] else {
        current[j] = 0;
        walk(inst, caps, j + 1, prefix, current, best);
        return;
    };
    let mut a = 0;
    loop {
        if a > 0 && prefix + a > cap {
            break;
        }
        current[j] = a;
        walk(inst, caps, j + 1, prefix + a, current, best);
        a += 1;
    }
    current[j] = 0;
}

/// Upper bound on the optimum after sorting the gaps descending.
pub fn lp_closed_form(inst: &LpInstance) -> Result<f64> {
    gap_sum(inst.sorted().gaps(), inst.c)
}
