//! Lower-bound laboratory: the hard instance family, exact binomial tail
//! checks, and Monte Carlo probes of prediction accuracy and regret scaling.
//!
//! The asymptotic statements involve unspecified absolute constants, so the
//! probes here report numbers rather than assert thresholds; the exact tail
//! and Stirling inequalities are checked outright.

mod tail;

pub use tail::{
    binom_lower_tail_exact, binom_upper_tail_exact, binomial, check_reverse_chernoff,
    check_reverse_chernoff_upper, check_stirling_corollary, largest_integer_below, ln_big,
    ExactTail, StirlingCheck, TailCheckResult, TailSide, MAX_EXACT_N,
};

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::bandit::{Arm, InstanceSpec};
use crate::env::{stream, Lane};
use crate::error::{Error, Result};
use crate::policy::{ftl_predict, PolicyKind};
use crate::runner::{mean_ci, simulate_run};

/// `K` Bernoulli instances; in member `j` arm `j` has mean `(1 + eps) / 2`
/// and every other arm `1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstanceFamily {
    k: usize,
    eps: f64,
}

pub fn make_family(k: usize, eps: f64) -> Result<InstanceFamily> {
    if k < 2 {
        return Err(Error::InvalidInstance(format!(
            "family needs K >= 2, got {k}"
        )));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidInstance(format!(
            "need 0 < eps <= 1, got {eps}"
        )));
    }
    Ok(InstanceFamily { k, eps })
}

impl InstanceFamily {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn member_means(&self, j: Arm) -> Vec<f64> {
        let mut means = vec![0.5; self.k];
        means[j.index()] = (1.0 + self.eps) / 2.0;
        means
    }

    pub fn member(&self, j: Arm) -> Result<InstanceSpec> {
        Arm::checked(j.get(), self.k)?;
        InstanceSpec::bernoulli(
            self.member_means(j),
            format!("family k={} eps={} member={j}", self.k, self.eps),
        )
    }

    pub fn members(&self) -> Vec<InstanceSpec> {
        (1..=self.k)
            .map(|j| self.member(Arm::new(j)).expect("member index in range"))
            .collect()
    }
}

/// Strategy for the prediction game: watch every arm for `T` rounds, then
/// name one arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predictor {
    FollowTheLeader,
    Constant(Arm),
}

impl Predictor {
    /// Prediction from the per-arm reward totals.
    pub fn predict(self, totals: &[f64]) -> Result<Arm> {
        match self {
            Predictor::FollowTheLeader => ftl_predict(totals),
            Predictor::Constant(arm) => Arm::checked(arm.get(), totals.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberAccuracy {
    pub member: Arm,
    pub successes: u64,
    pub runs: u64,
    pub freq: f64,
    /// Binomial standard error of `freq`.
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BwpReport {
    pub k: usize,
    pub eps: f64,
    pub horizon: u64,
    pub per_member: Vec<MemberAccuracy>,
    /// `(1/K) sum_j P(y_T = j | member j)`.
    pub aggregate: f64,
    pub aggregate_se: f64,
}

/// Monte Carlo success rate of `predictor` on every member of `family`.
///
/// Arms are independent, so the reward totals after `T` rounds are drawn
/// directly as independent `Binomial(T, mu_i)` counts. Member `j`, run `r`
/// uses stream `(seed, (j - 1) * runs + r)`.
pub fn bwp_accuracy(
    family: &InstanceFamily,
    horizon: u64,
    runs: u64,
    predictor: Predictor,
    seed: u64,
) -> Result<BwpReport> {
    if runs == 0 {
        return Err(Error::Precondition("need at least one run".into()));
    }
    let per_member: Vec<MemberAccuracy> = (1..=family.k)
        .into_par_iter()
        .map(|j| {
            let member = Arm::new(j);
            let dists: Vec<Binomial> = family
                .member_means(member)
                .into_iter()
                .map(|p| Binomial::new(horizon, p).expect("p in [0, 1]"))
                .collect();
            let mut totals = vec![0.0; family.k];
            let mut successes = 0;
            for r in 0..runs {
                let mut rng = stream(seed, (j as u64 - 1) * runs + r, Lane::Environment);
                for (total, d) in totals.iter_mut().zip(&dists) {
                    *total = d.sample(&mut rng) as f64;
                }
                successes += u64::from(predictor.predict(&totals)? == member);
            }
            let freq = successes as f64 / runs as f64;
            Ok(MemberAccuracy {
                member,
                successes,
                runs,
                freq,
                se: (freq * (1.0 - freq) / runs as f64).sqrt(),
            })
        })
        .collect::<Result<_>>()?;
    let kf = family.k as f64;
    let aggregate = per_member.iter().map(|m| m.freq).sum::<f64>() / kf;
    let aggregate_se = per_member.iter().map(|m| m.se * m.se).sum::<f64>().sqrt() / kf;
    Ok(BwpReport {
        k: family.k,
        eps: family.eps,
        horizon,
        per_member,
        aggregate,
        aggregate_se,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub k: usize,
    pub horizon: u64,
    pub eps: f64,
    pub runs: u64,
    pub mean_regret: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// `eps = sqrt(ln K / T)`.
pub fn scaling_eps(k: usize, horizon: u64) -> f64 {
    ((k as f64).ln() / horizon as f64).sqrt()
}

/// Mean pseudo-regret of `policy` on a uniformly random member of the
/// family with `eps = sqrt(ln K / T)`, one row per `K`.
pub fn regret_scaling_probe(
    ks: &[usize],
    horizon: u64,
    runs: u64,
    policy: PolicyKind,
    seed: u64,
) -> Result<Vec<ScalingRow>> {
    if runs == 0 || horizon == 0 {
        return Err(Error::Precondition(
            "need runs >= 1 and horizon >= 1".into(),
        ));
    }
    ks.iter()
        .map(|&k| {
            if k == 0 {
                return Err(Error::InvalidInstance("K must be positive".into()));
            }
            let eps = scaling_eps(k, horizon);
            if k == 1 {
                return Ok(ScalingRow {
                    k,
                    horizon,
                    eps,
                    runs,
                    mean_regret: 0.0,
                    ci_low: 0.0,
                    ci_high: 0.0,
                });
            }
            let family = make_family(k, eps)?;
            let regrets: Vec<f64> = (0..runs)
                .into_par_iter()
                .map(|run| {
                    let j = stream(seed, run, Lane::Instance).random_range(1..=k);
                    let inst = family.member(Arm::new(j))?;
                    Ok(simulate_run(&inst, policy, horizon, seed, run, &[horizon])?.total())
                })
                .collect::<Result<_>>()?;
            let (mean_regret, ci_low, ci_high) = mean_ci(&regrets)?;
            Ok(ScalingRow {
                k,
                horizon,
                eps,
                runs,
                mean_regret,
                ci_low,
                ci_high,
            })
        })
        .collect()
}
