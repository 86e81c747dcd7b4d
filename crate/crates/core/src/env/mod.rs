//! Stochastic round samplers and the instance constructors used in the
//! experiments.

mod auction;
mod stream;

pub use auction::{AuctionSpec, ValueDist};
pub use stream::{stream, Lane, Stream};

use rand::Rng;

use crate::bandit::{Arm, Family, InstanceSpec};
use crate::error::{Error, Result};

/// Mean of every suboptimal arm in the random-mean experiments is below this,
/// and the best arm sits at this value plus the margin.
pub const RANDOM_MEAN_ANCHOR: f64 = 0.6;

/// One draw of the full reward vector.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundSample {
    pub rewards: Vec<f64>,
    /// Bids behind the rewards (auction family only).
    pub aux: Option<Vec<f64>>,
}

impl RoundSample {
    pub fn for_instance(inst: &InstanceSpec) -> Self {
        let aux = match inst.family() {
            Family::Bernoulli => None,
            Family::Auction(spec) => Some(vec![0.0; spec.bidders()]),
        };
        RoundSample {
            rewards: vec![0.0; inst.k()],
            aux,
        }
    }
}

pub fn sample_round(inst: &InstanceSpec, rng: &mut Stream) -> RoundSample {
    let mut out = RoundSample::for_instance(inst);
    sample_round_into(inst, rng, &mut out);
    out
}

/// Fills `out` with the next round. Bernoulli instances consume one uniform
/// per arm in arm order; auction instances consume one per bidder.
pub fn sample_round_into(inst: &InstanceSpec, rng: &mut Stream, out: &mut RoundSample) {
    match inst.family() {
        Family::Bernoulli => {
            for (x, &mu) in out.rewards.iter_mut().zip(inst.means()) {
                *x = if rng.random::<f64>() < mu { 1.0 } else { 0.0 };
            }
        }
        Family::Auction(spec) => {
            let bids = out.aux.get_or_insert_with(Vec::new);
            bids.clear();
            let dist = spec.value_dist();
            bids.extend((0..spec.bidders()).map(|_| dist.quantile(rng.random::<f64>())));
            spec.auction_round_into(bids, &mut out.rewards)
                .expect("sampled bids lie in [0, 1]");
        }
    }
}

/// All arms at `base` except `best`, which sits at `base + delta`.
pub fn make_uniform_gap_instance(
    k: usize,
    best: Arm,
    base: f64,
    delta: f64,
) -> Result<InstanceSpec> {
    Arm::checked(best.get(), k)?;
    if !(0.0..=1.0).contains(&base) || delta.is_nan() || delta < 0.0 || base + delta > 1.0 {
        return Err(Error::InvalidInstance(format!(
            "need 0 <= base, 0 <= delta and base + delta <= 1 (base {base}, delta {delta})"
        )));
    }
    let mut means = vec![base; k];
    means[best.index()] = base + delta;
    let inst = InstanceSpec::bernoulli(
        means,
        format!("uniform-gap k={k} best={best} base={base} delta={delta}"),
    )?;
    // With delta = 0 every arm ties and the smallest index is the best arm.
    debug_assert!(delta == 0.0 || inst.best() == best);
    Ok(inst)
}

/// Suboptimal means i.i.d. uniform on `[lo, hi)` drawn from `seed`; the best
/// arm gets `0.6 + lambda`.
pub fn make_random_mean_instance(
    k: usize,
    best: Arm,
    lambda: f64,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Result<InstanceSpec> {
    Arm::checked(best.get(), k)?;
    if !(0.0 <= lo && lo < hi && hi <= RANDOM_MEAN_ANCHOR) {
        return Err(Error::InvalidInstance(format!(
            "need 0 <= lo < hi <= {RANDOM_MEAN_ANCHOR} (lo {lo}, hi {hi})"
        )));
    }
    if lambda.is_nan() || lambda < 0.0 || RANDOM_MEAN_ANCHOR + lambda > 1.0 {
        return Err(Error::InvalidInstance(format!(
            "lambda {lambda} out of range"
        )));
    }
    let mut rng = stream(seed, 0, Lane::Instance);
    let means = (1..=k)
        .map(|i| {
            if i == best.get() {
                RANDOM_MEAN_ANCHOR + lambda
            } else {
                lo + (hi - lo) * rng.random::<f64>()
            }
        })
        .collect();
    InstanceSpec::bernoulli(
        means,
        format!("random-mean k={k} best={best} lambda={lambda} lo={lo} hi={hi} seed={seed}"),
    )
}

/// Auction instance; arm means are the expected revenues of the reserves.
pub fn make_auction_instance(spec: AuctionSpec) -> Result<InstanceSpec> {
    let means = spec.expected_revenue();
    let label = format!("auction k={} bidders={}", spec.k(), spec.bidders());
    InstanceSpec::new(means, Family::Auction(spec), label)
}
