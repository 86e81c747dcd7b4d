//! Repeated second-price auctions with a reserve price.
//!
//! Arm `i` posts reserve `reserves[i]`, with reserves strictly increasing.
//! The item goes to the highest bidder at or above the reserve, who pays the
//! larger of the reserve and the second-highest qualifying bid. A seller who
//! posts reserve `r` sees every bid at or above `r`, which is exactly enough
//! to compute the revenue of every reserve `>= r`: one-sided feedback.

use serde::{Deserialize, Serialize};

use crate::bandit::Arm;
use crate::error::{Error, Result};

/// Distribution of each bidder's value on [0, 1], bidders i.i.d.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "kebab-case")]
pub enum ValueDist {
    #[default]
    Uniform,
    /// CDF `x^exponent`. `exponent > 1` skews values towards 1.
    Power { exponent: f64 },
}

impl ValueDist {
    pub fn cdf(self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            ValueDist::Uniform => x,
            ValueDist::Power { exponent } => x.powf(exponent),
        }
    }

    /// Inverse-CDF transform of a uniform draw in [0, 1).
    pub fn quantile(self, u: f64) -> f64 {
        match self {
            ValueDist::Uniform => u,
            ValueDist::Power { exponent } => u.powf(exponent.recip()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuctionSpec {
    reserves: Vec<f64>,
    bidders: usize,
    #[serde(default)]
    value_dist: ValueDist,
}

impl AuctionSpec {
    pub fn new(reserves: Vec<f64>, bidders: usize, value_dist: ValueDist) -> Result<Self> {
        if reserves.is_empty() {
            return Err(Error::InvalidInstance(
                "auction needs at least one reserve".into(),
            ));
        }
        if bidders == 0 {
            return Err(Error::InvalidInstance(
                "auction needs at least one bidder".into(),
            ));
        }
        if reserves.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::InvalidInstance("reserves must lie in [0, 1]".into()));
        }
        if reserves.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInstance(
                "reserves must be strictly increasing".into(),
            ));
        }
        if let ValueDist::Power { exponent } = value_dist {
            if !(exponent > 0.0 && exponent.is_finite()) {
                return Err(Error::InvalidInstance(format!(
                    "bad value exponent {exponent}"
                )));
            }
        }
        Ok(AuctionSpec {
            reserves,
            bidders,
            value_dist,
        })
    }

    /// `k` reserves evenly spaced on `[0, 1)`: `0, 1/k, ..., (k-1)/k`.
    pub fn evenly_spaced(k: usize, bidders: usize, value_dist: ValueDist) -> Result<Self> {
        let reserves = (0..k).map(|i| i as f64 / k as f64).collect();
        Self::new(reserves, bidders, value_dist)
    }

    pub fn reserves(&self) -> &[f64] {
        &self.reserves
    }

    pub fn bidders(&self) -> usize {
        self.bidders
    }

    pub fn value_dist(&self) -> ValueDist {
        self.value_dist
    }

    pub fn k(&self) -> usize {
        self.reserves.len()
    }

    /// Revenue of every reserve for one set of bids.
    pub fn auction_round(&self, bids: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.k()];
        let mut scratch = bids.to_vec();
        self.auction_round_into(&mut scratch, &mut out)?;
        Ok(out)
    }

    /// Like [`auction_round`](Self::auction_round) but reuses buffers.
    /// `bids` is reordered in place.
    pub fn auction_round_into(&self, bids: &mut [f64], out: &mut [f64]) -> Result<()> {
        validate_bids(bids)?;
        let (first, second) = top_two(bids);
        for (slot, &r) in out.iter_mut().zip(&self.reserves) {
            *slot = revenue(first, second, r);
        }
        Ok(())
    }

    /// Revenues of reserves `played..=K`, computed only from the bids a
    /// seller who posted `reserves[played]` gets to see.
    pub fn censored_revenue(&self, played: Arm, visible_bids: &[f64]) -> Result<Vec<f64>> {
        let played = Arm::checked(played.get(), self.k())?;
        validate_bids(visible_bids)?;
        let floor = self.reserves[played.index()];
        if let Some(b) = visible_bids.iter().find(|&&b| b < floor) {
            return Err(Error::Feedback(format!(
                "bid {b} is below the posted reserve {floor} and cannot be visible"
            )));
        }
        let (first, second) = top_two(visible_bids);
        Ok(self.reserves[played.index()..]
            .iter()
            .map(|&r| revenue(first, second, r))
            .collect())
    }

    /// Expected revenue of every reserve under the bidder value distribution.
    pub fn expected_revenue(&self) -> Vec<f64> {
        self.reserves
            .iter()
            .map(|&r| expected_revenue_at(r, self.bidders, self.value_dist))
            .collect()
    }
}

fn validate_bids(bids: &[f64]) -> Result<()> {
    match bids.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        Some(&b) => Err(Error::InvalidBid(b)),
        None => Ok(()),
    }
}

/// Highest and second-highest bids; missing bids are `-1`.
fn top_two(bids: &[f64]) -> (f64, f64) {
    let mut first = -1.0;
    let mut second = -1.0;
    for &b in bids {
        if b > first {
            second = first;
            first = b;
        } else if b > second {
            second = b;
        }
    }
    (first, second)
}

fn revenue(first: f64, second: f64, reserve: f64) -> f64 {
    if second >= reserve {
        second
    } else if first >= reserve {
        reserve
    } else {
        0.0
    }
}

/// `E[revenue] = r * P(some bid >= r) + integral_r^1 P(two bids > x) dx`.
fn expected_revenue_at(reserve: f64, n: usize, dist: ValueDist) -> f64 {
    let n_f = n as f64;
    let at_least_one = 1.0 - dist.cdf(reserve).powi(n as i32);
    let two_above = |x: f64| {
        let f = dist.cdf(x);
        if n < 2 {
            0.0
        } else {
            1.0 - f.powi(n as i32) - n_f * f.powi(n as i32 - 1) * (1.0 - f)
        }
    };
    reserve * at_least_one + simpson(two_above, reserve, 1.0, 4096)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            w * f(a + i as f64 * h)
        })
        .sum();
    (f(a) + inner + f(b)) * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(reserves: &[f64], n: usize) -> AuctionSpec {
        AuctionSpec::new(reserves.to_vec(), n, ValueDist::Uniform).unwrap()
    }

    #[test]
    fn round_examples() {
        let s = spec(&[0.2, 0.5, 0.8, 0.95], 3);
        assert_eq!(
            s.auction_round(&[0.9, 0.7, 0.3]).unwrap(),
            vec![0.7, 0.7, 0.8, 0.0]
        );

        let s = spec(&[0.1, 0.5], 2);
        assert_eq!(s.auction_round(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);

        let s = spec(&[0.4, 0.6], 1);
        assert_eq!(s.auction_round(&[0.5]).unwrap(), vec![0.4, 0.0]);

        assert!(matches!(s.auction_round(&[1.2]), Err(Error::InvalidBid(_))));
    }

    #[test]
    fn censored_examples() {
        let s = spec(&[0.2, 0.5, 0.8, 0.95], 3);
        assert_eq!(
            s.censored_revenue(Arm::new(2), &[0.9, 0.7]).unwrap(),
            vec![0.7, 0.8, 0.0]
        );
        assert_eq!(
            s.censored_revenue(Arm::new(1), &[0.9, 0.7, 0.3]).unwrap(),
            s.auction_round(&[0.9, 0.7, 0.3]).unwrap()
        );
        assert_eq!(s.censored_revenue(Arm::new(4), &[]).unwrap(), vec![0.0]);
        assert!(s.censored_revenue(Arm::new(3), &[0.7]).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(AuctionSpec::new(vec![0.5, 0.5], 1, ValueDist::Uniform).is_err());
        assert!(AuctionSpec::new(vec![0.5], 0, ValueDist::Uniform).is_err());
        assert!(AuctionSpec::new(vec![1.5], 1, ValueDist::Uniform).is_err());
        assert!(AuctionSpec::new(vec![0.5], 1, ValueDist::Power { exponent: 0.0 }).is_err());
    }

    #[test]
    fn expected_revenue_matches_uniform_closed_form() {
        // n uniform bidders: r^n - r^(n+1) + (n-1)(1 - r^(n+1))/(n+1).
        for n in 1..6 {
            let s = AuctionSpec::evenly_spaced(10, n, ValueDist::Uniform).unwrap();
            for (&r, got) in s.reserves().iter().zip(s.expected_revenue()) {
                let nf = n as f64;
                let want = r.powi(n as i32) - r.powi(n as i32 + 1)
                    + (nf - 1.0) * (1.0 - r.powi(n as i32 + 1)) / (nf + 1.0);
                approx::assert_abs_diff_eq!(got, want, epsilon = 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn censored_matches_full_round(
            bids in prop::collection::vec(0.0f64..=1.0, 1..8),
            mut reserves in prop::collection::btree_set(0u32..=1000, 1..10),
            pick in 0usize..64,
        ) {
            let reserves: Vec<f64> = std::mem::take(&mut reserves).into_iter().map(|r| r as f64 / 1000.0).collect();
            let s = AuctionSpec::new(reserves.clone(), bids.len(), ValueDist::Uniform).unwrap();
            let full = s.auction_round(&bids).unwrap();
            let played = Arm::from_index(pick % reserves.len());
            let floor = reserves[played.index()];
            let visible: Vec<f64> = bids.iter().copied().filter(|&b| b >= floor).collect();
            let partial = s.censored_revenue(played, &visible).unwrap();
            prop_assert_eq!(&full[played.index()..], &partial[..]);
            prop_assert!(full.iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }
}
