//! Exact fair-coin binomial tails in integer arithmetic.

use std::f64::consts::{E, LN_2, PI};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` accepted by the exact tail routines.
pub const MAX_EXACT_N: u64 = 2000;

/// `numerator / 2^n`, exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTail {
    pub n: u64,
    pub numerator: BigUint,
}

impl ExactTail {
    /// Natural log; `-inf` for an empty tail.
    pub fn ln(&self) -> f64 {
        ln_big(&self.numerator) - self.n as f64 * LN_2
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// `ln x` for a big integer, accurate to f64 precision.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("at most 64 bits after shift");
    (top as f64).ln() + shift as f64 * LN_2
}

pub fn binomial(n: u64, l: u64) -> BigUint {
    if l > n {
        return BigUint::zero();
    }
    let l = l.min(n - l);
    let mut c = BigUint::one();
    for i in 0..l {
        c = c * (n - i) / (i + 1);
    }
    c
}

fn guard(n: u64) -> Result<()> {
    if n > MAX_EXACT_N {
        return Err(Error::Precondition(format!(
            "n = {n} exceeds {MAX_EXACT_N}"
        )));
    }
    Ok(())
}

/// `sum_{l=0}^{m} C(n, l) / 2^n`.
pub fn binom_lower_tail_exact(n: u64, m: u64) -> Result<ExactTail> {
    guard(n)?;
    if m > n {
        return Err(Error::Precondition(format!("threshold {m} > n = {n}")));
    }
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for l in 0..m {
        term = term * (n - l) / (l + 1);
        sum += &term;
    }
    Ok(ExactTail { n, numerator: sum })
}

/// `sum_{l=m}^{n} C(n, l) / 2^n`.
pub fn binom_upper_tail_exact(n: u64, m: u64) -> Result<ExactTail> {
    guard(n)?;
    if m > n {
        return Ok(ExactTail {
            n,
            numerator: BigUint::zero(),
        });
    }
    let mut term = binomial(n, m);
    let mut sum = term.clone();
    for l in m..n {
        term = term * (n - l) / (l + 1);
        sum += &term;
    }
    Ok(ExactTail { n, numerator: sum })
}

/// Largest integer strictly below `x`, or `None` if that is negative.
/// Values within 1e-9 of an integer count as that integer.
pub fn largest_integer_below(x: f64) -> Option<u64> {
    let r = x.round();
    let m = if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r - 1.0
    } else {
        x.floor()
    };
    (m >= 0.0).then_some(m as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailSide {
    /// `P(mean < (1 - delta) / 2)` against `exp(-9/2 n delta^2)`.
    Lower,
    /// `P(mean > 1/2 + delta)` against `exp(-18 n delta^2)`.
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCheckResult {
    pub side: TailSide,
    pub n: u64,
    pub delta: f64,
    /// Summation limit (lower side) or start (upper side); `None` when the
    /// event is empty.
    pub threshold: Option<u64>,
    #[serde(skip)]
    pub exact: ExactTail,
    pub exact_tail: f64,
    pub bound: f64,
    pub holds: bool,
    pub precondition_met: bool,
}

/// Reverse Chernoff bound for a fair coin: when `delta <= 1/2` and
/// `delta^2 n > 6`, `P(mean of n flips < (1 - delta) / 2) >= exp(-9/2 n delta^2)`.
pub fn check_reverse_chernoff(n: u64, delta: f64) -> Result<TailCheckResult> {
    let ln_bound = -4.5 * n as f64 * delta * delta;
    let threshold = largest_integer_below(n as f64 * (1.0 - delta) / 2.0).map(|m| m.min(n));
    let exact = match threshold {
        Some(m) => binom_lower_tail_exact(n, m)?,
        None => {
            guard(n)?;
            ExactTail {
                n,
                numerator: BigUint::zero(),
            }
        }
    };
    Ok(finish(
        TailSide::Lower,
        n,
        delta,
        threshold,
        exact,
        ln_bound,
        delta > 0.0 && delta <= 0.5 && delta * delta * n as f64 > 6.0,
    ))
}

/// The same inequality stated for the upper tail with `eps = delta / 2`:
/// `P(mean > 1/2 + eps) >= exp(-18 n eps^2)` when `eps <= 1/4` and
/// `eps^2 n > 3/2`.
pub fn check_reverse_chernoff_upper(n: u64, eps: f64) -> Result<TailCheckResult> {
    let ln_bound = -18.0 * n as f64 * eps * eps;
    // smallest integer strictly above n (1/2 + eps)
    let x = n as f64 * (0.5 + eps);
    let r = x.round();
    let start = if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r + 1.0
    } else {
        x.ceil()
    };
    let start = start.max(0.0) as u64;
    let exact = binom_upper_tail_exact(n, start)?;
    let threshold = (start <= n).then_some(start);
    Ok(finish(
        TailSide::Upper,
        n,
        eps,
        threshold,
        exact,
        ln_bound,
        eps > 0.0 && eps <= 0.25 && eps * eps * n as f64 > 1.5,
    ))
}

fn finish(
    side: TailSide,
    n: u64,
    delta: f64,
    threshold: Option<u64>,
    exact: ExactTail,
    ln_bound: f64,
    precondition_met: bool,
) -> TailCheckResult {
    let ln_exact = exact.ln();
    TailCheckResult {
        side,
        n,
        delta,
        threshold,
        exact_tail: ln_exact.exp(),
        bound: ln_bound.exp(),
        holds: ln_exact >= ln_bound,
        precondition_met,
        exact,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StirlingCheck {
    pub n: u64,
    pub l: u64,
    #[serde(skip)]
    pub lhs: BigUint,
    /// Natural log of the exact binomial coefficient.
    pub ln_lhs: f64,
    pub rhs: f64,
    pub ln_rhs: f64,
    pub holds: bool,
}

/// `C(n, l) >= (n/l)^l (n/(n-l))^(n-l) / (e sqrt(2 pi l))` for `1 <= l <= n-1`.
pub fn check_stirling_corollary(n: u64, l: u64) -> Result<StirlingCheck> {
    if l == 0 || l >= n {
        return Err(Error::Precondition(format!(
            "need 1 <= l <= n - 1, got n = {n}, l = {l}"
        )));
    }
    guard(n)?;
    let (nf, lf) = (n as f64, l as f64);
    let ln_rhs = lf * (nf / lf).ln() + (nf - lf) * (nf / (nf - lf)).ln()
        - E.ln()
        - 0.5 * (2.0 * PI * lf).ln();
    let lhs = binomial(n, l);
    let ln_lhs = ln_big(&lhs);
    Ok(StirlingCheck {
        n,
        l,
        lhs,
        ln_lhs,
        rhs: ln_rhs.exp(),
        ln_rhs,
        holds: ln_lhs >= ln_rhs,
    })
}
