//! Two-sided `E_max` bound for `p ≥ 17`:
//!
//! ```text
//! c (p−1) p^{s−1} (s−1) ≤ E_max(p^s) ≤ 2c (p−1) p^{s−1} s,   c = 1 − ln ln p / ln p
//! ```
//!
//! `c` is enclosed in a rational interval from outward-rounded logarithms, so
//! each side is decided with certainty.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::emax_closed;
use crate::error::{Error, Result};
use crate::model::PrimePowerOrder;
use crate::{ExactRational, Natural};

const BITS: u32 = 96;

fn rat(n: impl Into<BigInt>) -> ExactRational {
    ExactRational::from_integer(n.into())
}

fn scale(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn round_down(x: &ExactRational, bits: u32) -> ExactRational {
    let s = scale(bits);
    ExactRational::new((x * rat(s.clone())).floor().to_integer(), s)
}

fn round_up(x: &ExactRational, bits: u32) -> ExactRational {
    let s = scale(bits);
    ExactRational::new((x * rat(s.clone())).ceil().to_integer(), s)
}

/// Encloses `ln((1+y)/(1−y)) = 2 Σ y^{2j+1}/(2j+1)` for `0 ≤ y ≤ 1/3`.
fn log_ratio_enclosure(y: &ExactRational, bits: u32) -> (ExactRational, ExactRational) {
    let terms = bits / 3 + 2;
    let y2 = y * y;
    let mut power = y.clone();
    let mut sum = ExactRational::zero();
    for j in 0..terms {
        sum += &power / rat(2 * j + 1);
        power *= &y2;
    }
    let lo = rat(2) * &sum;
    // remaining terms are bounded by a geometric series in y²
    let tail = rat(2) * &power / (rat(2 * terms + 1) * (ExactRational::one() - &y2));
    let hi = &lo + tail;
    (lo, hi)
}

/// Rational enclosure `[lo, hi] ∋ ln x` for rational `x > 0`, width about
/// `2^-90`; endpoints are rounded outward to 96 fractional bits.
pub fn ln_enclosure(x: &ExactRational) -> Result<(ExactRational, ExactRational)> {
    if !x.is_positive() {
        return Err(Error::invalid("logarithm of a non-positive number"));
    }
    // x = m · 2^k with 1 ≤ m < 2
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = rat(2);
    let pow2 = |k: i64| {
        if k >= 0 {
            rat(BigInt::one() << k as u64)
        } else {
            ExactRational::new(BigInt::one(), BigInt::one() << (-k) as u64)
        }
    };
    let mut m = x / pow2(k);
    while m >= two {
        m /= &two;
        k += 1;
    }
    while m < ExactRational::one() {
        m *= &two;
        k -= 1;
    }
    let y = (&m - ExactRational::one()) / (&m + ExactRational::one());
    let (m_lo, m_hi) = log_ratio_enclosure(&y, BITS);
    let (ln2_lo, ln2_hi) = log_ratio_enclosure(&ExactRational::new(1.into(), 3.into()), BITS);
    let kr = rat(k);
    let (lo, hi) = if k >= 0 {
        (&kr * ln2_lo + m_lo, &kr * ln2_hi + m_hi)
    } else {
        (&kr * ln2_hi + m_lo, &kr * ln2_lo + m_hi)
    };
    Ok((round_down(&lo, BITS), round_up(&hi, BITS)))
}

/// Outcome of checking both sides of the bound for one order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogBoundCheck {
    pub emax: Natural,
    /// Enclosure of `c = 1 − ln ln p / ln p`.
    pub factor: (ExactRational, ExactRational),
    /// Enclosure of the lower bound.
    pub lower: (ExactRational, ExactRational),
    /// Enclosure of the upper bound.
    pub upper: (ExactRational, ExactRational),
    /// `lower.1 ≤ emax`: holds for every `c` in the enclosure.
    pub lower_holds: bool,
    /// `emax ≤ upper.0`.
    pub upper_holds: bool,
}

/// Checks the two-sided bound against the closed-form `E_max`; requires `p ≥ 17`.
pub fn log_bound_check(order: &PrimePowerOrder) -> Result<LogBoundCheck> {
    if *order.p() < Natural::from(17u8) {
        return Err(Error::invalid(format!(
            "bound needs p >= 17, got {}",
            order.p()
        )));
    }
    let s = order.s();
    let p = rat(BigInt::from(order.p().clone()));
    let (ln_lo, ln_hi) = ln_enclosure(&p)?;
    let (lnln_lo, _) = ln_enclosure(&ln_lo)?;
    let (_, lnln_hi) = ln_enclosure(&ln_hi)?;
    let one = ExactRational::one();
    let factor = (&one - &lnln_hi / &ln_lo, &one - &lnln_lo / &ln_hi);

    let base = rat(BigInt::from((order.p() - 1u32) * order.p_pow(s - 1)));
    let lower_mult = &base * rat(s - 1);
    let upper_mult = rat(2) * &base * rat(s);
    let lower = (&factor.0 * &lower_mult, &factor.1 * &lower_mult);
    let upper = (&factor.0 * &upper_mult, &factor.1 * &upper_mult);

    let emax = emax_closed(order)?.value;
    let e = rat(BigInt::from(emax.clone()));
    Ok(LogBoundCheck {
        lower_holds: lower.1 <= e,
        upper_holds: e <= upper.0,
        emax,
        factor,
        lower,
        upper,
    })
}
