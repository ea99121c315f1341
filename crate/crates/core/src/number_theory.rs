//! Arithmetic functions by deterministic trial division.
//!
//! Every function is generic over the integer scalar: machine integers
//! (`u64`, `i64`) for hot loops and [`Natural`](crate::Natural) /
//! [`Integer`](crate::Integer) where values may grow without bound.
//! Factorization-based functions refuse inputs above [`FACTORIZATION_CAP`].

use num_integer::Integer as NumInteger;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Largest integer this module will factor (10^12).
pub const FACTORIZATION_CAP: u64 = 1_000_000_000_000;

/// Integer scalar accepted by the arithmetic functions.
pub trait IntScalar: NumInteger + Clone + ToPrimitive + FromPrimitive + std::fmt::Debug {}

impl<T> IntScalar for T where T: NumInteger + Clone + ToPrimitive + FromPrimitive + std::fmt::Debug {}

/// Prime factorization `n = Π p_i^{e_i}` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<T> {
    factors: Vec<(T, u32)>,
}

impl<T: IntScalar> Factorization<T> {
    pub fn factors(&self) -> &[(T, u32)] {
        &self.factors
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    /// The single `(p, s)` if `n = p^s`, `s ≥ 1`.
    pub fn as_prime_power(&self) -> Option<(T, u32)> {
        match self.factors.as_slice() {
            [(p, e)] => Some((p.clone(), *e)),
            _ => None,
        }
    }

    pub fn product(&self) -> T {
        self.factors.iter().fold(T::one(), |acc, (p, e)| {
            acc * num_traits::pow(p.clone(), *e as usize)
        })
    }

    /// τ(n), the number of positive divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors
            .iter()
            .map(|(_, e)| u64::from(*e) + 1)
            .product()
    }
}

fn require_positive<T: IntScalar>(n: &T, op: &str) -> Result<()> {
    if *n < T::one() {
        return Err(Error::invalid(format!("{op} requires n >= 1, got {n:?}")));
    }
    Ok(())
}

fn require_within_cap<T: IntScalar>(n: &T) -> Result<()> {
    match n.to_u64() {
        Some(v) if v <= FACTORIZATION_CAP => Ok(()),
        _ => Err(Error::cap(
            "factorization input",
            format!("{n:?}"),
            FACTORIZATION_CAP,
        )),
    }
}

/// Factor `1 ≤ n ≤ 10^12` by trial division up to √n.
pub fn factorize<T: IntScalar>(n: &T) -> Result<Factorization<T>> {
    require_positive(n, "factorize")?;
    require_within_cap(n)?;

    let two = T::one() + T::one();
    let mut rest = n.clone();
    let mut factors = Vec::new();
    let mut d = two.clone();
    while d.clone() * d.clone() <= rest {
        let mut e = 0u32;
        while rest.is_multiple_of(&d) {
            rest = rest / d.clone();
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d = if d == two {
            d + T::one()
        } else {
            d + two.clone()
        };
    }
    if rest > T::one() {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

/// Primality by trial division; subject to the factorization cap.
pub fn is_prime<T: IntScalar>(n: &T) -> Result<bool> {
    if *n < T::one() + T::one() {
        return Ok(false);
    }
    let f = factorize(n)?;
    Ok(matches!(f.factors.as_slice(), [(_, 1)]))
}

/// Möbius function μ(n).
pub fn mobius<T: IntScalar>(n: &T) -> Result<i8> {
    require_positive(n, "mobius")?;
    let f = factorize(n)?;
    Ok(mobius_of(&f))
}

fn mobius_of<T: IntScalar>(f: &Factorization<T>) -> i8 {
    if !f.is_squarefree() {
        0
    } else if f.distinct_primes().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler's totient φ(n).
pub fn totient<T: IntScalar>(n: &T) -> Result<T> {
    require_positive(n, "totient")?;
    Ok(totient_of(&factorize(n)?))
}

fn totient_of<T: IntScalar>(f: &Factorization<T>) -> T {
    f.factors.iter().fold(T::one(), |acc, (p, e)| {
        acc * num_traits::pow(p.clone(), (*e - 1) as usize) * (p.clone() - T::one())
    })
}

/// All positive divisors of `n`, ascending.
pub fn divisors<T: IntScalar>(n: &T) -> Result<Vec<T>> {
    require_positive(n, "divisors")?;
    let f = factorize(n)?;
    let mut out = vec![T::one()];
    for (p, e) in f.factors() {
        let base = out.clone();
        let mut pk = T::one();
        for _ in 0..*e {
            pk = pk * p.clone();
            out.extend(base.iter().map(|d| d.clone() * pk.clone()));
        }
    }
    out.sort();
    Ok(out)
}

/// Ramanujan sum `c_q(k) = μ(q/g) φ(q) / φ(q/g)` with `g = gcd(q, k)`.
///
/// The result depends on `k` only through `gcd(q, k)`; `k = 0` gives φ(q).
pub fn ramanujan_sum<T: IntScalar + Signed>(q: &T, k: &T) -> Result<T> {
    require_positive(q, "ramanujan_sum")?;
    if k.is_negative() {
        return Err(Error::invalid(format!(
            "ramanujan_sum requires k >= 0, got {k:?}"
        )));
    }
    let g = q.gcd(k);
    let m = q.clone() / g;
    let mu = mobius(&m)?;
    if mu == 0 {
        return Ok(T::zero());
    }
    let (quot, rem) = totient(q)?.div_rem(&totient(&m)?);
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "phi({m:?}) does not divide phi({q:?})"
        )));
    }
    Ok(if mu < 0 { -quot } else { quot })
}

/// Splits `n` as `p^s` when it is a prime power, `None` otherwise.
///
/// Works beyond the factorization cap as long as the smallest prime factor is
/// at most √cap; an `n > cap` with no such factor is a cap error.
pub fn prime_power_decomposition<T: IntScalar>(n: &T) -> Result<Option<(T, u32)>> {
    require_positive(n, "prime_power_decomposition")?;
    if n.is_one() {
        return Ok(None);
    }
    let limit = T::from_u64(1_000_000).expect("scalar holds 10^6");
    let two = T::one() + T::one();
    let mut d = two.clone();
    let mut smallest = None;
    while d <= limit && d.clone() * d.clone() <= *n {
        if n.is_multiple_of(&d) {
            smallest = Some(d.clone());
            break;
        }
        d = if d == two {
            d + T::one()
        } else {
            d + two.clone()
        };
    }
    let p = match smallest {
        Some(p) => p,
        None if d.clone() * d.clone() > *n => return Ok(Some((n.clone(), 1))),
        None => {
            return Err(Error::cap(
                "prime-power test input",
                format!("{n:?}"),
                FACTORIZATION_CAP,
            ))
        }
    };
    let mut rest = n.clone();
    let mut e = 0u32;
    while rest.is_multiple_of(&p) {
        rest = rest / p.clone();
        e += 1;
    }
    Ok(rest.is_one().then_some((p, e)))
}
