//! Energies of gcd graphs.
//!
//! For `n = p^s` and `𝒟 = {p^{a_1}, …, p^{a_r}}` the energy is
//!
//! ```text
//! E = 2(p−1) p^{s−1} (r − (p−1) h_{p,r}(a)),   h_{p,r}(a) = Σ_{k<i} p^{−(a_i − a_k)}
//! ```
//!
//! which [`energy_prime_power`] evaluates in the all-integer form
//! `2(p−1)(r p^{s−1} − (p−1) T)` with `T = Σ_{k<i} p^{s−1−(a_i−a_k)}`.
//! The [`spectral`] submodule is the independent route through Ramanujan sums
//! and works for any `n` up to a fixed cap.

mod bounds;
mod spectral;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{divisor_set_of, exponents_of, DivisorSet, ExponentTuple, PrimePowerOrder};
use crate::number_theory::prime_power_decomposition;
use crate::{ExactRational, Integer, Natural};

pub use bounds::{ln_enclosure, log_bound_check, LogBoundCheck};
pub use spectral::{energy_general, spectrum_gcd_graph, SpectralOracle, Spectrum, SPECTRAL_CAP};

/// Scalar field in which `h_{p,r}` can be evaluated.
///
/// [`ExactRational`] gives the exact value; `f64`/`f32` give quick
/// approximations for display.
pub trait Scalar: num_traits::Num + Clone {
    fn from_natural(n: &Natural) -> Self;
}

impl Scalar for ExactRational {
    fn from_natural(n: &Natural) -> Self {
        ExactRational::from_integer(BigInt::from(n.clone()))
    }
}

impl Scalar for f64 {
    fn from_natural(n: &Natural) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Scalar for f32 {
    fn from_natural(n: &Natural) -> Self {
        n.to_f32().unwrap_or(f32::INFINITY)
    }
}

/// `h_{p,r}(a)` evaluated in the scalar `F`.
pub fn h_value_in<F: Scalar>(p: &Natural, a: &ExponentTuple) -> F {
    let inv_p = F::one() / F::from_natural(p);
    let span = (a.entries().last().unwrap() - a.entries()[0]) as usize;
    let mut inv_pows = Vec::with_capacity(span + 1);
    let mut acc = F::one();
    for _ in 0..=span {
        inv_pows.push(acc.clone());
        acc = acc * inv_p.clone();
    }
    let e = a.entries();
    let mut sum = F::zero();
    for k in 0..e.len() {
        for i in k + 1..e.len() {
            sum = sum + inv_pows[(e[i] - e[k]) as usize].clone();
        }
    }
    sum
}

/// Exact `h_{p,r}(a)`; `0` for `r = 1`.
pub fn h_value(p: &Natural, a: &ExponentTuple) -> ExactRational {
    h_value_in::<ExactRational>(p, a)
}

/// Energy of `ICG_{p^s}(𝒟(a))` for any nonempty exponent tuple.
pub fn energy_prime_power(order: &PrimePowerOrder, a: &ExponentTuple) -> Result<Natural> {
    if a.s() != order.s() {
        return Err(Error::invalid(format!(
            "tuple {a} is for s = {}, order is {order}",
            a.s()
        )));
    }
    let s = order.s();
    let p = order.p();
    let pows: Vec<Natural> = std::iter::successors(Some(Natural::one()), |x| Some(x * p))
        .take(s as usize)
        .collect();
    let top = (s - 1) as usize;
    let e = a.entries();
    let mut t = Natural::zero();
    for k in 0..e.len() {
        for i in k + 1..e.len() {
            t += &pows[top - (e[i] - e[k]) as usize];
        }
    }
    let pm1 = p - 1u32;
    let positive = Natural::from(e.len()) * &pows[top];
    let inner = positive
        .checked_sub(&(&pm1 * t))
        .ok_or_else(|| Error::Internal(format!("negative energy for {a} over {order}")))?;
    Ok(2u32 * pm1 * inner)
}

/// Evaluation route used to obtain an energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Prime-power closed form.
    Formula,
    /// Sum of `|λ_k|` over the Ramanujan-sum spectrum.
    Spectral,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Formula => "formula",
            Method::Spectral => "spectral",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyReport {
    pub energy: Natural,
    pub n: Natural,
    pub divisors: DivisorSet,
    pub method: Method,
}

/// Energy of a divisor set, by formula when `n` is a prime power and by the
/// spectral scan otherwise.
pub fn energy_of_set(set: &DivisorSet) -> Result<EnergyReport> {
    let n = set.n().clone();
    if let Some((p, s)) = prime_power_decomposition(&n)? {
        let order = PrimePowerOrder::new(p, s)?;
        let a = exponents_of(set, &order)?;
        return Ok(EnergyReport {
            energy: energy_prime_power(&order, &a)?,
            n,
            divisors: set.clone(),
            method: Method::Formula,
        });
    }
    Ok(EnergyReport {
        energy: energy_general(&n, set)?,
        n,
        divisors: set.clone(),
        method: Method::Spectral,
    })
}

/// `E_min(p^s) = 2(p−1)p^{s−1}` with the singleton minimizers `{p^t}`.
pub fn emin_closed(order: &PrimePowerOrder) -> Result<(Natural, Vec<DivisorSet>)> {
    let s = order.s();
    let value = 2u32 * (order.p() - 1u32) * order.p_pow(s - 1);
    let sets = (0..s)
        .map(|t| divisor_set_of(&ExponentTuple::singleton(t, s)?, order))
        .collect::<Result<Vec<_>>>()?;
    Ok((value, sets))
}

/// `(0,2,4,…,s−3,s−1)` for odd `s`, `(0,2,4,…,s−2,s−1)` for even `s`.
pub fn equidistant_tuple(s: u32) -> Result<ExponentTuple> {
    let mut e: Vec<u32> = (0..s).step_by(2).collect();
    if s.is_multiple_of(2) {
        e.push(s - 1);
    }
    ExponentTuple::new(e, s)
}

/// `(0,1,3,5,…,s−2,s−1)` for odd `s ≥ 3`, `(0,1,3,…,s−3,s−1)` for even `s ≥ 2`.
pub fn odd_step_tuple(s: u32) -> Result<ExponentTuple> {
    let mut e = vec![0];
    e.extend((1..s).step_by(2));
    if *e.last().unwrap() != s - 1 {
        e.push(s - 1);
    }
    ExponentTuple::new(e, s)
}

/// Maximal energy of order `p^s` and every maximizing exponent tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmaxClosed {
    pub value: Natural,
    /// Maximizers, the equidistant tuple first. Admissible whenever `s ≥ 2`.
    pub maximizers: Vec<ExponentTuple>,
}

fn exact_div(num: Integer, den: Integer, what: &str) -> Result<Natural> {
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Internal(format!(
            "{what}: {num} / {den} is not a natural number"
        )));
    }
    Ok(q.to_biguint().expect("non-negative"))
}

/// Closed-form maximal energy with all maximizing tuples.
pub fn emax_closed(order: &PrimePowerOrder) -> Result<EmaxClosed> {
    let s = order.s();
    let p = Integer::from(order.p().clone());
    let ps = p.pow(s);
    let p2m1 = &p * &p - 1;
    let den = (&p + 1u32) * (&p + 1u32);
    let value = if s % 2 == 1 {
        let num = Integer::from(s + 1) * &p2m1 * &ps + 2u32 * (&ps * &p - 1u32);
        exact_div(num, den, "odd-s maximal energy")?
    } else {
        let tail = 2u32 * &ps * &p - p.pow(s - 1) + &p * &p - &p - 1u32;
        let num = Integer::from(s) * &p2m1 * &ps + 2u32 * tail;
        exact_div(num, den, "even-s maximal energy")?
    };

    let mut maximizers = vec![equidistant_tuple(s)?];
    let twin_exists = if s % 2 == 1 {
        order.is_p2() && s >= 3
    } else {
        true
    };
    if twin_exists {
        let twin = odd_step_tuple(s)?;
        if twin != maximizers[0] {
            maximizers.push(twin);
        }
    }
    Ok(EmaxClosed { value, maximizers })
}

/// Energy written as `factor · cofactor` with `factor = 2(p−1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredEnergy {
    pub factor: Natural,
    pub cofactor: Natural,
}

impl FactoredEnergy {
    pub fn value(&self) -> Natural {
        &self.factor * &self.cofactor
    }
}

/// Maximal energy from the finite sums, with the factor `2(p−1)` explicit.
///
/// `s = 2m+1`: `(m+1)p^{2m} − (p−1) Σ_{j<m} (j+1)p^{2j}`.
/// `s = 2m`:   `m p^{2m−1} − (p−1) Σ_{j≤m−3} (j+1)p^{2j+3} + 1`.
pub fn emax_alternative(order: &PrimePowerOrder) -> Result<FactoredEnergy> {
    let s = order.s();
    let p = Integer::from(order.p().clone());
    let pm1 = &p - 1u32;
    let m = s / 2;
    let cofactor = if s % 2 == 1 {
        let sum: Integer = (0..m).map(|j| Integer::from(j + 1) * p.pow(2 * j)).sum();
        Integer::from(m + 1) * p.pow(2 * m) - &pm1 * sum
    } else {
        let sum: Integer = (0..m.saturating_sub(2))
            .map(|j| Integer::from(j + 1) * p.pow(2 * j + 3))
            .sum();
        Integer::from(m) * p.pow(2 * m - 1) - &pm1 * sum + 1u32
    };
    let cofactor = cofactor
        .to_biguint()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::Internal(format!("non-positive cofactor for {order}")))?;
    Ok(FactoredEnergy {
        factor: 2u32 * order.p() - 2u32,
        cofactor,
    })
}

/// Closed form of `h` at [`equidistant_tuple`]`(s)`.
pub fn h_equidistant(p: &Natural, s: u32) -> Result<ExactRational> {
    if s == 0 {
        return Err(Error::invalid("s must be >= 1"));
    }
    let p = Integer::from(p.clone());
    let rat = |n: Integer, d: Integer| ExactRational::new(n, d);
    let p2m1 = &p * &p - 1u32;
    let si = Integer::from(s);
    Ok(if s % 2 == 1 {
        let num = (&si - 1u32) * p.pow(s + 1) - (&si + 1u32) * p.pow(s - 1) + 2u32;
        rat(num, 2u32 * &p2m1 * &p2m1 * p.pow(s - 1))
    } else {
        let num = (&si - 2u32) * p.pow(s) - &si * p.pow(s - 2) + 2u32;
        let first = rat(num, 2u32 * &p2m1 * &p2m1 * p.pow(s - 2));
        let second = rat(p.pow(s) - 1u32, &p2m1 * p.pow(s - 1));
        first + second
    })
}

/// Comparison of an energy with that of the complete graph, `2(n−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Energeticity {
    Hyperenergetic,
    Hypoenergetic,
    Neither,
}

impl fmt::Display for Energeticity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Energeticity::Hyperenergetic => "hyperenergetic",
            Energeticity::Hypoenergetic => "hypoenergetic",
            Energeticity::Neither => "neither",
        })
    }
}

/// `2(n−1)`.
pub fn complete_graph_energy(n: &Natural) -> Natural {
    if n.is_zero() {
        return Natural::zero();
    }
    2u32 * (n - 1u32)
}

pub fn classify_energy(n: &Natural, energy: &Natural) -> Energeticity {
    match energy.cmp(&complete_graph_energy(n)) {
        std::cmp::Ordering::Greater => Energeticity::Hyperenergetic,
        std::cmp::Ordering::Less => Energeticity::Hypoenergetic,
        std::cmp::Ordering::Equal => Energeticity::Neither,
    }
}

pub fn classify_energeticity(set: &DivisorSet) -> Result<(EnergyReport, Energeticity)> {
    let report = energy_of_set(set)?;
    let class = classify_energy(&report.n, &report.energy);
    Ok((report, class))
}

/// `E ≤ (n/2)(√n + 1)`, decided exactly: `2E − n ≤ n√n`.
pub fn koolen_moulton_check(n: &Natural, energy: &Natural) -> bool {
    let lhs = 2u32 * energy;
    if lhs <= *n {
        return true;
    }
    let excess = lhs - n;
    &excess * &excess <= n * n * n
}
