//! Orders, exponent tuples, delta vectors and divisor sets.
//!
//! A divisor set of `p^s` is identified with its exponent tuple
//! `0 ≤ a_1 < … < a_r ≤ s − 1`. Admissible tuples additionally start at 0 and
//! end at `s − 1`; they are in bijection with delta vectors, the positive
//! integer vectors of consecutive differences summing to `s − 1`.
//!
//! Text forms follow the usual notation: tuples and vectors as `(0,2,4)`,
//! divisor sets as `{1,4,16}`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer as _;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number_theory::is_prime;
use crate::Natural;

/// Graph order `n = p^s` with `p` prime and `s ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePowerOrder {
    p: Natural,
    s: u32,
}

impl PrimePowerOrder {
    /// Checks primality of `p` (trial division, `p ≤ 10^12`).
    pub fn new(p: impl Into<Natural>, s: u32) -> Result<Self> {
        let p = p.into();
        if s == 0 {
            return Err(Error::invalid("exponent s must be >= 1"));
        }
        if !is_prime(&p)? {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(Self { p, s })
    }

    pub fn p(&self) -> &Natural {
        &self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `p^s`.
    pub fn n(&self) -> Natural {
        self.p.pow(self.s)
    }

    pub fn p_pow(&self, e: u32) -> Natural {
        self.p.pow(e)
    }

    pub fn is_p2(&self) -> bool {
        self.p == Natural::from(2u8)
    }
}

impl fmt::Display for PrimePowerOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.s)
    }
}

fn write_seq<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    open: char,
    items: &[T],
    close: char,
) -> fmt::Result {
    write!(f, "{open}")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "{close}")
}

/// Parses `0,2,4`, `(0,2,4)` or `{1,4,16}`; whitespace is ignored.
pub fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix(['(', '{', '['])
        .and_then(|t| t.strip_suffix([')', '}', ']']))
        .unwrap_or(trimmed);
    if inner.trim().is_empty() {
        return Err(Error::invalid("empty list"));
    }
    inner
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<T>()
                .map_err(|_| Error::invalid(format!("not a non-negative integer: {tok:?}")))
        })
        .collect()
}

/// Strictly increasing exponents `a_1 < … < a_r` with `a_r ≤ s − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentTuple {
    entries: Vec<u32>,
    s: u32,
}

impl ExponentTuple {
    pub fn new(entries: Vec<u32>, s: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::invalid("exponent s must be >= 1"));
        }
        if entries.is_empty() {
            return Err(Error::invalid("exponent tuple must be nonempty"));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "exponents must be strictly increasing: {entries:?}"
            )));
        }
        let last = *entries.last().unwrap();
        if last >= s {
            return Err(Error::invalid(format!(
                "exponent {last} exceeds s - 1 = {}",
                s - 1
            )));
        }
        Ok(Self { entries, s })
    }

    /// The singleton `(t)`.
    pub fn singleton(t: u32, s: u32) -> Result<Self> {
        Self::new(vec![t], s)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Tuple length `r`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_admissible(&self) -> bool {
        self.entries.len() >= 2
            && self.entries[0] == 0
            && *self.entries.last().unwrap() == self.s - 1
    }

    /// `(s−1−a_r, …, s−1−a_1)`.
    pub fn reverse_complement(&self) -> Self {
        let top = self.s - 1;
        Self {
            entries: self.entries.iter().rev().map(|a| top - a).collect(),
            s: self.s,
        }
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_seq(f, '(', &self.entries, ')')
    }
}

/// Exponent tuple in `A(s, r)`: `r ≥ 2`, `a_1 = 0`, `a_r = s − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleTuple(ExponentTuple);

impl AdmissibleTuple {
    pub fn new(entries: Vec<u32>, s: u32) -> Result<Self> {
        Self::try_from(ExponentTuple::new(entries, s)?)
    }

    pub fn as_exponents(&self) -> &ExponentTuple {
        &self.0
    }

    pub fn into_exponents(self) -> ExponentTuple {
        self.0
    }

    pub fn entries(&self) -> &[u32] {
        self.0.entries()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn s(&self) -> u32 {
        self.0.s
    }

    pub fn delta(&self) -> DeltaVector {
        DeltaVector {
            entries: self.0.entries.windows(2).map(|w| w[1] - w[0]).collect(),
            s: self.0.s,
        }
    }

    pub fn reverse_complement(&self) -> Self {
        Self(self.0.reverse_complement())
    }
}

impl TryFrom<ExponentTuple> for AdmissibleTuple {
    type Error = Error;

    fn try_from(a: ExponentTuple) -> Result<Self> {
        if !a.is_admissible() {
            return Err(Error::invalid(format!(
                "{a} is not admissible for s = {} (need r >= 2, a_1 = 0, a_r = s - 1)",
                a.s
            )));
        }
        Ok(Self(a))
    }
}

impl From<AdmissibleTuple> for ExponentTuple {
    fn from(a: AdmissibleTuple) -> Self {
        a.0
    }
}

impl fmt::Display for AdmissibleTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Delta vector `d ∈ D(s, r)`: entries `≥ 1` summing to `s − 1`.
///
/// Positions are 1-based throughout the public API, so `d_u` is
/// `entries()[u - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaVector {
    entries: Vec<u32>,
    s: u32,
}

impl DeltaVector {
    pub fn new(entries: Vec<u32>, s: u32) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("delta vector must be nonempty"));
        }
        if let Some(bad) = entries.iter().find(|&&d| d == 0) {
            return Err(Error::invalid(format!(
                "delta entries must be >= 1, got {bad}"
            )));
        }
        let sum: u64 = entries.iter().map(|&d| u64::from(d)).sum();
        if sum + 1 != u64::from(s) {
            return Err(Error::invalid(format!(
                "delta entries sum to {sum}, expected s - 1 = {}",
                i64::from(s) - 1
            )));
        }
        Ok(Self { entries, s })
    }

    /// Infers `s` from the entry sum.
    pub fn from_entries(entries: Vec<u32>) -> Result<Self> {
        let sum: u64 = entries.iter().map(|&d| u64::from(d)).sum();
        let s = u32::try_from(sum + 1).map_err(|_| Error::invalid("delta vector sum too large"))?;
        Self::new(entries, s)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `d_u`, 1-based.
    pub fn get(&self, u: usize) -> Option<u32> {
        u.checked_sub(1).and_then(|i| self.entries.get(i).copied())
    }

    /// Number of entries, `r − 1`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length `r` of the corresponding admissible tuple.
    pub fn r(&self) -> usize {
        self.entries.len() + 1
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn max_norm(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn reversed(&self) -> Self {
        Self {
            entries: self.entries.iter().rev().copied().collect(),
            s: self.s,
        }
    }

    /// Partial sums `(0, d_1, d_1 + d_2, …, s − 1)`.
    pub fn to_admissible(&self) -> AdmissibleTuple {
        let mut acc = 0u32;
        let mut out = Vec::with_capacity(self.entries.len() + 1);
        out.push(0);
        for d in &self.entries {
            acc += d;
            out.push(acc);
        }
        AdmissibleTuple(ExponentTuple {
            entries: out,
            s: self.s,
        })
    }
}

impl fmt::Display for DeltaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_seq(f, '(', &self.entries, ')')
    }
}

/// Nonempty set of proper divisors of `n`, stored ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorSet {
    n: Natural,
    elements: Vec<Natural>,
}

impl DivisorSet {
    /// Duplicates are merged; every element must divide `n` and differ from it.
    pub fn new(n: impl Into<Natural>, elements: impl IntoIterator<Item = Natural>) -> Result<Self> {
        let n = n.into();
        if n.is_zero() {
            return Err(Error::invalid("order n must be >= 1"));
        }
        let mut elements: Vec<Natural> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::invalid("divisor set must be nonempty"));
        }
        for d in &elements {
            if d.is_zero() || !n.is_multiple_of(d) {
                return Err(Error::invalid(format!("{d} does not divide {n}")));
            }
            if *d == n {
                return Err(Error::invalid(format!("{n} itself is not allowed (loops)")));
            }
        }
        Ok(Self { n, elements })
    }

    pub fn from_u64(n: u64, elements: &[u64]) -> Result<Self> {
        Self::new(Natural::from(n), elements.iter().map(|&d| Natural::from(d)))
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }

    pub fn elements(&self) -> &[Natural] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, d: &Natural) -> bool {
        self.elements.binary_search(d).is_ok()
    }

    /// Connected iff `gcd(n, d_1, …, d_r) = 1`.
    pub fn is_connected(&self) -> bool {
        self.elements
            .iter()
            .fold(self.n.clone(), |g, d| g.gcd(d))
            .is_one()
    }
}

impl fmt::Display for DivisorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_seq(f, '{', &self.elements, '}')
    }
}

/// `δ_r(a)`.
pub fn delta(a: &AdmissibleTuple) -> DeltaVector {
    a.delta()
}

/// `δ_r^{-1}(d)`.
pub fn delta_inverse(d: &DeltaVector) -> AdmissibleTuple {
    d.to_admissible()
}

/// `𝒟(a) = {p^{a_1}, …, p^{a_r}}`.
pub fn divisor_set_of(a: &ExponentTuple, order: &PrimePowerOrder) -> Result<DivisorSet> {
    if a.s() != order.s() {
        return Err(Error::invalid(format!(
            "tuple context s = {} does not match order {order}",
            a.s()
        )));
    }
    DivisorSet::new(order.n(), a.entries().iter().map(|&e| order.p_pow(e)))
}

/// Inverse of [`divisor_set_of`]: the exponent tuple of a divisor set of `p^s`.
pub fn exponents_of(set: &DivisorSet, order: &PrimePowerOrder) -> Result<ExponentTuple> {
    if *set.n() != order.n() {
        return Err(Error::invalid(format!("divisor set is not over {order}")));
    }
    let exps = set
        .elements()
        .iter()
        .map(|d| {
            let mut e = 0u32;
            let mut x = d.clone();
            while x.is_multiple_of(order.p()) {
                x /= order.p();
                e += 1;
            }
            if x.is_one() {
                Ok(e)
            } else {
                Err(Error::invalid(format!(
                    "{d} is not a power of {}",
                    order.p()
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ExponentTuple::new(exps, order.s())
}

pub fn reverse_complement(a: &AdmissibleTuple) -> AdmissibleTuple {
    a.reverse_complement()
}

/// For a prime-power order this is `1 ∈ D`.
pub fn is_connected(set: &DivisorSet, order: &PrimePowerOrder) -> Result<bool> {
    if *set.n() != order.n() {
        return Err(Error::invalid(format!("divisor set is not over {order}")));
    }
    Ok(set.contains(&Natural::one()))
}
