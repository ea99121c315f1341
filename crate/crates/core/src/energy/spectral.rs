//! Spectrum of `ICG_n(𝒟)` from Ramanujan sums: `λ_k = Σ_{d∈𝒟} c_{n/d}(k)`.
//!
//! `λ_k` depends on `k` only through `gcd(k, n)`, so the oracle evaluates one
//! eigenvalue per divisor class and then scans `k = 0..n`. Values are exact
//! machine integers: `|λ_k| ≤ n ≤ 10^6` and the energy is at most `n²`.

use num_integer::Integer as _;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::DivisorSet;
use crate::number_theory::{divisors, ramanujan_sum, totient};
use crate::{Integer, Natural};

/// Largest order accepted by the spectral scan.
pub const SPECTRAL_CAP: u64 = 1_000_000;

const PARALLEL_SCAN_MIN: usize = 1 << 16;

/// Adjacency eigenvalues `λ_0, …, λ_{n−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub n: u64,
    pub eigenvalues: Vec<Integer>,
}

impl Spectrum {
    pub fn energy(&self) -> Natural {
        self.eigenvalues.iter().map(|l| l.magnitude().clone()).sum()
    }

    pub fn trace(&self) -> Integer {
        self.eigenvalues.iter().sum()
    }

    /// `λ_0`, the common vertex degree.
    pub fn degree(&self) -> &Integer {
        &self.eigenvalues[0]
    }
}

/// Precomputed Ramanujan sums for one order `n`.
#[derive(Debug, Clone)]
pub struct SpectralOracle {
    n: u64,
    divisors: Vec<u64>,
    /// `ramanujan[j][g] = c_{n / divisors[j]}(divisors[g])`
    ramanujan: Vec<Vec<i64>>,
    /// divisor-class index of `gcd(k, n)` for each `k`
    class_of: Vec<u32>,
}

impl SpectralOracle {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("order n must be >= 1"));
        }
        if n > SPECTRAL_CAP {
            return Err(Error::cap("spectral order n", n, SPECTRAL_CAP));
        }
        let divs = divisors(&n)?;
        let index = |g: u64| divs.binary_search(&g).expect("gcd divides n") as u32;
        let ramanujan = divs
            .iter()
            .map(|&d| {
                let q = (n / d) as i64;
                divs.iter()
                    .map(|&g| ramanujan_sum(&q, &(g as i64)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let class_of = (0..n).map(|k| index(k.gcd(&n))).collect();
        Ok(Self {
            n,
            divisors: divs,
            ramanujan,
            class_of,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    fn indices(&self, set: &DivisorSet) -> Result<Vec<usize>> {
        if set.n().to_u64() != Some(self.n) {
            return Err(Error::invalid(format!(
                "divisor set over {} given to oracle for n = {}",
                set.n(),
                self.n
            )));
        }
        Ok(set
            .elements()
            .iter()
            .map(|d| {
                let d = d.to_u64().expect("divisor of n fits u64");
                self.divisors.binary_search(&d).expect("validated divisor")
            })
            .collect())
    }

    /// Eigenvalue for each divisor class `g | n` (the value of `λ_k` when
    /// `gcd(k, n) = g`).
    pub fn class_eigenvalues(&self, set: &DivisorSet) -> Result<Vec<i64>> {
        let idx = self.indices(set)?;
        Ok(self.class_eigenvalues_of(&idx))
    }

    fn class_eigenvalues_of(&self, idx: &[usize]) -> Vec<i64> {
        (0..self.divisors.len())
            .map(|g| idx.iter().map(|&j| self.ramanujan[j][g]).sum())
            .collect()
    }

    /// Energy of a set given by indices into [`Self::divisors`].
    pub(crate) fn energy_of_indices(&self, idx: &[usize]) -> u64 {
        let per_class = self.class_eigenvalues_of(idx);
        let abs: Vec<u64> = per_class.iter().map(|l| l.unsigned_abs()).collect();
        let scan = |chunk: &[u32]| chunk.iter().map(|&c| abs[c as usize]).sum::<u64>();
        if self.class_of.len() >= PARALLEL_SCAN_MIN {
            self.class_of.par_chunks(1 << 14).map(scan).sum()
        } else {
            scan(&self.class_of)
        }
    }

    pub fn energy(&self, set: &DivisorSet) -> Result<Natural> {
        let idx = self.indices(set)?;
        Ok(Natural::from(self.energy_of_indices(&idx)))
    }

    /// Same energy grouped by classes: `Σ_{g|n} φ(n/g) |λ_g|`.
    pub fn energy_by_classes(&self, set: &DivisorSet) -> Result<Natural> {
        let per_class = self.class_eigenvalues(set)?;
        let mut total = 0u64;
        for (g, l) in self.divisors.iter().zip(per_class) {
            total += totient(&(self.n / g))? * l.unsigned_abs();
        }
        Ok(Natural::from(total))
    }

    pub fn spectrum(&self, set: &DivisorSet) -> Result<Spectrum> {
        let per_class = self.class_eigenvalues(set)?;
        Ok(Spectrum {
            n: self.n,
            eigenvalues: self
                .class_of
                .iter()
                .map(|&c| Integer::from(per_class[c as usize]))
                .collect(),
        })
    }
}

fn order_u64(n: &Natural, set: &DivisorSet) -> Result<u64> {
    if n != set.n() {
        return Err(Error::invalid(format!(
            "divisor set {set} is not over n = {n}"
        )));
    }
    match n.to_u64() {
        Some(v) if v <= SPECTRAL_CAP => Ok(v),
        _ => Err(Error::cap("spectral order n", n, SPECTRAL_CAP)),
    }
}

/// Full eigenvalue list of `ICG_n(𝒟)`.
pub fn spectrum_gcd_graph(n: &Natural, set: &DivisorSet) -> Result<Spectrum> {
    SpectralOracle::new(order_u64(n, set)?)?.spectrum(set)
}

/// `Σ_k |λ_k|` for any `n ≤ 10^6`.
pub fn energy_general(n: &Natural, set: &DivisorSet) -> Result<Natural> {
    SpectralOracle::new(order_u64(n, set)?)?.energy(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::totient;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn spectrum_examples() {
        let set = DivisorSet::from_u64(4, &[1, 2]).unwrap();
        let spec = spectrum_gcd_graph(&Natural::from(4u8), &set).unwrap();
        assert_eq!(spec.eigenvalues, ints(&[3, -1, -1, -1]));

        for p in [2u64, 3, 5, 7, 13] {
            let set = DivisorSet::from_u64(p, &[1]).unwrap();
            let spec = spectrum_gcd_graph(&Natural::from(p), &set).unwrap();
            let mut want = vec![p as i64 - 1];
            want.extend(std::iter::repeat_n(-1, p as usize - 1));
            assert_eq!(spec.eigenvalues, ints(&want));
        }

        let set = DivisorSet::from_u64(8, &[1]).unwrap();
        let spec = spectrum_gcd_graph(&Natural::from(8u8), &set).unwrap();
        assert_eq!(spec.trace(), Integer::from(0));
        assert_eq!(*spec.degree(), Integer::from(4));
    }

    #[test]
    fn energy_examples() {
        let e = |n: u64, d: &[u64]| {
            energy_general(&Natural::from(n), &DivisorSet::from_u64(n, d).unwrap()).unwrap()
        };
        assert_eq!(e(105, &[1, 15, 21, 35]), Natural::from(520u32));
        assert_eq!(
            e(210, &[1, 2, 3, 30, 35, 42, 70, 105]),
            Natural::from(1414u32)
        );
        assert_eq!(e(4, &[1, 2]), Natural::from(6u32));
    }

    #[test]
    fn cap_and_mismatch() {
        let big = SPECTRAL_CAP + 1;
        let set = DivisorSet::from_u64(big, &[1]).unwrap();
        assert!(matches!(
            energy_general(&Natural::from(big), &set),
            Err(Error::ResourceCap { .. })
        ));
        let set = DivisorSet::from_u64(12, &[1]).unwrap();
        assert!(energy_general(&Natural::from(6u8), &set).is_err());
    }

    /// Direct adjacency spectrum would need eigen-solvers; instead check that
    /// `λ_k` equals the character sum `Σ_{x : gcd(x,n) ∈ 𝒟} cos(2πkx/n)`.
    #[test]
    fn eigenvalues_match_character_sums() {
        use std::f64::consts::PI;
        for n in 2u64..=40 {
            let divs = divisors(&n).unwrap();
            let proper = &divs[..divs.len() - 1];
            for mask in 1u32..(1 << proper.len()) {
                let chosen: Vec<u64> = proper
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &d)| d)
                    .collect();
                let set = DivisorSet::from_u64(n, &chosen).unwrap();
                let spec = spectrum_gcd_graph(&Natural::from(n), &set).unwrap();
                for k in 0..n {
                    let sum: f64 = (0..n)
                        .filter(|x| chosen.contains(&x.gcd(&n)))
                        .map(|x| (2.0 * PI * (k * x) as f64 / n as f64).cos())
                        .sum();
                    assert_eq!(
                        spec.eigenvalues[k as usize],
                        Integer::from(sum.round() as i64)
                    );
                }
            }
        }
    }

    #[test]
    fn spectral_sanity_and_grouping() {
        for n in [12u64, 30, 36, 60, 64, 105] {
            let oracle = SpectralOracle::new(n).unwrap();
            let proper = &oracle.divisors()[..oracle.divisors().len() - 1];
            for mask in 1u32..(1 << proper.len().min(10)) {
                let chosen: Vec<u64> = proper
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &d)| d)
                    .collect();
                let set = DivisorSet::from_u64(n, &chosen).unwrap();
                let spec = oracle.spectrum(&set).unwrap();
                assert_eq!(spec.trace(), Integer::from(0));
                let degree: u64 = chosen.iter().map(|d| totient(&(n / d)).unwrap()).sum();
                assert_eq!(*spec.degree(), Integer::from(degree));
                let e = oracle.energy(&set).unwrap();
                assert_eq!(e, spec.energy());
                assert_eq!(e, oracle.energy_by_classes(&set).unwrap());
                assert!(e.is_even());
            }
        }
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let n = 3 * 5 * 7 * 11 * 13 * 8; // above the parallel threshold
        let oracle = SpectralOracle::new(n).unwrap();
        let set = DivisorSet::from_u64(n, &[1, 4, 15, 77]).unwrap();
        assert_eq!(
            oracle.energy(&set).unwrap(),
            oracle.energy_by_classes(&set).unwrap()
        );
    }
}
