//! Exhaustive oracles over divisor sets and the tableau identities.

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::energy::{emax_closed, energy_prime_power, h_value, EmaxClosed, SpectralOracle};
use crate::error::{Error, Result};
use crate::model::{divisor_set_of, AdmissibleTuple, DivisorSet, ExponentTuple, PrimePowerOrder};
use crate::transform::canonical_maximizer;
use crate::{ExactRational, Integer, Natural};

/// Largest `s` accepted by [`brute_force_emax_prime_power`].
pub const BRUTE_S_CAP: u32 = 20;
/// Largest `n` accepted by [`brute_force_emax_general`].
pub const BRUTE_N_CAP: u64 = 10_000;
/// Largest number of proper divisors for [`brute_force_emax_general`].
pub const BRUTE_DIVISOR_CAP: usize = 20;

const CHUNK: u64 = 1 << 12;

/// Maximum energy over all nonempty divisor sets of one order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximizerReport {
    pub n: Natural,
    pub emax: Natural,
    /// Every set attaining `emax`, sorted by elements.
    pub maximizers: Vec<DivisorSet>,
    /// Number of sets whose energy was evaluated.
    pub examined: u64,
}

/// Runs `energy` over masks `1..2^k` in parallel; ties are collected and the
/// result sorted so the outcome does not depend on the worker count.
fn enumerate_max<O, E>(k: u32, energy: E) -> (O, Vec<u64>)
where
    O: Ord + Send,
    E: Fn(u64) -> O + Sync,
{
    let total = 1u64 << k;
    let chunks = total.div_ceil(CHUNK);
    let merge = |a: Option<(O, Vec<u64>)>, b: Option<(O, Vec<u64>)>| match (a, b) {
        (None, x) | (x, None) => x,
        (Some((ea, mut ma)), Some((eb, mb))) => match ea.cmp(&eb) {
            std::cmp::Ordering::Greater => Some((ea, ma)),
            std::cmp::Ordering::Less => Some((eb, mb)),
            std::cmp::Ordering::Equal => {
                ma.extend(mb);
                Some((ea, ma))
            }
        },
    };
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = (c * CHUNK).max(1);
            let hi = ((c + 1) * CHUNK).min(total);
            let mut best: Option<(O, Vec<u64>)> = None;
            for mask in lo..hi {
                best = merge(best, Some((energy(mask), vec![mask])));
            }
            best
        })
        .reduce(|| None, merge);
    let (e, mut masks) = best.expect("at least one nonempty subset");
    masks.sort_unstable();
    (e, masks)
}

fn mask_bits(mask: u64, k: u32) -> impl Iterator<Item = u32> {
    (0..k).filter(move |i| mask >> i & 1 == 1)
}

fn sort_sets(sets: &mut [DivisorSet]) {
    sets.sort_by(|a, b| a.elements().cmp(b.elements()));
}

/// Evaluates every nonempty `𝒟 ⊆ {1, p, …, p^{s−1}}`; requires `s ≤ 20`.
pub fn brute_force_emax_prime_power(order: &PrimePowerOrder) -> Result<MaximizerReport> {
    let s = order.s();
    if s > BRUTE_S_CAP {
        return Err(Error::cap("brute-force exponent s", s, BRUTE_S_CAP));
    }
    let tuple_of = |mask: u64| {
        ExponentTuple::new(mask_bits(mask, s).collect(), s).expect("mask bits are valid exponents")
    };
    // T = Σ_{k<i} p^{s−1−(a_i−a_k)} in u128 when p^s·s² stays well inside it.
    let fits = (order.n() * (4 * u64::from(s) * u64::from(s) + 4))
        .to_u128()
        .is_some_and(|x| x < 1u128 << 120);
    let (emax, masks): (Natural, Vec<u64>) = if fits {
        let p = order.p().to_u128().expect("fits");
        let pows: Vec<u128> = (0..s).map(|e| p.pow(e)).collect();
        let top = (s - 1) as usize;
        let (e, masks) = enumerate_max(s, |mask| {
            let e: Vec<u32> = mask_bits(mask, s).collect();
            let mut t = 0u128;
            for k in 0..e.len() {
                for i in k + 1..e.len() {
                    t += pows[top - (e[i] - e[k]) as usize];
                }
            }
            2 * (p - 1) * (e.len() as u128 * pows[top] - (p - 1) * t)
        });
        (Natural::from(e), masks)
    } else {
        enumerate_max(s, |mask| {
            energy_prime_power(order, &tuple_of(mask)).expect("valid tuple")
        })
    };
    let mut maximizers = masks
        .into_iter()
        .map(|m| divisor_set_of(&tuple_of(m), order))
        .collect::<Result<Vec<_>>>()?;
    sort_sets(&mut maximizers);
    Ok(MaximizerReport {
        n: order.n(),
        emax,
        maximizers,
        examined: (1u64 << s) - 1,
    })
}

/// Evaluates every nonempty set of proper divisors of `n` through the
/// spectral oracle; requires `2 ≤ n ≤ 10^4` and at most 20 proper divisors.
pub fn brute_force_emax_general(n: u64) -> Result<MaximizerReport> {
    if n < 2 {
        return Err(Error::invalid("n must be >= 2"));
    }
    if n > BRUTE_N_CAP {
        return Err(Error::cap("brute-force order n", n, BRUTE_N_CAP));
    }
    let oracle = SpectralOracle::new(n)?;
    let proper = oracle.divisors().len() - 1;
    if proper > BRUTE_DIVISOR_CAP {
        return Err(Error::cap(
            "proper divisor count",
            proper,
            BRUTE_DIVISOR_CAP,
        ));
    }
    let k = proper as u32;
    let (emax, masks) = enumerate_max(k, |mask| {
        let idx: Vec<usize> = mask_bits(mask, k).map(|i| i as usize).collect();
        oracle.energy_of_indices(&idx)
    });
    let mut maximizers = masks
        .into_iter()
        .map(|m| {
            let chosen: Vec<u64> = mask_bits(m, k)
                .map(|i| oracle.divisors()[i as usize])
                .collect();
            DivisorSet::from_u64(n, &chosen)
        })
        .collect::<Result<Vec<_>>>()?;
    sort_sets(&mut maximizers);
    Ok(MaximizerReport {
        n: Natural::from(n),
        emax: Natural::from(emax),
        maximizers,
        examined: (1u64 << k) - 1,
    })
}

/// Brute force against the closed form for one order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheck {
    pub order: PrimePowerOrder,
    pub brute: MaximizerReport,
    pub closed: EmaxClosed,
    /// Divisor sets of the closed-form maximizers, sorted.
    pub expected_sets: Vec<DivisorSet>,
    pub discrepancies: Vec<String>,
}

impl TheoremCheck {
    pub fn ok(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares exhaustive search with the closed-form maximum and maximizers.
/// Only the cap is an error; disagreements land in `discrepancies`.
pub fn verify_theorem(order: &PrimePowerOrder) -> Result<TheoremCheck> {
    let brute = brute_force_emax_prime_power(order)?;
    let closed = emax_closed(order)?;
    let mut discrepancies = Vec::new();

    let mut expected_sets = closed
        .maximizers
        .iter()
        .map(|a| divisor_set_of(a, order))
        .collect::<Result<Vec<_>>>()?;
    sort_sets(&mut expected_sets);

    if order.s() >= 2 {
        let mut from_deltas = canonical_maximizer(order)
            .iter()
            .map(|d| divisor_set_of(d.to_admissible().as_exponents(), order))
            .collect::<Result<Vec<_>>>()?;
        sort_sets(&mut from_deltas);
        if from_deltas != expected_sets {
            discrepancies.push(format!(
                "{order}: canonical delta vectors give {} but closed form lists {}",
                join(&from_deltas),
                join(&expected_sets)
            ));
        }
    }
    if brute.emax != closed.value {
        discrepancies.push(format!(
            "{order}: brute force E_max = {}, closed form {}",
            brute.emax, closed.value
        ));
    }
    if brute.maximizers != expected_sets {
        discrepancies.push(format!(
            "{order}: brute-force maximizers {} differ from {}",
            join(&brute.maximizers),
            join(&expected_sets)
        ));
    }
    Ok(TheoremCheck {
        order: order.clone(),
        brute,
        closed,
        expected_sets,
        discrepancies,
    })
}

fn join(sets: &[DivisorSet]) -> String {
    sets.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn check_run(a: &AdmissibleTuple, u: usize, v: usize) -> Result<()> {
    let r = a.len();
    if !(1 <= u && u < v && v < r) {
        return Err(Error::invalid(format!(
            "need 1 <= u < v <= r-1 = {}, got u={u} v={v}",
            r - 1
        )));
    }
    let e = a.entries();
    if let Some(j) = (u + 1..v).find(|&j| e[j] - e[j - 1] != 2) {
        return Err(Error::invalid(format!(
            "a_{} - a_{j} = {}, need 2",
            j + 1,
            e[j] - e[j - 1]
        )));
    }
    Ok(())
}

/// The `(u,v)`-derivative: keeps `a_1..a_u`, raises `a_{u+1}..a_{v−1}` by
/// one and drops `a_v`.
pub fn derivative(a: &AdmissibleTuple, u: usize, v: usize) -> Result<AdmissibleTuple> {
    check_run(a, u, v)?;
    let e = a.entries();
    let out: Vec<u32> = e[..u]
        .iter()
        .copied()
        .chain(e[u..v - 1].iter().map(|x| x + 1))
        .chain(e[v..].iter().copied())
        .collect();
    AdmissibleTuple::new(out, a.s())
}

fn p_pow_signed(p: &Integer, e: i64) -> ExactRational {
    let mag = p.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        ExactRational::from_integer(mag)
    } else {
        ExactRational::new(Integer::one(), mag)
    }
}

/// Closed expression for `h(a) − h(∂_{u,v} a)`:
///
/// ```text
/// (p + p^{−2m}) (U p^{−a_{u+1}} + p^{a_v} V) / (p+1) + (1 − p^{−2m}) / (p²−1)
/// ```
///
/// with `m = v−u−1`, `U = Σ_{k≤u} p^{a_k}`, `V = Σ_{i>v} p^{−a_i}`.
pub fn tableau_reduction_rhs(
    p: &Natural,
    a: &AdmissibleTuple,
    u: usize,
    v: usize,
) -> Result<ExactRational> {
    check_run(a, u, v)?;
    let p = Integer::from(p.clone());
    let e = a.entries();
    let big_u: ExactRational = e[..u].iter().map(|&x| p_pow_signed(&p, i64::from(x))).sum();
    let big_v: ExactRational = e[v..]
        .iter()
        .map(|&x| p_pow_signed(&p, -i64::from(x)))
        .sum();
    let m = (v - u - 1) as i64;
    let shrink = p_pow_signed(&p, -2 * m);
    let pr = ExactRational::from_integer(p.clone());
    let one = ExactRational::one();
    let first = (&pr + &shrink)
        * (big_u * p_pow_signed(&p, -i64::from(e[u]))
            + p_pow_signed(&p, i64::from(e[v - 1])) * big_v)
        / (&pr + &one);
    let second = (&one - &shrink) / (&pr * &pr - &one);
    Ok(first + second)
}

/// Whether `h(a) − h(∂_{u,v} a)` equals [`tableau_reduction_rhs`].
pub fn tableau_reduction_check(
    p: &Natural,
    a: &AdmissibleTuple,
    u: usize,
    v: usize,
) -> Result<bool> {
    let rhs = tableau_reduction_rhs(p, a, u, v)?;
    let d = derivative(a, u, v)?;
    let lhs = h_value(p, a.as_exponents()) - h_value(p, d.as_exponents());
    Ok(lhs == rhs)
}

/// `h(a) − h(a′)` for a block shift, computed three ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftCheck {
    pub shifted: AdmissibleTuple,
    /// Difference of the two `h` values.
    pub direct: ExactRational,
    /// Sum over the two tableau rectangles whose entries change.
    pub rectangles: ExactRational,
    /// `(p^{2m}−1)(U p^{1−a_{u+1}−2m} − V p^{a_{u+1}})/(p+1)`.
    pub closed: ExactRational,
}

impl ShiftCheck {
    pub fn consistent(&self) -> bool {
        self.direct == self.rectangles && self.direct == self.closed
    }
}

/// Raises `a_{u+1}, …, a_{v−1}` (a run with gaps 2) by one, keeping the
/// length, and compares the change in `h` computed three ways.
pub fn block_shift_check(
    p: &Natural,
    a: &AdmissibleTuple,
    u: usize,
    v: usize,
) -> Result<ShiftCheck> {
    let r = a.len();
    if !(1 <= u && u + 1 < v && v <= r) {
        return Err(Error::invalid(format!(
            "need 1 <= u < u+1 < v <= r = {r}, got u={u} v={v}"
        )));
    }
    let e = a.entries();
    if let Some(j) = (u + 1..v - 1).find(|&j| e[j] - e[j - 1] != 2) {
        return Err(Error::invalid(format!(
            "a_{} - a_{j} = {}, need 2",
            j + 1,
            e[j] - e[j - 1]
        )));
    }
    if e[v - 1] - e[v - 2] < 2 {
        return Err(Error::invalid("shifted block would collide with a_v"));
    }
    let mut shifted = e.to_vec();
    for x in &mut shifted[u..v - 1] {
        *x += 1;
    }
    let shifted = AdmissibleTuple::new(shifted, a.s())?;
    let pi = Integer::from(p.clone());
    let pr = ExactRational::from_integer(pi.clone());
    let one = ExactRational::one();

    let direct = h_value(p, a.as_exponents()) - h_value(p, shifted.as_exponents());

    let diff = |k: usize, i: usize| p_pow_signed(&pi, -i64::from(e[i] - e[k]));
    let mut left = ExactRational::zero();
    let mut right = ExactRational::zero();
    for k in 0..u {
        for i in u..v - 1 {
            left += diff(k, i);
        }
    }
    for k in u..v - 1 {
        for i in v - 1..e.len() {
            right += diff(k, i);
        }
    }
    let rectangles = (&one - &one / &pr) * left + (&one - &pr) * right;

    let m = (v - u - 1) as i64;
    let big_u: ExactRational = e[..u]
        .iter()
        .map(|&x| p_pow_signed(&pi, i64::from(x)))
        .sum();
    let big_v: ExactRational = e[v - 1..]
        .iter()
        .map(|&x| p_pow_signed(&pi, -i64::from(x)))
        .sum();
    let au = i64::from(e[u]);
    let closed = (p_pow_signed(&pi, 2 * m) - &one)
        * (big_u * p_pow_signed(&pi, 1 - au - 2 * m) - big_v * p_pow_signed(&pi, au))
        / (&pr + &one);

    Ok(ShiftCheck {
        shifted,
        direct,
        rectangles,
        closed,
    })
}
