//! Energy-increasing rewrites on delta vectors.
//!
//! | label | effect                                         | condition                  |
//! |-------|------------------------------------------------|----------------------------|
//! | Ia    | `d_u ≥ 4` becomes `2, d_u − 2`                 |                            |
//! | Ib    | `d_u = 3` becomes `2, 1`                        | all `d_j ≥ 2`              |
//! | II    | `(d_u, d_v) ∈ {(1,3), (3,1)}` becomes `2, 2`    | `d_j = 2` for `u < j < v`  |
//! | III   | `d_u = d_v = 1` and the run between become 2's, one entry shorter | `d_j = 2` for `u < j < v` |
//! | IV    | `d_u = d_v = 3` and the run between become 2's, one entry longer  | `d_j = 2` for `u < j < v` |
//! | V     | single `d_u = 1` (`2 ≤ u ≤ r − 2`) moves to the end | `d_j = 2` for `j ≠ u` |
//!
//! Every rule strictly increases the energy except III on `(1,2,…,2,1)` for
//! `p = 2`, which preserves it. Positions are 1-based.
//!
//! A rule instance may be *mirrored*: it is applied to the reversed vector and
//! the result reversed back. Reversal is the reverse complement of the tuple,
//! which leaves the energy unchanged, so mirrored rules are just as sound.
//! [`normalize`] never emits mirrored steps; [`replay`] accepts them.

use std::fmt;
use std::str::FromStr;

use crate::energy::energy_prime_power;
use crate::error::{Error, Result};
use crate::model::{DeltaVector, PrimePowerOrder};
use crate::Natural;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformLabel {
    Ia,
    Ib,
    II,
    III,
    IV,
    V,
}

impl TransformLabel {
    pub const ALL: [TransformLabel; 6] =
        [Self::Ia, Self::Ib, Self::II, Self::III, Self::IV, Self::V];

    /// Whether the rule acts on a pair of positions `(u, v)`.
    pub fn is_pair(self) -> bool {
        matches!(self, Self::II | Self::III | Self::IV)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ia => "Ia",
            Self::Ib => "Ib",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
            Self::V => "V",
        }
    }
}

impl fmt::Display for TransformLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown transformation label {s:?}")))
    }
}

/// A rule and the positions it acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleInstance {
    pub label: TransformLabel,
    pub u: usize,
    pub v: Option<usize>,
    pub mirrored: bool,
}

impl RuleInstance {
    pub fn single(label: TransformLabel, u: usize) -> Self {
        Self {
            label,
            u,
            v: None,
            mirrored: false,
        }
    }

    pub fn pair(label: TransformLabel, u: usize, v: usize) -> Self {
        Self {
            label,
            u,
            v: Some(v),
            mirrored: false,
        }
    }

    pub fn mirrored(self) -> Self {
        Self {
            mirrored: true,
            ..self
        }
    }
}

/// `Ia:1`, `III:8:12`, `~Ib:2` (mirrored).
impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirrored {
            f.write_str("~")?;
        }
        write!(f, "{}:{}", self.label, self.u)?;
        if let Some(v) = self.v {
            write!(f, ":{v}")?;
        }
        Ok(())
    }
}

impl FromStr for RuleInstance {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (mirrored, body) = match text.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let mut parts = body.split(':');
        let label: TransformLabel = parts.next().unwrap_or_default().parse()?;
        let pos = |t: Option<&str>| -> Result<Option<usize>> {
            t.map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad position {t:?} in {text:?}")))
            })
            .transpose()
        };
        let u =
            pos(parts.next())?.ok_or_else(|| Error::invalid(format!("missing u in {text:?}")))?;
        let v = pos(parts.next())?;
        if parts.next().is_some() || label.is_pair() != v.is_some() {
            return Err(Error::invalid(format!("malformed rule instance {text:?}")));
        }
        Ok(Self {
            label,
            u,
            v,
            mirrored,
        })
    }
}

fn not_applicable(label: TransformLabel, reason: impl Into<String>) -> Error {
    Error::NotApplicable {
        rule: label.to_string(),
        reason: reason.into(),
    }
}

fn entry(d: &[u32], label: TransformLabel, u: usize) -> Result<u32> {
    u.checked_sub(1)
        .and_then(|i| d.get(i).copied())
        .ok_or_else(|| not_applicable(label, format!("position {u} outside 1..={}", d.len())))
}

fn check_pair(d: &[u32], label: TransformLabel, u: usize, v: usize) -> Result<(u32, u32)> {
    if u >= v {
        return Err(not_applicable(
            label,
            format!("need u < v, got u={u} v={v}"),
        ));
    }
    let du = entry(d, label, u)?;
    let dv = entry(d, label, v)?;
    if let Some(j) = (u + 1..v).find(|&j| d[j - 1] != 2) {
        return Err(not_applicable(
            label,
            format!("d_{j} = {} between u and v, need 2", d[j - 1]),
        ));
    }
    Ok((du, dv))
}

fn rebuild(
    prefix: &[u32],
    middle: impl IntoIterator<Item = u32>,
    suffix: &[u32],
    s: u32,
) -> DeltaVector {
    let entries: Vec<u32> = prefix
        .iter()
        .copied()
        .chain(middle)
        .chain(suffix.iter().copied())
        .collect();
    DeltaVector::new(entries, s).expect("rewrites preserve the entry sum")
}

/// Ia: `d_u ≥ 4` splits into `2, d_u − 2`.
pub fn apply_ia(d: &DeltaVector, u: usize) -> Result<DeltaVector> {
    let e = d.entries();
    let du = entry(e, TransformLabel::Ia, u)?;
    if du < 4 {
        return Err(not_applicable(
            TransformLabel::Ia,
            format!("d_{u} = {du} < 4"),
        ));
    }
    Ok(rebuild(&e[..u - 1], [2, du - 2], &e[u..], d.s()))
}

/// Ib: `d_u = 3 = ‖d‖∞` with all entries `≥ 2` splits into `2, 1`.
pub fn apply_ib(d: &DeltaVector, u: usize) -> Result<DeltaVector> {
    let e = d.entries();
    let du = entry(e, TransformLabel::Ib, u)?;
    if du != 3 || d.max_norm() != 3 {
        return Err(not_applicable(
            TransformLabel::Ib,
            format!(
                "need d_{u} = 3 = max norm, got d_{u} = {du}, max {}",
                d.max_norm()
            ),
        ));
    }
    if e.contains(&1) {
        return Err(not_applicable(TransformLabel::Ib, "an entry equals 1"));
    }
    Ok(rebuild(&e[..u - 1], [2, 1], &e[u..], d.s()))
}

/// II: `(d_u, d_v) ∈ {(1,3), (3,1)}` with 2's between becomes `(2, 2)`.
pub fn apply_ii(d: &DeltaVector, u: usize, v: usize) -> Result<DeltaVector> {
    let e = d.entries();
    let (du, dv) = check_pair(e, TransformLabel::II, u, v)?;
    if !matches!((du, dv), (1, 3) | (3, 1)) {
        return Err(not_applicable(
            TransformLabel::II,
            format!("(d_u, d_v) = ({du}, {dv})"),
        ));
    }
    let mut out = e.to_vec();
    out[u - 1] = 2;
    out[v - 1] = 2;
    Ok(DeltaVector::new(out, d.s()).expect("sum preserved"))
}

/// III: `d_u = d_v = 1` with 2's between; the block `d_u..=d_v` becomes
/// `v − u` 2's. The flag is `false` exactly in the energy-preserving case
/// `p = 2`, `d = (1,2,…,2,1)`.
pub fn apply_iii(d: &DeltaVector, u: usize, v: usize, p: &Natural) -> Result<(DeltaVector, bool)> {
    let e = d.entries();
    let (du, dv) = check_pair(e, TransformLabel::III, u, v)?;
    if (du, dv) != (1, 1) {
        return Err(not_applicable(
            TransformLabel::III,
            format!("(d_u, d_v) = ({du}, {dv})"),
        ));
    }
    let exceptional = *p == Natural::from(2u8) && u == 1 && v == e.len();
    let out = rebuild(&e[..u - 1], std::iter::repeat_n(2, v - u), &e[v..], d.s());
    Ok((out, !exceptional))
}

/// IV: `d_u = d_v = 3` with 2's between; the block becomes `v − u + 2` 2's.
pub fn apply_iv(d: &DeltaVector, u: usize, v: usize) -> Result<DeltaVector> {
    let e = d.entries();
    let (du, dv) = check_pair(e, TransformLabel::IV, u, v)?;
    if (du, dv) != (3, 3) {
        return Err(not_applicable(
            TransformLabel::IV,
            format!("(d_u, d_v) = ({du}, {dv})"),
        ));
    }
    Ok(rebuild(
        &e[..u - 1],
        std::iter::repeat_n(2, v - u + 2),
        &e[v..],
        d.s(),
    ))
}

/// V: all 2's except `d_u = 1` with `2 ≤ u ≤ r − 2`; result `(2,…,2,1)`.
pub fn apply_v(d: &DeltaVector, u: usize) -> Result<DeltaVector> {
    let e = d.entries();
    let du = entry(e, TransformLabel::V, u)?;
    if du != 1 || u < 2 || u + 1 > e.len() {
        return Err(not_applicable(
            TransformLabel::V,
            format!(
                "need d_{u} = 1 with 2 <= u <= {}",
                e.len().saturating_sub(1)
            ),
        ));
    }
    if let Some(j) = (1..=e.len()).find(|&j| j != u && e[j - 1] != 2) {
        return Err(not_applicable(
            TransformLabel::V,
            format!("d_{j} = {} != 2", e[j - 1]),
        ));
    }
    Ok(rebuild(
        &[],
        std::iter::repeat_n(2, e.len() - 1),
        &[1],
        d.s(),
    ))
}

fn apply_unmirrored(
    d: &DeltaVector,
    rule: &RuleInstance,
    p: &Natural,
) -> Result<(DeltaVector, bool)> {
    let pair = |label| {
        rule.v
            .ok_or_else(|| not_applicable(label, "rule needs a second position v"))
    };
    match rule.label {
        TransformLabel::Ia => apply_ia(d, rule.u).map(|x| (x, true)),
        TransformLabel::Ib => apply_ib(d, rule.u).map(|x| (x, true)),
        TransformLabel::II => apply_ii(d, rule.u, pair(TransformLabel::II)?).map(|x| (x, true)),
        TransformLabel::III => apply_iii(d, rule.u, pair(TransformLabel::III)?, p),
        TransformLabel::IV => apply_iv(d, rule.u, pair(TransformLabel::IV)?).map(|x| (x, true)),
        TransformLabel::V => apply_v(d, rule.u).map(|x| (x, true)),
    }
}

/// Applies a rule instance without evaluating energies. Returns the new
/// vector and whether a strict energy increase is expected.
pub fn apply_rule(
    d: &DeltaVector,
    rule: &RuleInstance,
    p: &Natural,
) -> Result<(DeltaVector, bool)> {
    if rule.label.is_pair() != rule.v.is_some() {
        return Err(not_applicable(rule.label, "wrong number of positions"));
    }
    if !rule.mirrored {
        return apply_unmirrored(d, rule, p);
    }
    let len = d.len();
    let flip = |x: usize| {
        (1..=len)
            .contains(&x)
            .then(|| len + 1 - x)
            .ok_or_else(|| not_applicable(rule.label, format!("position {x} outside 1..={len}")))
    };
    let flipped = match rule.v {
        Some(v) => RuleInstance::pair(rule.label, flip(v)?, flip(rule.u)?),
        None => RuleInstance::single(rule.label, flip(rule.u)?),
    };
    let (out, strict) = apply_unmirrored(&d.reversed(), &flipped, p)?;
    Ok((out.reversed(), strict))
}

/// All instances whose preconditions hold, ordered by label
/// (Ia, Ib, II, III, IV, V), then `u`, then `v`.
pub fn applicable(d: &DeltaVector) -> Vec<RuleInstance> {
    let e = d.entries();
    let len = e.len();
    let mut out = Vec::new();

    for u in 1..=len {
        if e[u - 1] >= 4 {
            out.push(RuleInstance::single(TransformLabel::Ia, u));
        }
    }
    if d.max_norm() == 3 && e.iter().all(|&x| x >= 2) {
        for u in 1..=len {
            if e[u - 1] == 3 {
                out.push(RuleInstance::single(TransformLabel::Ib, u));
            }
        }
    }

    // For each u the only candidate v is the next entry that is not 2.
    let next_non_two = |u: usize| (u + 1..=len).find(|&j| e[j - 1] != 2);
    let mut pairs = |label: TransformLabel, ok: fn(u32, u32) -> bool| {
        for u in 1..=len {
            if let Some(v) = next_non_two(u) {
                if ok(e[u - 1], e[v - 1]) {
                    out.push(RuleInstance::pair(label, u, v));
                }
            }
        }
    };
    pairs(TransformLabel::II, |a, b| matches!((a, b), (1, 3) | (3, 1)));
    pairs(TransformLabel::III, |a, b| (a, b) == (1, 1));
    pairs(TransformLabel::IV, |a, b| (a, b) == (3, 3));

    if len >= 3 {
        let odd: Vec<usize> = (1..=len).filter(|&j| e[j - 1] != 2).collect();
        if let [u] = odd[..] {
            if e[u - 1] == 1 && (2..len).contains(&u) {
                out.push(RuleInstance::single(TransformLabel::V, u));
            }
        }
    }
    out
}

/// Lexicographic measure that every unmirrored rule strictly decreases:
/// (total excess `Σ max(d_j − 2, 0)`, number of 1's, whether V applies).
pub fn termination_measure(d: &DeltaVector) -> (u64, usize, bool) {
    let excess = d
        .entries()
        .iter()
        .map(|&x| u64::from(x.saturating_sub(2)))
        .sum();
    let ones = d.entries().iter().filter(|&&x| x == 1).count();
    let v_pending = applicable(d).iter().any(|r| r.label == TransformLabel::V);
    (excess, ones, v_pending)
}

/// One rewrite with the energies on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformStep {
    pub label: TransformLabel,
    pub u: usize,
    pub v: Option<usize>,
    pub mirrored: bool,
    pub before: DeltaVector,
    pub after: DeltaVector,
    pub energy_before: Natural,
    pub energy_after: Natural,
    /// `energy_after > energy_before`.
    pub strict: bool,
}

impl TransformStep {
    pub fn rule(&self) -> RuleInstance {
        RuleInstance {
            label: self.label,
            u: self.u,
            v: self.v,
            mirrored: self.mirrored,
        }
    }
}

/// Energy of the divisor set `𝒟(δ^{-1}(d))`.
pub fn delta_energy(order: &PrimePowerOrder, d: &DeltaVector) -> Result<Natural> {
    energy_prime_power(order, d.to_admissible().as_exponents())
}

/// Applies one rule and verifies the energy change against the expectation.
pub fn apply(
    order: &PrimePowerOrder,
    d: &DeltaVector,
    rule: &RuleInstance,
) -> Result<TransformStep> {
    check_context(order, d)?;
    let (after, expect_strict) = apply_rule(d, rule, order.p())?;
    let energy_before = delta_energy(order, d)?;
    let energy_after = delta_energy(order, &after)?;
    let strict = energy_after > energy_before;
    let consistent = if expect_strict {
        strict
    } else {
        energy_after == energy_before
    };
    if !consistent {
        return Err(Error::Internal(format!(
            "{rule} on {d} over {order}: energy {energy_before} -> {energy_after}"
        )));
    }
    Ok(TransformStep {
        label: rule.label,
        u: rule.u,
        v: rule.v,
        mirrored: rule.mirrored,
        before: d.clone(),
        after,
        energy_before,
        energy_after,
        strict,
    })
}

fn check_context(order: &PrimePowerOrder, d: &DeltaVector) -> Result<()> {
    if d.s() != order.s() {
        return Err(Error::invalid(format!(
            "delta vector {d} sums to {}, order {order} needs {}",
            d.s() - 1,
            order.s() - 1
        )));
    }
    Ok(())
}

/// An initial vector and the chain of rewrites applied to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub order: PrimePowerOrder,
    pub initial: DeltaVector,
    pub initial_energy: Natural,
    pub steps: Vec<TransformStep>,
    pub terminal: DeltaVector,
}

impl Trace {
    /// `(ℓ, d^(ℓ), E(d^(ℓ)))` for every row, starting at `ℓ = 0`.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &DeltaVector, &Natural)> {
        std::iter::once((&self.initial, &self.initial_energy))
            .chain(self.steps.iter().map(|s| (&s.after, &s.energy_after)))
            .enumerate()
            .map(|(l, (d, e))| (l, d, e))
    }

    pub fn terminal_energy(&self) -> &Natural {
        self.steps
            .last()
            .map_or(&self.initial_energy, |s| &s.energy_after)
    }

    /// Consecutive steps share vectors and energies.
    pub fn is_chained(&self) -> bool {
        let mut d = &self.initial;
        let mut e = &self.initial_energy;
        for step in &self.steps {
            if step.before != *d || step.energy_before != *e {
                return false;
            }
            d = &step.after;
            e = &step.energy_after;
        }
        *d == self.terminal
    }
}

/// Applies the given rule instances in order.
pub fn replay(d0: &DeltaVector, order: &PrimePowerOrder, rules: &[RuleInstance]) -> Result<Trace> {
    check_context(order, d0)?;
    let initial_energy = delta_energy(order, d0)?;
    let mut steps: Vec<TransformStep> = Vec::with_capacity(rules.len());
    let mut current = d0.clone();
    for rule in rules {
        let step = apply(order, &current, rule)?;
        current = step.after.clone();
        steps.push(step);
    }
    Ok(Trace {
        order: order.clone(),
        initial: d0.clone(),
        initial_energy,
        steps,
        terminal: current,
    })
}

/// Applies the first applicable rule until none applies.
///
/// The terminal vector is always one of [`canonical_maximizer`]: `(2,…,2)`
/// for odd `s`, `(2,…,2,1)` or `(1,2,…,2)` for even `s`.
pub fn normalize(d0: &DeltaVector, order: &PrimePowerOrder) -> Result<Trace> {
    check_context(order, d0)?;
    let initial_energy = delta_energy(order, d0)?;
    let mut steps: Vec<TransformStep> = Vec::new();
    let mut current = d0.clone();
    let limit = 4 * order.s() as usize + 4;
    while let Some(rule) = applicable(&current).into_iter().next() {
        if steps.len() >= limit {
            return Err(Error::Internal(format!(
                "normalize of {d0} exceeded {limit} steps"
            )));
        }
        let step = apply(order, &current, &rule)?;
        current = step.after.clone();
        steps.push(step);
    }
    if !canonical_maximizer(order).contains(&current) {
        return Err(Error::Internal(format!(
            "normalize of {d0} stopped at non-canonical {current}"
        )));
    }
    Ok(Trace {
        order: order.clone(),
        initial: d0.clone(),
        initial_energy,
        steps,
        terminal: current,
    })
}

/// Delta vectors of all maximizing admissible tuples; empty for `s = 1`.
pub fn canonical_maximizer(order: &PrimePowerOrder) -> Vec<DeltaVector> {
    let s = order.s();
    if s < 2 {
        return Vec::new();
    }
    let twos = |k: usize| std::iter::repeat_n(2u32, k);
    let make = |v: Vec<u32>| DeltaVector::new(v, s).expect("canonical vectors sum to s - 1");
    let mut out = Vec::new();
    if s % 2 == 1 {
        let k = ((s - 1) / 2) as usize;
        out.push(make(twos(k).collect()));
        if order.is_p2() {
            out.push(make(
                [1].into_iter().chain(twos(k - 1)).chain([1]).collect(),
            ));
        }
    } else {
        let k = ((s - 2) / 2) as usize;
        out.push(make(twos(k).chain([1]).collect()));
        let mirror = make([1].into_iter().chain(twos(k)).collect());
        if mirror != out[0] {
            out.push(mirror);
        }
    }
    out
}
