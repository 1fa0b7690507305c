//! One-sided extension: closure systems, generated subgroups and
//! σ-algebras, and outer measures built from pre-measures.
//!
//! Everything is finite and exhaustive. Carriers are indexed 0..n with
//! subsets as bitmasks; a σ-algebra system's carrier is the powerset of
//! a base set, so a family of subsets is again one mask.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::filters::{format_set, FiniteTopology};
use crate::rational::{ExtRational, Rational};
use crate::report::LawReport;
use crate::OrdcloseError;

/// Largest universe a closure system may have; masks stay in u64.
pub const MAX_UNIVERSE: usize = 32;
/// Largest universe for which closed sets are enumerated exhaustively.
pub const MAX_ENUMERABLE_UNIVERSE: usize = 16;
/// Largest base set for σ-algebra systems (universe 2^5 = 32).
pub const MAX_SIGMA_BASE: usize = 5;

fn full_mask(size: usize) -> u64 {
    if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

/// Intersection-closed family of "closed" subsets of a finite
/// universe, with an optional saturation rule that generates the
/// closure from below.
pub struct ClosureSystem {
    name: String,
    universe_size: usize,
    is_closed: Box<dyn Fn(u64) -> bool>,
    /// One extensive saturation step; iterated to a fixpoint.
    rule: Option<Box<dyn Fn(u64) -> u64>>,
}

impl ClosureSystem {
    pub fn new(
        name: impl Into<String>,
        universe_size: usize,
        is_closed: Box<dyn Fn(u64) -> bool>,
        rule: Option<Box<dyn Fn(u64) -> u64>>,
    ) -> Result<Self, OrdcloseError> {
        if universe_size > MAX_UNIVERSE {
            return Err(OrdcloseError::CarrierTooLarge {
                size: universe_size,
                max: MAX_UNIVERSE,
            });
        }
        let system = ClosureSystem {
            name: name.into(),
            universe_size,
            is_closed,
            rule,
        };
        if !(system.is_closed)(system.full()) {
            return Err(OrdcloseError::InvalidInput(format!(
                "{}: the full universe must be closed",
                system.name
            )));
        }
        if universe_size <= 8 {
            // exhaustive intersection-closedness
            let closed = system.closed_sets()?;
            for &a in &closed {
                for &b in &closed {
                    if !(system.is_closed)(a & b) {
                        return Err(OrdcloseError::InvalidInput(format!(
                            "{}: intersection of closed {} and {} is not closed",
                            system.name,
                            format_set(a),
                            format_set(b)
                        )));
                    }
                }
            }
        }
        Ok(system)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn full(&self) -> u64 {
        full_mask(self.universe_size)
    }

    pub fn is_closed(&self, set: u64) -> bool {
        (self.is_closed)(set & self.full())
    }

    /// Every closed subset, by scanning the powerset of the universe.
    pub fn closed_sets(&self) -> Result<Vec<u64>, OrdcloseError> {
        if self.universe_size > MAX_ENUMERABLE_UNIVERSE {
            return Err(OrdcloseError::CarrierTooLarge {
                size: self.universe_size,
                max: MAX_ENUMERABLE_UNIVERSE,
            });
        }
        Ok((0..=self.full()).filter(|&s| (self.is_closed)(s)).collect())
    }

    /// Smallest closed superset as the meet of all closed supersets.
    pub fn closure_by_intersection(&self, k: u64) -> Result<u64, OrdcloseError> {
        let k = k & self.full();
        let mut acc = None;
        for s in self.closed_sets()? {
            if k & !s == 0 {
                acc = Some(acc.map_or(s, |a: u64| a & s));
            }
        }
        acc.ok_or(OrdcloseError::NotInKStar)
    }

    /// Smallest closed superset by iterating the saturation rule.
    pub fn closure_by_fixpoint(&self, k: u64) -> Result<u64, OrdcloseError> {
        let rule = self.rule.as_ref().ok_or_else(|| {
            OrdcloseError::InvalidInput(format!("{}: no saturation rule", self.name))
        })?;
        let mut s = k & self.full();
        loop {
            let next = (rule(s) | s) & self.full();
            if next == s {
                break;
            }
            s = next;
        }
        if !(self.is_closed)(s) {
            return Err(OrdcloseError::InvalidInput(format!(
                "{}: saturation stalled on the non-closed set {}",
                self.name,
                format_set(s)
            )));
        }
        Ok(s)
    }

    /// Smallest closed superset; prefers the rule, falls back to
    /// intersection on enumerable universes.
    pub fn l_closure(&self, k: u64) -> Result<u64, OrdcloseError> {
        if self.rule.is_some() {
            self.closure_by_fixpoint(k)
        } else {
            self.closure_by_intersection(k)
        }
    }
}

/// Closed sets of a finite topology, with the adherent-point rule: a
/// point joins when every open neighborhood meets the set.
pub fn topological_system(top: &FiniteTopology) -> Result<ClosureSystem, OrdcloseError> {
    let size = top.size();
    let t1 = top.clone();
    let t2 = top.clone();
    let full = full_mask(size);
    ClosureSystem::new(
        format!("closed-sets[{top}]"),
        size,
        Box::new(move |s| t1.is_open(full & !s)),
        Some(Box::new(move |s| {
            let mut out = s;
            for x in 0..size {
                let adherent = t2
                    .opens()
                    .filter(|&o| o & (1 << x) != 0)
                    .all(|o| o & s != 0);
                if adherent {
                    out |= 1 << x;
                }
            }
            out
        })),
    )
}

/// Group given by its full operation table, axioms checked on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    pub fn new(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self, OrdcloseError> {
        let n = table.len();
        if n == 0 || n > MAX_ENUMERABLE_UNIVERSE {
            return Err(OrdcloseError::CarrierTooLarge {
                size: n,
                max: MAX_ENUMERABLE_UNIVERSE,
            });
        }
        if labels.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(OrdcloseError::InvalidInput(
                "operation table must be square with matching labels".into(),
            ));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err(OrdcloseError::InvalidInput(
                "operation table entry outside the carrier".into(),
            ));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(OrdcloseError::InvalidInput(format!(
                            "operation not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| OrdcloseError::InvalidInput("no identity element".into()))?;
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| OrdcloseError::InvalidInput(format!("{a} has no inverse")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
            labels,
        })
    }

    /// Symmetric group on `letters` letters; elements are permutations
    /// in lexicographic order of their value tables.
    pub fn symmetric(letters: usize) -> Result<Self, OrdcloseError> {
        if letters == 0 || letters > 4 {
            return Err(OrdcloseError::InvalidInput(
                "symmetric groups supported on 1 to 4 letters".into(),
            ));
        }
        let perms = permutations(letters);
        let index: BTreeMap<Vec<usize>, usize> =
            perms.iter().cloned().zip(0..).collect();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let composed: Vec<usize> = (0..letters).map(|i| p[q[i]]).collect();
                        index[&composed]
                    })
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::new(table, labels)
    }

    /// Cyclic group of the given order.
    pub fn cyclic(order: usize) -> Result<Self, OrdcloseError> {
        let table = (0..order)
            .map(|a| (0..order).map(|b| (a + b) % order).collect())
            .collect();
        let labels = (0..order).map(|a| a.to_string()).collect();
        FiniteGroup::new(table, labels)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Index of the permutation with the given value table.
    pub fn element_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_subgroup(&self, subset: u64) -> bool {
        if subset == 0 || subset & !full_mask(self.order()) != 0 {
            return false;
        }
        let members: Vec<usize> = (0..self.order()).filter(|&a| subset & (1 << a) != 0).collect();
        members.iter().all(|&a| {
            subset & (1 << self.inverse[a]) != 0
                && members.iter().all(|&b| subset & (1 << self.table[a][b]) != 0)
        })
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..n).filter_map(move |v| {
                    if p.contains(&v) {
                        None
                    } else {
                        let mut q = p.clone();
                        q.push(v);
                        Some(q)
                    }
                })
            })
            .collect();
    }
    out.sort();
    out
}

/// Cycle notation with 1-based letters, identity written as `e`.
fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        loop {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
            if i == start {
                break;
            }
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// Subgroups of a finite group, saturated by products, inverses, and
/// the identity.
pub fn subgroup_system(group: &FiniteGroup) -> Result<ClosureSystem, OrdcloseError> {
    let g1 = group.clone();
    let g2 = group.clone();
    ClosureSystem::new(
        format!("subgroups[order {}]", group.order()),
        group.order(),
        Box::new(move |s| g1.is_subgroup(s)),
        Some(Box::new(move |s| {
            let mut out = s | (1 << g2.identity());
            let members: Vec<usize> =
                (0..g2.order()).filter(|&a| s & (1 << a) != 0).collect();
            for &a in &members {
                out |= 1 << g2.inverse(a);
                for &b in &members {
                    out |= 1 << g2.op(a, b);
                }
            }
            out
        })),
    )
}

/// σ-algebras on a base set of `base` points. The universe is the
/// powerset of the base set: member i of the universe is the subset of
/// the base set with mask i, and a family of subsets is one u64 mask
/// over those 2^base members. On a finite base set the countable union
/// axiom collapses to closure under pairwise union.
pub fn sigma_algebra_system(base: usize) -> Result<ClosureSystem, OrdcloseError> {
    if base > MAX_SIGMA_BASE {
        return Err(OrdcloseError::CarrierTooLarge {
            size: base,
            max: MAX_SIGMA_BASE,
        });
    }
    let subsets = 1usize << base;
    let base_full = full_mask(base);
    let family_has = |family: u64, subset: u64| family & (1u64 << subset) != 0;
    let is_closed = Box::new(move |family: u64| {
        if !family_has(family, 0) {
            return false;
        }
        for a in 0..=base_full {
            if !family_has(family, a) {
                continue;
            }
            if !family_has(family, base_full & !a) {
                return false;
            }
            for b in 0..=base_full {
                if family_has(family, b) && !family_has(family, a | b) {
                    return false;
                }
            }
        }
        true
    });
    let rule = Box::new(move |family: u64| {
        let mut out = family | 1; // the empty subset
        for a in 0..=base_full {
            if !family_has(family, a) {
                continue;
            }
            out |= 1u64 << (base_full & !a);
            for b in 0..=base_full {
                if family_has(family, b) {
                    out |= 1u64 << (a | b);
                }
            }
        }
        out
    });
    ClosureSystem::new(
        format!("sigma-algebras[{base} points]"),
        subsets,
        is_closed,
        Some(rule),
    )
}

/// The inf over kernel elements dominating the candidate: the one-sided
/// extension value. `dominates` says whether the candidate sits below
/// the kernel element; `meet` is the binary infimum of a value order
/// complete from below.
pub fn one_sided_extend<B, V>(
    uppers: &[B],
    dominates: impl Fn(&B) -> bool,
    phi: impl Fn(&B) -> V,
    meet: impl Fn(V, V) -> V,
) -> Result<V, OrdcloseError> {
    let mut acc: Option<V> = None;
    for b in uppers {
        if dominates(b) {
            let v = phi(b);
            acc = Some(match acc {
                None => v,
                Some(a) => meet(a, v),
            });
        }
    }
    acc.ok_or(OrdcloseError::NotInKStar)
}

/// Extensive, idempotent, and isotone, checked over the given inputs.
pub fn check_closure_operator_laws(system: &ClosureSystem, inputs: &[u64]) -> LawReport {
    let mut report = LawReport::new(format!("closure-operator:{}", system.name()));
    for &k in inputs {
        let Ok(c) = system.l_closure(k) else {
            report.skip();
            continue;
        };
        report.case();
        if k & !c != 0 {
            report.violation(format_set(k), "closure contains the input", format_set(c));
            continue;
        }
        match system.l_closure(c) {
            Ok(cc) if cc == c => {}
            Ok(cc) => report.violation(
                format_set(k),
                "closure is idempotent",
                format!("{} then {}", format_set(c), format_set(cc)),
            ),
            Err(e) => report.violation(
                format_set(c),
                "closure of a closed set computable",
                e.to_string(),
            ),
        }
    }
    for &k1 in inputs {
        for &k2 in inputs {
            if k1 & !k2 != 0 {
                continue;
            }
            let (Ok(c1), Ok(c2)) = (system.l_closure(k1), system.l_closure(k2)) else {
                report.skip();
                continue;
            };
            report.case();
            if c1 & !c2 != 0 {
                report.violation(
                    format!("{} inside {}", format_set(k1), format_set(k2)),
                    "closure is isotone",
                    format!("{} outside {}", format_set(c1), format_set(c2)),
                );
            }
        }
    }
    report
}

/// Ring of subsets: contains the empty set, closed under union and
/// difference, checked exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetRing {
    omega: usize,
    sets: BTreeSet<u64>,
}

impl SetRing {
    pub fn new(omega: usize, sets: impl IntoIterator<Item = u64>) -> Result<Self, OrdcloseError> {
        if omega > MAX_SIGMA_BASE {
            return Err(OrdcloseError::CarrierTooLarge {
                size: omega,
                max: MAX_SIGMA_BASE,
            });
        }
        let full = full_mask(omega);
        let sets: BTreeSet<u64> = sets.into_iter().collect();
        for &s in &sets {
            if s & !full != 0 {
                return Err(OrdcloseError::InvalidInput(format!(
                    "ring member {} leaves the carrier",
                    format_set(s)
                )));
            }
        }
        if !sets.contains(&0) {
            return Err(OrdcloseError::InvalidInput(
                "a ring contains the empty set".into(),
            ));
        }
        for &a in &sets {
            for &b in &sets {
                if !sets.contains(&(a | b)) {
                    return Err(OrdcloseError::InvalidInput(format!(
                        "union {} missing from ring",
                        format_set(a | b)
                    )));
                }
                if !sets.contains(&(a & !b)) {
                    return Err(OrdcloseError::InvalidInput(format!(
                        "difference {} missing from ring",
                        format_set(a & !b)
                    )));
                }
            }
        }
        Ok(SetRing { omega, sets })
    }

    pub fn powerset(omega: usize) -> Result<Self, OrdcloseError> {
        SetRing::new(omega, 0..=full_mask(omega))
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn full(&self) -> u64 {
        full_mask(self.omega)
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.sets.iter().copied()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.sets.contains(&s)
    }
}

/// Nonnegative, finitely additive set function on a ring, with
/// μ(∅) = 0. On a finite carrier σ-additivity is finite additivity;
/// every sequence of disjoint members is eventually empty.
#[derive(Debug, Clone, PartialEq)]
pub struct PreMeasure {
    ring: SetRing,
    values: BTreeMap<u64, ExtRational>,
}

impl PreMeasure {
    pub fn new(
        ring: SetRing,
        values: BTreeMap<u64, ExtRational>,
    ) -> Result<Self, OrdcloseError> {
        for s in ring.members() {
            let v = values.get(&s).ok_or_else(|| {
                OrdcloseError::InvalidInput(format!("no value for ring member {}", format_set(s)))
            })?;
            if let ExtRational::Finite(x) = v {
                if x.is_negative() {
                    return Err(OrdcloseError::InvalidInput(format!(
                        "negative value {x} on {}",
                        format_set(s)
                    )));
                }
            }
        }
        if values[&0] != ExtRational::Finite(Rational::zero()) {
            return Err(OrdcloseError::InvalidInput(
                "the empty set must have value zero".into(),
            ));
        }
        for a in ring.members() {
            for b in ring.members() {
                if a & b != 0 {
                    continue;
                }
                let sum = values[&a].clone() + values[&b].clone();
                if values[&(a | b)] != sum {
                    return Err(OrdcloseError::InvalidInput(format!(
                        "not additive on disjoint {} and {}",
                        format_set(a),
                        format_set(b)
                    )));
                }
            }
        }
        Ok(PreMeasure { ring, values })
    }

    /// Uniform counting-style weights on the full powerset.
    pub fn from_weights(weights: &[Rational]) -> Result<Self, OrdcloseError> {
        let omega = weights.len();
        let ring = SetRing::powerset(omega)?;
        let values = ring
            .members()
            .map(|s| {
                let total = (0..omega)
                    .filter(|&i| s & (1 << i) != 0)
                    .fold(Rational::zero(), |acc, i| acc + weights[i].clone());
                (s, ExtRational::Finite(total))
            })
            .collect();
        PreMeasure::new(ring, values)
    }

    pub fn ring(&self) -> &SetRing {
        &self.ring
    }

    pub fn value(&self, member: u64) -> &ExtRational {
        &self.values[&member]
    }
}

/// All families of pairwise disjoint nonempty ring members.
fn disjoint_families(ring: &SetRing) -> Vec<Vec<u64>> {
    let members: Vec<u64> = ring.members().filter(|&s| s != 0).collect();
    let mut out = vec![vec![]];
    let mut stack: Vec<(usize, Vec<u64>, u64)> = vec![(0, vec![], 0)];
    while let Some((start, family, used)) = stack.pop() {
        for (i, &m) in members.iter().enumerate().skip(start) {
            if m & used != 0 {
                continue;
            }
            let mut next = family.clone();
            next.push(m);
            out.push(next.clone());
            stack.push((i + 1, next, used | m));
        }
    }
    out
}

/// Value of the outer measure: the cheapest family of pairwise
/// disjoint ring members covering the set. Requires the carrier to be
/// coverable by the ring at all.
pub fn outer_measure(pre: &PreMeasure, s: u64) -> Result<ExtRational, OrdcloseError> {
    let ring = pre.ring();
    let coverable = ring.members().fold(0, |acc, m| acc | m);
    if coverable != ring.full() {
        return Err(OrdcloseError::NoCover);
    }
    let s = s & ring.full();
    let mut best: Option<ExtRational> = None;
    for family in disjoint_families(ring) {
        let union = family.iter().fold(0, |acc, &m| acc | m);
        if s & !union != 0 {
            continue;
        }
        let total = family
            .iter()
            .fold(ExtRational::Finite(Rational::zero()), |acc, &m| {
                acc + pre.value(m).clone()
            });
        best = Some(match best {
            None => total,
            Some(b) => b.min(total),
        });
    }
    best.ok_or(OrdcloseError::NoCover)
}

/// μ* restricted to the σ-algebra generated by the ring, verified to be
/// additive there.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedMeasure {
    /// Members of the generated σ-algebra, ascending by mask.
    pub sigma_members: Vec<u64>,
    pub table: BTreeMap<u64, ExtRational>,
}

/// Generates the σ-algebra from the ring, tabulates μ* on it, and
/// checks additivity on every disjoint pair.
pub fn caratheodory_restrict(pre: &PreMeasure) -> Result<RestrictedMeasure, OrdcloseError> {
    let omega = pre.ring().omega();
    let system = sigma_algebra_system(omega)?;
    let ring_family = pre
        .ring()
        .members()
        .fold(0u64, |acc, m| acc | (1u64 << m));
    let sigma_family = system.l_closure(ring_family)?;
    let sigma_members: Vec<u64> = (0..=full_mask(omega))
        .filter(|&s| sigma_family & (1u64 << s) != 0)
        .collect();
    let table: BTreeMap<u64, ExtRational> = sigma_members
        .iter()
        .map(|&s| Ok((s, outer_measure(pre, s)?)))
        .collect::<Result<_, OrdcloseError>>()?;
    for &a in &sigma_members {
        for &b in &sigma_members {
            if a & b != 0 {
                continue;
            }
            let sum = table[&a].clone() + table[&b].clone();
            if table[&(a | b)] != sum {
                return Err(OrdcloseError::AdditivityViolation {
                    witness: format!(
                        "{} and {}: {} + {} vs {}",
                        format_set(a),
                        format_set(b),
                        table[&a],
                        table[&b],
                        table[&(a | b)]
                    ),
                });
            }
        }
    }
    Ok(RestrictedMeasure {
        sigma_members,
        table,
    })
}

/// Seeded random inputs for cross-method agreement checks.
pub fn random_subsets(seed: u64, count: usize, universe_size: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = full_mask(universe_size);
    (0..count).map(|_| rng.gen::<u64>() & full).collect()
}

/// Intersection and fixpoint closures agree on every input.
pub fn check_method_agreement(system: &ClosureSystem, inputs: &[u64]) -> LawReport {
    let mut report = LawReport::new(format!("closure-methods:{}", system.name()));
    for &k in inputs {
        match (system.closure_by_intersection(k), system.closure_by_fixpoint(k)) {
            (Ok(a), Ok(b)) => {
                report.case();
                if a != b {
                    report.violation(
                        format_set(k),
                        format!("both methods give {}", format_set(a)),
                        format_set(b),
                    );
                }
            }
            _ => report.skip(),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> ExtRational {
        ExtRational::Finite(Rational::int(n))
    }

    fn fixture_premeasure() -> PreMeasure {
        let ring = SetRing::new(3, [0b000, 0b011, 0b100, 0b111]).unwrap();
        let values = BTreeMap::from([
            (0b000, q(0)),
            (0b011, q(2)),
            (0b100, q(1)),
            (0b111, q(3)),
        ]);
        PreMeasure::new(ring, values).unwrap()
    }

    #[test]
    fn two_point_closure_matches_topology() {
        let two = FiniteTopology::two_point_connected();
        let system = topological_system(&two).unwrap();
        // closing the open point pulls in the closed one
        assert_eq!(system.l_closure(0b10).unwrap(), 0b11);
        assert_eq!(system.l_closure(0b01).unwrap(), 0b01);
        assert_eq!(system.closure_by_intersection(0b10).unwrap(), 0b11);
    }

    #[test]
    fn closure_system_agrees_with_topological_closure_everywhere() {
        for top in FiniteTopology::all_topologies(3).unwrap() {
            let system = topological_system(&top).unwrap();
            for k in 0..=0b111u64 {
                assert_eq!(system.l_closure(k).unwrap(), top.closure(k), "{top}");
                assert_eq!(
                    system.closure_by_intersection(k).unwrap(),
                    top.closure(k)
                );
            }
        }
    }

    #[test]
    fn two_transpositions_generate_the_whole_symmetric_group() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        let system = subgroup_system(&s3).unwrap();
        let a = s3.element_of("(12)").unwrap();
        let b = s3.element_of("(23)").unwrap();
        let generated = system.l_closure((1 << a) | (1 << b)).unwrap();
        assert_eq!(generated.count_ones(), 6);
        assert_eq!(generated, (1 << 6) - 1);
        assert_eq!(system.closure_by_intersection(generated).unwrap(), generated);
    }

    #[test]
    fn single_transposition_generates_an_order_two_subgroup() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let system = subgroup_system(&s3).unwrap();
        let a = s3.element_of("(12)").unwrap();
        let generated = system.l_closure(1 << a).unwrap();
        assert_eq!(generated.count_ones(), 2);
        assert!(generated & (1 << s3.identity()) != 0);
        // empty generating set gives the trivial subgroup
        assert_eq!(
            system.l_closure(0).unwrap().count_ones(),
            1,
            "identity only"
        );
    }

    #[test]
    fn three_cycle_group_has_no_proper_nontrivial_subgroup_beyond_identity() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let system = subgroup_system(&z3).unwrap();
        for g in 1..3u64 {
            assert_eq!(system.l_closure(1 << g).unwrap(), 0b111);
        }
    }

    #[test]
    fn singleton_generates_the_four_member_sigma_algebra() {
        let system = sigma_algebra_system(3).unwrap();
        // the family containing only the subset {0}
        let family = 1u64 << 0b001;
        let generated = system.l_closure(family).unwrap();
        let members: Vec<u64> = (0..8).filter(|&s| generated & (1u64 << s) != 0).collect();
        assert_eq!(members, vec![0b000, 0b001, 0b110, 0b111]);
        assert_eq!(system.closure_by_intersection(family).unwrap(), generated);
    }

    #[test]
    fn closure_operator_laws_hold_exhaustively_on_small_carriers() {
        for top in FiniteTopology::all_topologies(3).unwrap() {
            let system = topological_system(&top).unwrap();
            let inputs: Vec<u64> = (0..=0b111).collect();
            let report = check_closure_operator_laws(&system, &inputs);
            assert!(report.passed(), "{top}: {:?}", report.violations);
            assert_eq!(report.skipped, 0);
        }

        let z3 = FiniteGroup::cyclic(3).unwrap();
        let report = check_closure_operator_laws(
            &subgroup_system(&z3).unwrap(),
            &(0..=0b111u64).collect::<Vec<_>>(),
        );
        assert!(report.passed(), "{:?}", report.violations);

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let report = check_closure_operator_laws(
            &subgroup_system(&s3).unwrap(),
            &(0..64u64).collect::<Vec<_>>(),
        );
        assert!(report.passed(), "{:?}", report.violations);

        let sigma = sigma_algebra_system(3).unwrap();
        let report = check_closure_operator_laws(
            &sigma,
            &(0..256u64).collect::<Vec<_>>(),
        );
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.skipped, 0);
    }

    #[test]
    fn both_closure_methods_agree_on_seeded_inputs() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let systems = [
            topological_system(&FiniteTopology::two_point_connected()).unwrap(),
            subgroup_system(&s3).unwrap(),
            sigma_algebra_system(3).unwrap(),
        ];
        for (i, system) in systems.iter().enumerate() {
            let inputs = random_subsets(90 + i as u64, 200, system.universe_size());
            let report = check_method_agreement(system, &inputs);
            assert!(report.passed(), "{}: {:?}", system.name(), report.violations);
            assert_eq!(report.cases, 200);
            assert_eq!(report.skipped, 0);
        }
    }

    #[test]
    fn one_sided_extension_recovers_closures_and_kernel_values() {
        let system = sigma_algebra_system(2).unwrap();
        let closed = system.closed_sets().unwrap();
        for k in 0..=system.full() {
            let via_inf = one_sided_extend(
                &closed,
                |&b| k & !b == 0,
                |&b| b,
                |a, b| a & b,
            )
            .unwrap();
            assert_eq!(via_inf, system.l_closure(k).unwrap());
        }
        // kernel elements come back exactly
        for &c in &closed {
            let v = one_sided_extend(&closed, |&b| c & !b == 0, |&b| b, |a, b| a & b).unwrap();
            assert_eq!(v, c);
        }
        // nothing above: sabotaged kernel list
        let empty: Vec<u64> = vec![];
        assert!(matches!(
            one_sided_extend(&empty, |_| true, |&b| b, |a, b| a & b),
            Err(OrdcloseError::NotInKStar)
        ));
    }

    #[test]
    fn ring_axioms_are_enforced() {
        assert!(SetRing::new(3, [0b000, 0b011, 0b100, 0b111]).is_ok());
        // missing difference {0,1} \ {0} ... use members {0,1} and {0}
        assert!(SetRing::new(2, [0b00, 0b01, 0b11]).is_err());
        assert!(SetRing::new(2, [0b01, 0b10, 0b11]).is_err(), "no empty set");
        assert!(SetRing::powerset(3).is_ok());
    }

    #[test]
    fn premeasure_axioms_are_enforced() {
        let ring = SetRing::new(2, [0b00, 0b01, 0b10, 0b11]).unwrap();
        let bad = PreMeasure::new(
            ring.clone(),
            BTreeMap::from([(0b00, q(0)), (0b01, q(1)), (0b10, q(1)), (0b11, q(3))]),
        );
        assert!(matches!(bad, Err(OrdcloseError::InvalidInput(_))));
        let good = PreMeasure::new(
            ring,
            BTreeMap::from([(0b00, q(0)), (0b01, q(1)), (0b10, q(1)), (0b11, q(2))]),
        );
        assert!(good.is_ok());
    }

    #[test]
    fn outer_measure_matches_the_cover_enumeration_fixture() {
        let pre = fixture_premeasure();
        assert_eq!(outer_measure(&pre, 0b000).unwrap(), q(0));
        assert_eq!(outer_measure(&pre, 0b001).unwrap(), q(2), "cheapest cover is {{1,2}}");
        assert_eq!(outer_measure(&pre, 0b100).unwrap(), q(1));
        assert_eq!(outer_measure(&pre, 0b101).unwrap(), q(3));
        // continuation: ring members keep their value
        for m in pre.ring().members() {
            assert_eq!(outer_measure(&pre, m).unwrap(), *pre.value(m));
        }
    }

    #[test]
    fn uncoverable_carrier_is_rejected() {
        let ring = SetRing::new(2, [0b00, 0b01]).unwrap();
        let pre = PreMeasure::new(
            ring,
            BTreeMap::from([(0b00, q(0)), (0b01, q(1))]),
        )
        .unwrap();
        assert!(matches!(
            outer_measure(&pre, 0b01),
            Err(OrdcloseError::NoCover)
        ));
    }

    #[test]
    fn disjoint_family_sums_collapse_to_the_union_value() {
        let pre = fixture_premeasure();
        for family in disjoint_families(pre.ring()) {
            let union = family.iter().fold(0, |acc, &m| acc | m);
            let total = family
                .iter()
                .fold(q(0), |acc, &m| acc + pre.value(m).clone());
            assert_eq!(total, *pre.value(union));
        }
    }

    #[test]
    fn family_sums_are_isotone_in_union_containment() {
        let pre = fixture_premeasure();
        let families = disjoint_families(pre.ring());
        for f in &families {
            for g in &families {
                let uf = f.iter().fold(0, |acc, &m| acc | m);
                let ug = g.iter().fold(0, |acc, &m| acc | m);
                if uf & !ug != 0 {
                    continue;
                }
                let sf = f.iter().fold(q(0), |acc, &m| acc + pre.value(m).clone());
                let sg = g.iter().fold(q(0), |acc, &m| acc + pre.value(m).clone());
                assert!(sf <= sg, "{f:?} vs {g:?}");
            }
        }
    }

    #[test]
    fn outer_measure_axioms_hold_exhaustively() {
        let samples = [
            fixture_premeasure(),
            PreMeasure::from_weights(&[Rational::int(1), Rational::int(2)]).unwrap(),
            PreMeasure::from_weights(&[
                Rational::int(1),
                Rational::ratio(1, 2),
                Rational::int(0),
                Rational::int(3),
            ])
            .unwrap(),
        ];
        for pre in &samples {
            let full = pre.ring().full();
            assert_eq!(outer_measure(pre, 0).unwrap(), q(0));
            for s in 0..=full {
                for t in 0..=full {
                    let ms = outer_measure(pre, s).unwrap();
                    let mt = outer_measure(pre, t).unwrap();
                    if s & !t == 0 {
                        assert!(ms <= mt, "monotone at {s} vs {t}");
                    }
                    let mu = outer_measure(pre, s | t).unwrap();
                    assert!(mu <= ms + mt, "subadditive at {s}, {t}");
                }
            }
        }
    }

    #[test]
    fn restriction_to_the_generated_sigma_algebra_is_additive() {
        let pre = fixture_premeasure();
        let measure = caratheodory_restrict(&pre).unwrap();
        assert_eq!(measure.sigma_members, vec![0b000, 0b011, 0b100, 0b111]);
        assert_eq!(measure.table[&0b000], q(0));
        assert_eq!(measure.table[&0b011], q(2));
        assert_eq!(measure.table[&0b100], q(1));
        assert_eq!(measure.table[&0b111], q(3));
    }

    #[test]
    fn powerset_ring_restriction_is_the_weight_sum() {
        let pre = PreMeasure::from_weights(&[Rational::int(2), Rational::int(5)]).unwrap();
        let measure = caratheodory_restrict(&pre).unwrap();
        assert_eq!(measure.sigma_members.len(), 4);
        assert_eq!(measure.table[&0b01], q(2));
        assert_eq!(measure.table[&0b10], q(5));
        assert_eq!(measure.table[&0b11], q(7));
    }

    #[test]
    fn group_table_validation_rejects_broken_tables() {
        // flipped entry breaks associativity of Z3
        let mut table: Vec<Vec<usize>> = (0..3)
            .map(|a| (0..3).map(|b| (a + b) % 3).collect())
            .collect();
        table[2][2] = 2;
        let labels = vec!["0".into(), "1".into(), "2".into()];
        assert!(FiniteGroup::new(table, labels).is_err());
    }

    #[test]
    fn cycle_notation_names_are_stable() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let labels: Vec<&str> = (0..6).map(|i| s3.label(i)).collect();
        assert!(labels.contains(&"e"));
        assert!(labels.contains(&"(12)"));
        assert!(labels.contains(&"(123)"));
        assert_eq!(s3.identity(), s3.element_of("e").unwrap());
    }
}
