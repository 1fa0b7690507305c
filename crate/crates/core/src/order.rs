//! Preorders, value orders, finite bounds, and law-checking harnesses.
//!
//! Two kinds of order appear throughout the crate and are kept distinct:
//!
//! * [`Preorder`]: reflexive transitive relations on candidate spaces,
//!   possibly non-antisymmetric and only semi-decidable. Comparisons are
//!   three-valued; an unknown answer is never treated as a refutation.
//! * [`ValueOrder`]: the order on the space where extended values live.
//!   Comparison is decidable, and each instance declares what completeness
//!   the ambient order it stands in for provides. The engine trusts the
//!   declaration; the harnesses in this module test what is testable.

use std::fmt::Display;

use crate::rational::{ExtRational, Rational};
use crate::report::LawReport;
use crate::OrdcloseError;

/// A reflexive transitive relation with three-valued comparison.
///
/// `try_leq` returns `Some(true)` only on a certified comparison and
/// `Some(false)` only on a certified refutation. `None` means the relation
/// could not be decided with the structure at hand (a tail bound too
/// coarse, a neighborhood not yet small enough); callers must not read it
/// as either answer.
pub trait Preorder {
    type Elem: Clone;

    fn try_leq(&self, a: &Self::Elem, b: &Self::Elem) -> Option<bool>;

    /// Certified comparison only; `false` conflates refuted and unknown.
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.try_leq(a, b) == Some(true)
    }

    /// Both directions certified, i.e. equivalence in the preorder.
    fn try_equiv(&self, a: &Self::Elem, b: &Self::Elem) -> Option<bool> {
        match (self.try_leq(a, b), self.try_leq(b, a)) {
            (Some(true), Some(true)) => Some(true),
            (Some(false), _) | (_, Some(false)) => Some(false),
            _ => None,
        }
    }
}

/// Completeness class a value order declares for its ambient order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    /// Nonempty subsets bounded below (above) have an infimum (supremum)
    /// in the ambient order the values approximate.
    BoundedSubsets,
    /// Finite meets and joins exist and are computed exactly.
    FiniteLattice,
    /// Distinct elements are incomparable; only singletons are bounded.
    EqualityOnly,
}

/// Decidable order on extension values, with whatever meet/join and
/// width structure the instance supports.
pub trait ValueOrder {
    type Value: Clone;

    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool;

    fn eq(&self, a: &Self::Value, b: &Self::Value) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    /// Greatest lower bound of the pair, when the order has one.
    fn try_meet(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, OrdcloseError>;

    /// Least upper bound of the pair, when the order has one.
    fn try_join(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, OrdcloseError>;

    /// Numeric width of the interval `[lo, hi]`, if the order measures
    /// gaps numerically. `None` means convergence is exact coincidence.
    fn width(&self, lo: &Self::Value, hi: &Self::Value) -> Option<Rational>;

    fn completeness(&self) -> Completeness;
}

/// Total order on the rationals. Values are exact representatives of a
/// bounded-complete ambient order, so enclosure endpoints never round.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalValueOrder;

impl ValueOrder for RationalValueOrder {
    type Value = Rational;

    fn leq(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }

    fn try_meet(&self, a: &Rational, b: &Rational) -> Result<Rational, OrdcloseError> {
        Ok(a.clone().min(b.clone()))
    }

    fn try_join(&self, a: &Rational, b: &Rational) -> Result<Rational, OrdcloseError> {
        Ok(a.clone().max(b.clone()))
    }

    fn width(&self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        Some(hi.clone() - lo.clone())
    }

    fn completeness(&self) -> Completeness {
        Completeness::BoundedSubsets
    }
}

/// Total order on rationals extended by a top element, the value range
/// of measures.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExtRationalValueOrder;

impl ValueOrder for ExtRationalValueOrder {
    type Value = ExtRational;

    fn leq(&self, a: &ExtRational, b: &ExtRational) -> bool {
        a <= b
    }

    fn try_meet(&self, a: &ExtRational, b: &ExtRational) -> Result<ExtRational, OrdcloseError> {
        Ok(a.clone().min(b.clone()))
    }

    fn try_join(&self, a: &ExtRational, b: &ExtRational) -> Result<ExtRational, OrdcloseError> {
        Ok(a.clone().max(b.clone()))
    }

    fn width(&self, lo: &ExtRational, hi: &ExtRational) -> Option<Rational> {
        match (lo, hi) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => Some(b.clone() - a.clone()),
            _ if lo == hi => Some(Rational::zero()),
            _ => None,
        }
    }

    fn completeness(&self) -> Completeness {
        Completeness::BoundedSubsets
    }
}

/// Which way inclusion points in a set-valued order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetDirection {
    /// `a ≤ b` iff `a ⊆ b`.
    Subset,
    /// `a ≤ b` iff `a ⊇ b`.
    Superset,
}

/// Lattice of subsets of a fixed universe of at most 64 points, each set
/// a bitmask. Meet and join are intersection and union, swapped when the
/// order is reverse inclusion.
#[derive(Debug, Clone, Copy)]
pub struct SubsetValueOrder {
    universe: u64,
    direction: SubsetDirection,
}

impl SubsetValueOrder {
    pub fn new(universe: u64, direction: SubsetDirection) -> Self {
        SubsetValueOrder {
            universe,
            direction,
        }
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    fn check_member(&self, a: u64) -> u64 {
        debug_assert_eq!(a & !self.universe, 0, "set outside the universe");
        a & self.universe
    }
}

impl ValueOrder for SubsetValueOrder {
    type Value = u64;

    fn leq(&self, a: &u64, b: &u64) -> bool {
        let (a, b) = (self.check_member(*a), self.check_member(*b));
        match self.direction {
            SubsetDirection::Subset => a & !b == 0,
            SubsetDirection::Superset => b & !a == 0,
        }
    }

    fn try_meet(&self, a: &u64, b: &u64) -> Result<u64, OrdcloseError> {
        Ok(match self.direction {
            SubsetDirection::Subset => a & b,
            SubsetDirection::Superset => a | b,
        })
    }

    fn try_join(&self, a: &u64, b: &u64) -> Result<u64, OrdcloseError> {
        Ok(match self.direction {
            SubsetDirection::Subset => a | b,
            SubsetDirection::Superset => a & b,
        })
    }

    fn width(&self, _lo: &u64, _hi: &u64) -> Option<Rational> {
        None
    }

    fn completeness(&self) -> Completeness {
        Completeness::FiniteLattice
    }
}

/// Equality-only order: distinct elements are incomparable, so every set
/// with two distinct members is unbounded and has no meet or join.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiscreteValueOrder<V> {
    _marker: std::marker::PhantomData<V>,
}

impl<V> DiscreteValueOrder<V> {
    pub fn new() -> Self {
        DiscreteValueOrder {
            _marker: std::marker::PhantomData,
        }
    }
}

impl<V: Clone + PartialEq> ValueOrder for DiscreteValueOrder<V> {
    type Value = V;

    fn leq(&self, a: &V, b: &V) -> bool {
        a == b
    }

    fn try_meet(&self, a: &V, b: &V) -> Result<V, OrdcloseError> {
        if a == b {
            Ok(a.clone())
        } else {
            Err(OrdcloseError::NoMeet)
        }
    }

    fn try_join(&self, a: &V, b: &V) -> Result<V, OrdcloseError> {
        if a == b {
            Ok(a.clone())
        } else {
            Err(OrdcloseError::NoJoin)
        }
    }

    fn width(&self, lo: &V, hi: &V) -> Option<Rational> {
        if lo == hi {
            Some(Rational::zero())
        } else {
            None
        }
    }

    fn completeness(&self) -> Completeness {
        Completeness::EqualityOnly
    }
}

/// Any [`ValueOrder`] is in particular a decidable preorder on its values.
#[derive(Debug, Clone, Copy)]
pub struct ValuePreorder<O>(pub O);

impl<O: ValueOrder> Preorder for ValuePreorder<O> {
    type Elem = O::Value;

    fn try_leq(&self, a: &O::Value, b: &O::Value) -> Option<bool> {
        Some(self.0.leq(a, b))
    }
}

/// True iff `m` is certified below every element of the nonempty `set`.
pub fn is_lower_bound<P: Preorder>(
    rel: &P,
    m: &P::Elem,
    set: &[P::Elem],
) -> Result<bool, OrdcloseError> {
    if set.is_empty() {
        return Err(OrdcloseError::EmptySet);
    }
    Ok(set.iter().all(|a| rel.leq(m, a)))
}

/// True iff `m` is certified above every element of the nonempty `set`.
pub fn is_upper_bound<P: Preorder>(
    rel: &P,
    m: &P::Elem,
    set: &[P::Elem],
) -> Result<bool, OrdcloseError> {
    if set.is_empty() {
        return Err(OrdcloseError::EmptySet);
    }
    Ok(set.iter().all(|a| rel.leq(a, m)))
}

/// Greatest lower bound of a nonempty finite set, by folding pairwise meets.
pub fn finite_inf<O: ValueOrder>(ord: &O, set: &[O::Value]) -> Result<O::Value, OrdcloseError> {
    let (first, rest) = set.split_first().ok_or(OrdcloseError::EmptySet)?;
    rest.iter()
        .try_fold(first.clone(), |acc, v| ord.try_meet(&acc, v))
}

/// Least upper bound of a nonempty finite set, by folding pairwise joins.
pub fn finite_sup<O: ValueOrder>(ord: &O, set: &[O::Value]) -> Result<O::Value, OrdcloseError> {
    let (first, rest) = set.split_first().ok_or(OrdcloseError::EmptySet)?;
    rest.iter()
        .try_fold(first.clone(), |acc, v| ord.try_join(&acc, v))
}

/// Checks reflexivity on every sample and transitivity on every triple.
///
/// Undecided comparisons are counted as skips, never as violations:
/// a law is only reported broken on a certified counterexample. Intended
/// for sample lists small enough that the cubic triple scan is cheap.
pub fn check_preorder_laws<P>(rel: &P, samples: &[P::Elem], suite: &str) -> LawReport
where
    P: Preorder,
    P::Elem: Display,
{
    let mut report = LawReport::new(suite);
    for a in samples {
        match rel.try_leq(a, a) {
            Some(true) => report.case(),
            Some(false) => {
                report.case();
                report.violation(format!("a={a}"), "leq(a,a)", "refuted");
            }
            None => report.skip(),
        }
    }
    for a in samples {
        for b in samples {
            for c in samples {
                match (rel.try_leq(a, b), rel.try_leq(b, c)) {
                    (Some(true), Some(true)) => match rel.try_leq(a, c) {
                        Some(true) => report.case(),
                        Some(false) => {
                            report.case();
                            report.violation(
                                format!("a={a} b={b} c={c}"),
                                "leq(a,b) and leq(b,c) imply leq(a,c)",
                                "leq(a,c) refuted",
                            );
                        }
                        None => report.skip(),
                    },
                    (None, _) | (_, None) => report.skip(),
                    _ => report.case(),
                }
            }
        }
    }
    report
}

/// Checks the lattice-facing laws of a value order on the given samples:
/// reflexivity, antisymmetry, transitivity, and that meets and joins, when
/// present, are genuine greatest lower and least upper bounds.
pub fn check_value_order_laws<O>(ord: &O, samples: &[O::Value], suite: &str) -> LawReport
where
    O: ValueOrder,
    O::Value: PartialEq + Display,
{
    let mut report = LawReport::new(suite);
    for a in samples {
        report.case();
        if !ord.leq(a, a) {
            report.violation(format!("a={a}"), "leq(a,a)", "refuted");
        }
    }
    for a in samples {
        for b in samples {
            report.case();
            if ord.leq(a, b) && ord.leq(b, a) && a != b {
                report.violation(format!("a={a} b={b}"), "a = b from mutual leq", "distinct");
            }
            if let Ok(m) = ord.try_meet(a, b) {
                if !(ord.leq(&m, a) && ord.leq(&m, b)) {
                    report.violation(
                        format!("a={a} b={b}"),
                        "meet below both arguments",
                        format!("meet={m}"),
                    );
                }
                for c in samples {
                    if ord.leq(c, a) && ord.leq(c, b) && !ord.leq(c, &m) {
                        report.violation(
                            format!("a={a} b={b} c={c}"),
                            "lower bound c below meet",
                            format!("meet={m}"),
                        );
                    }
                }
            }
            if let Ok(j) = ord.try_join(a, b) {
                if !(ord.leq(a, &j) && ord.leq(b, &j)) {
                    report.violation(
                        format!("a={a} b={b}"),
                        "join above both arguments",
                        format!("join={j}"),
                    );
                }
                for c in samples {
                    if ord.leq(a, c) && ord.leq(b, c) && !ord.leq(&j, c) {
                        report.violation(
                            format!("a={a} b={b} c={c}"),
                            "upper bound c above join",
                            format!("join={j}"),
                        );
                    }
                }
            }
            for c in samples {
                report.case();
                if ord.leq(a, b) && ord.leq(b, c) && !ord.leq(a, c) {
                    report.violation(
                        format!("a={a} b={b} c={c}"),
                        "transitivity",
                        "leq(a,c) refuted",
                    );
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn rational_order_bounds() {
        let ord = RationalValueOrder;
        let set = [q(3, 2), q(1, 2), q(5, 2)];
        assert_eq!(finite_inf(&ord, &set).unwrap(), q(1, 2));
        assert_eq!(finite_sup(&ord, &set).unwrap(), q(5, 2));
        let rel = ValuePreorder(ord);
        assert!(is_lower_bound(&rel, &Rational::from_int(0), &set).unwrap());
        assert!(!is_upper_bound(&rel, &Rational::from_int(2), &set).unwrap());
        assert!(is_upper_bound(&rel, &q(5, 2), &set).unwrap());
        assert!(matches!(
            finite_inf(&ord, &[] as &[Rational]),
            Err(OrdcloseError::EmptySet)
        ));
    }

    #[test]
    fn empty_set_has_no_bounds() {
        let rel = ValuePreorder(RationalValueOrder);
        assert!(matches!(
            is_lower_bound(&rel, &Rational::zero(), &[]),
            Err(OrdcloseError::EmptySet)
        ));
    }

    #[test]
    fn subset_order_meets_are_intersections() {
        let ord = SubsetValueOrder::new(0b111, SubsetDirection::Subset);
        assert_eq!(ord.try_meet(&0b011, &0b110).unwrap(), 0b010);
        assert_eq!(ord.try_join(&0b011, &0b110).unwrap(), 0b111);
        assert!(ord.leq(&0b010, &0b011));
        assert!(!ord.leq(&0b011, &0b010));
        // The empty set is below every subset.
        assert!(ord.leq(&0, &0b101));

        let rev = SubsetValueOrder::new(0b111, SubsetDirection::Superset);
        assert!(rev.leq(&0b011, &0b010));
        assert_eq!(rev.try_meet(&0b011, &0b110).unwrap(), 0b111);
    }

    #[test]
    fn discrete_order_rejects_distinct_meets() {
        let ord = DiscreteValueOrder::<u32>::new();
        assert!(matches!(ord.try_meet(&1, &2), Err(OrdcloseError::NoMeet)));
        assert!(matches!(ord.try_join(&1, &2), Err(OrdcloseError::NoJoin)));
        assert_eq!(ord.try_meet(&3, &3).unwrap(), 3);
        assert!(matches!(
            finite_inf(&ord, &[1u32, 2]),
            Err(OrdcloseError::NoMeet)
        ));
        assert_eq!(ord.width(&1, &1), Some(Rational::zero()));
        assert_eq!(ord.width(&1, &2), None);
    }

    #[test]
    fn ext_rational_width() {
        let ord = ExtRationalValueOrder;
        let one = ExtRational::Finite(Rational::one());
        let inf = ExtRational::Infinity;
        assert_eq!(ord.width(&one, &inf), None);
        assert_eq!(ord.width(&inf, &inf), Some(Rational::zero()));
        assert!(ord.leq(&one, &inf));
        assert!(!ord.leq(&inf, &one));
    }

    #[test]
    fn preorder_laws_on_total_order() {
        let rel = ValuePreorder(RationalValueOrder);
        let samples = [q(-1, 1), Rational::zero(), q(1, 2)];
        let report = check_preorder_laws(&rel, &samples, "rational-leq");
        assert!(report.passed());
        assert_eq!(report.skipped, 0);
    }

    #[test]
    fn strict_order_fails_reflexivity() {
        struct StrictLess;
        impl Preorder for StrictLess {
            type Elem = i64;
            fn try_leq(&self, a: &i64, b: &i64) -> Option<bool> {
                Some(a < b)
            }
        }
        let report = check_preorder_laws(&StrictLess, &[3], "strict-less");
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].inputs, "a=3");
    }

    #[test]
    fn value_order_laws_hold_on_samples() {
        let report = check_value_order_laws(
            &RationalValueOrder,
            &[q(-2, 3), Rational::zero(), q(7, 5), q(7, 5)],
            "rational-lattice",
        );
        assert!(report.passed(), "{:?}", report.violations);

        let ord = SubsetValueOrder::new(0b1111, SubsetDirection::Subset);
        let report = check_value_order_laws(&ord, &[0b0011, 0b0110, 0b1000, 0], "subset-lattice");
        assert!(report.passed(), "{:?}", report.violations);
    }
}
