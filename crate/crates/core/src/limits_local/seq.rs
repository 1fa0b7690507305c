//! Real sequences under the "finally ≤" preorder, and net limits as the
//! extension of "value of a constant sequence".
//!
//! Sequences are closed syntax trees, so tail information is structural:
//! every expression can bound its tail set {f(n) | n ≥ N} by interval
//! arithmetic, and many can report exact liminf/limsup. The comparison
//! `f ≤ g finally` is only semi-decidable; the preorder answers with a
//! certificate, a refutation, or honestly not at all.

use std::collections::BTreeMap;
use std::fmt;

use super::interval::{iv_abs, iv_add, iv_max, iv_mul, iv_neg, iv_scale, Iv};
use crate::engine::{
    extend, ApproximantGenerator, Enclosure, ExtensionOutcome, ExtensionProblem, GapCertificate,
    GeneratorStep, IsotonicMap,
};
use crate::order::{Preorder, RationalValueOrder};
use crate::rational::Rational;
use crate::OrdcloseError;

/// A real sequence given by structure. Indexing starts at 0.
#[derive(Debug, Clone, PartialEq)]
pub enum SeqExpr {
    Const(Rational),
    /// n ↦ 1/(n+1).
    Harmonic,
    /// n ↦ (−1)ⁿ.
    AltSign,
    Add(Box<SeqExpr>, Box<SeqExpr>),
    Neg(Box<SeqExpr>),
    Scale(Rational, Box<SeqExpr>),
    Mul(Box<SeqExpr>, Box<SeqExpr>),
    Abs(Box<SeqExpr>),
    Max(Box<SeqExpr>, Box<SeqExpr>),
    /// Finitely many overridden entries on top of a base sequence.
    Patch(BTreeMap<u64, Rational>, Box<SeqExpr>),
}

impl SeqExpr {
    pub fn constant(c: impl Into<Rational>) -> Self {
        SeqExpr::Const(c.into())
    }

    pub fn add(a: SeqExpr, b: SeqExpr) -> Self {
        SeqExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: SeqExpr, b: SeqExpr) -> Self {
        SeqExpr::add(a, SeqExpr::Neg(Box::new(b)))
    }

    pub fn scale(c: Rational, a: SeqExpr) -> Self {
        SeqExpr::Scale(c, Box::new(a))
    }

    pub fn mul(a: SeqExpr, b: SeqExpr) -> Self {
        SeqExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn abs(a: SeqExpr) -> Self {
        SeqExpr::Abs(Box::new(a))
    }

    pub fn max(a: SeqExpr, b: SeqExpr) -> Self {
        SeqExpr::Max(Box::new(a), Box::new(b))
    }

    pub fn neg(a: SeqExpr) -> Self {
        SeqExpr::Neg(Box::new(a))
    }

    pub fn patched(entries: BTreeMap<u64, Rational>, base: SeqExpr) -> Self {
        SeqExpr::Patch(entries, Box::new(base))
    }

    pub fn eval(&self, n: u64) -> Rational {
        match self {
            SeqExpr::Const(c) => c.clone(),
            SeqExpr::Harmonic => Rational::new(1, n + 1).expect("positive denominator"),
            SeqExpr::AltSign => {
                if n % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                }
            }
            SeqExpr::Add(a, b) => a.eval(n) + b.eval(n),
            SeqExpr::Neg(a) => -a.eval(n),
            SeqExpr::Scale(c, a) => c * &a.eval(n),
            SeqExpr::Mul(a, b) => a.eval(n) * b.eval(n),
            SeqExpr::Abs(a) => a.eval(n).abs(),
            SeqExpr::Max(a, b) => a.eval(n).max(b.eval(n)),
            SeqExpr::Patch(entries, base) => {
                entries.get(&n).cloned().unwrap_or_else(|| base.eval(n))
            }
        }
    }

    fn tail_iv(&self, start: u64) -> Iv {
        match self {
            SeqExpr::Const(c) => (c.clone(), c.clone()),
            SeqExpr::Harmonic => (
                Rational::zero(),
                Rational::new(1, start + 1).expect("positive denominator"),
            ),
            SeqExpr::AltSign => (-Rational::one(), Rational::one()),
            SeqExpr::Add(a, b) => iv_add(&a.tail_iv(start), &b.tail_iv(start)),
            SeqExpr::Neg(a) => iv_neg(&a.tail_iv(start)),
            SeqExpr::Scale(c, a) => iv_scale(c, &a.tail_iv(start)),
            SeqExpr::Mul(a, b) => iv_mul(&a.tail_iv(start), &b.tail_iv(start)),
            SeqExpr::Abs(a) => iv_abs(&a.tail_iv(start)),
            SeqExpr::Max(a, b) => iv_max(&a.tail_iv(start), &b.tail_iv(start)),
            SeqExpr::Patch(entries, base) => {
                let mut iv = base.tail_iv(start);
                for (_, v) in entries.range(start..) {
                    iv.0 = iv.0.min(v.clone());
                    iv.1 = iv.1.max(v.clone());
                }
                iv
            }
        }
    }

    /// Interval bounding every value f(n) with n ≥ start. Nested in
    /// `start` by construction.
    pub fn tail_range(&self, start: u64) -> Enclosure<Rational> {
        let (lo, hi) = self.tail_iv(start);
        Enclosure::new(&RationalValueOrder, lo, hi).expect("interval arithmetic is ordered")
    }

    /// Exact (liminf, limsup) where the structure determines them; `None`
    /// whenever the combination could be loose, so a `Some` is always a
    /// certificate.
    pub fn liminf_limsup(&self) -> Option<(Rational, Rational)> {
        match self {
            SeqExpr::Const(c) => Some((c.clone(), c.clone())),
            SeqExpr::Harmonic => Some((Rational::zero(), Rational::zero())),
            SeqExpr::AltSign => Some((-Rational::one(), Rational::one())),
            SeqExpr::Add(a, b) => match (a.as_constant(), b.as_constant()) {
                (Some(c), _) => {
                    let (li, ls) = b.liminf_limsup()?;
                    Some((&c + &li, &c + &ls))
                }
                (_, Some(c)) => {
                    let (li, ls) = a.liminf_limsup()?;
                    Some((&li + &c, &ls + &c))
                }
                _ => None,
            },
            SeqExpr::Neg(a) => {
                let (li, ls) = a.liminf_limsup()?;
                Some((-ls, -li))
            }
            SeqExpr::Scale(c, a) => {
                let (li, ls) = a.liminf_limsup()?;
                Some(if c.is_negative() {
                    (c * &ls, c * &li)
                } else {
                    (c * &li, c * &ls)
                })
            }
            SeqExpr::Mul(a, b) => match (a.as_constant(), b.as_constant()) {
                (Some(c), _) => SeqExpr::Scale(c, b.clone()).liminf_limsup(),
                (_, Some(c)) => SeqExpr::Scale(c, a.clone()).liminf_limsup(),
                _ => None,
            },
            SeqExpr::Abs(a) => {
                let (li, ls) = a.liminf_limsup()?;
                if !li.is_negative() {
                    Some((li, ls))
                } else if !ls.is_positive() {
                    Some((-ls, -li))
                } else {
                    None
                }
            }
            SeqExpr::Max(a, b) => match (a.as_constant(), b.as_constant()) {
                (Some(c), _) => {
                    let (li, ls) = b.liminf_limsup()?;
                    Some((li.max(c.clone()), ls.max(c)))
                }
                (_, Some(c)) => {
                    let (li, ls) = a.liminf_limsup()?;
                    Some((li.max(c.clone()), ls.max(c)))
                }
                _ => None,
            },
            SeqExpr::Patch(_, base) => base.liminf_limsup(),
        }
    }

    /// The constant value, if the expression is structurally constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self {
            SeqExpr::Const(c) => Some(c.clone()),
            SeqExpr::Harmonic | SeqExpr::AltSign => None,
            SeqExpr::Add(a, b) => Some(a.as_constant()? + b.as_constant()?),
            SeqExpr::Neg(a) => Some(-a.as_constant()?),
            SeqExpr::Scale(c, a) => Some(c * &a.as_constant()?),
            SeqExpr::Mul(a, b) => Some(a.as_constant()? * b.as_constant()?),
            SeqExpr::Abs(a) => Some(a.as_constant()?.abs()),
            SeqExpr::Max(a, b) => Some(a.as_constant()?.max(b.as_constant()?)),
            SeqExpr::Patch(entries, base) => {
                let c = base.as_constant()?;
                entries.values().all(|v| *v == c).then_some(c)
            }
        }
    }

    /// The expression with every finite patch removed; two sequences with
    /// equal stripped forms agree from some index on.
    pub fn strip_patches(&self) -> SeqExpr {
        match self {
            SeqExpr::Patch(_, base) => base.strip_patches(),
            SeqExpr::Add(a, b) => SeqExpr::add(a.strip_patches(), b.strip_patches()),
            SeqExpr::Neg(a) => SeqExpr::neg(a.strip_patches()),
            SeqExpr::Scale(c, a) => SeqExpr::scale(c.clone(), a.strip_patches()),
            SeqExpr::Mul(a, b) => SeqExpr::mul(a.strip_patches(), b.strip_patches()),
            SeqExpr::Abs(a) => SeqExpr::abs(a.strip_patches()),
            SeqExpr::Max(a, b) => SeqExpr::max(a.strip_patches(), b.strip_patches()),
            other => other.clone(),
        }
    }
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqExpr::Const(c) => write!(f, "{c}"),
            SeqExpr::Harmonic => write!(f, "1/(n+1)"),
            SeqExpr::AltSign => write!(f, "(-1)^n"),
            SeqExpr::Add(a, b) => write!(f, "({a} + {b})"),
            SeqExpr::Neg(a) => write!(f, "-({a})"),
            SeqExpr::Scale(c, a) => write!(f, "{c}*({a})"),
            SeqExpr::Mul(a, b) => write!(f, "({a})*({b})"),
            SeqExpr::Abs(a) => write!(f, "|{a}|"),
            SeqExpr::Max(a, b) => write!(f, "max({a}, {b})"),
            SeqExpr::Patch(entries, base) => {
                write!(f, "patch[")?;
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}:{v}")?;
                }
                write!(f, "]({base})")
            }
        }
    }
}

/// Tail-start indices tried when certifying a "finally" comparison.
fn tail_probes() -> impl Iterator<Item = u64> {
    std::iter::once(0).chain((0..21).map(|j| 1u64 << j))
}

/// The preorder "f(n) ≤ g(n) from some index on". Decided structurally:
/// equal patch-stripped forms certify it, a one-signed tail of g − f
/// certifies or refutes it, a negative liminf of g − f refutes it, and
/// everything else stays undecided.
#[derive(Debug, Clone, Copy, Default)]
pub struct FinallyLeq;

impl Preorder for FinallyLeq {
    type Elem = SeqExpr;

    fn try_leq(&self, f: &SeqExpr, g: &SeqExpr) -> Option<bool> {
        if f.strip_patches() == g.strip_patches() {
            return Some(true);
        }
        let diff = SeqExpr::sub(g.clone(), f.clone());
        for start in tail_probes() {
            let t = diff.tail_range(start);
            if !t.lower().is_negative() {
                return Some(true);
            }
            if t.upper().is_negative() {
                return Some(false);
            }
        }
        if let Some((li, _)) = diff.liminf_limsup() {
            if li.is_negative() {
                // g − f dips below a negative level infinitely often.
                return Some(false);
            }
            if li.is_positive() {
                return Some(true);
            }
        }
        None
    }
}

/// Kernel map of the limit instance: a constant sequence to its value.
#[derive(Debug, Clone, Copy, Default)]
pub struct SeqLimitPhi;

impl IsotonicMap for SeqLimitPhi {
    type Input = SeqExpr;
    type Value = Rational;

    fn in_kernel(&self, a: &SeqExpr) -> bool {
        a.as_constant().is_some()
    }

    fn eval(&self, a: &SeqExpr) -> Result<Enclosure<Rational>, OrdcloseError> {
        let c = a
            .as_constant()
            .ok_or_else(|| OrdcloseError::Domain(format!("{a} is not a constant sequence")))?;
        Ok(Enclosure::point(c))
    }
}

pub type SeqLimitProblem = ExtensionProblem<FinallyLeq, RationalValueOrder, SeqLimitPhi>;

pub fn seq_limit_problem() -> SeqLimitProblem {
    ExtensionProblem {
        candidate_order: FinallyLeq,
        value_order: RationalValueOrder,
        phi: SeqLimitPhi,
    }
}

/// Witness schedule: step k reads the tail from start index 2^(k−1) and
/// emits both tail bounds as constant sequences. A certified oscillation
/// (exact liminf < limsup) is reported once as a gap.
#[derive(Debug, Clone, Copy, Default)]
pub struct TailSchedule;

impl ApproximantGenerator for TailSchedule {
    type Candidate = SeqExpr;

    fn next_step(
        &mut self,
        f: &SeqExpr,
        k: u64,
    ) -> Result<GeneratorStep<SeqExpr>, OrdcloseError> {
        let start = if k == 0 { 0 } else { 1u64 << (k - 1).min(62) };
        let tail = f.tail_range(start);
        let gap = if k == 0 {
            match f.liminf_limsup() {
                Some((li, ls)) if ls > li => Some(GapCertificate {
                    width: &ls - &li,
                    reason: format!("{f} oscillates: exact liminf {li}, exact limsup {ls}"),
                }),
                _ => None,
            }
        } else {
            None
        };
        Ok(GeneratorStep {
            lower: Some(SeqExpr::Const(tail.lower().clone())),
            upper: Some(SeqExpr::Const(tail.upper().clone())),
            cost: 1,
            gap,
            exhausted: false,
        })
    }
}

/// Limit of a sequence as an extension outcome: converged enclosures
/// contain the limit, certified oscillation reports the liminf/limsup
/// gap.
pub fn net_limit(
    f: &SeqExpr,
    tol: &Rational,
    budget: u64,
) -> Result<ExtensionOutcome<Rational>, OrdcloseError> {
    let problem = seq_limit_problem();
    let mut gen = TailSchedule;
    extend(&problem, &mut gen, f, tol, budget)
}

/// Metric used when reducing vector sequences to real distance nets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// max_i |a_i − b_i|
    Max,
    /// Σ_i |a_i − b_i|
    Sum,
}

/// The distance net n ↦ d(f(n), x) as a sequence expression.
pub fn distance_net(
    components: &[SeqExpr],
    x: &[Rational],
    metric: Metric,
) -> Result<SeqExpr, OrdcloseError> {
    if components.is_empty() || components.len() != x.len() {
        return Err(OrdcloseError::InvalidInput(
            "component and point dimensions must match and be nonzero".into(),
        ));
    }
    let mut parts = components.iter().zip(x).map(|(f, xi)| {
        SeqExpr::abs(SeqExpr::sub(f.clone(), SeqExpr::Const(xi.clone())))
    });
    let first = parts.next().expect("nonempty");
    Ok(parts.fold(first, |acc, p| match metric {
        Metric::Max => SeqExpr::max(acc, p),
        Metric::Sum => SeqExpr::add(acc, p),
    }))
}

/// Verdict for "does this nonnegative net converge to zero".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroLimitVerdict {
    /// Converged with 0 inside the enclosure at the requested width.
    Confirmed,
    /// The net certifiably stays away from 0 or has no limit at all.
    Refuted,
    /// Budget ran out or the net was never bracketed.
    Inconclusive,
}

pub fn classify_zero_limit(outcome: &ExtensionOutcome<Rational>) -> ZeroLimitVerdict {
    use crate::engine::ExtensionStatus::*;
    if let Some(enc) = &outcome.enclosure {
        if enc.lower().is_positive() {
            return ZeroLimitVerdict::Refuted;
        }
    }
    match &outcome.status {
        GapAtLeast(_) => ZeroLimitVerdict::Refuted,
        Converged => {
            let enc = outcome.enclosure.as_ref().expect("converged encloses");
            if enc.contains(&RationalValueOrder, &Rational::zero()) {
                ZeroLimitVerdict::Confirmed
            } else {
                ZeroLimitVerdict::Refuted
            }
        }
        _ => ZeroLimitVerdict::Inconclusive,
    }
}

/// Whether x is the limit of a vector sequence, via the distance net.
pub fn metric_limit_check(
    components: &[SeqExpr],
    x: &[Rational],
    metric: Metric,
    tol: &Rational,
    budget: u64,
) -> Result<(ExtensionOutcome<Rational>, ZeroLimitVerdict), OrdcloseError> {
    let dist = distance_net(components, x, metric)?;
    let outcome = net_limit(&dist, tol, budget)?;
    let verdict = classify_zero_limit(&outcome);
    Ok((outcome, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ExtensionStatus;
    use crate::order::check_preorder_laws;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn tol(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn constant_sequence_is_its_own_limit() {
        let out = net_limit(&SeqExpr::constant(q(7, 1)), &tol("1e-6"), 100).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        assert_eq!(out.iterations, 1);
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &q(7, 1));
        assert_eq!(enc.upper(), &q(7, 1));
    }

    #[test]
    fn harmonic_converges_to_zero() {
        let out = net_limit(&SeqExpr::Harmonic, &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        let enc = out.enclosure.unwrap();
        assert!(enc.contains(&RationalValueOrder, &Rational::zero()));
        assert!(enc.width(&RationalValueOrder).unwrap() <= tol("1e-6"));
    }

    #[test]
    fn alternating_sequence_has_certified_gap() {
        let out = net_limit(&SeqExpr::AltSign, &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::GapAtLeast(q(2, 1)));
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &q(-1, 1));
        assert_eq!(enc.upper(), &q(1, 1));
        assert!(out.certificate.unwrap().contains("liminf"));
    }

    #[test]
    fn scaled_alternation_scales_the_gap() {
        let f = SeqExpr::scale(q(3, 1), SeqExpr::AltSign);
        let out = net_limit(&f, &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::GapAtLeast(q(6, 1)));
    }

    #[test]
    fn shifted_harmonic_converges_to_shift() {
        let f = SeqExpr::add(SeqExpr::Harmonic, SeqExpr::constant(q(5, 1)));
        let out = net_limit(&f, &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        assert!(out
            .enclosure
            .unwrap()
            .contains(&RationalValueOrder, &q(5, 1)));
    }

    #[test]
    fn patched_constant_recovers_base_value() {
        let f = SeqExpr::patched(
            BTreeMap::from([(0, q(99, 1)), (3, q(-4, 1))]),
            SeqExpr::constant(q(7, 1)),
        );
        assert!(f.as_constant().is_none());
        let out = net_limit(&f, &tol("1e-9"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &q(7, 1));
        assert_eq!(enc.upper(), &q(7, 1));
    }

    #[test]
    fn finally_leq_is_not_antisymmetric() {
        let f = SeqExpr::patched(BTreeMap::from([(0, q(99, 1))]), SeqExpr::constant(q(7, 1)));
        let g = SeqExpr::constant(q(7, 1));
        assert_ne!(f, g);
        assert_eq!(FinallyLeq.try_leq(&f, &g), Some(true));
        assert_eq!(FinallyLeq.try_leq(&g, &f), Some(true));
    }

    #[test]
    fn finally_leq_certifies_and_refutes() {
        let rel = FinallyLeq;
        // 1/(n+1) ≤ 2 finally (in fact everywhere).
        assert_eq!(
            rel.try_leq(&SeqExpr::Harmonic, &SeqExpr::constant(q(2, 1))),
            Some(true)
        );
        // 2 ≤ 1/(n+1) fails on every tail.
        assert_eq!(
            rel.try_leq(&SeqExpr::constant(q(2, 1)), &SeqExpr::Harmonic),
            Some(false)
        );
        // (−1)ⁿ ≤ 0 is violated infinitely often, certified by liminf.
        assert_eq!(
            rel.try_leq(&SeqExpr::AltSign, &SeqExpr::constant(Rational::zero())),
            Some(false)
        );
        // 0 ≤ (−1)ⁿ likewise.
        assert_eq!(
            rel.try_leq(&SeqExpr::constant(Rational::zero()), &SeqExpr::AltSign),
            Some(false)
        );
        // (−1)ⁿ ≤ 1 holds everywhere.
        assert_eq!(
            rel.try_leq(&SeqExpr::AltSign, &SeqExpr::constant(Rational::one())),
            Some(true)
        );
    }

    #[test]
    fn preorder_laws_hold_on_samples() {
        let samples = vec![
            SeqExpr::constant(Rational::zero()),
            SeqExpr::constant(q(1, 2)),
            SeqExpr::Harmonic,
            SeqExpr::AltSign,
            SeqExpr::add(SeqExpr::Harmonic, SeqExpr::constant(q(1, 1))),
            SeqExpr::scale(q(-2, 1), SeqExpr::Harmonic),
        ];
        let report = check_preorder_laws(&FinallyLeq, &samples, "finally-leq");
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.skipped > 0, "some comparisons must stay undecided");
    }

    #[test]
    fn enclosure_contains_liminf_limsup() {
        let fixtures = [
            SeqExpr::AltSign,
            SeqExpr::Harmonic,
            SeqExpr::add(SeqExpr::AltSign, SeqExpr::constant(q(3, 1))),
            SeqExpr::scale(q(-1, 2), SeqExpr::AltSign),
            SeqExpr::max(SeqExpr::AltSign, SeqExpr::constant(Rational::zero())),
            SeqExpr::abs(SeqExpr::neg(SeqExpr::Harmonic)),
        ];
        for f in &fixtures {
            let (li, ls) = f.liminf_limsup().expect("closed-form fixture");
            let out = net_limit(f, &tol("1e-6"), 1000).unwrap();
            let enc = out.enclosure.expect("bracketed fixture");
            assert!(enc.lower() <= &li, "{f}: lower vs liminf");
            assert!(&ls <= enc.upper(), "{f}: limsup vs upper");
        }
    }

    #[test]
    fn metric_limit_confirms_and_refutes() {
        let seq = [SeqExpr::Harmonic, SeqExpr::Harmonic];
        let origin = [Rational::zero(), Rational::zero()];
        let (_, verdict) =
            metric_limit_check(&seq, &origin, Metric::Max, &tol("1e-6"), 1000).unwrap();
        assert_eq!(verdict, ZeroLimitVerdict::Confirmed);

        let away = [Rational::one(), Rational::zero()];
        let (out, verdict) =
            metric_limit_check(&seq, &away, Metric::Max, &tol("1e-6"), 1000).unwrap();
        assert_eq!(verdict, ZeroLimitVerdict::Refuted);
        let enc = out.enclosure.unwrap();
        assert!(enc.contains(&RationalValueOrder, &Rational::one()));

        let constant = [SeqExpr::constant(q(2, 1))];
        let (_, verdict) = metric_limit_check(
            &constant,
            &[q(2, 1)],
            Metric::Sum,
            &tol("1e-6"),
            1000,
        )
        .unwrap();
        assert_eq!(verdict, ZeroLimitVerdict::Confirmed);
    }

    fn arb_seq() -> impl Strategy<Value = SeqExpr> {
        let leaf = prop_oneof![
            (-20i64..20).prop_map(|n| SeqExpr::constant(Rational::ratio(n, 4))),
            Just(SeqExpr::Harmonic),
            Just(SeqExpr::AltSign),
        ];
        leaf.prop_recursive(3, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::add(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| SeqExpr::mul(a, b)),
                inner.clone().prop_map(SeqExpr::neg),
                inner.clone().prop_map(SeqExpr::abs),
                ((-8i64..8), inner.clone())
                    .prop_map(|(c, a)| SeqExpr::scale(Rational::ratio(c, 2), a)),
                (any::<u64>(), -10i64..10, inner)
                    .prop_map(|(k, v, a)| SeqExpr::patched(
                        BTreeMap::from([(k % 16, Rational::int(v))]),
                        a
                    )),
            ]
        })
    }

    proptest! {
        /// Tail ranges are sound and nested.
        #[test]
        fn tail_ranges_nested_and_sound(f in arb_seq(), start in 0u64..32, extra in 0u64..32) {
            let outer = f.tail_range(start);
            let inner = f.tail_range(start + extra);
            prop_assert!(outer.lower() <= inner.lower());
            prop_assert!(inner.upper() <= outer.upper());
            for n in (start..start + 40).step_by(7) {
                let v = f.eval(n);
                prop_assert!(outer.contains(&RationalValueOrder, &v), "{f} at {n}");
            }
        }

        /// A structural liminf/limsup is consistent with every tail range.
        #[test]
        fn liminf_limsup_inside_tails(f in arb_seq(), start in 0u64..64) {
            if let Some((li, ls)) = f.liminf_limsup() {
                let t = f.tail_range(start);
                prop_assert!(t.lower() <= &li);
                prop_assert!(&ls <= t.upper());
                prop_assert!(li <= ls);
            }
        }
    }
}
