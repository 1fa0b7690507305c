//! Law suites for the algebraic structure the extension operator
//! preserves: order compatibility with group and scalar operations, and
//! additivity, scaling, negation, and product homomorphisms checked at
//! the enclosure level against concrete instances.
//!
//! Violations land in a [`LawReport`] with reproduction data; premises
//! that cannot be certified are counted as skips, never as passes.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{Enclosure, ExtensionOutcome, ExtensionStatus};
use crate::integration::{darboux_extend, RangeOracle};
use crate::limits_local::interval::iv_mul;
use crate::limits_local::{net_limit, FnExpr, SeqExpr};
use crate::order::RationalValueOrder;
use crate::rational::Rational;
use crate::report::LawReport;
use crate::OrdcloseError;

/// A group carrying a candidate preorder, packaged as closures so that
/// any instance (step functions, sequences, plain rationals) can be
/// probed with the same harness.
pub struct OrderedGroupWitness<F> {
    pub name: String,
    pub add: Box<dyn Fn(&F, &F) -> F>,
    pub neg: Box<dyn Fn(&F) -> F>,
    pub zero: F,
    /// Three-valued comparison; `None` skips the case.
    pub leq: Box<dyn Fn(&F, &F) -> Option<bool>>,
}

/// Adds positive rational scaling on top of the group structure.
pub struct OrderedVectorWitness<F> {
    pub group: OrderedGroupWitness<F>,
    pub scale: Box<dyn Fn(&Rational, &F) -> F>,
}

fn equiv<F>(w: &OrderedGroupWitness<F>, x: &F, y: &F) -> Option<bool> {
    match ((w.leq)(x, y), (w.leq)(y, x)) {
        (Some(a), Some(b)) => Some(a && b),
        _ => None,
    }
}

/// Checks that the order respects the group operations on the given
/// samples: identity and inverse laws up to order-equivalence,
/// associativity, and the pair compatibility a ≤ b ∧ c ≤ d ⇒ a+c ≤ b+d.
pub fn check_compatibility<F: fmt::Display>(
    w: &OrderedGroupWitness<F>,
    samples: &[F],
) -> LawReport {
    let mut report = LawReport::new(format!("compatibility:{}", w.name));
    for x in samples {
        match equiv(w, &(w.add)(x, &w.zero), x) {
            Some(true) => report.case(),
            Some(false) => report.violation(
                format!("x = {x}"),
                "x + 0 equivalent to x",
                "inequivalent",
            ),
            None => report.skip(),
        }
        match equiv(w, &(w.add)(x, &(w.neg)(x)), &w.zero) {
            Some(true) => report.case(),
            Some(false) => report.violation(
                format!("x = {x}"),
                "x + (-x) equivalent to 0",
                "inequivalent",
            ),
            None => report.skip(),
        }
    }
    for x in samples {
        for y in samples {
            for z in samples {
                let left = (w.add)(&(w.add)(x, y), z);
                let right = (w.add)(x, &(w.add)(y, z));
                match equiv(w, &left, &right) {
                    Some(true) => report.case(),
                    Some(false) => report.violation(
                        format!("x = {x}, y = {y}, z = {z}"),
                        "(x+y)+z equivalent to x+(y+z)",
                        "inequivalent",
                    ),
                    None => report.skip(),
                }
            }
        }
    }
    for a in samples {
        for b in samples {
            if (w.leq)(a, b) != Some(true) {
                continue;
            }
            for c in samples {
                for d in samples {
                    if (w.leq)(c, d) != Some(true) {
                        continue;
                    }
                    match (w.leq)(&(w.add)(a, c), &(w.add)(b, d)) {
                        Some(true) => report.case(),
                        Some(false) => report.violation(
                            format!("a = {a}, b = {b}, c = {c}, d = {d}"),
                            "a+c at most b+d",
                            "comparison refuted",
                        ),
                        None => report.skip(),
                    }
                }
            }
        }
    }
    report
}

/// [`check_compatibility`] plus positive-scaling compatibility:
/// a ≤ b ∧ λ > 0 ⇒ λa ≤ λb. Nonpositive scalars are skipped.
pub fn check_vector_compatibility<F: fmt::Display>(
    w: &OrderedVectorWitness<F>,
    samples: &[F],
    scalars: &[Rational],
) -> LawReport {
    let mut report = check_compatibility(&w.group, samples);
    for lambda in scalars {
        if !lambda.is_positive() {
            report.skip();
            continue;
        }
        for a in samples {
            for b in samples {
                if (w.group.leq)(a, b) != Some(true) {
                    continue;
                }
                match (w.group.leq)(&(w.scale)(lambda, a), &(w.scale)(lambda, b)) {
                    Some(true) => report.case(),
                    Some(false) => report.violation(
                        format!("lambda = {lambda}, a = {a}, b = {b}"),
                        "lambda*a at most lambda*b",
                        "comparison refuted",
                    ),
                    None => report.skip(),
                }
            }
        }
    }
    report
}

/// An instantiation whose candidates form a vector space the extension
/// operator is expected to act linearly on.
pub trait AlgebraInstance {
    type Candidate: Clone + fmt::Display;

    fn name(&self) -> &'static str;
    fn add(&self, f: &Self::Candidate, g: &Self::Candidate) -> Self::Candidate;
    fn neg(&self, f: &Self::Candidate) -> Self::Candidate;
    fn scale(&self, c: &Rational, f: &Self::Candidate) -> Self::Candidate;
    fn extend(
        &self,
        f: &Self::Candidate,
        tol: &Rational,
        budget: u64,
    ) -> Result<ExtensionOutcome<Rational>, OrdcloseError>;
}

/// Sequence limits under the eventual order.
pub struct LimitsInstance;

impl AlgebraInstance for LimitsInstance {
    type Candidate = SeqExpr;

    fn name(&self) -> &'static str {
        "limits"
    }

    fn add(&self, f: &SeqExpr, g: &SeqExpr) -> SeqExpr {
        SeqExpr::add(f.clone(), g.clone())
    }

    fn neg(&self, f: &SeqExpr) -> SeqExpr {
        SeqExpr::neg(f.clone())
    }

    fn scale(&self, c: &Rational, f: &SeqExpr) -> SeqExpr {
        SeqExpr::scale(c.clone(), f.clone())
    }

    fn extend(
        &self,
        f: &SeqExpr,
        tol: &Rational,
        budget: u64,
    ) -> Result<ExtensionOutcome<Rational>, OrdcloseError> {
        net_limit(f, tol, budget)
    }
}

/// Darboux integrals over a fixed interval under the pointwise order.
pub struct RiemannInstance {
    pub a: Rational,
    pub b: Rational,
}

impl RiemannInstance {
    pub fn unit() -> Self {
        RiemannInstance {
            a: Rational::zero(),
            b: Rational::one(),
        }
    }
}

impl AlgebraInstance for RiemannInstance {
    type Candidate = FnExpr;

    fn name(&self) -> &'static str {
        "riemann"
    }

    fn add(&self, f: &FnExpr, g: &FnExpr) -> FnExpr {
        FnExpr::add(f.clone(), g.clone())
    }

    fn neg(&self, f: &FnExpr) -> FnExpr {
        FnExpr::neg(f.clone())
    }

    fn scale(&self, c: &Rational, f: &FnExpr) -> FnExpr {
        FnExpr::scale(c.clone(), f.clone())
    }

    fn extend(
        &self,
        f: &FnExpr,
        tol: &Rational,
        budget: u64,
    ) -> Result<ExtensionOutcome<Rational>, OrdcloseError> {
        darboux_extend(&RangeOracle::Fn(f.clone()), &self.a, &self.b, tol, budget)
    }
}

fn converged<I: AlgebraInstance>(
    instance: &I,
    f: &I::Candidate,
    tol: &Rational,
    budget: u64,
) -> Option<Enclosure<Rational>> {
    match instance.extend(f, tol, budget) {
        Ok(out) if out.status == ExtensionStatus::Converged => out.enclosure,
        _ => None,
    }
}

fn mid(e: &Enclosure<Rational>) -> Rational {
    e.lower().midpoint(e.upper())
}

/// The extension of f+g agrees with the interval sum of the separate
/// extensions: enclosures intersect and midpoints stay within 2·tol.
/// Each pair also checks the mirror law on -f.
pub fn additivity_suite<I: AlgebraInstance>(
    instance: &I,
    pairs: &[(I::Candidate, I::Candidate)],
    tol: &Rational,
    budget: u64,
    seed: u64,
) -> LawReport {
    let mut report = LawReport::with_seed(format!("additivity:{}", instance.name()), seed);
    let ord = RationalValueOrder;
    let two_tol = tol + tol;
    for (f, g) in pairs {
        let sum = instance.add(f, g);
        let parts = (
            converged(instance, f, tol, budget),
            converged(instance, g, tol, budget),
            converged(instance, &sum, tol, budget),
        );
        let (Some(ef), Some(eg), Some(es)) = parts else {
            report.skip();
            continue;
        };
        let combined = Enclosure::new(&ord, ef.lower() + eg.lower(), ef.upper() + eg.upper())
            .expect("sum of ordered endpoints stays ordered");
        if es.intersect(&ord, &combined).is_err() {
            report.violation(
                format!("f = {f}, g = {g}"),
                "enclosure of f+g meets sum of enclosures",
                format!("[{},{}] vs [{},{}]", es.lower(), es.upper(), combined.lower(), combined.upper()),
            );
        } else if (mid(&es) - mid(&combined)).abs() > two_tol {
            report.violation(
                format!("f = {f}, g = {g}"),
                format!("midpoint discrepancy at most {two_tol}"),
                format!("{}", (mid(&es) - mid(&combined)).abs()),
            );
        } else {
            report.case();
        }
        match converged(instance, &instance.neg(f), tol, budget) {
            Some(en) => {
                let mirrored = Enclosure::new(&ord, -ef.upper(), -ef.lower())
                    .expect("mirrored endpoints stay ordered");
                if en.intersect(&ord, &mirrored).is_ok() {
                    report.case();
                } else {
                    report.violation(
                        format!("f = {f}"),
                        "enclosure of -f meets mirrored enclosure of f",
                        format!("[{},{}]", en.lower(), en.upper()),
                    );
                }
            }
            None => report.skip(),
        }
    }
    report
}

/// The extension of λf agrees with λ times the extension of f, with
/// the width budget scaled by λ. Nonpositive scalars are skipped.
pub fn scaling_suite<I: AlgebraInstance>(
    instance: &I,
    pairs: &[(Rational, I::Candidate)],
    tol: &Rational,
    budget: u64,
    seed: u64,
) -> LawReport {
    let mut report = LawReport::with_seed(format!("scaling:{}", instance.name()), seed);
    let ord = RationalValueOrder;
    for (lambda, f) in pairs {
        if !lambda.is_positive() {
            report.skip();
            continue;
        }
        let scaled_tol = lambda * tol;
        let parts = (
            converged(instance, f, tol, budget),
            converged(instance, &instance.scale(lambda, f), &scaled_tol, budget),
        );
        let (Some(ef), Some(el)) = parts else {
            report.skip();
            continue;
        };
        let expected = Enclosure::new(&ord, lambda * ef.lower(), lambda * ef.upper())
            .expect("positive scaling keeps endpoints ordered");
        if el.intersect(&ord, &expected).is_err() {
            report.violation(
                format!("lambda = {lambda}, f = {f}"),
                "enclosure of lambda*f meets scaled enclosure",
                format!("[{},{}] vs [{},{}]", el.lower(), el.upper(), expected.lower(), expected.upper()),
            );
        } else if el.width(&ord).map_or(true, |w| w > scaled_tol) {
            report.violation(
                format!("lambda = {lambda}, f = {f}"),
                format!("width at most {scaled_tol}"),
                "wider enclosure",
            );
        } else {
            report.case();
        }
    }
    report
}

/// For convergent bounded sequences, the extension of f·g meets the
/// interval product of the separate extensions.
pub fn product_suite_limits(
    pairs: &[(SeqExpr, SeqExpr)],
    tol: &Rational,
    budget: u64,
    seed: u64,
) -> LawReport {
    let mut report = LawReport::with_seed("product:limits", seed);
    let instance = LimitsInstance;
    let ord = RationalValueOrder;
    for (f, g) in pairs {
        let prod = SeqExpr::mul(f.clone(), g.clone());
        let parts = (
            converged(&instance, f, tol, budget),
            converged(&instance, g, tol, budget),
            converged(&instance, &prod, tol, budget),
        );
        let (Some(ef), Some(eg), Some(ep)) = parts else {
            report.skip();
            continue;
        };
        let (lo, hi) = iv_mul(
            &(ef.lower().clone(), ef.upper().clone()),
            &(eg.lower().clone(), eg.upper().clone()),
        );
        let expected = Enclosure::new(&ord, lo, hi).expect("interval product is ordered");
        if ep.intersect(&ord, &expected).is_ok() {
            report.case();
        } else {
            report.violation(
                format!("f = {f}, g = {g}"),
                "enclosure of f*g meets interval product",
                format!("[{},{}] vs [{},{}]", ep.lower(), ep.upper(), expected.lower(), expected.upper()),
            );
        }
    }
    report
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::ratio(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4))
}

/// A convergent bounded sequence: a constant limit plus a vanishing
/// tail with varied structure.
fn random_convergent(rng: &mut ChaCha8Rng) -> SeqExpr {
    let limit = small_rational(rng);
    let coeff = small_rational(rng);
    let vanish = SeqExpr::scale(coeff, SeqExpr::Harmonic);
    let tail = match rng.gen_range(0u8..4) {
        0 => vanish,
        1 => SeqExpr::neg(vanish),
        2 => SeqExpr::abs(vanish),
        _ => SeqExpr::max(
            vanish,
            SeqExpr::scale(small_rational(rng), SeqExpr::Harmonic),
        ),
    };
    SeqExpr::add(SeqExpr::constant(limit), tail)
}

/// A piecewise-smooth integrand with certified ranges: a low-degree
/// polynomial, possibly wrapped in absolute value or a max.
fn random_integrand(rng: &mut ChaCha8Rng) -> FnExpr {
    let poly = FnExpr::Poly(vec![
        small_rational(rng),
        small_rational(rng),
        small_rational(rng),
    ]);
    match rng.gen_range(0u8..4) {
        0 | 1 => poly,
        2 => FnExpr::abs(FnExpr::linear(small_rational(rng))),
        _ => FnExpr::max(poly, FnExpr::constant(small_rational(rng))),
    }
}

fn positive_scalar(rng: &mut ChaCha8Rng) -> Rational {
    Rational::ratio(rng.gen_range(1i64..=5), rng.gen_range(1i64..=3))
}

pub fn random_seq_pairs(seed: u64, count: usize) -> Vec<(SeqExpr, SeqExpr)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (random_convergent(&mut rng), random_convergent(&mut rng)))
        .collect()
}

pub fn random_integrand_pairs(seed: u64, count: usize) -> Vec<(FnExpr, FnExpr)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (random_integrand(&mut rng), random_integrand(&mut rng)))
        .collect()
}

pub fn random_seq_scalings(seed: u64, count: usize) -> Vec<(Rational, SeqExpr)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (positive_scalar(&mut rng), random_convergent(&mut rng)))
        .collect()
}

pub fn random_integrand_scalings(seed: u64, count: usize) -> Vec<(Rational, FnExpr)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (positive_scalar(&mut rng), random_integrand(&mut rng)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integration::{PointwiseLeq, RiemannCandidate, StepFunction1D};
    use crate::limits_local::FinallyLeq;
    use crate::order::{finite_inf, finite_sup, Preorder};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn tol(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn step_witness() -> OrderedVectorWitness<StepFunction1D> {
        let zero = StepFunction1D::constant(q(0, 1), q(1, 1), q(0, 1)).unwrap();
        let rel = PointwiseLeq;
        OrderedVectorWitness {
            group: OrderedGroupWitness {
                name: "step-functions".into(),
                add: Box::new(|a, b| a.add(b).expect("same domain")),
                neg: Box::new(|a| a.neg()),
                zero,
                leq: Box::new(move |a, b| {
                    rel.try_leq(
                        &RiemannCandidate::Step(a.clone()),
                        &RiemannCandidate::Step(b.clone()),
                    )
                }),
            },
            scale: Box::new(|c, a| a.scale(c)),
        }
    }

    fn step_samples() -> Vec<StepFunction1D> {
        vec![
            StepFunction1D::constant(q(0, 1), q(1, 1), q(0, 1)).unwrap(),
            StepFunction1D::constant(q(0, 1), q(1, 1), q(2, 1)).unwrap(),
            StepFunction1D::constant(q(0, 1), q(1, 1), q(-1, 2)).unwrap(),
            StepFunction1D::new(vec![q(0, 1), q(1, 2), q(1, 1)], vec![q(1, 1), q(3, 1)]).unwrap(),
            StepFunction1D::new(vec![q(0, 1), q(1, 4), q(1, 1)], vec![q(-2, 1), q(1, 2)]).unwrap(),
        ]
    }

    #[test]
    fn step_functions_are_a_compatible_ordered_vector_space() {
        let w = step_witness();
        let scalars = vec![q(1, 2), q(1, 1), q(3, 1)];
        let report = check_vector_compatibility(&w, &step_samples(), &scalars);
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.skipped, 0, "pointwise step comparisons always decide");
        assert!(report.cases > 0);
    }

    #[test]
    fn eventual_order_is_compatible_on_sequences() {
        let rel = FinallyLeq;
        let w = OrderedGroupWitness {
            name: "sequences".into(),
            add: Box::new(|a: &SeqExpr, b: &SeqExpr| SeqExpr::add(a.clone(), b.clone())),
            neg: Box::new(|a: &SeqExpr| SeqExpr::neg(a.clone())),
            zero: SeqExpr::constant(q(0, 1)),
            leq: Box::new(move |a, b| rel.try_leq(a, b)),
        };
        let samples = vec![
            SeqExpr::constant(q(0, 1)),
            SeqExpr::constant(q(1, 1)),
            SeqExpr::Harmonic,
            SeqExpr::scale(q(2, 1), SeqExpr::Harmonic),
            SeqExpr::add(SeqExpr::constant(q(1, 1)), SeqExpr::Harmonic),
        ];
        let report = check_compatibility(&w, &samples);
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.cases > 0);
    }

    #[test]
    fn magnitude_order_on_rationals_is_reported_incompatible() {
        // |x| <= |y| is a genuine preorder on the additive group, but
        // 1 <= -1 and 1 <= 1 while 1+1 exceeds (-1)+1 in magnitude
        let w = OrderedGroupWitness {
            name: "magnitude".into(),
            add: Box::new(|a: &Rational, b: &Rational| a + b),
            neg: Box::new(|a: &Rational| -a.clone()),
            zero: Rational::zero(),
            leq: Box::new(|a, b| Some(a.abs() <= b.abs())),
        };
        let samples = vec![q(1, 1), q(-1, 1), q(0, 1), q(2, 1)];
        let report = check_compatibility(&w, &samples);
        assert!(!report.passed());
    }

    #[test]
    fn integral_of_sum_contains_five_sixths() {
        let instance = RiemannInstance::unit();
        let f = FnExpr::identity();
        let g = FnExpr::Poly(vec![q(0, 1), q(0, 1), q(1, 1)]);
        let report = additivity_suite(
            &instance,
            &[(f.clone(), g.clone())],
            &tol("1e-3"),
            5_000_000,
            0,
        );
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.skipped, 0);

        let out = instance.extend(&instance.add(&f, &g), &tol("1e-3"), 5_000_000).unwrap();
        let enc = out.enclosure.unwrap();
        assert!(enc.contains(&RationalValueOrder, &q(5, 6)));
    }

    #[test]
    fn opposite_vanishing_sequences_cancel() {
        let f = SeqExpr::Harmonic;
        let g = SeqExpr::neg(SeqExpr::Harmonic);
        let instance = LimitsInstance;
        let out = instance
            .extend(&instance.add(&f, &g), &tol("1e-9"), 1_000_000)
            .unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        let enc = out.enclosure.unwrap();
        assert!(enc.contains(&RationalValueOrder, &Rational::zero()));
        assert!(enc.width(&RationalValueOrder).unwrap() <= tol("1e-9"));
    }

    #[test]
    fn adding_zero_changes_nothing() {
        let instance = LimitsInstance;
        let f = SeqExpr::add(SeqExpr::constant(q(3, 1)), SeqExpr::Harmonic);
        let sum = instance.add(&f, &SeqExpr::constant(q(0, 1)));
        let t = tol("1e-6");
        let out_f = instance.extend(&f, &t, 1_000_000).unwrap();
        let out_sum = instance.extend(&sum, &t, 1_000_000).unwrap();
        let ef = out_f.enclosure.unwrap();
        let es = out_sum.enclosure.unwrap();
        assert_eq!(ef.lower(), es.lower());
        assert_eq!(ef.upper(), es.upper());
    }

    #[test]
    fn scaling_triples_the_identity_integral() {
        let instance = RiemannInstance::unit();
        let pairs = vec![(q(3, 1), FnExpr::identity())];
        let report = scaling_suite(&instance, &pairs, &tol("1e-3"), 5_000_000, 0);
        assert!(report.passed(), "{:?}", report.violations);

        let out = instance
            .extend(&instance.scale(&q(3, 1), &FnExpr::identity()), &tol("1e-3"), 5_000_000)
            .unwrap();
        assert!(out
            .enclosure
            .unwrap()
            .contains(&RationalValueOrder, &q(3, 2)));
    }

    #[test]
    fn zero_scalar_collapses_to_the_zero_value() {
        let instance = LimitsInstance;
        let f = SeqExpr::add(SeqExpr::constant(q(5, 1)), SeqExpr::Harmonic);
        let out = instance
            .extend(&instance.scale(&q(0, 1), &f), &tol("1e-9"), 1000)
            .unwrap();
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &Rational::zero());
        assert_eq!(enc.upper(), &Rational::zero());
    }

    #[test]
    fn product_of_vanishing_sequences_vanishes() {
        let pairs = vec![
            (SeqExpr::Harmonic, SeqExpr::Harmonic),
            (
                SeqExpr::add(SeqExpr::constant(q(2, 1)), SeqExpr::Harmonic),
                SeqExpr::sub(SeqExpr::constant(q(3, 1)), SeqExpr::Harmonic),
            ),
        ];
        let report = product_suite_limits(&pairs, &tol("1e-6"), 1_000_000, 0);
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.skipped, 0);

        let prod = SeqExpr::mul(pairs[1].0.clone(), pairs[1].1.clone());
        let out = net_limit(&prod, &tol("1e-6"), 1_000_000).unwrap();
        assert!(out
            .enclosure
            .unwrap()
            .contains(&RationalValueOrder, &q(6, 1)));
    }

    #[test]
    fn multiplying_by_one_changes_nothing() {
        let f = SeqExpr::add(SeqExpr::constant(q(2, 1)), SeqExpr::Harmonic);
        let prod = SeqExpr::mul(f.clone(), SeqExpr::constant(q(1, 1)));
        let t = tol("1e-6");
        let ef = net_limit(&f, &t, 1_000_000).unwrap().enclosure.unwrap();
        let ep = net_limit(&prod, &t, 1_000_000).unwrap().enclosure.unwrap();
        assert_eq!(ef.lower(), ep.lower());
        assert_eq!(ef.upper(), ep.upper());
    }

    #[test]
    fn seeded_suites_pass_on_small_batches() {
        let t = tol("1e-6");
        let limits = LimitsInstance;
        let add = additivity_suite(&limits, &random_seq_pairs(7, 25), &t, 1_000_000, 7);
        assert!(add.passed(), "{:?}", add.violations);
        assert_eq!(add.skipped, 0);

        let sc = scaling_suite(&limits, &random_seq_scalings(11, 25), &t, 1_000_000, 11);
        assert!(sc.passed(), "{:?}", sc.violations);
        assert_eq!(sc.skipped, 0);

        let prod = product_suite_limits(&random_seq_pairs(13, 15), &t, 1_000_000, 13);
        assert!(prod.passed(), "{:?}", prod.violations);

        let riemann = RiemannInstance::unit();
        let rt = tol("1e-1");
        let radd = additivity_suite(&riemann, &random_integrand_pairs(17, 5), &rt, 5_000_000, 17);
        assert!(radd.passed(), "{:?}", radd.violations);
        assert_eq!(radd.skipped, 0);

        let rsc = scaling_suite(&riemann, &random_integrand_scalings(19, 5), &rt, 5_000_000, 19);
        assert!(rsc.passed(), "{:?}", rsc.violations);
        assert_eq!(rsc.skipped, 0);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_seq_pairs(42, 10), random_seq_pairs(42, 10));
        assert_eq!(random_integrand_pairs(42, 10), random_integrand_pairs(42, 10));
    }

    proptest! {
        /// Minima add across set sums and negate into maxima.
        #[test]
        fn finite_bounds_respect_addition_and_negation(
            a in proptest::collection::vec((-20i64..20, 1i64..8), 1..6),
            b in proptest::collection::vec((-20i64..20, 1i64..8), 1..6),
        ) {
            let ord = RationalValueOrder;
            let xs: Vec<Rational> = a.iter().map(|&(n, d)| Rational::ratio(n, d)).collect();
            let ys: Vec<Rational> = b.iter().map(|&(n, d)| Rational::ratio(n, d)).collect();
            let sums: Vec<Rational> = xs
                .iter()
                .flat_map(|x| ys.iter().map(move |y| x + y))
                .collect();
            let inf_sum = finite_inf(&ord, &sums).unwrap();
            let split = finite_inf(&ord, &xs).unwrap() + finite_inf(&ord, &ys).unwrap();
            prop_assert_eq!(inf_sum, split);

            let negs: Vec<Rational> = xs.iter().map(|x| -x.clone()).collect();
            prop_assert_eq!(
                finite_sup(&ord, &negs).unwrap(),
                -finite_inf(&ord, &xs).unwrap()
            );
        }

        /// Nonnegative scaling passes through minima.
        #[test]
        fn finite_inf_scales(
            a in proptest::collection::vec((-20i64..20, 1i64..8), 1..6),
            lam_n in 0i64..9,
            lam_d in 1i64..5,
        ) {
            let ord = RationalValueOrder;
            let lam = Rational::ratio(lam_n, lam_d);
            let xs: Vec<Rational> = a.iter().map(|&(n, d)| Rational::ratio(n, d)).collect();
            let scaled: Vec<Rational> = xs.iter().map(|x| &lam * x).collect();
            prop_assert_eq!(
                finite_inf(&ord, &scaled).unwrap(),
                &lam * &finite_inf(&ord, &xs).unwrap()
            );
        }
    }
}
