//! The extension engine: a generator-driven refinement loop that computes
//! certified two-sided enclosures of the isotonic continuation of a map
//! off its kernel, and classifies the outcome.
//!
//! The loop maintains the best lower value seen (a running join of lower
//! witnesses' values) and the best upper value seen (a running meet).
//! Soundness is unconditional: the true continuation value, when it
//! exists, lies inside every enclosure the engine reports. Convergence
//! and gap verdicts additionally require certificates described below.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::order::{Preorder, ValueOrder};
use crate::rational::Rational;
use crate::report::LawReport;
use crate::OrdcloseError;

/// A two-sided bound `[lower, upper]` in a value order.
///
/// Construction checks the order of the endpoints, so an `Enclosure`
/// always satisfies `lower ≤ upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure<V> {
    lower: V,
    upper: V,
}

impl<V: Clone> Enclosure<V> {
    pub fn new<O>(ord: &O, lower: V, upper: V) -> Result<Self, OrdcloseError>
    where
        O: ValueOrder<Value = V>,
        V: fmt::Display,
    {
        if ord.leq(&lower, &upper) {
            Ok(Enclosure { lower, upper })
        } else {
            Err(OrdcloseError::EnclosureOrder {
                lower: lower.to_string(),
                upper: upper.to_string(),
            })
        }
    }

    /// Degenerate enclosure `[v, v]`; always well ordered by reflexivity.
    pub fn point(v: V) -> Self {
        Enclosure {
            lower: v.clone(),
            upper: v,
        }
    }

    pub fn lower(&self) -> &V {
        &self.lower
    }

    pub fn upper(&self) -> &V {
        &self.upper
    }

    pub fn is_point<O: ValueOrder<Value = V>>(&self, ord: &O) -> bool {
        ord.eq(&self.lower, &self.upper)
    }

    pub fn width<O: ValueOrder<Value = V>>(&self, ord: &O) -> Option<Rational> {
        ord.width(&self.lower, &self.upper)
    }

    pub fn contains<O: ValueOrder<Value = V>>(&self, ord: &O, v: &V) -> bool {
        ord.leq(&self.lower, v) && ord.leq(v, &self.upper)
    }

    /// Intersection of two enclosures of the same quantity. An empty
    /// intersection certifies that the two computations contradict each
    /// other, which is reported as an error.
    pub fn intersect<O>(&self, ord: &O, other: &Self) -> Result<Self, OrdcloseError>
    where
        O: ValueOrder<Value = V>,
        V: fmt::Display,
    {
        let lower = ord.try_join(&self.lower, &other.lower)?;
        let upper = ord.try_meet(&self.upper, &other.upper)?;
        Enclosure::new(ord, lower, upper)
    }
}

impl<V: fmt::Display> fmt::Display for Enclosure<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// An order-preserving partial map: defined on its kernel, evaluated
/// outward. Instances whose values are exactly representable return a
/// point enclosure; instances with irrational values return a two-sided
/// bound that is sound in both directions.
pub trait IsotonicMap {
    type Input: Clone;
    type Value: Clone;

    /// Membership in the kernel, the domain of definition.
    fn in_kernel(&self, a: &Self::Input) -> bool;

    /// Two-sided evaluation; must only be called on kernel members.
    fn eval(&self, a: &Self::Input) -> Result<Enclosure<Self::Value>, OrdcloseError>;
}

/// An instance-certified obstruction: no pair of kernel witnesses around
/// the candidate can bracket tighter than `width`.
#[derive(Debug, Clone)]
pub struct GapCertificate {
    pub width: Rational,
    pub reason: String,
}

/// One refinement step's worth of kernel witnesses.
#[derive(Debug, Clone, Default)]
pub struct GeneratorStep<F> {
    /// A kernel member below the candidate, if this step found one.
    pub lower: Option<F>,
    /// A kernel member above the candidate, if this step found one.
    pub upper: Option<F>,
    /// Elementary operations this step consumed; counted against the
    /// budget, with a floor of one per step.
    pub cost: u64,
    /// Certified persistent gap, independent of remaining budget.
    pub gap: Option<GapCertificate>,
    /// The schedule is finished; further calls would add nothing.
    pub exhausted: bool,
}

impl<F> GeneratorStep<F> {
    pub fn empty() -> Self {
        GeneratorStep {
            lower: None,
            upper: None,
            cost: 1,
            gap: None,
            exhausted: false,
        }
    }
}

/// Produces bracketing kernel witnesses for one candidate, one step at a
/// time. A generator is created per extension call and owns its schedule
/// state; step `k` may refine adaptively or uniformly.
pub trait ApproximantGenerator {
    type Candidate: Clone;

    fn next_step(
        &mut self,
        f: &Self::Candidate,
        k: u64,
    ) -> Result<GeneratorStep<Self::Candidate>, OrdcloseError>;

    /// Whether finishing the schedule certifies that every kernel bound
    /// relevant to the candidate was emitted. True only for instances
    /// that enumerate a finite kernel exhaustively; it upgrades residual
    /// width at exhaustion into a certified gap.
    fn exhaustive_on_finish(&self) -> bool {
        false
    }
}

/// A full extension instance: the candidate preorder, the value order,
/// and the kernel map to be continued.
#[derive(Debug, Clone)]
pub struct ExtensionProblem<P, O, M> {
    pub candidate_order: P,
    pub value_order: O,
    pub phi: M,
}

/// Verdict of an extension run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "width")]
pub enum ExtensionStatus {
    /// Enclosure width within tolerance (numeric orders) or endpoints
    /// coincident (exact orders); the enclosure contains the
    /// continuation value.
    Converged,
    /// The candidate is certifiably outside the closure: kernel bounds
    /// can never bracket it tighter than the given width.
    GapAtLeast(Rational),
    /// Budget ran out before convergence, with no gap certificate.
    /// Inconclusive by design; a larger budget may still converge.
    BudgetExhausted,
    /// Some side produced no kernel witness at all, so the candidate is
    /// not bracketed by the kernel.
    NotKBounded,
}

impl fmt::Display for ExtensionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionStatus::Converged => write!(f, "converged"),
            ExtensionStatus::GapAtLeast(w) => write!(f, "gap at least {w}"),
            ExtensionStatus::BudgetExhausted => write!(f, "budget exhausted"),
            ExtensionStatus::NotKBounded => write!(f, "not kernel-bounded"),
        }
    }
}

/// Result of [`extend`]: status, best enclosure when both sides
/// produced, and the work accounting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionOutcome<V> {
    pub status: ExtensionStatus,
    pub enclosure: Option<Enclosure<V>>,
    pub iterations: u64,
    pub cost: u64,
    /// Human-readable evidence for gap and unbounded verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

impl<V> ExtensionOutcome<V> {
    pub fn converged(&self) -> bool {
        self.status == ExtensionStatus::Converged
    }
}

struct Refinement<V> {
    best_lower: Option<V>,
    best_upper: Option<V>,
    iterations: u64,
    cost: u64,
    gap: Option<GapCertificate>,
    exhausted: bool,
}

fn tighten<P, O, M, G>(
    problem: &ExtensionProblem<P, O, M>,
    gen: &mut G,
    f: &P::Elem,
    tol: Option<&Rational>,
    budget: u64,
) -> Result<Refinement<O::Value>, OrdcloseError>
where
    P: Preorder,
    O: ValueOrder,
    M: IsotonicMap<Input = P::Elem, Value = O::Value>,
    G: ApproximantGenerator<Candidate = P::Elem>,
    P::Elem: fmt::Display,
    O::Value: fmt::Display,
{
    let ord = &problem.value_order;
    let mut state = Refinement {
        best_lower: None,
        best_upper: None,
        iterations: 0,
        cost: 0,
        gap: None,
        exhausted: false,
    };

    // Kernel members are their own bracketing witnesses, so the
    // continuation agrees with the kernel map after this single seed.
    if problem.phi.in_kernel(f) {
        let e = problem.phi.eval(f)?;
        state.best_lower = Some(e.lower().clone());
        state.best_upper = Some(e.upper().clone());
        state.iterations = 1;
        state.cost = 1;
    }

    let mut k = 0;
    while state.cost < budget
        && !state.exhausted
        && !converged(ord, &state, tol)
        && !gap_saturated(ord, &state)
    {
        let step = gen.next_step(f, k)?;
        state.iterations += 1;
        state.cost += step.cost.max(1);
        k += 1;

        if let Some(a) = step.lower {
            if !problem.phi.in_kernel(&a) {
                return Err(OrdcloseError::Domain(format!(
                    "generator emitted lower witness {a} outside the kernel"
                )));
            }
            if problem.candidate_order.try_leq(&a, f) == Some(false) {
                return Err(OrdcloseError::Domain(format!(
                    "generator emitted lower witness {a} refuted below candidate {f}"
                )));
            }
            let e = problem.phi.eval(&a)?;
            state.best_lower = Some(match state.best_lower {
                None => e.lower().clone(),
                Some(cur) => ord.try_join(&cur, e.lower())?,
            });
        }
        if let Some(b) = step.upper {
            if !problem.phi.in_kernel(&b) {
                return Err(OrdcloseError::Domain(format!(
                    "generator emitted upper witness {b} outside the kernel"
                )));
            }
            if problem.candidate_order.try_leq(f, &b) == Some(false) {
                return Err(OrdcloseError::Domain(format!(
                    "generator emitted upper witness {b} refuted above candidate {f}"
                )));
            }
            let e = problem.phi.eval(&b)?;
            state.best_upper = Some(match state.best_upper {
                None => e.upper().clone(),
                Some(cur) => ord.try_meet(&cur, e.upper())?,
            });
        }

        // Witnesses bracket the candidate, so their values must be
        // ordered; a crossing means a broken generator or a
        // non-isotonic kernel map, and the run aborts.
        if let (Some(lo), Some(hi)) = (&state.best_lower, &state.best_upper) {
            if !ord.leq(lo, hi) {
                return Err(OrdcloseError::EnclosureOrder {
                    lower: lo.to_string(),
                    upper: hi.to_string(),
                });
            }
        }

        if let Some(g) = step.gap {
            // Keep the widest certificate seen.
            let wider = match &state.gap {
                None => true,
                Some(cur) => g.width > cur.width,
            };
            if wider {
                state.gap = Some(g);
            }
        }
        if step.exhausted {
            state.exhausted = true;
        }
    }
    Ok(state)
}

fn converged<O: ValueOrder>(
    ord: &O,
    state: &Refinement<O::Value>,
    tol: Option<&Rational>,
) -> bool {
    let (Some(lo), Some(hi)) = (&state.best_lower, &state.best_upper) else {
        return false;
    };
    if ord.eq(lo, hi) {
        return true;
    }
    match (ord.width(lo, hi), tol) {
        (Some(w), Some(tol)) => w <= *tol,
        _ => false,
    }
}

/// Runs the refinement loop to the budget and returns the best bounds,
/// with no convergence short-circuit. Errors with `NotKBounded` if a
/// side never produced a witness.
pub fn refine_bounds<P, O, M, G>(
    problem: &ExtensionProblem<P, O, M>,
    gen: &mut G,
    f: &P::Elem,
    budget: u64,
) -> Result<(O::Value, O::Value, u64), OrdcloseError>
where
    P: Preorder,
    O: ValueOrder,
    M: IsotonicMap<Input = P::Elem, Value = O::Value>,
    G: ApproximantGenerator<Candidate = P::Elem>,
    P::Elem: fmt::Display,
    O::Value: fmt::Display,
{
    let state = tighten(problem, gen, f, None, budget)?;
    match (state.best_lower, state.best_upper) {
        (Some(lo), Some(hi)) => Ok((lo, hi, state.iterations)),
        _ => Err(OrdcloseError::NotKBounded),
    }
}

/// Runs refinement until convergence, a certified gap, schedule
/// exhaustion, or the budget, and classifies the result.
///
/// `tol` is the convergence width for numerically measured value orders
/// and must be positive there; exact and set-valued orders converge only
/// on endpoint coincidence and ignore `tol`.
pub fn extend<P, O, M, G>(
    problem: &ExtensionProblem<P, O, M>,
    gen: &mut G,
    f: &P::Elem,
    tol: &Rational,
    budget: u64,
) -> Result<ExtensionOutcome<O::Value>, OrdcloseError>
where
    P: Preorder,
    O: ValueOrder,
    M: IsotonicMap<Input = P::Elem, Value = O::Value>,
    G: ApproximantGenerator<Candidate = P::Elem>,
    P::Elem: fmt::Display,
    O::Value: fmt::Display,
{
    if !tol.is_positive() {
        return Err(OrdcloseError::InvalidInput(
            "tolerance must be positive".into(),
        ));
    }
    let ord = &problem.value_order;
    let state = tighten(problem, gen, f, Some(tol), budget)?;

    let enclosure = match (&state.best_lower, &state.best_upper) {
        (Some(lo), Some(hi)) => Some(Enclosure::new(ord, lo.clone(), hi.clone())?),
        _ => None,
    };

    // Verdict precedence: a missing side means the kernel never
    // bracketed the candidate; a certificate beats apparent convergence
    // (a loose tolerance may cover a genuine gap); residual width at an
    // exhaustive finish is itself a certified gap.
    let (status, certificate) = if enclosure.is_none() {
        let side = if state.best_lower.is_none() {
            "below"
        } else {
            "above"
        };
        (
            ExtensionStatus::NotKBounded,
            Some(format!("no kernel witness {side} the candidate")),
        )
    } else if let Some(gap) = &state.gap {
        (
            ExtensionStatus::GapAtLeast(gap.width.clone()),
            Some(gap.reason.clone()),
        )
    } else if converged(ord, &state, Some(tol)) {
        (ExtensionStatus::Converged, None)
    } else if state.exhausted && gen.exhaustive_on_finish() {
        let e = enclosure.as_ref().expect("both sides present");
        let width = e.width(ord).unwrap_or_else(Rational::zero);
        (
            ExtensionStatus::GapAtLeast(width.clone()),
            Some(format!(
                "kernel enumerated exhaustively; bounds stop at {e} (width {width})"
            )),
        )
    } else {
        (ExtensionStatus::BudgetExhausted, None)
    };

    Ok(ExtensionOutcome {
        status,
        enclosure,
        iterations: state.iterations,
        cost: state.cost,
        certificate,
    })
}

/// For each kernel sample, the extension must reproduce the kernel value:
/// endpoints coincide with it for point evaluations, and bracket it
/// within its own evaluation enclosure otherwise.
pub fn continuation_identity_check<P, O, M, G>(
    problem: &ExtensionProblem<P, O, M>,
    mut make_gen: impl FnMut(&P::Elem) -> G,
    samples: &[P::Elem],
    tol: &Rational,
    budget: u64,
    suite: &str,
) -> Result<LawReport, OrdcloseError>
where
    P: Preorder,
    O: ValueOrder,
    M: IsotonicMap<Input = P::Elem, Value = O::Value>,
    G: ApproximantGenerator<Candidate = P::Elem>,
    P::Elem: fmt::Display,
    O::Value: fmt::Display,
{
    let ord = &problem.value_order;
    let mut report = LawReport::new(suite);
    for f in samples {
        report.case();
        if !problem.phi.in_kernel(f) {
            report.violation(format!("f={f}"), "sample in kernel", "outside kernel");
            continue;
        }
        let direct = problem.phi.eval(f)?;
        let mut gen = make_gen(f);
        let out = extend(problem, &mut gen, f, tol, budget)?;
        let Some(enc) = &out.enclosure else {
            report.violation(format!("f={f}"), "an enclosure", out.status.to_string());
            continue;
        };
        let ok = if direct.is_point(ord) {
            ord.eq(enc.lower(), direct.lower()) && ord.eq(enc.upper(), direct.upper())
        } else {
            // Inexact evaluation: the two enclosures must overlap and the
            // extension must be at least as tight as requested.
            ord.leq(enc.lower(), direct.upper())
                && ord.leq(direct.lower(), enc.upper())
                && converged_width(ord, enc, tol)
        };
        if !ok {
            report.violation(
                format!("f={f}"),
                format!("extension matching kernel value {direct}"),
                format!("{enc} ({})", out.status),
            );
        }
    }
    Ok(report)
}

fn converged_width<O: ValueOrder>(ord: &O, e: &Enclosure<O::Value>, tol: &Rational) -> bool {
    e.is_point(ord) || e.width(ord).map_or(false, |w| w <= *tol)
}

/// True once a certified gap fully explains the remaining width; no
/// further refinement can tighten past an honest certificate, so the
/// loop may stop spending budget.
fn gap_saturated<O: ValueOrder>(ord: &O, state: &Refinement<O::Value>) -> bool {
    let (Some(gap), Some(lo), Some(hi)) = (&state.gap, &state.best_lower, &state.best_upper) else {
        return false;
    };
    ord.width(lo, hi).map_or(false, |w| w <= gap.width)
}

/// For each certified pair `f ≤ g`, the extension enclosures must be
/// compatible with the order: `lower(f) ≤ upper(g)`. Pairs whose
/// comparison or extension is inconclusive are skipped, not failed.
pub fn isotonicity_check<P, O, M, G>(
    problem: &ExtensionProblem<P, O, M>,
    mut make_gen: impl FnMut(&P::Elem) -> G,
    pairs: &[(P::Elem, P::Elem)],
    tol: &Rational,
    budget: u64,
    suite: &str,
) -> Result<LawReport, OrdcloseError>
where
    P: Preorder,
    O: ValueOrder,
    M: IsotonicMap<Input = P::Elem, Value = O::Value>,
    G: ApproximantGenerator<Candidate = P::Elem>,
    P::Elem: fmt::Display,
    O::Value: fmt::Display,
{
    let ord = &problem.value_order;
    let mut report = LawReport::new(suite);
    for (f, g) in pairs {
        if problem.candidate_order.try_leq(f, g) != Some(true) {
            report.skip();
            continue;
        }
        let out_f = extend(problem, &mut make_gen(f), f, tol, budget)?;
        let out_g = extend(problem, &mut make_gen(g), g, tol, budget)?;
        let (Some(enc_f), Some(enc_g)) = (&out_f.enclosure, &out_g.enclosure) else {
            report.skip();
            continue;
        };
        if !(out_f.converged() && out_g.converged()) {
            report.skip();
            continue;
        }
        report.case();
        if !ord.leq(enc_f.lower(), enc_g.upper()) {
            report.violation(
                format!("f={f} g={g}"),
                "lower(f) ≤ upper(g)",
                format!("{enc_f} vs {enc_g}"),
            );
        }
    }
    Ok(report)
}
