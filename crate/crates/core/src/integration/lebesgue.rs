//! Integration over countable atomic measure spaces, bracketing with
//! step functions that have finitely many explicit values and a
//! constant eventual form. The order is "almost everywhere at most":
//! zero-weight atoms never influence a comparison or an integral.

use std::fmt;

use crate::engine::{
    extend, ApproximantGenerator, Enclosure, ExtensionOutcome, ExtensionProblem, GeneratorStep,
    IsotonicMap,
};
use crate::limits_local::SeqExpr;
use crate::order::{Preorder, RationalValueOrder};
use crate::rational::{ExtRational, Rational};
use crate::OrdcloseError;

/// A measure on a countable set of atoms, indexed from 1.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomicMeasureSpace {
    /// Atoms 1..=n with listed weights; weights may be infinite.
    Finite { weights: Vec<ExtRational> },
    /// Atoms 1, 2, 3, … with weight(n) = ratio^n for 0 < ratio < 1.
    Geometric { ratio: Rational },
}

impl AtomicMeasureSpace {
    pub fn finite(weights: Vec<Rational>) -> Result<Self, OrdcloseError> {
        Self::finite_ext(weights.into_iter().map(ExtRational::Finite).collect())
    }

    pub fn finite_ext(weights: Vec<ExtRational>) -> Result<Self, OrdcloseError> {
        for w in &weights {
            if let ExtRational::Finite(v) = w {
                if v.is_negative() {
                    return Err(OrdcloseError::InvalidInput(format!(
                        "negative weight {v}"
                    )));
                }
            }
        }
        Ok(AtomicMeasureSpace::Finite { weights })
    }

    pub fn geometric(ratio: Rational) -> Result<Self, OrdcloseError> {
        if !ratio.is_positive() || ratio >= Rational::one() {
            return Err(OrdcloseError::InvalidInput(format!(
                "geometric ratio must lie in (0,1), got {ratio}"
            )));
        }
        Ok(AtomicMeasureSpace::Geometric { ratio })
    }

    /// Number of atoms, when finite.
    pub fn atom_count(&self) -> Option<u64> {
        match self {
            AtomicMeasureSpace::Finite { weights } => Some(weights.len() as u64),
            AtomicMeasureSpace::Geometric { .. } => None,
        }
    }

    pub fn weight(&self, atom: u64) -> ExtRational {
        if atom == 0 {
            return ExtRational::Finite(Rational::zero());
        }
        match self {
            AtomicMeasureSpace::Finite { weights } => weights
                .get(atom as usize - 1)
                .cloned()
                .unwrap_or(ExtRational::Finite(Rational::zero())),
            AtomicMeasureSpace::Geometric { ratio } => ExtRational::Finite(
                ratio
                    .pow(atom as i64)
                    .expect("positive ratio has all powers"),
            ),
        }
    }

    /// Exact mass of all atoms with index >= start.
    pub fn tail_mass(&self, start: u64) -> ExtRational {
        let start = start.max(1);
        match self {
            AtomicMeasureSpace::Finite { weights } => weights
                .iter()
                .skip(start as usize - 1)
                .fold(ExtRational::Finite(Rational::zero()), |acc, w| {
                    acc + w.clone()
                }),
            AtomicMeasureSpace::Geometric { ratio } => {
                // sum of ratio^n for n >= start
                let head = ratio.pow(start as i64).expect("positive ratio");
                let denom = Rational::one() - ratio.clone();
                ExtRational::Finite(head / denom)
            }
        }
    }

    pub fn total_mass(&self) -> ExtRational {
        self.tail_mass(1)
    }
}

/// Value of a step function beyond its explicit part.
#[derive(Debug, Clone, PartialEq)]
pub enum TailForm {
    Zero,
    Constant(Rational),
}

impl TailForm {
    fn value(&self) -> Rational {
        match self {
            TailForm::Zero => Rational::zero(),
            TailForm::Constant(c) => c.clone(),
        }
    }
}

/// Step function over atoms: explicit values on atoms 1..=len, the
/// tail form everywhere beyond.
impl fmt::Display for AtomicMeasureSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomicMeasureSpace::Finite { weights } => {
                write!(f, "atoms[")?;
                for (i, w) in weights.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}")?;
                }
                write!(f, "]")
            }
            AtomicMeasureSpace::Geometric { ratio } => write!(f, "geometric[{ratio}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuStepFunction {
    pub explicit: Vec<Rational>,
    pub tail: TailForm,
}

impl MuStepFunction {
    pub fn new(explicit: Vec<Rational>, tail: TailForm) -> Self {
        MuStepFunction { explicit, tail }
    }

    pub fn eval(&self, atom: u64) -> Rational {
        if atom >= 1 && atom <= self.explicit.len() as u64 {
            self.explicit[atom as usize - 1].clone()
        } else {
            self.tail.value()
        }
    }

    /// Bounds on all values at atoms >= start.
    pub fn tail_value_bounds(&self, start: u64) -> (Option<Rational>, Option<Rational>) {
        let t = self.tail.value();
        let mut lo = t.clone();
        let mut hi = t;
        for v in self.explicit.iter().skip(start.max(1) as usize - 1) {
            lo = lo.min(v.clone());
            hi = hi.max(v.clone());
        }
        (Some(lo), Some(hi))
    }
}

impl fmt::Display for MuStepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mustep[")?;
        for (i, v) in self.explicit.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        match &self.tail {
            TailForm::Zero => write!(f, "; 0...]"),
            TailForm::Constant(c) => write!(f, "; {c}...]"),
        }
    }
}

/// Exact integral of a μ-step function: the value-weighted atom sum,
/// with the 0·∞ = 0 convention on infinite-weight atoms. The eventual
/// constant must meet finite tail mass.
pub fn mu_step_integral(
    f: &MuStepFunction,
    space: &AtomicMeasureSpace,
) -> Result<Enclosure<Rational>, OrdcloseError> {
    let explicit_atoms = match space.atom_count() {
        Some(n) => n.min(f.explicit.len() as u64),
        None => f.explicit.len() as u64,
    };
    let mut total = Rational::zero();
    for atom in 1..=explicit_atoms {
        let v = f.eval(atom);
        if v.is_zero() {
            continue;
        }
        match space.weight(atom) {
            ExtRational::Finite(w) => total = total + v * w,
            ExtRational::Infinity => {
                return Err(OrdcloseError::DivergentSeries);
            }
        }
    }
    // everything beyond the explicit part carries the tail value
    let tail_value = match space.atom_count() {
        Some(n) if explicit_atoms >= n => Rational::zero(),
        _ => f.tail.value(),
    };
    if !tail_value.is_zero() {
        match space.tail_mass(explicit_atoms + 1) {
            ExtRational::Finite(mass) => total = total + tail_value * mass,
            ExtRational::Infinity => return Err(OrdcloseError::DivergentSeries),
        }
    }
    Ok(Enclosure::point(total))
}

/// General integrand over atoms: sequence syntax shifted to 1-based
/// atoms, or the unbounded growth fixture 2^n.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomSeq {
    Seq(SeqExpr),
    Exp2,
}

impl AtomSeq {
    pub fn eval(&self, atom: u64) -> Rational {
        match self {
            AtomSeq::Seq(e) => e.eval(atom.saturating_sub(1)),
            AtomSeq::Exp2 => Rational::int(2)
                .pow(atom as i64)
                .expect("positive base has all powers"),
        }
    }

    /// Bounds on all values at atoms >= start; `None` marks an
    /// unbounded side.
    pub fn tail_value_bounds(&self, start: u64) -> (Option<Rational>, Option<Rational>) {
        match self {
            AtomSeq::Seq(e) => {
                let t = e.tail_range(start.max(1) - 1);
                (Some(t.lower().clone()), Some(t.upper().clone()))
            }
            AtomSeq::Exp2 => {
                let lo = Rational::int(2)
                    .pow(start.max(1) as i64)
                    .expect("positive base");
                (Some(lo), None)
            }
        }
    }
}

impl fmt::Display for AtomSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomSeq::Seq(e) => write!(f, "{e}"),
            AtomSeq::Exp2 => write!(f, "2^n"),
        }
    }
}

/// Candidate space of the Lebesgue instance.
#[derive(Debug, Clone, PartialEq)]
pub enum LebesgueFn {
    MuStep(MuStepFunction),
    General(AtomSeq),
}

impl LebesgueFn {
    pub fn eval(&self, atom: u64) -> Rational {
        match self {
            LebesgueFn::MuStep(s) => s.eval(atom),
            LebesgueFn::General(a) => a.eval(atom),
        }
    }

    fn tail_value_bounds(&self, start: u64) -> (Option<Rational>, Option<Rational>) {
        match self {
            LebesgueFn::MuStep(s) => s.tail_value_bounds(start),
            LebesgueFn::General(a) => a.tail_value_bounds(start),
        }
    }

    fn explicit_len(&self) -> u64 {
        match self {
            LebesgueFn::MuStep(s) => s.explicit.len() as u64,
            LebesgueFn::General(_) => 0,
        }
    }
}

impl fmt::Display for LebesgueFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LebesgueFn::MuStep(s) => write!(f, "{s}"),
            LebesgueFn::General(a) => write!(f, "{a}"),
        }
    }
}

/// "f ≤ g almost everywhere": the weight of {f > g} is zero. Decided
/// by scanning positive-weight atoms up to a horizon and separating
/// the tails; finite spaces are decided completely.
#[derive(Debug, Clone)]
pub struct AlmostEverywhereLeq {
    pub space: AtomicMeasureSpace,
}

impl Preorder for AlmostEverywhereLeq {
    type Elem = LebesgueFn;

    fn try_leq(&self, f: &LebesgueFn, g: &LebesgueFn) -> Option<bool> {
        let base = f.explicit_len().max(g.explicit_len()).max(8);
        let finite_n = self.space.atom_count();
        let mut probes = vec![base, base * 8, base * 64];
        if let Some(n) = finite_n {
            probes = vec![n];
        }
        let mut checked_to = 0u64;
        for probe in probes {
            let probe = probe.min(1 << 16);
            for atom in checked_to + 1..=probe {
                if self.space.weight(atom) == ExtRational::Finite(Rational::zero()) {
                    continue;
                }
                if f.eval(atom) > g.eval(atom) {
                    return Some(false);
                }
            }
            checked_to = checked_to.max(probe);
            if let Some(n) = finite_n {
                if checked_to >= n {
                    return Some(true);
                }
            }
            let (_, f_hi) = f.tail_value_bounds(checked_to + 1);
            let (g_lo, _) = g.tail_value_bounds(checked_to + 1);
            if let (Some(fh), Some(gl)) = (f_hi, g_lo) {
                if fh <= gl {
                    return Some(true);
                }
            }
        }
        None
    }
}

/// Kernel map: exact integral on μ-step functions with a convergent
/// sum.
#[derive(Debug, Clone)]
pub struct LebesguePhi {
    pub space: AtomicMeasureSpace,
}

impl IsotonicMap for LebesguePhi {
    type Input = LebesgueFn;
    type Value = Rational;

    fn in_kernel(&self, a: &LebesgueFn) -> bool {
        match a {
            LebesgueFn::MuStep(s) => mu_step_integral(s, &self.space).is_ok(),
            LebesgueFn::General(_) => false,
        }
    }

    fn eval(&self, a: &LebesgueFn) -> Result<Enclosure<Rational>, OrdcloseError> {
        match a {
            LebesgueFn::MuStep(s) => mu_step_integral(s, &self.space),
            LebesgueFn::General(_) => Err(OrdcloseError::Domain(
                "general integrands have no exact kernel integral".into(),
            )),
        }
    }
}

pub type LebesgueProblem = ExtensionProblem<AlmostEverywhereLeq, RationalValueOrder, LebesguePhi>;

pub fn lebesgue_problem(space: AtomicMeasureSpace) -> LebesgueProblem {
    ExtensionProblem {
        candidate_order: AlmostEverywhereLeq {
            space: space.clone(),
        },
        value_order: RationalValueOrder,
        phi: LebesguePhi { space },
    }
}

/// Witness schedule: step k copies the first 2^k values verbatim and
/// closes each side with a constant tail bound. A side with no finite
/// tail bound stays missing, which is what K-unboundedness looks like.
#[derive(Debug, Clone)]
pub struct LebesgueTruncation {
    pub space: AtomicMeasureSpace,
}

impl ApproximantGenerator for LebesgueTruncation {
    type Candidate = LebesgueFn;

    fn next_step(
        &mut self,
        f: &LebesgueFn,
        k: u64,
    ) -> Result<GeneratorStep<LebesgueFn>, OrdcloseError> {
        let mut n = 1u64 << k.min(62);
        let mut exhausted = false;
        if let Some(count) = self.space.atom_count() {
            if n >= count {
                n = count;
                exhausted = true;
            }
        }
        let explicit: Vec<Rational> = (1..=n).map(|atom| f.eval(atom)).collect();
        let (tail_lo, tail_hi) = if exhausted {
            (Some(Rational::zero()), Some(Rational::zero()))
        } else if let Some(count) = self.space.atom_count() {
            // essential bounds: null atoms cannot separate the witness
            // from the candidate, so only positive-weight values count
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            for atom in n + 1..=count {
                if self.space.weight(atom) == ExtRational::Finite(Rational::zero()) {
                    continue;
                }
                let v = f.eval(atom);
                lo = Some(match lo {
                    None => v.clone(),
                    Some(cur) => cur.min(v.clone()),
                });
                hi = Some(match hi {
                    None => v,
                    Some(cur) => cur.max(v),
                });
            }
            (
                Some(lo.unwrap_or_else(Rational::zero)),
                Some(hi.unwrap_or_else(Rational::zero)),
            )
        } else {
            f.tail_value_bounds(n + 1)
        };
        let witness = |tail: Option<Rational>| {
            tail.and_then(|c| {
                let step = MuStepFunction::new(
                    explicit.clone(),
                    if c.is_zero() {
                        TailForm::Zero
                    } else {
                        TailForm::Constant(c)
                    },
                );
                // a witness whose own integral diverges is not a kernel
                // element; the side stays missing
                mu_step_integral(&step, &self.space)
                    .is_ok()
                    .then(|| LebesgueFn::MuStep(step))
            })
        };
        Ok(GeneratorStep {
            lower: witness(tail_lo),
            upper: witness(tail_hi),
            cost: n.max(1),
            gap: None,
            exhausted,
        })
    }

    fn exhaustive_on_finish(&self) -> bool {
        // a finite space is fully enumerated, but by then both
        // witnesses equal the function and the width is zero
        false
    }
}

/// Enclose the integral of f over the space by truncation with
/// constant tail bounds.
pub fn lebesgue_extend(
    f: &LebesgueFn,
    space: &AtomicMeasureSpace,
    tol: &Rational,
    budget: u64,
) -> Result<ExtensionOutcome<Rational>, OrdcloseError> {
    let problem = lebesgue_problem(space.clone());
    let mut gen = LebesgueTruncation {
        space: space.clone(),
    };
    extend(&problem, &mut gen, f, tol, budget)
}

/// Componentwise integral of a vector-valued function.
pub fn vector_integral(
    components: &[LebesgueFn],
    space: &AtomicMeasureSpace,
    tol: &Rational,
    budget: u64,
) -> Result<Vec<ExtensionOutcome<Rational>>, OrdcloseError> {
    components
        .iter()
        .map(|f| lebesgue_extend(f, space, tol, budget))
        .collect()
}

/// Image of a vector enclosure under a rational linear functional,
/// by interval arithmetic on the coordinates.
pub fn functional_image(
    coeffs: &[Rational],
    coordinates: &[Enclosure<Rational>],
) -> Result<Enclosure<Rational>, OrdcloseError> {
    if coeffs.len() != coordinates.len() {
        return Err(OrdcloseError::InvalidInput(
            "functional and vector dimensions differ".into(),
        ));
    }
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for (c, e) in coeffs.iter().zip(coordinates) {
        let (a, b) = if c.is_negative() {
            (c * e.upper(), c * e.lower())
        } else {
            (c * e.lower(), c * e.upper())
        };
        lo = lo + a;
        hi = hi + b;
    }
    Enclosure::new(&RationalValueOrder, lo, hi)
}

/// The composition α∘f of a rational functional with a vector of
/// sequence-syntax components, as a single scalar integrand.
pub fn functional_compose(
    coeffs: &[Rational],
    components: &[LebesgueFn],
) -> Result<LebesgueFn, OrdcloseError> {
    if coeffs.len() != components.len() {
        return Err(OrdcloseError::InvalidInput(
            "functional and vector dimensions differ".into(),
        ));
    }
    let mut acc: Option<SeqExpr> = None;
    for (c, comp) in coeffs.iter().zip(components) {
        let seq = match comp {
            LebesgueFn::General(AtomSeq::Seq(e)) => e.clone(),
            _ => {
                return Err(OrdcloseError::InvalidInput(format!(
                    "component {comp} is not in sequence syntax"
                )))
            }
        };
        let term = SeqExpr::scale(c.clone(), seq);
        acc = Some(match acc {
            None => term,
            Some(a) => SeqExpr::add(a, term),
        });
    }
    Ok(LebesgueFn::General(AtomSeq::Seq(acc.ok_or_else(|| {
        OrdcloseError::InvalidInput("empty functional".into())
    })?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ExtensionStatus;
    use crate::order::check_preorder_laws;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn tol(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn uniform3() -> AtomicMeasureSpace {
        AtomicMeasureSpace::finite(vec![q(1, 1), q(1, 1), q(1, 1)]).unwrap()
    }

    fn halving() -> AtomicMeasureSpace {
        AtomicMeasureSpace::geometric(q(1, 2)).unwrap()
    }

    #[test]
    fn finite_uniform_integral() {
        let f = MuStepFunction::new(vec![q(1, 1), q(2, 1), q(3, 1)], TailForm::Zero);
        let enc = mu_step_integral(&f, &uniform3()).unwrap();
        assert_eq!(enc.lower(), &q(6, 1));
        assert_eq!(enc.upper(), &q(6, 1));
    }

    #[test]
    fn geometric_total_mass_is_one() {
        assert_eq!(halving().total_mass(), ExtRational::Finite(q(1, 1)));
        assert_eq!(
            halving().tail_mass(5),
            ExtRational::Finite(q(1, 16))
        );
    }

    #[test]
    fn constant_one_integrates_to_one() {
        let f = MuStepFunction::new(vec![], TailForm::Constant(q(1, 1)));
        let enc = mu_step_integral(&f, &halving()).unwrap();
        assert_eq!(enc.lower(), &q(1, 1));
        assert_eq!(enc.upper(), &q(1, 1));
    }

    #[test]
    fn zero_function_integrates_to_zero() {
        let f = MuStepFunction::new(vec![], TailForm::Zero);
        let enc = mu_step_integral(&f, &halving()).unwrap();
        assert_eq!(enc.lower(), &Rational::zero());
        assert_eq!(enc.upper(), &Rational::zero());
    }

    #[test]
    fn infinite_weight_atom_needs_zero_value() {
        let space =
            AtomicMeasureSpace::finite_ext(vec![ExtRational::Finite(q(1, 1)), ExtRational::Infinity])
                .unwrap();
        let ok = MuStepFunction::new(vec![q(5, 1), q(0, 1)], TailForm::Zero);
        assert_eq!(mu_step_integral(&ok, &space).unwrap().lower(), &q(5, 1));
        let bad = MuStepFunction::new(vec![q(5, 1), q(1, 1)], TailForm::Zero);
        assert!(matches!(
            mu_step_integral(&bad, &space),
            Err(OrdcloseError::DivergentSeries)
        ));
    }

    #[test]
    fn kernel_step_function_comes_back_exactly() {
        let f = LebesgueFn::MuStep(MuStepFunction::new(
            vec![q(1, 1), q(2, 1), q(3, 1)],
            TailForm::Zero,
        ));
        let out = lebesgue_extend(&f, &uniform3(), &tol("1e-9"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        assert_eq!(out.iterations, 1);
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &q(6, 1));
        assert_eq!(enc.upper(), &q(6, 1));
    }

    #[test]
    fn reciprocal_series_encloses_log_two() {
        // atom n carries value 1/n and weight 2^-n; the sum is ln 2
        let f = LebesgueFn::General(AtomSeq::Seq(SeqExpr::Harmonic));
        let out = lebesgue_extend(&f, &halving(), &tol("1e-6"), 1_000_000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        let enc = out.enclosure.unwrap();
        assert!(enc.width(&RationalValueOrder).unwrap() <= tol("1e-6"));
        let below: Rational = "0.693147180559945309".parse().unwrap();
        let above: Rational = "0.693147180559945310".parse().unwrap();
        assert!(enc.lower() <= &below, "lower {}", enc.lower());
        assert!(&above <= enc.upper(), "upper {}", enc.upper());
    }

    #[test]
    fn doubling_values_are_not_kbounded() {
        let f = LebesgueFn::General(AtomSeq::Exp2);
        let out = lebesgue_extend(&f, &halving(), &tol("1e-6"), 4096).unwrap();
        assert_eq!(out.status, ExtensionStatus::NotKBounded);
        assert!(out.certificate.unwrap().contains("above"));
    }

    #[test]
    fn weight_zero_patches_are_bitwise_invisible() {
        let space = AtomicMeasureSpace::finite(vec![q(1, 1), q(1, 1), q(1, 1), q(0, 1)]).unwrap();
        let g = LebesgueFn::MuStep(MuStepFunction::new(
            vec![q(1, 1), q(2, 1), q(3, 1)],
            TailForm::Zero,
        ));
        let f = LebesgueFn::MuStep(MuStepFunction::new(
            vec![q(1, 1), q(2, 1), q(3, 1), q(999, 1)],
            TailForm::Zero,
        ));
        let out_g = lebesgue_extend(&g, &space, &tol("1e-9"), 1000).unwrap();
        let out_f = lebesgue_extend(&f, &space, &tol("1e-9"), 1000).unwrap();
        let enc = out_f.enclosure.as_ref().unwrap();
        assert_eq!(enc.lower(), &q(6, 1));
        assert_eq!(
            serde_json::to_string(&out_f).unwrap(),
            serde_json::to_string(&out_g).unwrap()
        );

        // the same through general sequence syntax
        let base = SeqExpr::constant(q(2, 1));
        let patched = SeqExpr::patched(BTreeMap::from([(3, q(777, 1))]), base.clone());
        let out_base =
            lebesgue_extend(&LebesgueFn::General(AtomSeq::Seq(base)), &space, &tol("1e-9"), 1000)
                .unwrap();
        let out_patched = lebesgue_extend(
            &LebesgueFn::General(AtomSeq::Seq(patched)),
            &space,
            &tol("1e-9"),
            1000,
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&out_base).unwrap(),
            serde_json::to_string(&out_patched).unwrap()
        );
    }

    #[test]
    fn ae_preorder_is_decided_and_lawful_on_finite_spaces() {
        let space = AtomicMeasureSpace::finite(vec![q(1, 1), q(0, 1), q(2, 1)]).unwrap();
        let rel = AlmostEverywhereLeq {
            space: space.clone(),
        };
        let mk = |a: i64, b: i64, c: i64| {
            LebesgueFn::MuStep(MuStepFunction::new(
                vec![q(a, 1), q(b, 1), q(c, 1)],
                TailForm::Zero,
            ))
        };
        let samples = vec![mk(0, 0, 0), mk(1, -5, 1), mk(0, 9, 0), mk(2, 2, 2), mk(0, 0, 3)];
        let report = check_preorder_laws(&rel, &samples, "ae-leq");
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.skipped, 0, "finite spaces decide every comparison");

        // equivalent but distinct: they differ only on the null atom
        let f = mk(0, 9, 0);
        let g = mk(0, 0, 0);
        assert_ne!(f, g);
        assert_eq!(rel.try_leq(&f, &g), Some(true));
        assert_eq!(rel.try_leq(&g, &f), Some(true));

        // a positive-weight violation refutes
        assert_eq!(rel.try_leq(&mk(1, 0, 0), &g), Some(false));
    }

    #[test]
    fn vector_integral_on_uniform_space() {
        let components = [
            LebesgueFn::General(AtomSeq::Seq(SeqExpr::constant(q(1, 1)))),
            LebesgueFn::General(AtomSeq::Seq(SeqExpr::constant(Rational::zero()))),
        ];
        let outs = vector_integral(&components, &uniform3(), &tol("1e-9"), 1000).unwrap();
        let e0 = outs[0].enclosure.as_ref().unwrap();
        let e1 = outs[1].enclosure.as_ref().unwrap();
        assert_eq!(e0.lower(), &q(3, 1));
        assert_eq!(e0.upper(), &q(3, 1));
        assert_eq!(e1.lower(), &Rational::zero());
        assert_eq!(e1.upper(), &Rational::zero());
    }

    #[test]
    fn vector_integral_duality_with_functionals() {
        let components = [
            LebesgueFn::General(AtomSeq::Seq(SeqExpr::constant(q(1, 1)))),
            LebesgueFn::General(AtomSeq::Seq(SeqExpr::Harmonic)),
        ];
        let space = halving();
        let t = tol("1e-6");
        let outs = vector_integral(&components, &space, &t, 1_000_000).unwrap();
        let encs: Vec<_> = outs
            .iter()
            .map(|o| o.enclosure.clone().unwrap())
            .collect();
        assert!(encs[0].contains(&RationalValueOrder, &q(1, 1)));

        let functionals = [
            vec![q(1, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1)],
            vec![q(2, 1), q(-3, 1)],
            vec![q(-1, 2), q(5, 1)],
        ];
        for alpha in &functionals {
            let image = functional_image(alpha, &encs).unwrap();
            let composed = functional_compose(alpha, &components).unwrap();
            let direct = lebesgue_extend(&composed, &space, &t, 1_000_000)
                .unwrap()
                .enclosure
                .unwrap();
            assert!(
                image.intersect(&RationalValueOrder, &direct).is_ok(),
                "functional {alpha:?}: image {image:?} vs direct {direct:?}"
            );
        }

        // basis functional: the image is exactly the coordinate
        let e1 = functional_image(&[q(1, 1), q(0, 1)], &encs).unwrap();
        assert_eq!(e1.lower(), encs[0].lower());
        assert_eq!(e1.upper(), encs[0].upper());
    }

    proptest! {
        /// Geometric tail masses telescope exactly and decrease.
        #[test]
        fn geometric_tail_mass_telescopes(num in 1i64..10, den in 11i64..20, s in 1u64..40) {
            let space = AtomicMeasureSpace::geometric(Rational::ratio(num, den)).unwrap();
            let t0 = space.tail_mass(s);
            let t1 = space.tail_mass(s + 1);
            let w = space.weight(s);
            prop_assert_eq!(t0.clone(), w + t1.clone());
            prop_assert!(t1 <= t0);
        }

        /// μ-step integrals are additive on finite spaces.
        #[test]
        fn mu_step_integral_is_additive(
            weights in proptest::collection::vec(0i64..5, 1..6),
            a in proptest::collection::vec(-9i64..9, 6),
            b in proptest::collection::vec(-9i64..9, 6),
        ) {
            let n = weights.len();
            let space = AtomicMeasureSpace::finite(
                weights.iter().map(|&w| Rational::int(w)).collect(),
            ).unwrap();
            let fa = MuStepFunction::new(
                a[..n].iter().map(|&v| Rational::int(v)).collect(),
                TailForm::Zero,
            );
            let fb = MuStepFunction::new(
                b[..n].iter().map(|&v| Rational::int(v)).collect(),
                TailForm::Zero,
            );
            let sum = MuStepFunction::new(
                (0..n).map(|i| Rational::int(a[i] + b[i])).collect(),
                TailForm::Zero,
            );
            let ia = mu_step_integral(&fa, &space).unwrap();
            let ib = mu_step_integral(&fb, &space).unwrap();
            let isum = mu_step_integral(&sum, &space).unwrap();
            prop_assert_eq!(isum.lower().clone(), ia.lower() + ib.lower());
        }

        /// Truncation witnesses really bracket the integrand.
        #[test]
        fn truncation_witnesses_bracket(k in 0u64..6) {
            let f = LebesgueFn::General(AtomSeq::Seq(SeqExpr::Harmonic));
            let space = halving();
            let rel = AlmostEverywhereLeq { space: space.clone() };
            let mut gen = LebesgueTruncation { space };
            let step = gen.next_step(&f, k).unwrap();
            let lower = step.lower.unwrap();
            let upper = step.upper.unwrap();
            prop_assert_eq!(rel.try_leq(&lower, &f), Some(true));
            prop_assert_eq!(rel.try_leq(&f, &upper), Some(true));
        }
    }
}
