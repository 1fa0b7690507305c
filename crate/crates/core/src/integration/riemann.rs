//! Integration on an interval by bracketing with finite step functions.
//!
//! Step functions carry an exact integral (weighted sum of piece
//! lengths), general integrands are known through a range oracle, and
//! the refinement loop is uniform dyadic subdivision. The Darboux sums
//! of each level are the bound witnesses; a per-box range-width
//! certificate from the oracle becomes a certified integration gap.

use std::fmt;
use std::rc::Rc;

use crate::engine::{
    extend, ApproximantGenerator, Enclosure, ExtensionOutcome, ExtensionProblem, GapCertificate,
    GeneratorStep, IsotonicMap,
};
use crate::limits_local::FnExpr;
use crate::order::{Preorder, RationalValueOrder};
use crate::rational::Rational;
use crate::OrdcloseError;

/// Piecewise constant function on an interval, left-closed pieces, the
/// final piece closed on both sides. The stored form is canonical:
/// zero-length pieces are dropped and adjacent equal values merged, so
/// structural equality is semantic equality.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction1D {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

impl StepFunction1D {
    /// Breakpoints must be weakly increasing with one more entry than
    /// `values`; zero-length pieces are accepted and dropped (a point
    /// has length zero).
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self, OrdcloseError> {
        if breakpoints.len() < 2 || values.len() + 1 != breakpoints.len() {
            return Err(OrdcloseError::InvalidInput(format!(
                "need m+1 breakpoints for m >= 1 values, got {} and {}",
                breakpoints.len(),
                values.len()
            )));
        }
        for w in breakpoints.windows(2) {
            if w[0] > w[1] {
                return Err(OrdcloseError::InvalidInput(format!(
                    "breakpoints must not decrease: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let mut bp = Vec::with_capacity(breakpoints.len());
        let mut vs = Vec::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            if breakpoints[i] == breakpoints[i + 1] {
                continue;
            }
            if vs.last() == Some(v) {
                bp.pop();
            } else {
                vs.push(v.clone());
            }
            bp.push(breakpoints[i + 1].clone());
        }
        if vs.is_empty() {
            return Err(OrdcloseError::InvalidInput(
                "domain interval has zero length".into(),
            ));
        }
        bp.insert(0, breakpoints[0].clone());
        Ok(StepFunction1D {
            breakpoints: bp,
            values: vs,
        })
    }

    pub fn constant(a: Rational, b: Rational, value: Rational) -> Result<Self, OrdcloseError> {
        StepFunction1D::new(vec![a, b], vec![value])
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (
            self.breakpoints.first().expect("nonempty"),
            self.breakpoints.last().expect("nonempty"),
        )
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (&self.breakpoints[i], &self.breakpoints[i + 1], v))
    }

    /// Value at x, or None outside the domain.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let (a, b) = self.domain();
        if x < a || x > b {
            return None;
        }
        for (_, hi, v) in self.pieces() {
            if x < hi || (hi == b && x == hi) {
                return Some(v.clone());
            }
        }
        None
    }

    /// Pointwise sum on a common domain, by refining to the merged
    /// breakpoint list.
    pub fn add(&self, other: &StepFunction1D) -> Result<StepFunction1D, OrdcloseError> {
        if self.domain() != other.domain() {
            return Err(OrdcloseError::InvalidInput(
                "step functions live on different intervals".into(),
            ));
        }
        let mut merged: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        merged.sort();
        merged.dedup();
        let values = merged
            .windows(2)
            .map(|w| {
                let left = &w[0];
                Some(self.eval(left)? + other.eval(left)?)
            })
            .collect::<Option<Vec<_>>>()
            .expect("common domain covers every merged piece");
        StepFunction1D::new(merged, values)
    }

    pub fn scale(&self, c: &Rational) -> StepFunction1D {
        StepFunction1D {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn neg(&self) -> StepFunction1D {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for StepFunction1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step[")?;
        for (i, (lo, hi, v)) in self.pieces().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "[{lo},{hi})->{v}")?;
        }
        write!(f, "]")
    }
}

/// Exact integral of a step function: the value-weighted sum of piece
/// lengths.
pub fn step_integral(s: &StepFunction1D) -> Rational {
    s.pieces()
        .map(|(lo, hi, v)| v * &(hi - lo))
        .fold(Rational::zero(), |acc, t| acc + t)
}

/// Sound range bounds for an integrand over a box. The closed `Fn`
/// variant covers structural functions; `Lipschitz` builds ranges from
/// one evaluation per box and a modulus; `Dirichlet` is the classical
/// non-integrable density, certifying unit range on every box.
#[derive(Clone)]
pub enum RangeOracle {
    Fn(FnExpr),
    Dirichlet,
    Lipschitz {
        eval: Rc<dyn Fn(&Rational) -> Rational>,
        constant: Rational,
    },
}

impl RangeOracle {
    pub fn lipschitz(
        eval: impl Fn(&Rational) -> Rational + 'static,
        constant: Rational,
    ) -> Result<Self, OrdcloseError> {
        if constant.is_negative() {
            return Err(OrdcloseError::InvalidInput(
                "Lipschitz modulus must be nonnegative".into(),
            ));
        }
        Ok(RangeOracle::Lipschitz {
            eval: Rc::new(eval),
            constant,
        })
    }

    /// Enclosure of every value on [lo, hi].
    pub fn range(&self, lo: &Rational, hi: &Rational) -> Result<Enclosure<Rational>, OrdcloseError> {
        if lo > hi {
            return Err(OrdcloseError::InvalidInput(format!(
                "box [{lo},{hi}] is reversed"
            )));
        }
        let ord = &RationalValueOrder;
        match self {
            RangeOracle::Fn(e) => {
                let two = Rational::int(2);
                let center = &(lo + hi) / &two;
                let radius = &(hi - lo) / &two;
                Ok(e.local_range(&center, &radius))
            }
            RangeOracle::Dirichlet => {
                if lo == hi {
                    // rational point: the indicator of the rationals is 1
                    Ok(Enclosure::point(Rational::one()))
                } else {
                    Enclosure::new(ord, Rational::zero(), Rational::one())
                }
            }
            RangeOracle::Lipschitz { eval, constant } => {
                let two = Rational::int(2);
                let mid = &(lo + hi) / &two;
                let half = &(hi - lo) / &two;
                let at_mid = eval(&mid);
                let slack = constant * &half;
                Enclosure::new(ord, &at_mid - &slack, &at_mid + &slack)
            }
        }
    }

    /// A width every nondegenerate box's range certifiably reaches,
    /// if the integrand oscillates that much everywhere.
    pub fn everywhere_gap(&self) -> Option<Rational> {
        match self {
            RangeOracle::Dirichlet => Some(Rational::one()),
            _ => None,
        }
    }
}

impl PartialEq for RangeOracle {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (RangeOracle::Fn(a), RangeOracle::Fn(b)) => a == b,
            (RangeOracle::Dirichlet, RangeOracle::Dirichlet) => true,
            (
                RangeOracle::Lipschitz { eval: e1, constant: c1 },
                RangeOracle::Lipschitz { eval: e2, constant: c2 },
            ) => Rc::ptr_eq(e1, e2) && c1 == c2,
            _ => false,
        }
    }
}

impl fmt::Debug for RangeOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeOracle::Fn(e) => write!(f, "Fn({e})"),
            RangeOracle::Dirichlet => write!(f, "Dirichlet"),
            RangeOracle::Lipschitz { constant, .. } => {
                write!(f, "Lipschitz {{ constant: {constant} }}")
            }
        }
    }
}

impl fmt::Display for RangeOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeOracle::Fn(e) => write!(f, "{e}"),
            RangeOracle::Dirichlet => write!(f, "dirichlet"),
            RangeOracle::Lipschitz { constant, .. } => write!(f, "lipschitz[{constant}]"),
        }
    }
}

/// An element of the integration candidate space: either a step
/// function (the kernel) or a general integrand behind its oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum RiemannCandidate {
    Step(StepFunction1D),
    General { oracle: RangeOracle },
}

impl fmt::Display for RiemannCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiemannCandidate::Step(s) => write!(f, "{s}"),
            RiemannCandidate::General { oracle } => write!(f, "integrand({oracle})"),
        }
    }
}

/// The pointwise order on the interval, decided where possible: two
/// step functions compare exactly on their common refinement; a step
/// function against an oracle compares piece values with range bounds.
#[derive(Debug, Clone, Copy, Default)]
pub struct PointwiseLeq;

fn step_leq_oracle(s: &StepFunction1D, oracle: &RangeOracle) -> Option<bool> {
    let mut all_certified = true;
    for (lo, hi, v) in s.pieces() {
        let range = oracle.range(lo, hi).ok()?;
        if v > range.upper() {
            // the piece sits strictly above everything f takes there
            return Some(false);
        }
        if v > range.lower() {
            all_certified = false;
        }
    }
    if all_certified {
        Some(true)
    } else {
        None
    }
}

fn oracle_leq_step(oracle: &RangeOracle, s: &StepFunction1D) -> Option<bool> {
    let mut all_certified = true;
    for (lo, hi, v) in s.pieces() {
        let range = oracle.range(lo, hi).ok()?;
        if v < range.lower() {
            return Some(false);
        }
        if v < range.upper() {
            all_certified = false;
        }
    }
    if all_certified {
        Some(true)
    } else {
        None
    }
}

impl Preorder for PointwiseLeq {
    type Elem = RiemannCandidate;

    fn try_leq(&self, a: &RiemannCandidate, b: &RiemannCandidate) -> Option<bool> {
        use RiemannCandidate::*;
        match (a, b) {
            (Step(s), Step(t)) => {
                if s.domain() != t.domain() {
                    return None;
                }
                let mut merged: Vec<Rational> = s
                    .breakpoints
                    .iter()
                    .chain(t.breakpoints.iter())
                    .cloned()
                    .collect();
                merged.sort();
                merged.dedup();
                let leq = merged.windows(2).all(|w| {
                    let sv = s.eval(&w[0]).expect("common domain");
                    let tv = t.eval(&w[0]).expect("common domain");
                    sv <= tv
                });
                Some(leq)
            }
            (Step(s), General { oracle }) => step_leq_oracle(s, oracle),
            (General { oracle }, Step(s)) => oracle_leq_step(oracle, s),
            (General { oracle: o1 }, General { oracle: o2 }) => (o1 == o2).then_some(true),
        }
    }
}

/// Kernel map: exact integral on step functions.
#[derive(Debug, Clone, Copy, Default)]
pub struct RiemannPhi;

impl IsotonicMap for RiemannPhi {
    type Input = RiemannCandidate;
    type Value = Rational;

    fn in_kernel(&self, a: &RiemannCandidate) -> bool {
        matches!(a, RiemannCandidate::Step(_))
    }

    fn eval(&self, a: &RiemannCandidate) -> Result<Enclosure<Rational>, OrdcloseError> {
        match a {
            RiemannCandidate::Step(s) => Ok(Enclosure::point(step_integral(s))),
            RiemannCandidate::General { .. } => Err(OrdcloseError::Domain(
                "general integrands have no exact kernel integral".into(),
            )),
        }
    }
}

pub type RiemannProblem = ExtensionProblem<PointwiseLeq, RationalValueOrder, RiemannPhi>;

pub fn riemann_problem() -> RiemannProblem {
    ExtensionProblem {
        candidate_order: PointwiseLeq,
        value_order: RationalValueOrder,
        phi: RiemannPhi,
    }
}

/// The lower and upper Darboux step functions on the uniform 2^k-piece
/// partition, with box ranges intersected down the refinement chain so
/// the sums are monotone across levels by construction.
#[derive(Debug, Clone)]
pub struct DyadicDarboux {
    oracle: RangeOracle,
    a: Rational,
    b: Rational,
    prev: Option<Vec<(Rational, Rational)>>,
}

impl DyadicDarboux {
    pub fn new(oracle: RangeOracle, a: Rational, b: Rational) -> Result<Self, OrdcloseError> {
        if a >= b {
            return Err(OrdcloseError::InvalidInput(format!(
                "domain [{a},{b}] must have positive length"
            )));
        }
        Ok(DyadicDarboux {
            oracle,
            a,
            b,
            prev: None,
        })
    }

    fn level_bounds(&mut self, k: u64) -> Result<Vec<(Rational, Rational)>, OrdcloseError> {
        let pieces = 1u64 << k.min(32);
        let width = &(&self.b - &self.a) / &Rational::from_int(pieces);
        let mut bounds = Vec::with_capacity(pieces as usize);
        for i in 0..pieces {
            let lo = &self.a + &(&width * &Rational::from_int(i));
            let hi = if i + 1 == pieces {
                self.b.clone()
            } else {
                &self.a + &(&width * &Rational::from_int(i + 1))
            };
            let range = self.oracle.range(&lo, &hi)?;
            let mut pair = (range.lower().clone(), range.upper().clone());
            if let Some(prev) = &self.prev {
                // child box i refines parent box i/2
                let (plo, phi) = &prev[(i / 2) as usize];
                if &pair.0 < plo {
                    pair.0 = plo.clone();
                }
                if &pair.1 > phi {
                    pair.1 = phi.clone();
                }
            }
            bounds.push(pair);
        }
        Ok(bounds)
    }
}

impl ApproximantGenerator for DyadicDarboux {
    type Candidate = RiemannCandidate;

    fn next_step(
        &mut self,
        _f: &RiemannCandidate,
        k: u64,
    ) -> Result<GeneratorStep<RiemannCandidate>, OrdcloseError> {
        let bounds = self.level_bounds(k)?;
        let pieces = bounds.len() as u64;
        let width = &(&self.b - &self.a) / &Rational::from_int(pieces);
        let mut breakpoints = Vec::with_capacity(bounds.len() + 1);
        for i in 0..=pieces {
            breakpoints.push(if i == pieces {
                self.b.clone()
            } else {
                &self.a + &(&width * &Rational::from_int(i))
            });
        }
        let lower = StepFunction1D::new(
            breakpoints.clone(),
            bounds.iter().map(|(lo, _)| lo.clone()).collect(),
        )?;
        let upper = StepFunction1D::new(
            breakpoints,
            bounds.iter().map(|(_, hi)| hi.clone()).collect(),
        )?;
        let gap = if k == 0 {
            self.oracle.everywhere_gap().map(|w| {
                let total = &w * &(&self.b - &self.a);
                GapCertificate {
                    reason: format!(
                        "every nondegenerate box has range width >= {w}, forcing \
                         upper sums at least {total} above lower sums"
                    ),
                    width: total,
                }
            })
        } else {
            None
        };
        self.prev = Some(bounds);
        Ok(GeneratorStep {
            lower: Some(RiemannCandidate::Step(lower)),
            upper: Some(RiemannCandidate::Step(upper)),
            cost: pieces,
            gap,
            exhausted: false,
        })
    }
}

/// Darboux sums at one refinement level, without running the engine.
pub fn darboux_sums(
    oracle: &RangeOracle,
    a: &Rational,
    b: &Rational,
    level: u64,
) -> Result<(Rational, Rational), OrdcloseError> {
    let mut gen = DyadicDarboux::new(oracle.clone(), a.clone(), b.clone())?;
    let mut sums = (Rational::zero(), Rational::zero());
    for k in 0..=level {
        let step = gen.next_step(
            &RiemannCandidate::General {
                oracle: oracle.clone(),
            },
            k,
        )?;
        let lower = match step.lower {
            Some(RiemannCandidate::Step(s)) => step_integral(&s),
            _ => unreachable!("generator always emits step bounds"),
        };
        let upper = match step.upper {
            Some(RiemannCandidate::Step(s)) => step_integral(&s),
            _ => unreachable!("generator always emits step bounds"),
        };
        sums = (lower, upper);
    }
    Ok(sums)
}

/// Enclose the integral of the integrand behind `oracle` over [a, b]
/// by uniform dyadic Darboux refinement.
pub fn darboux_extend(
    oracle: &RangeOracle,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
    budget: u64,
) -> Result<ExtensionOutcome<Rational>, OrdcloseError> {
    let problem = riemann_problem();
    let mut gen = DyadicDarboux::new(oracle.clone(), a.clone(), b.clone())?;
    let f = RiemannCandidate::General {
        oracle: oracle.clone(),
    };
    extend(&problem, &mut gen, &f, tol, budget)
}
