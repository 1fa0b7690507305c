//! Local behavior of one-variable functions: the "holds near p" order,
//! continuity as extension of "value of a constant function", and the
//! derivative at 0 through the difference-quotient net.
//!
//! The function space is again a closed syntax tree. Every expression
//! here has one-sided limits at every point, so each carries an exact
//! three-point profile (left limit, value, right limit) in addition to
//! interval range bounds over balls. Profiles decide the gap questions;
//! ranges drive the witness schedule.

use std::fmt;

use super::interval::{iv_abs, iv_add, iv_max, iv_mul, iv_neg, iv_point, iv_scale, Iv};
use super::seq::{classify_zero_limit, Metric, ZeroLimitVerdict};
use crate::engine::{
    extend, ApproximantGenerator, Enclosure, ExtensionOutcome, ExtensionProblem, GapCertificate,
    GeneratorStep, IsotonicMap,
};
use crate::order::{Preorder, RationalValueOrder};
use crate::rational::Rational;
use crate::OrdcloseError;

/// A function of one rational variable. `Poly` coefficients are listed
/// from the constant term up.
#[derive(Debug, Clone, PartialEq)]
pub enum FnExpr {
    Poly(Vec<Rational>),
    /// x ↦ −1, 0, 1 by the sign of x.
    Sign,
    /// x ↦ 0 for x < 0, else 1.
    Step,
    Add(Box<FnExpr>, Box<FnExpr>),
    Neg(Box<FnExpr>),
    Scale(Rational, Box<FnExpr>),
    Mul(Box<FnExpr>, Box<FnExpr>),
    Abs(Box<FnExpr>),
    Max(Box<FnExpr>, Box<FnExpr>),
}

/// Left limit, value, right limit at a point.
type Profile = (Rational, Rational, Rational);

fn pmap(a: &Profile, f: impl Fn(&Rational) -> Rational) -> Profile {
    (f(&a.0), f(&a.1), f(&a.2))
}

fn pzip(a: &Profile, b: &Profile, f: impl Fn(&Rational, &Rational) -> Rational) -> Profile {
    (f(&a.0, &b.0), f(&a.1, &b.1), f(&a.2, &b.2))
}

impl FnExpr {
    pub fn constant(c: impl Into<Rational>) -> Self {
        FnExpr::Poly(vec![c.into()])
    }

    /// x ↦ x.
    pub fn identity() -> Self {
        FnExpr::Poly(vec![Rational::zero(), Rational::one()])
    }

    /// x ↦ m·x.
    pub fn linear(m: Rational) -> Self {
        FnExpr::Poly(vec![Rational::zero(), m])
    }

    pub fn add(a: FnExpr, b: FnExpr) -> Self {
        FnExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: FnExpr, b: FnExpr) -> Self {
        FnExpr::add(a, FnExpr::Neg(Box::new(b)))
    }

    pub fn neg(a: FnExpr) -> Self {
        FnExpr::Neg(Box::new(a))
    }

    pub fn scale(c: Rational, a: FnExpr) -> Self {
        FnExpr::Scale(c, Box::new(a))
    }

    pub fn mul(a: FnExpr, b: FnExpr) -> Self {
        FnExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn abs(a: FnExpr) -> Self {
        FnExpr::Abs(Box::new(a))
    }

    pub fn max(a: FnExpr, b: FnExpr) -> Self {
        FnExpr::Max(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self {
            FnExpr::Poly(cs) => {
                let mut acc = Rational::zero();
                for c in cs.iter().rev() {
                    acc = &(&acc * x) + c;
                }
                acc
            }
            FnExpr::Sign => {
                if x.is_negative() {
                    -Rational::one()
                } else if x.is_positive() {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            FnExpr::Step => {
                if x.is_negative() {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            }
            FnExpr::Add(a, b) => a.eval(x) + b.eval(x),
            FnExpr::Neg(a) => -a.eval(x),
            FnExpr::Scale(c, a) => c * &a.eval(x),
            FnExpr::Mul(a, b) => a.eval(x) * b.eval(x),
            FnExpr::Abs(a) => a.eval(x).abs(),
            FnExpr::Max(a, b) => a.eval(x).max(b.eval(x)),
        }
    }

    fn ball_iv(&self, ball: &Iv) -> Iv {
        match self {
            FnExpr::Poly(cs) => poly_ball_iv(cs, ball),
            FnExpr::Sign => {
                if ball.0.is_positive() {
                    iv_point(Rational::one())
                } else if ball.1.is_negative() {
                    iv_point(-Rational::one())
                } else if !ball.0.is_negative() {
                    // ball starts at 0: sign takes 0 and possibly 1
                    (Rational::zero(), sign_upper(&ball.1))
                } else if !ball.1.is_positive() {
                    (-Rational::one(), Rational::zero())
                } else {
                    (-Rational::one(), Rational::one())
                }
            }
            FnExpr::Step => {
                if !ball.0.is_negative() {
                    iv_point(Rational::one())
                } else if ball.1.is_negative() {
                    iv_point(Rational::zero())
                } else {
                    (Rational::zero(), Rational::one())
                }
            }
            FnExpr::Add(a, b) => iv_add(&a.ball_iv(ball), &b.ball_iv(ball)),
            FnExpr::Neg(a) => iv_neg(&a.ball_iv(ball)),
            FnExpr::Scale(c, a) => iv_scale(c, &a.ball_iv(ball)),
            FnExpr::Mul(a, b) => iv_mul(&a.ball_iv(ball), &b.ball_iv(ball)),
            FnExpr::Abs(a) => iv_abs(&a.ball_iv(ball)),
            FnExpr::Max(a, b) => iv_max(&a.ball_iv(ball), &b.ball_iv(ball)),
        }
    }

    /// Interval bound on f over the closed ball of radius `delta` around
    /// `p`. Shrinks (weakly) as the ball shrinks.
    pub fn local_range(&self, p: &Rational, delta: &Rational) -> Enclosure<Rational> {
        let ball = (p - delta, p + delta);
        let (lo, hi) = self.ball_iv(&ball);
        Enclosure::new(&RationalValueOrder, lo, hi).expect("interval arithmetic is ordered")
    }

    /// Exact one-sided limits and value at `p`. Total on this syntax:
    /// every constructor preserves existence of one-sided limits.
    pub fn profile(&self, p: &Rational) -> (Rational, Rational, Rational) {
        match self {
            FnExpr::Poly(_) => {
                let v = self.eval(p);
                (v.clone(), v.clone(), v)
            }
            FnExpr::Sign => {
                if p.is_negative() {
                    let m = -Rational::one();
                    (m.clone(), m.clone(), m)
                } else if p.is_positive() {
                    (Rational::one(), Rational::one(), Rational::one())
                } else {
                    (-Rational::one(), Rational::zero(), Rational::one())
                }
            }
            FnExpr::Step => {
                if p.is_negative() {
                    (Rational::zero(), Rational::zero(), Rational::zero())
                } else if p.is_positive() {
                    (Rational::one(), Rational::one(), Rational::one())
                } else {
                    (Rational::zero(), Rational::one(), Rational::one())
                }
            }
            FnExpr::Add(a, b) => pzip(&a.profile(p), &b.profile(p), |x, y| x + y),
            FnExpr::Neg(a) => pmap(&a.profile(p), |x| -x),
            FnExpr::Scale(c, a) => pmap(&a.profile(p), |x| c * x),
            FnExpr::Mul(a, b) => pzip(&a.profile(p), &b.profile(p), |x, y| x * y),
            FnExpr::Abs(a) => pmap(&a.profile(p), Rational::abs),
            FnExpr::Max(a, b) => pzip(&a.profile(p), &b.profile(p), |x, y| {
                x.clone().max(y.clone())
            }),
        }
    }

    /// Limiting infimum and supremum over balls around `p`; with
    /// `punctured` the value at `p` itself is excluded. These are the
    /// closure bounds the ranges converge to.
    pub fn local_extremes(&self, p: &Rational, punctured: bool) -> (Rational, Rational) {
        let (l, a, r) = self.profile(p);
        let lo = l.clone().min(r.clone());
        let hi = l.max(r);
        if punctured {
            (lo, hi)
        } else {
            (lo.min(a.clone()), hi.max(a))
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self {
            FnExpr::Poly(cs) => {
                let mut tail = cs.iter().skip(1);
                if tail.all(Rational::is_zero) {
                    Some(cs.first().cloned().unwrap_or_else(Rational::zero))
                } else {
                    None
                }
            }
            FnExpr::Sign | FnExpr::Step => None,
            FnExpr::Add(a, b) => Some(a.as_constant()? + b.as_constant()?),
            FnExpr::Neg(a) => Some(-a.as_constant()?),
            FnExpr::Scale(c, a) => Some(c * &a.as_constant()?),
            FnExpr::Mul(a, b) => Some(a.as_constant()? * b.as_constant()?),
            FnExpr::Abs(a) => Some(a.as_constant()?.abs()),
            FnExpr::Max(a, b) => Some(a.as_constant()?.max(b.as_constant()?)),
        }
    }

    /// Structural f(x)/x for functions vanishing at 0, valid on punctured
    /// balls. `None` when the quotient leaves this syntax.
    pub fn diff_quotient(&self) -> Option<FnExpr> {
        match self {
            FnExpr::Poly(cs) => {
                let c0 = cs.first().cloned().unwrap_or_else(Rational::zero);
                if !c0.is_zero() {
                    return None;
                }
                Some(FnExpr::Poly(cs.iter().skip(1).cloned().collect()))
            }
            FnExpr::Sign | FnExpr::Step | FnExpr::Max(_, _) => None,
            FnExpr::Add(a, b) => Some(FnExpr::add(a.diff_quotient()?, b.diff_quotient()?)),
            FnExpr::Neg(a) => Some(FnExpr::neg(a.diff_quotient()?)),
            FnExpr::Scale(c, a) => Some(FnExpr::scale(c.clone(), a.diff_quotient()?)),
            FnExpr::Mul(a, b) => {
                if b.eval(&Rational::zero()).is_zero() {
                    if let Some(q) = b.diff_quotient() {
                        return Some(FnExpr::mul(a.as_ref().clone(), q));
                    }
                }
                if a.eval(&Rational::zero()).is_zero() {
                    if let Some(q) = a.diff_quotient() {
                        return Some(FnExpr::mul(q, b.as_ref().clone()));
                    }
                }
                None
            }
            // |e(x)|/x = |c|·sign(x) when e = c·x.
            FnExpr::Abs(a) => match a.diff_quotient()? {
                FnExpr::Poly(cs) if cs.len() <= 1 => {
                    let c = cs.first().cloned().unwrap_or_else(Rational::zero);
                    Some(FnExpr::scale(c.abs(), FnExpr::Sign))
                }
                _ => None,
            },
        }
    }
}

fn sign_upper(hi: &Rational) -> Rational {
    if hi.is_positive() {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Coefficients of p(c + t) from those of p(x), by binomial expansion.
fn taylor_shift(cs: &[Rational], c: &Rational) -> Vec<Rational> {
    let n = cs.len();
    let mut out = vec![Rational::zero(); n];
    // Pascal row by row: binom[j] = C(i, j) while scanning term i.
    for (i, a) in cs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mut binom = Rational::one();
        let mut power = a.clone();
        for j in (0..=i).rev() {
            out[j] = &out[j] + &(&binom * &power);
            if j > 0 {
                binom = binom * Rational::ratio(j as i64, (i - j + 1) as i64);
                power = &power * c;
            }
        }
    }
    out
}

/// Range of a polynomial over a ball, evaluated in the centered form:
/// even powers of the offset contribute one-signed intervals, which
/// keeps squares from going spuriously negative.
fn poly_ball_iv(cs: &[Rational], ball: &Iv) -> Iv {
    let two = Rational::int(2);
    let center = (&ball.0 + &ball.1) / two.clone();
    let radius = (&ball.1 - &ball.0) / two;
    let shifted = taylor_shift(cs, &center);
    let mut acc = iv_point(shifted.first().cloned().unwrap_or_else(Rational::zero));
    for (j, b) in shifted.iter().enumerate().skip(1) {
        if b.is_zero() {
            continue;
        }
        let r = radius.pow(j as i64).expect("nonnegative exponent");
        let monomial = if j % 2 == 0 {
            (Rational::zero(), r)
        } else {
            (-&r, r.clone())
        };
        acc = iv_add(&acc, &iv_scale(b, &monomial));
    }
    acc
}

impl fmt::Display for FnExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnExpr::Poly(cs) => {
                if cs.is_empty() {
                    return write!(f, "0");
                }
                let terms: Vec<String> = cs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| match i {
                        0 => format!("{c}"),
                        1 => format!("{c}*x"),
                        _ => format!("{c}*x^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join(" + "))
                }
            }
            FnExpr::Sign => write!(f, "sign(x)"),
            FnExpr::Step => write!(f, "step(x)"),
            FnExpr::Add(a, b) => write!(f, "({a} + {b})"),
            FnExpr::Neg(a) => write!(f, "-({a})"),
            FnExpr::Scale(c, a) => write!(f, "{c}*({a})"),
            FnExpr::Mul(a, b) => write!(f, "({a})*({b})"),
            FnExpr::Abs(a) => write!(f, "|{a}|"),
            FnExpr::Max(a, b) => write!(f, "max({a}, {b})"),
        }
    }
}

/// The preorder "f ≤ g on some ball around p", optionally with p itself
/// removed. Profiles decide strictly one-signed cases exactly; interval
/// ranges over shrinking balls decide the rest that is decidable here.
#[derive(Debug, Clone)]
pub struct LocallyLeq {
    pub base_point: Rational,
    pub punctured: bool,
}

impl LocallyLeq {
    pub fn at(p: Rational) -> Self {
        LocallyLeq {
            base_point: p,
            punctured: false,
        }
    }

    pub fn punctured_at(p: Rational) -> Self {
        LocallyLeq {
            base_point: p,
            punctured: true,
        }
    }
}

fn ball_probes() -> impl Iterator<Item = Rational> {
    (0..=60u32).map(|j| Rational::new(1u32, 1u64 << j).expect("positive denominator"))
}

impl Preorder for LocallyLeq {
    type Elem = FnExpr;

    fn try_leq(&self, f: &FnExpr, g: &FnExpr) -> Option<bool> {
        if f == g {
            return Some(true);
        }
        let diff = FnExpr::sub(g.clone(), f.clone());
        let (lo, _) = diff.local_extremes(&self.base_point, self.punctured);
        if lo.is_positive() {
            // both one-sided limits (and the value, if it counts) are
            // positive, so the difference is positive on a small ball
            return Some(true);
        }
        if lo.is_negative() {
            return Some(false);
        }
        for delta in ball_probes() {
            let range = diff.local_range(&self.base_point, &delta);
            if !range.lower().is_negative() {
                return Some(true);
            }
            if range.upper().is_negative() {
                return Some(false);
            }
        }
        None
    }
}

/// Kernel map of the continuity instance: a constant function to its
/// value.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstFnPhi;

impl IsotonicMap for ConstFnPhi {
    type Input = FnExpr;
    type Value = Rational;

    fn in_kernel(&self, a: &FnExpr) -> bool {
        a.as_constant().is_some()
    }

    fn eval(&self, a: &FnExpr) -> Result<Enclosure<Rational>, OrdcloseError> {
        let c = a
            .as_constant()
            .ok_or_else(|| OrdcloseError::Domain(format!("{a} is not a constant function")))?;
        Ok(Enclosure::point(c))
    }
}

pub type LocalValueProblem = ExtensionProblem<LocallyLeq, RationalValueOrder, ConstFnPhi>;

pub fn local_value_problem(order: LocallyLeq) -> LocalValueProblem {
    ExtensionProblem {
        candidate_order: order,
        value_order: RationalValueOrder,
        phi: ConstFnPhi,
    }
}

/// Witness schedule over shrinking balls: step k uses radius 2^(−k) and
/// emits the interval range bounds as constant functions. A profile
/// whose limiting extremes separate is reported once as a gap.
#[derive(Debug, Clone)]
pub struct BallSchedule {
    pub base_point: Rational,
    pub punctured: bool,
}

impl ApproximantGenerator for BallSchedule {
    type Candidate = FnExpr;

    fn next_step(&mut self, f: &FnExpr, k: u64) -> Result<GeneratorStep<FnExpr>, OrdcloseError> {
        let delta = Rational::new(1u32, 1u64 << k.min(62)).expect("positive denominator");
        let range = f.local_range(&self.base_point, &delta);
        let gap = if k == 0 {
            let (lo, hi) = f.local_extremes(&self.base_point, self.punctured);
            (hi > lo).then(|| GapCertificate {
                width: &hi - &lo,
                reason: format!(
                    "{f} near {}: limiting infimum {lo}, limiting supremum {hi}",
                    self.base_point
                ),
            })
        } else {
            None
        };
        Ok(GeneratorStep {
            lower: Some(FnExpr::constant(range.lower().clone())),
            upper: Some(FnExpr::constant(range.upper().clone())),
            cost: 1,
            gap,
            exhausted: false,
        })
    }
}

/// Continuity of f at p, as convergence of the constant-function bounds
/// over shrinking balls. Converged enclosures pin the common value of
/// limit and f(p); a certified gap is a certified discontinuity.
pub fn continuity_at(
    f: &FnExpr,
    p: &Rational,
    tol: &Rational,
    budget: u64,
) -> Result<ExtensionOutcome<Rational>, OrdcloseError> {
    let problem = local_value_problem(LocallyLeq::at(p.clone()));
    let mut gen = BallSchedule {
        base_point: p.clone(),
        punctured: false,
    };
    extend(&problem, &mut gen, f, tol, budget)
}

/// The distance function x ↦ d(f(x), f(p)) for a vector of components.
pub fn distance_function(
    components: &[FnExpr],
    p: &Rational,
    metric: Metric,
) -> Result<FnExpr, OrdcloseError> {
    if components.is_empty() {
        return Err(OrdcloseError::InvalidInput(
            "at least one component required".into(),
        ));
    }
    let mut parts = components.iter().map(|fi| {
        let at_p = fi.eval(p);
        FnExpr::abs(FnExpr::sub(fi.clone(), FnExpr::constant(at_p)))
    });
    let first = parts.next().expect("nonempty");
    Ok(parts.fold(first, |acc, part| match metric {
        Metric::Max => FnExpr::max(acc, part),
        Metric::Sum => FnExpr::add(acc, part),
    }))
}

/// Continuity of a vector function at p via its scalar distance
/// function: confirmed when the distance certifiably vanishes, refuted
/// when it certifiably does not.
pub fn metric_continuity_check(
    components: &[FnExpr],
    p: &Rational,
    metric: Metric,
    tol: &Rational,
    budget: u64,
) -> Result<(ExtensionOutcome<Rational>, ZeroLimitVerdict), OrdcloseError> {
    let dist = distance_function(components, p, metric)?;
    let outcome = continuity_at(&dist, p, tol, budget)?;
    let verdict = classify_zero_limit(&outcome);
    Ok((outcome, verdict))
}

/// Derivative of f at 0 through the difference quotient f(x)/x over
/// punctured balls. Linear parts land in the kernel and come back
/// exactly; a certified quotient gap certifies non-differentiability.
pub fn derivative_at_zero(
    f: &FnExpr,
    tol: &Rational,
    budget: u64,
) -> Result<ExtensionOutcome<Rational>, OrdcloseError> {
    let zero = Rational::zero();
    if !f.eval(&zero).is_zero() {
        return Err(OrdcloseError::Domain(format!(
            "{f} does not vanish at 0, so it is outside the tangency space"
        )));
    }
    let quotient = f.diff_quotient().ok_or_else(|| {
        OrdcloseError::Domain(format!(
            "difference quotient of {f} is not structurally representable"
        ))
    })?;
    let problem = local_value_problem(LocallyLeq::punctured_at(zero.clone()));
    let mut gen = BallSchedule {
        base_point: zero,
        punctured: true,
    };
    extend(&problem, &mut gen, &quotient, tol, budget)
}

/// Tangential domination at 0: f ⪯ g when for every ε > 0 the bound
/// f ≤ g + ε·|x| holds near 0. Decided through the sign profile of
/// (g−f)(x)/x · sign(x), which is exactly the punctured limiting
/// behavior of (g−f)/|x|.
#[derive(Debug, Clone, Copy, Default)]
pub struct TangentialLeq;

impl Preorder for TangentialLeq {
    type Elem = FnExpr;

    fn try_leq(&self, f: &FnExpr, g: &FnExpr) -> Option<bool> {
        if f == g {
            return Some(true);
        }
        let zero = Rational::zero();
        if !f.eval(&zero).is_zero() || !g.eval(&zero).is_zero() {
            return None;
        }
        let diff = FnExpr::sub(g.clone(), f.clone());
        let quotient = diff.diff_quotient()?;
        let signed = FnExpr::mul(quotient, FnExpr::Sign);
        let (lo, _) = signed.local_extremes(&zero, true);
        if lo.is_negative() {
            Some(false)
        } else {
            Some(true)
        }
    }
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

    fn x_squared() -> FnExpr {
        FnExpr::Poly(vec![Rational::zero(), Rational::zero(), Rational::one()])
    }

    #[test]
    fn identity_is_continuous_at_zero() {
        let out = continuity_at(&FnExpr::identity(), &Rational::zero(), &tol("1e-6"), 1000)
            .unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        let enc = out.enclosure.unwrap();
        assert!(enc.contains(&RationalValueOrder, &Rational::zero()));
        assert!(enc.width(&RationalValueOrder).unwrap() <= tol("1e-6"));
    }

    #[test]
    fn square_is_continuous_away_from_zero() {
        let out = continuity_at(&x_squared(), &q(3, 1), &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        assert!(out
            .enclosure
            .unwrap()
            .contains(&RationalValueOrder, &q(9, 1)));
    }

    #[test]
    fn sign_at_zero_has_gap_two() {
        let out = continuity_at(&FnExpr::Sign, &Rational::zero(), &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::GapAtLeast(q(2, 1)));
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &q(-1, 1));
        assert_eq!(enc.upper(), &q(1, 1));
    }

    #[test]
    fn sign_away_from_zero_is_continuous() {
        let out = continuity_at(&FnExpr::Sign, &q(1, 3), &tol("1e-9"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &q(1, 1));
        assert_eq!(enc.upper(), &q(1, 1));
    }

    #[test]
    fn step_at_zero_has_gap_one() {
        let out = continuity_at(&FnExpr::Step, &Rational::zero(), &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::GapAtLeast(q(1, 1)));
    }

    #[test]
    fn absolute_value_is_continuous_at_zero() {
        let f = FnExpr::abs(FnExpr::identity());
        let out = continuity_at(&f, &Rational::zero(), &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        assert!(out
            .enclosure
            .unwrap()
            .contains(&RationalValueOrder, &Rational::zero()));
    }

    #[test]
    fn locally_leq_is_not_antisymmetric() {
        // step and the constant 1 agree on a ball around 1 but differ
        // as functions
        let rel = LocallyLeq::at(Rational::one());
        let f = FnExpr::Step;
        let g = FnExpr::constant(Rational::one());
        assert_ne!(f, g);
        assert_eq!(rel.try_leq(&f, &g), Some(true));
        assert_eq!(rel.try_leq(&g, &f), Some(true));
    }

    #[test]
    fn locally_leq_certifies_and_refutes() {
        let rel = LocallyLeq::at(Rational::zero());
        assert_eq!(
            rel.try_leq(&FnExpr::constant(q(-1, 1)), &FnExpr::Sign),
            Some(true)
        );
        assert_eq!(
            rel.try_leq(&FnExpr::constant(q(1, 2)), &FnExpr::Sign),
            Some(false)
        );
        // x² ≥ 0 near 0 despite the loose interval square
        assert_eq!(
            rel.try_leq(&FnExpr::constant(Rational::zero()), &x_squared()),
            Some(true)
        );
    }

    #[test]
    fn local_preorder_laws_hold_on_samples() {
        let samples = vec![
            FnExpr::constant(Rational::zero()),
            FnExpr::constant(q(1, 2)),
            FnExpr::identity(),
            FnExpr::Sign,
            FnExpr::Step,
            FnExpr::abs(FnExpr::identity()),
            x_squared(),
        ];
        let report = check_preorder_laws(&LocallyLeq::at(Rational::zero()), &samples, "locally-leq");
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn metric_continuity_confirmed_for_linear_pair() {
        let components = [FnExpr::identity(), FnExpr::linear(q(2, 1))];
        let (_, verdict) = metric_continuity_check(
            &components,
            &Rational::zero(),
            Metric::Max,
            &tol("1e-6"),
            1000,
        )
        .unwrap();
        assert_eq!(verdict, ZeroLimitVerdict::Confirmed);
    }

    #[test]
    fn metric_continuity_refuted_for_coordinate_swap_step() {
        // f = (step, 1−step) jumps between (0,1) and (1,0) across 0
        let components = [
            FnExpr::Step,
            FnExpr::sub(FnExpr::constant(Rational::one()), FnExpr::Step),
        ];
        let (out, verdict) = metric_continuity_check(
            &components,
            &Rational::zero(),
            Metric::Max,
            &tol("1e-6"),
            1000,
        )
        .unwrap();
        assert_eq!(verdict, ZeroLimitVerdict::Refuted);
        assert!(matches!(out.status, ExtensionStatus::GapAtLeast(_)));
    }

    #[test]
    fn derivative_of_linear_is_its_slope_exactly() {
        let out = derivative_at_zero(&FnExpr::linear(q(5, 3)), &tol("1e-9"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        assert_eq!(out.iterations, 1);
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &q(5, 3));
        assert_eq!(enc.upper(), &q(5, 3));
    }

    #[test]
    fn derivative_of_square_encloses_zero() {
        let out = derivative_at_zero(&x_squared(), &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        let enc = out.enclosure.unwrap();
        assert!(enc.contains(&RationalValueOrder, &Rational::zero()));
        assert!(enc.width(&RationalValueOrder).unwrap() <= tol("1e-6"));
    }

    #[test]
    fn absolute_value_is_not_differentiable() {
        let f = FnExpr::abs(FnExpr::identity());
        let out = derivative_at_zero(&f, &tol("1e-6"), 1000).unwrap();
        assert_eq!(out.status, ExtensionStatus::GapAtLeast(q(2, 1)));
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &q(-1, 1));
        assert_eq!(enc.upper(), &q(1, 1));
    }

    #[test]
    fn derivative_requires_vanishing_at_zero() {
        let err = derivative_at_zero(&FnExpr::constant(q(1, 1)), &tol("1e-6"), 1000).unwrap_err();
        assert!(matches!(err, OrdcloseError::Domain(_)));
    }

    #[test]
    fn distinct_slopes_are_tangentially_incomparable() {
        let slopes = [q(-2, 1), q(-1, 2), Rational::zero(), q(1, 3), q(1, 1), q(7, 2)];
        for a in &slopes {
            for b in &slopes {
                let f = FnExpr::linear(a.clone());
                let g = FnExpr::linear(b.clone());
                let expected = Some(a == b);
                assert_eq!(
                    TangentialLeq.try_leq(&f, &g),
                    expected,
                    "slopes {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn tangential_order_sees_through_quadratic_noise() {
        // x² ⪰ 0 and x² ⪯ 0: quadratics vanish to first order
        let zero = FnExpr::constant(Rational::zero());
        assert_eq!(TangentialLeq.try_leq(&zero, &x_squared()), Some(true));
        assert_eq!(TangentialLeq.try_leq(&x_squared(), &zero), Some(true));
        // |x| dominates 0 strictly: one direction only
        let absx = FnExpr::abs(FnExpr::identity());
        assert_eq!(TangentialLeq.try_leq(&zero, &absx), Some(true));
        assert_eq!(TangentialLeq.try_leq(&absx, &zero), Some(false));
    }

    proptest! {
        /// Scaling a function scales its derivative enclosure.
        #[test]
        fn derivative_scales_with_the_function(num in 1i64..40, den in 1i64..40) {
            let lambda = q(num, den);
            let base = x_squared();
            let scaled = FnExpr::scale(lambda.clone(), base.clone());
            let t = tol("1e-6");
            let out_base = derivative_at_zero(&base, &t, 2000).unwrap();
            let out_scaled = derivative_at_zero(&scaled, &(lambda.clone() * t), 2000).unwrap();
            prop_assert_eq!(out_base.status, ExtensionStatus::Converged);
            prop_assert_eq!(out_scaled.status, ExtensionStatus::Converged);
            let b = out_base.enclosure.unwrap();
            let s = out_scaled.enclosure.unwrap();
            prop_assert_eq!(&(&lambda * b.lower()), s.lower());
            prop_assert_eq!(&(&lambda * b.upper()), s.upper());
        }

        /// Ball ranges are sound and nested.
        #[test]
        fn ball_ranges_sound_and_nested(
            coeffs in proptest::collection::vec(-9i64..9, 0..4),
            p_num in -6i64..6,
            j in 0u32..12,
        ) {
            let f = FnExpr::add(
                FnExpr::Poly(coeffs.iter().map(|&c| Rational::int(c)).collect()),
                FnExpr::abs(FnExpr::identity()),
            );
            let p = Rational::ratio(p_num, 2);
            let delta = Rational::new(1u32, 1u64 << j).unwrap();
            let outer = f.local_range(&p, &delta);
            let half = &delta * &Rational::ratio(1, 2);
            let inner = f.local_range(&p, &half);
            prop_assert!(outer.lower() <= inner.lower());
            prop_assert!(inner.upper() <= outer.upper());
            for i in -4i64..=4 {
                let x = &p + &(&delta * &Rational::ratio(i, 4));
                prop_assert!(outer.contains(&RationalValueOrder, &f.eval(&x)));
            }
        }

        /// Profiles agree with evaluation close to the base point, up to
        /// the distance travelled.
        #[test]
        fn profile_matches_nearby_values(p_num in -4i64..4) {
            let p = Rational::ratio(p_num, 1);
            let eps = Rational::new(1u32, 1u64 << 40).unwrap();
            let slack = &eps + &eps;
            for f in [FnExpr::Sign, FnExpr::Step, FnExpr::abs(FnExpr::identity())] {
                let (l, a, r) = f.profile(&p);
                prop_assert_eq!(&a, &f.eval(&p));
                prop_assert!((&l - &f.eval(&(&p - &eps))).abs() <= slack);
                prop_assert!((&r - &f.eval(&(&p + &eps))).abs() <= slack);
            }
        }
    }
}
