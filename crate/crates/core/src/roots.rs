//! Roots and exponentials as extension instances.
//!
//! The n-th root of a positive rational f is squeezed between perfect
//! n-th powers: the kernel is {xⁿ | x ∈ ℚ⁺}, the kernel map sends xⁿ to
//! x, and the generator bisects a rational bracket [lo, hi] maintaining
//! loⁿ ≤ f ≤ hiⁿ in exact arithmetic. Endpoint certificates therefore
//! never involve tolerances, only the final width does.
//!
//! Powers u^f for u > 1 ride on the roots. A rational exponent p/q with
//! small odd q becomes (uᵖ)^(1/q); an exponent with a power-of-two
//! denominator takes a cheaper route through nested outward square roots
//! and interval binary exponentiation, which is what makes tightly
//! squeezed real exponents (dyadic bounds with large denominators)
//! affordable.

use std::fmt;

use num::bigint::{BigInt, Sign};
use num::traits::Pow;

use crate::engine::{
    extend, ApproximantGenerator, Enclosure, ExtensionOutcome, ExtensionProblem, ExtensionStatus,
    GeneratorStep, IsotonicMap,
};
use crate::order::{Preorder, RationalValueOrder, ValuePreorder};
use crate::rational::Rational;
use crate::OrdcloseError;

/// An n-th root problem: the positive radicand and the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootQuery {
    radicand: Rational,
    degree: u32,
}

impl RootQuery {
    pub fn new(radicand: Rational, degree: u32) -> Result<Self, OrdcloseError> {
        if !radicand.is_positive() {
            return Err(OrdcloseError::InvalidInput(
                "radicand must be positive".into(),
            ));
        }
        if degree == 0 {
            return Err(OrdcloseError::InvalidInput(
                "degree must be at least 1".into(),
            ));
        }
        Ok(RootQuery { radicand, degree })
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// Exact n-th root of a nonnegative integer, if it is a perfect power.
fn exact_int_root(x: &BigInt, n: u32) -> Option<BigInt> {
    let r = x.nth_root(n);
    if Pow::pow(&r, n) == *x {
        Some(r)
    } else {
        None
    }
}

/// Exact n-th root of a positive rational in lowest terms. Because
/// numerator and denominator share no factor, the rational is a perfect
/// n-th power iff both parts are.
pub fn exact_rational_root(x: &Rational, n: u32) -> Option<Rational> {
    if !x.is_positive() {
        return None;
    }
    let p = exact_int_root(x.numer(), n)?;
    let q = exact_int_root(x.denom(), n)?;
    Some(Rational::new(p, q).expect("roots of positive parts are positive"))
}

/// The kernel map of the root instance: perfect n-th powers to their
/// roots. Evaluation is exact.
#[derive(Debug, Clone)]
pub struct RootPhi {
    degree: u32,
}

impl IsotonicMap for RootPhi {
    type Input = Rational;
    type Value = Rational;

    fn in_kernel(&self, a: &Rational) -> bool {
        exact_rational_root(a, self.degree).is_some()
    }

    fn eval(&self, a: &Rational) -> Result<Enclosure<Rational>, OrdcloseError> {
        let root = exact_rational_root(a, self.degree).ok_or_else(|| {
            OrdcloseError::Domain(format!(
                "{a} is not a perfect power of degree {}",
                self.degree
            ))
        })?;
        Ok(Enclosure::point(root))
    }
}

pub type RootProblem =
    ExtensionProblem<ValuePreorder<RationalValueOrder>, RationalValueOrder, RootPhi>;

pub fn root_problem(degree: u32) -> RootProblem {
    ExtensionProblem {
        candidate_order: ValuePreorder(RationalValueOrder),
        value_order: RationalValueOrder,
        phi: RootPhi { degree },
    }
}

/// 2^e as an exact rational, negative exponents included.
fn pow2(e: i64) -> Rational {
    Rational::int(2).pow(e).expect("two is invertible")
}

/// Exact comparison 2^s ≤ p/q for a positive rational, by shifting the
/// appropriate side; never materializes a huge power unless one of the
/// inputs already is one.
fn pow2_leq(s: i64, f: &Rational) -> bool {
    if s >= 0 {
        (f.denom() << (s as u64)) <= *f.numer()
    } else {
        *f.denom() <= (f.numer() << ((-s) as u64))
    }
}

/// Exact comparison p/q ≤ 2^s.
fn leq_pow2(f: &Rational, s: i64) -> bool {
    if s >= 0 {
        *f.numer() <= (f.denom() << (s as u64))
    } else {
        (f.numer() << ((-s) as u64)) <= *f.denom()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RootPhase {
    Start,
    Narrow,
    Halve,
}

/// Bisection schedule for the root instance. Maintains a rational
/// bracket [lo, hi] with loⁿ ≤ f ≤ hiⁿ; every emitted witness is the
/// n-th power of a bracket endpoint, hence a kernel member beside f.
///
/// The schedule opens with the bracket [min(1,f), max(1,f)], then snaps
/// it to adjacent powers of two by exact shift comparisons before
/// switching to midpoint halving. The narrowing step is what keeps
/// radicands with enormous magnitude (powers uᵖ fed in by the
/// exponential instance) affordable: it reaches the right binade in
/// logarithmic work instead of halving a bracket of astronomical width.
#[derive(Debug, Clone)]
pub struct RootBisection {
    degree: u32,
    phase: RootPhase,
    bracket: Option<(Rational, Rational)>,
}

impl RootBisection {
    pub fn new(degree: u32) -> Self {
        RootBisection {
            degree,
            phase: RootPhase::Start,
            bracket: None,
        }
    }

    fn power(&self, x: &Rational) -> Rational {
        x.pow(self.degree as i64).expect("positive base")
    }

    /// Adjacent power-of-two exponents (e, e+1) with 2^(e·n) ≤ f ≤
    /// 2^((e+1)·n), found from bit lengths and a short exact adjustment.
    fn binade(&self, f: &Rational) -> (i64, i64, u64) {
        let n = self.degree as i64;
        let t = f.numer().bits() as i64 - f.denom().bits() as i64;
        let mut probes = 0u64;
        let mut e_lo = (t - 1).div_euclid(n) - 1;
        while !pow2_leq(e_lo * n, f) {
            e_lo -= 1;
            probes += 1;
        }
        while pow2_leq((e_lo + 1) * n, f) {
            e_lo += 1;
            probes += 1;
        }
        let mut e_hi = (t + 1).div_euclid(n) + 2;
        while !leq_pow2(f, e_hi * n) {
            e_hi += 1;
            probes += 1;
        }
        while e_hi - 1 > e_lo && leq_pow2(f, (e_hi - 1) * n) {
            e_hi -= 1;
            probes += 1;
        }
        (e_lo, e_hi, probes + 4)
    }
}

impl ApproximantGenerator for RootBisection {
    type Candidate = Rational;

    fn next_step(
        &mut self,
        f: &Rational,
        _k: u64,
    ) -> Result<GeneratorStep<Rational>, OrdcloseError> {
        if !f.is_positive() {
            return Err(OrdcloseError::InvalidInput(
                "radicand must be positive".into(),
            ));
        }
        match self.phase {
            RootPhase::Start => {
                // Initial bracket [min(1,f), max(1,f)]: xⁿ is monotone on
                // positive rationals and fixes 1, so it always squeezes f.
                let one = Rational::one();
                let lo = f.clone().min(one.clone());
                let hi = f.clone().max(one);
                let exhausted = lo == hi;
                self.bracket = Some((lo.clone(), hi.clone()));
                self.phase = RootPhase::Narrow;
                Ok(GeneratorStep {
                    lower: Some(self.power(&lo)),
                    upper: Some(self.power(&hi)),
                    cost: 2,
                    gap: None,
                    exhausted,
                })
            }
            RootPhase::Narrow => {
                let (old_lo, old_hi) = self.bracket.clone().expect("bracket set in start phase");
                let (e_lo, e_hi, probes) = self.binade(f);
                let lo = old_lo.max(pow2(e_lo));
                let hi = old_hi.min(pow2(e_hi));
                self.bracket = Some((lo.clone(), hi.clone()));
                self.phase = RootPhase::Halve;
                Ok(GeneratorStep {
                    lower: Some(self.power(&lo)),
                    upper: Some(self.power(&hi)),
                    cost: probes,
                    gap: None,
                    exhausted: false,
                })
            }
            RootPhase::Halve => {
                let (lo, hi) = self.bracket.clone().expect("bracket set in start phase");
                let mid = lo.midpoint(&hi);
                let mid_pow = self.power(&mid);
                let step = if mid_pow <= *f {
                    self.bracket = Some((mid, hi));
                    GeneratorStep {
                        lower: Some(mid_pow),
                        ..GeneratorStep::empty()
                    }
                } else {
                    self.bracket = Some((lo, mid));
                    GeneratorStep {
                        upper: Some(mid_pow),
                        ..GeneratorStep::empty()
                    }
                };
                Ok(step)
            }
        }
    }
}

/// Runs the root instance to a full outcome.
pub fn nth_root_extend(
    query: &RootQuery,
    tol: &Rational,
    budget: u64,
) -> Result<ExtensionOutcome<Rational>, OrdcloseError> {
    let problem = root_problem(query.degree);
    let mut gen = RootBisection::new(query.degree);
    extend(&problem, &mut gen, &query.radicand, tol, budget)
}

/// Enclosure [a, b] of the n-th root with aⁿ ≤ radicand ≤ bⁿ exactly and
/// b − a ≤ tol. Errors with `BudgetExhausted` when the bisection budget
/// cannot reach the tolerance.
pub fn nth_root(
    query: &RootQuery,
    tol: &Rational,
    budget: u64,
) -> Result<Enclosure<Rational>, OrdcloseError> {
    let out = nth_root_extend(query, tol, budget)?;
    match out.status {
        ExtensionStatus::Converged => Ok(out.enclosure.expect("converged outcome encloses")),
        ExtensionStatus::BudgetExhausted => Err(OrdcloseError::BudgetExhausted { budget }),
        status => Err(OrdcloseError::Domain(format!(
            "root refinement stopped with status: {status}"
        ))),
    }
}

/// Floor of x·2^w over 2^w: the largest w-bit dyadic below x.
fn round_down_dyadic(x: &Rational, w: u32) -> Rational {
    let scaled = x * &pow2(w as i64);
    Rational::new(scaled.floor_int(), BigInt::from(1) << w).expect("power of two denominator")
}

fn ceil_int(x: &Rational) -> BigInt {
    let f = x.floor_int();
    if x.is_integer() {
        f
    } else {
        f + 1
    }
}

fn round_up_dyadic(x: &Rational, w: u32) -> Rational {
    let scaled = x * &pow2(w as i64);
    Rational::new(ceil_int(&scaled), BigInt::from(1) << w).expect("power of two denominator")
}

/// Largest w-bit dyadic at most √x, for x ≥ 0: isqrt(floor(x·4^w))/2^w.
fn sqrt_down_dyadic(x: &Rational, w: u32) -> Rational {
    let scaled = x * &pow2(2 * w as i64);
    let s = scaled.floor_int().sqrt();
    Rational::new(s, BigInt::from(1) << w).expect("power of two denominator")
}

/// Smallest w-bit dyadic at least √x.
fn sqrt_up_dyadic(x: &Rational, w: u32) -> Rational {
    let scaled = x * &pow2(2 * w as i64);
    let t = ceil_int(&scaled);
    let mut s = t.sqrt();
    if &s * &s < t {
        s += 1;
    }
    Rational::new(s, BigInt::from(1) << w).expect("power of two denominator")
}

/// Outward interval evaluation of u^(p/2^k) for u > 1 at w fractional
/// bits of working precision: k nested square roots of u, then binary
/// exponentiation by |p| with every product rounded outward, and an
/// exact reciprocal for negative p. All intermediate numbers keep
/// denominators of 2^w, so the cost stays polynomial in w and log|p|
/// regardless of how large the dyadic denominator 2^k is.
fn dyadic_power_once(u: &Rational, p: &BigInt, k: u32, w: u32) -> Enclosure<Rational> {
    let one = Rational::one();
    if p.sign() == Sign::NoSign {
        return Enclosure::point(one);
    }
    let mut root_lo = round_down_dyadic(u, w);
    let mut root_hi = round_up_dyadic(u, w);
    for _ in 0..k {
        root_lo = sqrt_down_dyadic(&root_lo, w);
        root_hi = sqrt_up_dyadic(&root_hi, w);
    }
    // u > 1, so every root stays ≥ 1 and interval products keep their
    // endpoint roles; clamp the rounded lower bound to be safe.
    if root_lo < one {
        root_lo = one.clone();
    }

    let mut acc_lo = one.clone();
    let mut acc_hi = one.clone();
    let mut e = p.magnitude().clone();
    loop {
        if e.bit(0) {
            acc_lo = round_down_dyadic(&(&acc_lo * &root_lo), w);
            acc_hi = round_up_dyadic(&(&acc_hi * &root_hi), w);
        }
        e >>= 1;
        if e.bits() == 0 {
            break;
        }
        root_lo = round_down_dyadic(&(&root_lo * &root_lo), w);
        root_hi = round_up_dyadic(&(&root_hi * &root_hi), w);
    }
    if acc_lo < one {
        acc_lo = one.clone();
    }
    if p.sign() == Sign::Minus {
        // Exact reciprocal swaps the endpoints; widths only shrink since
        // both endpoints are ≥ 1.
        let new_lo = acc_hi.recip().expect("positive");
        let new_hi = acc_lo.recip().expect("positive");
        acc_lo = new_lo;
        acc_hi = new_hi;
    }
    // Outward construction keeps lo ≤ u^(p/2^k) ≤ hi by induction.
    Enclosure::new(&RationalValueOrder, acc_lo, acc_hi).expect("outward bounds ordered")
}

/// u^(p/2^k) to the requested width, doubling precision until the exact
/// width check passes.
fn dyadic_power(
    u: &Rational,
    p: &BigInt,
    k: u32,
    tol: &Rational,
) -> Result<Enclosure<Rational>, OrdcloseError> {
    let tol_bits = if *tol >= Rational::one() {
        1
    } else {
        tol.recip()?.floor_int().bits() as u32 + 1
    };
    let p_bits = p.magnitude().bits() as u32;
    // Magnitude of the result in bits, overestimated from |p|/2^k.
    let value_bits = (p_bits.saturating_sub(k) + 2) * (u.numer().bits() as u32 + 1);
    let mut w = 64 + 2 * k + p_bits + tol_bits + value_bits.min(1 << 20);
    for _ in 0..4 {
        let enc = dyadic_power_once(u, p, k, w);
        if enc
            .width(&RationalValueOrder)
            .map_or(false, |width| width <= *tol)
        {
            return Ok(enc);
        }
        w *= 2;
    }
    Err(OrdcloseError::Domain(
        "dyadic power failed to reach tolerance after precision retries".into(),
    ))
}

/// log2 of a positive integer, if it is a power of two.
fn power_of_two_log(d: &BigInt) -> Option<u32> {
    let tz = d.trailing_zeros()?;
    if (d >> tz).bits() == 1 {
        u32::try_from(tz).ok()
    } else {
        None
    }
}

/// Practical bound on the non-dyadic exponent denominator: beyond this
/// the q-th powers inside the bisection dominate everything else.
const MAX_ODD_DENOM: u32 = 1 << 12;
/// Practical bound on the bit size of uᵖ in the composition path.
const MAX_POWER_BITS: u64 = 1 << 21;
/// Bisection allowance for the root runs inside power evaluation; far
/// beyond any tolerance a caller can express in practice.
const POWER_BUDGET: u64 = 1 << 24;

/// Enclosure of u^r for rational r = p/q in lowest terms. Integer
/// exponents, negative ones included, are exact; power-of-two q takes
/// the dyadic route; other q become (uᵖ)^(1/q) through the root
/// instance.
pub fn rational_power(
    u: &Rational,
    r: &Rational,
    tol: &Rational,
) -> Result<Enclosure<Rational>, OrdcloseError> {
    if *u <= Rational::one() {
        return Err(OrdcloseError::InvalidInput(
            "exponential base must exceed 1".into(),
        ));
    }
    if !tol.is_positive() {
        return Err(OrdcloseError::InvalidInput(
            "tolerance must be positive".into(),
        ));
    }
    if r.is_integer() {
        let p: i64 = r.numer().try_into().map_err(|_| {
            OrdcloseError::InvalidInput(format!("exponent {} out of range", r.numer()))
        })?;
        return Ok(Enclosure::point(u.pow(p)?));
    }
    if let Some(k) = power_of_two_log(r.denom()) {
        return dyadic_power(u, r.numer(), k, tol);
    }
    let p: i64 = r.numer().try_into().map_err(|_| {
        OrdcloseError::InvalidInput(format!("exponent numerator {} out of range", r.numer()))
    })?;
    let q: u32 = r.denom().try_into().ok().filter(|q| *q <= MAX_ODD_DENOM).ok_or_else(|| {
        OrdcloseError::InvalidInput(format!(
            "exponent denominator {} exceeds the supported bound {MAX_ODD_DENOM} for non-dyadic exponents",
            r.denom()
        ))
    })?;
    if p.unsigned_abs().saturating_mul(u.numer().bits().max(u.denom().bits())) > MAX_POWER_BITS {
        return Err(OrdcloseError::InvalidInput(format!(
            "u^{p} too large for exact evaluation"
        )));
    }
    let u_p = u.pow(p)?;
    // Inner tolerance keeps the composition outward-safe without a
    // propagation analysis; the root enclosure itself encloses u^r.
    let inner = tol / &(Rational::int(4) * u_p.clone().max(Rational::one()));
    let query = RootQuery::new(u_p, q)?;
    nth_root(&query, &inner, POWER_BUDGET)
}

/// An exponential problem: base u > 1 and an exponent, either an exact
/// rational or a real number given by a rational enclosure.
#[derive(Debug, Clone)]
pub struct ExpQuery {
    base: Rational,
    exponent: RealExponent,
}

impl ExpQuery {
    pub fn rational(base: Rational, exponent: Rational) -> Result<Self, OrdcloseError> {
        Self::new(base, RealExponent::Rational(exponent))
    }

    pub fn squeezed(base: Rational, exponent: Enclosure<Rational>) -> Result<Self, OrdcloseError> {
        Self::new(base, RealExponent::Squeeze(exponent))
    }

    fn new(base: Rational, exponent: RealExponent) -> Result<Self, OrdcloseError> {
        if base <= Rational::one() {
            return Err(OrdcloseError::InvalidInput(
                "exponential base must exceed 1".into(),
            ));
        }
        Ok(ExpQuery { base, exponent })
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn exponent(&self) -> &RealExponent {
        &self.exponent
    }
}

/// A real exponent: either an exact rational (a kernel member) or a
/// number known only through rational bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealExponent {
    Rational(Rational),
    Squeeze(Enclosure<Rational>),
}

impl RealExponent {
    fn bounds(&self) -> (&Rational, &Rational) {
        match self {
            RealExponent::Rational(r) => (r, r),
            RealExponent::Squeeze(e) => (e.lower(), e.upper()),
        }
    }
}

impl fmt::Display for RealExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealExponent::Rational(r) => write!(f, "{r}"),
            RealExponent::Squeeze(e) => write!(f, "{e}"),
        }
    }
}

/// Order on real exponents. A comparison is certified only when the
/// rational bounds separate; overlapping enclosures stay undecided.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealExponentOrder;

impl Preorder for RealExponentOrder {
    type Elem = RealExponent;

    fn try_leq(&self, a: &RealExponent, b: &RealExponent) -> Option<bool> {
        let (a_lo, a_hi) = a.bounds();
        let (b_lo, b_hi) = b.bounds();
        if a_hi <= b_lo {
            Some(true)
        } else if a_lo > b_hi {
            Some(false)
        } else if a == b {
            Some(true)
        } else {
            None
        }
    }
}

/// Kernel map of the exponential instance: rational exponents r to u^r.
/// Values are irrational in general, so evaluation returns an enclosure
/// of the configured width.
#[derive(Debug, Clone)]
pub struct ExpPhi {
    base: Rational,
    eval_tol: Rational,
}

impl IsotonicMap for ExpPhi {
    type Input = RealExponent;
    type Value = Rational;

    fn in_kernel(&self, a: &RealExponent) -> bool {
        matches!(a, RealExponent::Rational(_))
    }

    fn eval(&self, a: &RealExponent) -> Result<Enclosure<Rational>, OrdcloseError> {
        match a {
            RealExponent::Rational(r) => rational_power(&self.base, r, &self.eval_tol),
            RealExponent::Squeeze(e) => Err(OrdcloseError::Domain(format!(
                "exponent {e} is not a kernel rational"
            ))),
        }
    }
}

pub type ExpProblem = ExtensionProblem<RealExponentOrder, RationalValueOrder, ExpPhi>;

pub fn exp_problem(base: Rational, eval_tol: Rational) -> ExpProblem {
    ExtensionProblem {
        candidate_order: RealExponentOrder,
        value_order: RationalValueOrder,
        phi: ExpPhi { base, eval_tol },
    }
}

/// Witness schedule for the exponential instance: rational exponents are
/// their own witnesses through the kernel seed, and a squeezed exponent
/// is approached on dyadic grids of doubling resolution, snapping its
/// lower bound down and its upper bound up. Every emitted exponent has a
/// power-of-two denominator, so evaluation stays on the cheap path.
#[derive(Debug, Clone, Default)]
pub struct ExpSqueeze {
    grid: u32,
}

/// Finest grid: slack 2^-80 is far below any practical tolerance, so
/// refining past it cannot help and the schedule reports exhaustion.
const MAX_GRID: u32 = 80;

impl ApproximantGenerator for ExpSqueeze {
    type Candidate = RealExponent;

    fn next_step(
        &mut self,
        f: &RealExponent,
        _k: u64,
    ) -> Result<GeneratorStep<RealExponent>, OrdcloseError> {
        let step = match f {
            RealExponent::Rational(_) => GeneratorStep {
                exhausted: true,
                ..GeneratorStep::empty()
            },
            RealExponent::Squeeze(e) => {
                let j = self.grid;
                self.grid = (self.grid + 4).min(MAX_GRID);
                let a = round_down_dyadic(e.lower(), j);
                let b = round_up_dyadic(e.upper(), j);
                GeneratorStep {
                    lower: Some(RealExponent::Rational(a)),
                    upper: Some(RealExponent::Rational(b)),
                    cost: 1,
                    gap: None,
                    exhausted: j >= MAX_GRID,
                }
            }
        };
        Ok(step)
    }
}

/// Full outcome for u raised to a real exponent.
pub fn real_power_extend(
    query: &ExpQuery,
    tol: &Rational,
    budget: u64,
) -> Result<ExtensionOutcome<Rational>, OrdcloseError> {
    let quarter = tol / &Rational::int(4);
    let problem = exp_problem(query.base.clone(), quarter);
    let mut gen = ExpSqueeze::default();
    extend(&problem, &mut gen, &query.exponent, tol, budget)
}

/// Enclosure of u^f with f given by rational bounds; monotone in f since
/// u > 1. Converges iff the exponent bounds are tight enough for the
/// requested width.
pub fn real_power(
    query: &ExpQuery,
    tol: &Rational,
    budget: u64,
) -> Result<Enclosure<Rational>, OrdcloseError> {
    let out = real_power_extend(query, tol, budget)?;
    match out.status {
        ExtensionStatus::Converged => Ok(out.enclosure.expect("converged outcome encloses")),
        ExtensionStatus::BudgetExhausted => Err(OrdcloseError::BudgetExhausted { budget }),
        status => Err(OrdcloseError::Domain(format!(
            "power refinement stopped with status: {status}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn tol(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn root_of_one_is_exact() {
        let query = RootQuery::new(Rational::one(), 7).unwrap();
        let out = nth_root_extend(&query, &tol("1e-6"), 100).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &Rational::one());
        assert_eq!(enc.upper(), &Rational::one());
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn cube_root_of_eight_contains_two() {
        let query = RootQuery::new(Rational::int(8), 3).unwrap();
        let enc = nth_root(&query, &tol("1e-6"), 1000).unwrap();
        assert!(enc.contains(&RationalValueOrder, &Rational::int(2)));
        // 8 is a perfect cube, so the kernel seed answers exactly.
        assert_eq!(enc.lower(), &Rational::int(2));
        assert_eq!(enc.upper(), &Rational::int(2));
    }

    #[test]
    fn perfect_square_of_rational_is_point() {
        let query = RootQuery::new(q(9, 4), 2).unwrap();
        let out = nth_root_extend(&query, &tol("1e-9"), 1000).unwrap();
        assert_eq!(out.iterations, 1);
        let enc = out.enclosure.unwrap();
        assert_eq!(enc.lower(), &q(3, 2));
        assert_eq!(enc.upper(), &q(3, 2));
    }

    #[test]
    fn sqrt_two_certificates_are_exact() {
        let query = RootQuery::new(Rational::int(2), 2).unwrap();
        let out = nth_root_extend(&query, &tol("1e-9"), 100).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        // Bracket setup, binade narrowing, then ≤ 31 halvings of width 1.
        assert!(out.iterations <= 64, "iterations = {}", out.iterations);
        let enc = out.enclosure.unwrap();
        let two = Rational::int(2);
        assert!(enc.lower().pow(2).unwrap() <= two);
        assert!(two <= enc.upper().pow(2).unwrap());
        assert!(enc.width(&RationalValueOrder).unwrap() <= tol("1e-9"));
    }

    #[test]
    fn small_budget_is_reported() {
        let query = RootQuery::new(Rational::int(2), 2).unwrap();
        let err = nth_root(&query, &tol("1e-9"), 5).unwrap_err();
        assert!(matches!(err, OrdcloseError::BudgetExhausted { budget: 5 }));
    }

    #[test]
    fn huge_radicand_narrows_before_halving() {
        // 2^4096 under a degree that does not divide 4096: the bracket
        // reaches the right binade in a handful of shift probes instead
        // of thousands of halvings, and the certificates stay exact.
        let f = Rational::int(2).pow(4096).unwrap();
        let query = RootQuery::new(f.clone(), 1000).unwrap();
        let out = nth_root_extend(&query, &tol("1e-3"), 10_000).unwrap();
        assert_eq!(out.status, ExtensionStatus::Converged);
        assert!(out.iterations < 50, "iterations = {}", out.iterations);
        let enc = out.enclosure.unwrap();
        assert!(enc.lower().pow(1000).unwrap() <= f);
        assert!(f <= enc.upper().pow(1000).unwrap());
        // Root is 2^4.096 ≈ 17.1.
        assert!(enc.lower() > &Rational::int(17));
        assert!(enc.upper() < &q(172, 10));
    }

    #[test]
    fn tiny_radicand_roots_stay_bracketed() {
        let query = RootQuery::new(q(1, 1000), 3).unwrap();
        let enc = nth_root(&query, &tol("1e-6"), 1000).unwrap();
        assert!(enc.contains(&RationalValueOrder, &q(1, 10)));
    }

    #[test]
    fn root_monotone_across_radicands() {
        let t = tol("1e-6");
        let a = nth_root(&RootQuery::new(Rational::int(2), 2).unwrap(), &t, 1000).unwrap();
        let b = nth_root(&RootQuery::new(Rational::int(3), 2).unwrap(), &t, 1000).unwrap();
        assert!(a.lower() <= b.upper());
        assert!(a.lower() < b.lower());
    }

    #[test]
    fn integer_powers_are_exact() {
        let enc = rational_power(&Rational::int(2), &Rational::int(3), &tol("1e-6")).unwrap();
        assert_eq!(enc.lower(), &Rational::int(8));
        assert_eq!(enc.upper(), &Rational::int(8));

        let enc = rational_power(&Rational::int(2), &Rational::int(-1), &tol("1e-6")).unwrap();
        assert_eq!(enc.lower(), &q(1, 2));
        assert_eq!(enc.upper(), &q(1, 2));
    }

    #[test]
    fn half_power_agrees_with_square_root() {
        let t = tol("1e-6");
        let via_pow = rational_power(&Rational::int(2), &q(1, 2), &t).unwrap();
        let via_root = nth_root(&RootQuery::new(Rational::int(2), 2).unwrap(), &t, 1000).unwrap();
        let ord = RationalValueOrder;
        let both = via_pow.intersect(&ord, &via_root).unwrap();
        let combined = via_pow.width(&ord).unwrap() + via_root.width(&ord).unwrap();
        assert!(combined <= tol("2e-6"));
        assert!(both.lower() <= both.upper());
    }

    #[test]
    fn third_power_agrees_with_cube_root() {
        let t = tol("1e-6");
        let via_pow = rational_power(&Rational::int(5), &q(1, 3), &t).unwrap();
        let via_root = nth_root(&RootQuery::new(Rational::int(5), 3).unwrap(), &t, 10_000).unwrap();
        assert!(via_pow.intersect(&RationalValueOrder, &via_root).is_ok());
    }

    #[test]
    fn dyadic_exponent_path_is_tight() {
        // 2^(92681/65536) with 92681/65536 just below √2.
        let r = Rational::new(92681, 65536).unwrap();
        let enc = rational_power(&Rational::int(2), &r, &tol("1e-9")).unwrap();
        let ord = RationalValueOrder;
        assert!(enc.width(&ord).unwrap() <= tol("1e-9"));
        // 2.665 < 2^1.41419... < 2.6652
        assert!(enc.lower() > &q(2665, 1000));
        assert!(enc.upper() < &q(26652, 10000));
    }

    #[test]
    fn real_power_trivial_exponents() {
        let ord = RationalValueOrder;
        let zero = Enclosure::point(Rational::zero());
        let query = ExpQuery::squeezed(Rational::int(2), zero).unwrap();
        let enc = real_power(&query, &tol("1e-6"), 100).unwrap();
        assert!(enc.is_point(&ord));
        assert_eq!(enc.lower(), &Rational::one());

        let one = Enclosure::point(Rational::one());
        let query = ExpQuery::squeezed(Rational::int(2), one).unwrap();
        let enc = real_power(&query, &tol("1e-6"), 100).unwrap();
        assert_eq!(enc.lower(), &Rational::int(2));
        assert_eq!(enc.upper(), &Rational::int(2));
    }

    #[test]
    fn two_to_the_sqrt_two_converges() {
        let sqrt2 = nth_root(
            &RootQuery::new(Rational::int(2), 2).unwrap(),
            &tol("1e-8"),
            1000,
        )
        .unwrap();
        let query = ExpQuery::squeezed(Rational::int(2), sqrt2).unwrap();
        let enc = real_power(&query, &tol("1e-6"), 1000).unwrap();
        let ord = RationalValueOrder;
        assert!(enc.width(&ord).unwrap() <= tol("1e-6"));
        // 2^√2 = 2.66514414...
        assert!(enc.lower() < &q(266515, 100000));
        assert!(enc.upper() > &q(266514, 100000));
    }

    #[test]
    fn loose_exponent_bounds_cannot_converge() {
        let wide = Enclosure::new(&RationalValueOrder, Rational::zero(), Rational::one()).unwrap();
        let query = ExpQuery::squeezed(Rational::int(2), wide).unwrap();
        let out = real_power_extend(&query, &tol("1e-6"), 100).unwrap();
        assert_eq!(out.status, ExtensionStatus::BudgetExhausted);
        let enc = out.enclosure.unwrap();
        assert!(enc.lower() <= &Rational::one());
        assert!(enc.upper() >= &Rational::int(2));
    }

    #[test]
    fn base_at_most_one_rejected() {
        assert!(ExpQuery::rational(Rational::one(), Rational::int(2)).is_err());
        assert!(rational_power(&q(1, 2), &Rational::int(2), &tol("1e-6")).is_err());
    }

    proptest! {
        /// Bisection certificates hold in exact arithmetic for random
        /// radicands and degrees.
        #[test]
        fn certificates_exact(num in 1i64..500, den in 1i64..500, n in 1u32..5) {
            let f = Rational::ratio(num, den);
            let query = RootQuery::new(f.clone(), n).unwrap();
            let enc = nth_root(&query, &tol("1e-4"), 10_000).unwrap();
            prop_assert!(enc.lower().pow(n as i64).unwrap() <= f);
            prop_assert!(f <= enc.upper().pow(n as i64).unwrap());
        }

        /// A larger budget never loosens the enclosure.
        #[test]
        fn budget_monotone(num in 1i64..100, den in 1i64..100) {
            let f = Rational::ratio(num, den);
            let query = RootQuery::new(f, 2).unwrap();
            let coarse = nth_root_extend(&query, &tol("1e-30"), 20).unwrap();
            let fine = nth_root_extend(&query, &tol("1e-30"), 40).unwrap();
            let (Some(c), Some(fi)) = (coarse.enclosure, fine.enclosure) else {
                return Err(TestCaseError::fail("both runs bracket"));
            };
            let ord = RationalValueOrder;
            prop_assert!(fi.width(&ord).unwrap() <= c.width(&ord).unwrap());
            prop_assert!(c.lower() <= fi.lower());
            prop_assert!(fi.upper() <= c.upper());
        }

        /// The dyadic and root paths agree wherever both run: u^(1/2)
        /// crosses u²'s square root for random u > 1.
        #[test]
        fn power_paths_cross_check(num in 2i64..60, den in 1i64..30) {
            let u = Rational::ratio(num.max(den + 1), den);
            let t = tol("1e-5");
            let via_pow = rational_power(&u, &q(1, 2), &t).unwrap();
            let via_root = nth_root(&RootQuery::new(u.clone(), 2).unwrap(), &t, 10_000).unwrap();
            prop_assert!(via_pow.intersect(&RationalValueOrder, &via_root).is_ok());
        }
    }
}
