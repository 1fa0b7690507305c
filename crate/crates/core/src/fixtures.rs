//! Builtin fixture catalog: named sequences, range oracles, topologies,
//! and measure spaces with frozen expected values, shared by the test
//! suites and the command-line `fixtures` listing.

use crate::engine::{extend, ExtensionOutcome};
use crate::filters::{format_set, FiniteFilter, FiniteTopology};
use crate::integration::{
    lebesgue_extend, riemann_problem, AtomicMeasureSpace, DyadicDarboux, LebesgueFn,
    MuStepFunction, RangeOracle, RiemannCandidate, StepFunction1D, TailForm,
};
use crate::limits_local::{
    continuity_at, derivative_at_zero, net_limit, FnExpr, SeqExpr,
};
use crate::rational::Rational;
use crate::roots::{nth_root_extend, real_power_extend, ExpQuery, RootQuery};
use crate::OrdcloseError;

/// Endpoints and expected value rendered exactly; equality of the three
/// strings certifies that a kernel element came back unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelRun {
    pub lower: String,
    pub upper: String,
    pub expected: String,
    pub iterations: u64,
}

/// One kernel element together with the runner that pushes it through
/// the extension engine.
pub struct KernelCase {
    pub name: String,
    pub family: &'static str,
    pub describe: String,
    runner: Box<dyn Fn() -> Result<KernelRun, OrdcloseError> + Send + Sync>,
}

impl KernelCase {
    pub fn run(&self) -> Result<KernelRun, OrdcloseError> {
        (self.runner)()
    }

    /// Error message when the enclosure does not sit exactly on the
    /// expected value.
    pub fn check(&self) -> Result<KernelRun, String> {
        let run = self
            .run()
            .map_err(|e| format!("{}: {e}", self.name))?;
        if run.lower != run.expected || run.upper != run.expected {
            return Err(format!(
                "{}: expected [{}, {}] to sit on {}",
                self.name, run.lower, run.upper, run.expected
            ));
        }
        Ok(run)
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

fn tol6() -> Rational {
    "1e-6".parse().expect("valid tolerance")
}

const BUDGET: u64 = 1_000_000;

fn numeric_run(out: ExtensionOutcome<Rational>, expected: &Rational) -> KernelRun {
    let enc = out.enclosure.expect("kernel outcome encloses");
    KernelRun {
        lower: enc.lower().to_string(),
        upper: enc.upper().to_string(),
        expected: expected.to_string(),
        iterations: out.iterations,
    }
}

fn root_case(name: &str, radicand: Rational, degree: u32, expected: Rational) -> KernelCase {
    KernelCase {
        name: format!("root:{name}"),
        family: "roots",
        describe: format!("degree-{degree} root of {radicand}, exactly {expected}"),
        runner: Box::new(move || {
            let query = RootQuery::new(radicand.clone(), degree)?;
            let out = nth_root_extend(&query, &tol6(), BUDGET)?;
            Ok(numeric_run(out, &expected))
        }),
    }
}

fn power_case(name: &str, base: Rational, exponent: Rational, expected: Rational) -> KernelCase {
    KernelCase {
        name: format!("pow:{name}"),
        family: "powers",
        describe: format!("{base}^{exponent}, exactly {expected}"),
        runner: Box::new(move || {
            let query = ExpQuery::rational(base.clone(), exponent.clone())?;
            let out = real_power_extend(&query, &tol6(), BUDGET)?;
            Ok(numeric_run(out, &expected))
        }),
    }
}

fn limit_case(name: &str, seq: SeqExpr, expected: Rational) -> KernelCase {
    KernelCase {
        name: format!("limit:{name}"),
        family: "limits",
        describe: format!("limit of {seq}, exactly {expected}"),
        runner: Box::new(move || {
            let out = net_limit(&seq, &tol6(), BUDGET)?;
            Ok(numeric_run(out, &expected))
        }),
    }
}

fn continuity_case(name: &str, value: Rational, point: Rational) -> KernelCase {
    KernelCase {
        name: format!("local:{name}"),
        family: "local",
        describe: format!("constant {value} at {point}, exactly {value}"),
        runner: Box::new(move || {
            let f = FnExpr::constant(value.clone());
            let out = continuity_at(&f, &point, &tol6(), BUDGET)?;
            Ok(numeric_run(out, &value))
        }),
    }
}

fn derivative_case(name: &str, slope: Rational) -> KernelCase {
    KernelCase {
        name: format!("deriv:{name}"),
        family: "local",
        describe: format!("derivative of {slope}*x at 0, exactly {slope}"),
        runner: Box::new(move || {
            let f = FnExpr::linear(slope.clone());
            let out = derivative_at_zero(&f, &tol6(), BUDGET)?;
            Ok(numeric_run(out, &slope))
        }),
    }
}

fn step_case(
    name: &str,
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
    expected: Rational,
) -> KernelCase {
    KernelCase {
        name: format!("riemann:{name}"),
        family: "riemann",
        describe: format!("step-function integral, exactly {expected}"),
        runner: Box::new(move || {
            let step = StepFunction1D::new(breakpoints.clone(), values.clone())?;
            let (a, b) = step.domain();
            let problem = riemann_problem();
            // kernel candidates are seeded directly; the refinement
            // generator is never consulted
            let dummy = RangeOracle::Fn(FnExpr::constant(Rational::zero()));
            let mut gen = DyadicDarboux::new(dummy, a.clone(), b.clone())?;
            let f = RiemannCandidate::Step(step);
            let out = extend(&problem, &mut gen, &f, &tol6(), BUDGET)?;
            Ok(numeric_run(out, &expected))
        }),
    }
}

fn mu_step_case(
    name: &str,
    space: AtomicMeasureSpace,
    explicit: Vec<Rational>,
    tail: TailForm,
    expected: Rational,
) -> KernelCase {
    KernelCase {
        name: format!("lebesgue:{name}"),
        family: "lebesgue",
        describe: format!("step integral over an atomic space, exactly {expected}"),
        runner: Box::new(move || {
            let f = LebesgueFn::MuStep(MuStepFunction::new(explicit.clone(), tail.clone()));
            let out = lebesgue_extend(&f, &space, &tol6(), BUDGET)?;
            Ok(numeric_run(out, &expected))
        }),
    }
}

fn filter_case(
    name: &str,
    top: FiniteTopology,
    core: u64,
    expected_limit_set: u64,
) -> KernelCase {
    KernelCase {
        name: format!("filter:{name}"),
        family: "filters",
        describe: format!(
            "limit set of the filter above {} in {top}, exactly {}",
            format_set(core),
            format_set(expected_limit_set)
        ),
        runner: Box::new(move || {
            let filter = FiniteFilter::principal(top.size(), core)?;
            let out = crate::filters::filter_extend(&top, &filter)?;
            let enc = out.enclosure.ok_or(OrdcloseError::NotKBounded)?;
            Ok(KernelRun {
                lower: format_set(*enc.lower()),
                upper: format_set(*enc.upper()),
                expected: format_set(expected_limit_set),
                iterations: out.iterations,
            })
        }),
    }
}

/// Fifty kernel elements across every instantiation; the engine must
/// return each one's value exactly.
pub fn kernel_catalog() -> Vec<KernelCase> {
    let mut cases = vec![
        root_case("sqrt1", q(1, 1), 2, q(1, 1)),
        root_case("sqrt4", q(4, 1), 2, q(2, 1)),
        root_case("sqrt9", q(9, 1), 2, q(3, 1)),
        root_case("sqrt25", q(25, 1), 2, q(5, 1)),
        root_case("sqrt-quarter", q(1, 4), 2, q(1, 2)),
        root_case("sqrt-9-16", q(9, 16), 2, q(3, 4)),
        root_case("cbrt8", q(8, 1), 3, q(2, 1)),
        root_case("cbrt27", q(27, 1), 3, q(3, 1)),
        root_case("cbrt-eighth", q(1, 8), 3, q(1, 2)),
        root_case("fourth-root-16", q(16, 1), 4, q(2, 1)),
        power_case("2-cubed", q(2, 1), q(3, 1), q(8, 1)),
        power_case("2-to-0", q(2, 1), q(0, 1), q(1, 1)),
        power_case("2-to-minus-2", q(2, 1), q(-2, 1), q(1, 4)),
        power_case("3-squared", q(3, 1), q(2, 1), q(9, 1)),
        power_case("3-halves-squared", q(3, 2), q(2, 1), q(9, 4)),
        power_case("5-to-1", q(5, 1), q(1, 1), q(5, 1)),
        power_case("2-to-5", q(2, 1), q(5, 1), q(32, 1)),
        limit_case("const0", SeqExpr::constant(q(0, 1)), q(0, 1)),
        limit_case("const1", SeqExpr::constant(q(1, 1)), q(1, 1)),
        limit_case("const-neg1", SeqExpr::constant(q(-1, 1)), q(-1, 1)),
        limit_case("const5", SeqExpr::constant(q(5, 1)), q(5, 1)),
        limit_case("const-neg-3-7", SeqExpr::constant(q(-3, 7)), q(-3, 7)),
        limit_case("const-22-7", SeqExpr::constant(q(22, 7)), q(22, 7)),
        limit_case(
            "const-sum",
            SeqExpr::add(SeqExpr::constant(q(3, 2)), SeqExpr::constant(q(1, 2))),
            q(2, 1),
        ),
        limit_case(
            "const-abs",
            SeqExpr::abs(SeqExpr::constant(q(-9, 2))),
            q(9, 2),
        ),
        continuity_case("const0-at-0", q(0, 1), q(0, 1)),
        continuity_case("const7-at-1", q(7, 1), q(1, 1)),
        continuity_case("const-neg-2-3", q(-2, 3), q(-1, 2)),
        derivative_case("slope2", q(2, 1)),
        derivative_case("slope-neg-half", q(-1, 2)),
        derivative_case("slope0", q(0, 1)),
        derivative_case("slope-7-3", q(7, 3)),
        step_case(
            "unit-one",
            vec![q(0, 1), q(1, 1)],
            vec![q(1, 1)],
            q(1, 1),
        ),
        step_case(
            "neg-two-on-0-3",
            vec![q(0, 1), q(3, 1)],
            vec![q(-2, 1)],
            q(-6, 1),
        ),
        step_case(
            "three-quarters-symmetric",
            vec![q(-1, 1), q(1, 1)],
            vec![q(3, 4)],
            q(3, 2),
        ),
        step_case(
            "two-piece",
            vec![q(0, 1), q(1, 2), q(1, 1)],
            vec![q(1, 1), q(3, 1)],
            q(2, 1),
        ),
        step_case(
            "three-piece",
            vec![q(0, 1), q(1, 4), q(1, 2), q(1, 1)],
            vec![q(4, 1), q(0, 1), q(2, 1)],
            q(2, 1),
        ),
        step_case(
            "two-piece-wide",
            vec![q(0, 1), q(1, 1), q(2, 1)],
            vec![q(5, 1), q(-1, 1)],
            q(4, 1),
        ),
        step_case("unit-zero", vec![q(0, 1), q(1, 1)], vec![q(0, 1)], q(0, 1)),
        step_case(
            "two-piece-negative",
            vec![q(-2, 1), q(-1, 1), q(0, 1)],
            vec![q(-3, 1), q(1, 2)],
            q(-5, 2),
        ),
    ];
    let uniform4 = AtomicMeasureSpace::finite(vec![q(1, 4), q(1, 4), q(1, 4), q(1, 4)])
        .expect("uniform weights");
    let weighted = AtomicMeasureSpace::finite(vec![q(1, 2), q(1, 3), q(1, 6)])
        .expect("weighted space");
    let geom = AtomicMeasureSpace::geometric(q(1, 2)).expect("geometric space");
    cases.extend([
        mu_step_case(
            "uniform4-ones",
            uniform4.clone(),
            vec![q(1, 1), q(1, 1), q(1, 1), q(1, 1)],
            TailForm::Zero,
            q(1, 1),
        ),
        mu_step_case(
            "uniform4-mixed",
            uniform4.clone(),
            vec![q(2, 1), q(0, 1), q(4, 1)],
            TailForm::Zero,
            q(3, 2),
        ),
        mu_step_case(
            "weighted-identity",
            weighted.clone(),
            vec![q(1, 1), q(2, 1), q(3, 1)],
            TailForm::Zero,
            q(5, 3),
        ),
        mu_step_case(
            "weighted-constant",
            weighted,
            vec![],
            TailForm::Constant(q(6, 1)),
            q(6, 1),
        ),
        mu_step_case(
            "geometric-head",
            geom.clone(),
            vec![q(1, 1)],
            TailForm::Zero,
            q(1, 2),
        ),
        mu_step_case(
            "geometric-two-heads",
            geom.clone(),
            vec![q(1, 1), q(1, 1)],
            TailForm::Zero,
            q(3, 4),
        ),
        mu_step_case(
            "geometric-constant-one",
            geom,
            vec![],
            TailForm::Constant(q(1, 1)),
            q(1, 1),
        ),
        filter_case(
            "sierpinski-open-point",
            FiniteTopology::two_point_connected(),
            0b10,
            0b11,
        ),
        filter_case("discrete-pair", FiniteTopology::discrete(2).expect("small"), 0b01, 0b01),
        filter_case(
            "indiscrete-pair",
            FiniteTopology::indiscrete(2).expect("small"),
            0b01,
            0b11,
        ),
    ]);
    cases
}

/// Sequence with hand-computed liminf and limsup.
#[derive(Debug, Clone)]
pub struct LimitFixture {
    pub name: &'static str,
    pub seq: SeqExpr,
    pub liminf: Rational,
    pub limsup: Rational,
}

/// Closed-form sequences; the first two are the `harmonic` and `alt`
/// builtins.
pub fn limit_catalog() -> Vec<LimitFixture> {
    let harmonic = SeqExpr::Harmonic;
    let alt = SeqExpr::AltSign;
    let damped = SeqExpr::mul(alt.clone(), harmonic.clone());
    let fix = |name, seq, lo: Rational, hi: Rational| LimitFixture {
        name,
        seq,
        liminf: lo,
        limsup: hi,
    };
    vec![
        fix("harmonic", harmonic.clone(), q(0, 1), q(0, 1)),
        fix("alt", alt.clone(), q(-1, 1), q(1, 1)),
        fix("zero", SeqExpr::constant(q(0, 1)), q(0, 1), q(0, 1)),
        fix("five", SeqExpr::constant(q(5, 1)), q(5, 1), q(5, 1)),
        fix("neg-harmonic", SeqExpr::neg(harmonic.clone()), q(0, 1), q(0, 1)),
        fix(
            "alt-shifted",
            SeqExpr::add(SeqExpr::constant(q(3, 1)), alt.clone()),
            q(2, 1),
            q(4, 1),
        ),
        fix(
            "alt-halved",
            SeqExpr::scale(q(1, 2), alt.clone()),
            q(-1, 2),
            q(1, 2),
        ),
        fix("alt-abs", SeqExpr::abs(alt.clone()), q(1, 1), q(1, 1)),
        fix("alt-damped", damped.clone(), q(0, 1), q(0, 1)),
        fix(
            "harmonic-shifted",
            SeqExpr::add(SeqExpr::constant(q(2, 1)), harmonic.clone()),
            q(2, 1),
            q(2, 1),
        ),
        fix(
            "alt-clipped",
            SeqExpr::max(alt.clone(), SeqExpr::constant(q(0, 1))),
            q(0, 1),
            q(1, 1),
        ),
        fix("alt-neg", SeqExpr::neg(alt.clone()), q(-1, 1), q(1, 1)),
        fix(
            "harmonic-lowered",
            SeqExpr::sub(harmonic.clone(), SeqExpr::constant(q(5, 1))),
            q(-5, 1),
            q(-5, 1),
        ),
        fix(
            "harmonic-doubled",
            SeqExpr::scale(q(2, 1), harmonic.clone()),
            q(0, 1),
            q(0, 1),
        ),
        fix(
            "alt-plus-harmonic",
            SeqExpr::add(alt.clone(), harmonic.clone()),
            q(-1, 1),
            q(1, 1),
        ),
        fix(
            "alt-squared",
            SeqExpr::mul(alt.clone(), alt.clone()),
            q(1, 1),
            q(1, 1),
        ),
        fix(
            "alt-damped-tripled",
            SeqExpr::scale(q(3, 1), damped.clone()),
            q(0, 1),
            q(0, 1),
        ),
        fix(
            "harmonic-patched",
            SeqExpr::patched([(0, q(100, 1))].into(), harmonic.clone()),
            q(0, 1),
            q(0, 1),
        ),
        fix(
            "harmonic-floored",
            SeqExpr::max(harmonic.clone(), SeqExpr::constant(q(1, 2))),
            q(1, 2),
            q(1, 2),
        ),
        fix("alt-damped-abs", SeqExpr::abs(damped), q(0, 1), q(0, 1)),
        fix(
            "alt-stretched",
            SeqExpr::add(SeqExpr::scale(q(2, 1), alt), SeqExpr::constant(q(3, 1))),
            q(1, 1),
            q(5, 1),
        ),
    ]
}

/// Builtin sequence by name; catalog names plus the bare builtins.
pub fn builtin_seq(name: &str) -> Option<SeqExpr> {
    limit_catalog()
        .into_iter()
        .find(|f| f.name == name)
        .map(|f| f.seq)
}

/// Builtin range oracle by name.
pub fn builtin_oracle(name: &str) -> Option<RangeOracle> {
    match name {
        "identity" => Some(RangeOracle::Fn(FnExpr::identity())),
        "square" => Some(RangeOracle::Fn(FnExpr::mul(
            FnExpr::identity(),
            FnExpr::identity(),
        ))),
        "abs" => Some(RangeOracle::Fn(FnExpr::abs(FnExpr::identity()))),
        "dirichlet" => Some(RangeOracle::Dirichlet),
        _ => None,
    }
}

/// Builtin finite topology by name.
pub fn builtin_topology(name: &str) -> Option<FiniteTopology> {
    match name {
        "sierpinski" => Some(FiniteTopology::two_point_connected()),
        "discrete2" => FiniteTopology::discrete(2).ok(),
        "discrete3" => FiniteTopology::discrete(3).ok(),
        "indiscrete2" => FiniteTopology::indiscrete(2).ok(),
        "indiscrete3" => FiniteTopology::indiscrete(3).ok(),
        _ => None,
    }
}

/// Builtin atomic measure space by name.
pub fn builtin_space(name: &str) -> Option<AtomicMeasureSpace> {
    match name {
        "uniform4" => {
            AtomicMeasureSpace::finite(vec![q(1, 4), q(1, 4), q(1, 4), q(1, 4)]).ok()
        }
        "geometric-half" => AtomicMeasureSpace::geometric(q(1, 2)).ok(),
        _ => None,
    }
}

/// Names, kinds, and definitions of every builtin, for the listing.
pub fn catalog() -> Vec<(String, &'static str, String)> {
    let mut out: Vec<(String, &'static str, String)> = limit_catalog()
        .into_iter()
        .map(|f| {
            (
                f.name.to_string(),
                "sequence",
                format!("{} with liminf {} and limsup {}", f.seq, f.liminf, f.limsup),
            )
        })
        .collect();
    for name in ["identity", "square", "abs", "dirichlet"] {
        let describe = match name {
            "dirichlet" => "indicator of the rationals; range gap 1 on every interval".into(),
            _ => format!("{}", builtin_oracle(name).expect("builtin")),
        };
        out.push((name.to_string(), "oracle", describe));
    }
    for name in [
        "sierpinski",
        "discrete2",
        "discrete3",
        "indiscrete2",
        "indiscrete3",
    ] {
        let top = builtin_topology(name).expect("builtin");
        out.push((name.to_string(), "topology", format!("{top}")));
    }
    for name in ["uniform4", "geometric-half"] {
        let space = builtin_space(name).expect("builtin");
        out.push((name.to_string(), "space", format!("{space}")));
    }
    out
}
