//! `ordclose`: certified enclosures from the command line.
//!
//! Every subcommand runs one extension problem (or one law suite) and
//! writes a single document to stdout. Exit codes follow the engine's
//! verdicts: 0 for a certified positive answer, 2 for a certified
//! negative one (gap or refutation), 3 for an inconclusive budget
//! exhaustion, 1 for usage or input errors.

mod doc;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ordclose::algebra::{
    additivity_suite, product_suite_limits, random_integrand_pairs, random_integrand_scalings,
    random_seq_pairs, random_seq_scalings, scaling_suite, LimitsInstance, RiemannInstance,
};
use ordclose::closure_systems::{
    caratheodory_restrict, outer_measure, sigma_algebra_system, subgroup_system,
    topological_system, ClosureSystem, FiniteGroup,
};
use ordclose::engine::Enclosure;
use ordclose::filters::{filter_extend, kbounded_closure_check, FiniteFilter};
use ordclose::fixtures::{builtin_oracle, builtin_seq, builtin_space, builtin_topology, catalog};
use ordclose::integration::{darboux_extend, lebesgue_extend, LebesgueFn, MuStepFunction, RangeOracle, TailForm};
use ordclose::limits_local::{continuity_at, derivative_at_zero, net_limit, FnExpr};
use ordclose::order::RationalValueOrder;
use ordclose::rational::Rational;
use ordclose::roots::{nth_root_extend, real_power_extend, ExpQuery, RootQuery};

use doc::{
    exit_code, named_set, numeric_document, plain_report, plain_result, set_document, to_json,
    CatalogDocument, CatalogEntry, ClosureDocument, MeasureDocument, ReportDocument,
    RestrictDocument, ResultDocument,
};
use inputs::{
    load_function, load_group, load_premeasure, load_space, load_topology, parse_family,
    parse_named_set, parse_rational, parse_values,
};

#[derive(Parser)]
#[command(
    name = "ordclose",
    version,
    about = "Certified two-sided enclosures for order-closure values"
)]
struct Cli {
    /// Enclosure width tolerance (rational, decimal, or scientific).
    #[arg(long, global = true, default_value = "1e-6")]
    tol: String,
    /// Refinement budget in elementary steps.
    #[arg(long, global = true, env = "ORDCLOSE_BUDGET", default_value_t = 1_000_000)]
    budget: u64,
    /// Emit a JSON document instead of plain lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enclose the degree-n root of a nonnegative rational.
    Root {
        #[arg(long)]
        radicand: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Enclose base^exponent for base > 1; the exponent is a rational
    /// or a rational interval.
    Pow {
        #[arg(long)]
        base: String,
        #[arg(long = "exp", conflicts_with_all = ["exp_lower", "exp_upper"])]
        exponent: Option<String>,
        #[arg(long, requires = "exp_upper")]
        exp_lower: Option<String>,
        #[arg(long, requires = "exp_lower")]
        exp_upper: Option<String>,
    },
    /// Integration by kernel step functions.
    #[command(subcommand)]
    Integrate(IntegrateCmd),
    /// Enclose the limit of a builtin sequence.
    Limit {
        #[arg(long)]
        seq: String,
    },
    /// Local value of a function at a point; convergence to the point
    /// value certifies continuity there.
    Continuity {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value = "0")]
        at: String,
    },
    /// Derivative at 0 through difference quotients on punctured balls.
    Derivative {
        #[arg(long = "fn")]
        function: String,
    },
    /// Filter convergence on a finite topology: limit set of the
    /// principal filter above --core, or the kernel-closure law check
    /// when --core is omitted.
    Filters {
        /// Builtin topology name or a JSON file.
        #[arg(long)]
        space: String,
        #[arg(long)]
        core: Option<String>,
    },
    /// Smallest closed superset in a closure system.
    #[command(subcommand)]
    Closure(ClosureCmd),
    /// Outer measure from a pre-measure on a ring of sets.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Algebraic law suites over seeded random inputs.
    Laws {
        /// additivity, scaling, or product.
        #[arg(long)]
        suite: String,
        /// limits or riemann.
        #[arg(long)]
        instance: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        pairs: usize,
    },
    /// List builtin sequences, oracles, topologies, and spaces.
    Fixtures,
}

#[derive(Subcommand)]
enum IntegrateCmd {
    /// Darboux refinement of a range oracle over a closed interval.
    Riemann {
        /// Builtin oracle name, or poly:c0,c1,...
        #[arg(long)]
        oracle: String,
        /// Endpoints "a,b" with a < b.
        #[arg(long, default_value = "0,1")]
        domain: String,
    },
    /// Truncation refinement of a step function over an atomic space.
    Lebesgue {
        /// Builtin space name or a JSON file.
        #[arg(long)]
        space: String,
        /// Step function as a JSON file.
        #[arg(long = "f", conflicts_with_all = ["values", "tail"])]
        function: Option<PathBuf>,
        /// Values at atoms 1, 2, ... as a comma list.
        #[arg(long, default_value = "")]
        values: String,
        /// Eventual constant value; omitted means eventually zero.
        #[arg(long)]
        tail: Option<String>,
    },
}

#[derive(Args)]
struct SetArg {
    /// 1-based elements, e.g. "1,3"; empty for the empty set.
    #[arg(long, default_value = "")]
    set: String,
}

#[derive(Subcommand)]
enum ClosureCmd {
    /// Topological closure of a point set.
    Topo {
        /// Builtin topology name or a JSON file.
        #[arg(long)]
        space: String,
        #[command(flatten)]
        set: SetArg,
    },
    /// Subgroup generated by elements given as labels.
    Group {
        /// Builtin group name (s2, s3, s4, z2..z6) or a JSON file.
        #[arg(long)]
        group: String,
        /// Comma-separated element labels, e.g. "(12),(23)".
        #[arg(long, default_value = "")]
        set: String,
    },
    /// σ-algebra generated by a family of subsets.
    Sigma {
        /// Carrier size; elements are 1..=carrier.
        #[arg(long, default_value_t = 3)]
        carrier: usize,
        /// Semicolon-separated subsets, e.g. "1;2,3".
        #[arg(long, default_value = "")]
        set: String,
    },
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Outer-measure value of a set by disjoint-cover enumeration.
    Extend {
        /// Pre-measure JSON file: carrier, sets, mu.
        #[arg(long)]
        ring: PathBuf,
        #[command(flatten)]
        set: SetArg,
    },
    /// Outer measure restricted to the generated σ-algebra.
    Restrict {
        #[arg(long)]
        ring: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok((output, code)) => {
            print!("{output}");
            ExitCode::from(code)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(String, u8), String> {
    let tol = parse_rational(&cli.tol)?;
    if !tol.is_positive() {
        return Err(format!("tolerance must be positive, got {tol}"));
    }
    let budget = cli.budget;
    let render = |doc: ResultDocument| {
        let code = exit_code(doc.status);
        let text = if cli.json {
            to_json(&doc)
        } else {
            plain_result(&doc)
        };
        (text, code)
    };

    match &cli.command {
        Cmd::Root { radicand, degree } => {
            let radicand = parse_rational(radicand)?;
            let query = RootQuery::new(radicand.clone(), *degree).map_err(|e| e.to_string())?;
            let out = nth_root_extend(&query, &tol, budget).map_err(|e| e.to_string())?;
            let doc = numeric_document(
                "root",
                &out,
                json!({"radicand": radicand.to_string(), "degree": degree}),
            );
            Ok(render(doc))
        }
        Cmd::Pow {
            base,
            exponent,
            exp_lower,
            exp_upper,
        } => {
            let base = parse_rational(base)?;
            let (query, meta) = match (exponent, exp_lower, exp_upper) {
                (Some(r), _, _) => {
                    let r = parse_rational(r)?;
                    (
                        ExpQuery::rational(base.clone(), r.clone()).map_err(|e| e.to_string())?,
                        json!({"base": base.to_string(), "exponent": r.to_string()}),
                    )
                }
                (None, Some(lo), Some(hi)) => {
                    let lo = parse_rational(lo)?;
                    let hi = parse_rational(hi)?;
                    let enc = Enclosure::new(&RationalValueOrder, lo.clone(), hi.clone())
                        .map_err(|e| e.to_string())?;
                    (
                        ExpQuery::squeezed(base.clone(), enc).map_err(|e| e.to_string())?,
                        json!({
                            "base": base.to_string(),
                            "exponent": format!("[{lo}, {hi}]"),
                        }),
                    )
                }
                _ => return Err("give --exp or both --exp-lower and --exp-upper".into()),
            };
            let out = real_power_extend(&query, &tol, budget).map_err(|e| e.to_string())?;
            Ok(render(numeric_document("pow", &out, meta)))
        }
        Cmd::Integrate(IntegrateCmd::Riemann { oracle, domain }) => {
            let orc = parse_oracle(oracle)?;
            let (a, b) = match domain.split_once(',') {
                Some((a, b)) => (parse_rational(a.trim())?, parse_rational(b.trim())?),
                None => return Err(format!("domain must be \"a,b\", got {domain:?}")),
            };
            let out = darboux_extend(&orc, &a, &b, &tol, budget).map_err(|e| e.to_string())?;
            let doc = numeric_document(
                "integrate riemann",
                &out,
                json!({"oracle": oracle, "from": a.to_string(), "to": b.to_string()}),
            );
            Ok(render(doc))
        }
        Cmd::Integrate(IntegrateCmd::Lebesgue {
            space,
            function,
            values,
            tail,
        }) => {
            let sp = resolve_space(space)?;
            let (explicit, tail_value) = match function {
                Some(path) => load_function(path)?,
                None => (
                    parse_values(values)?,
                    tail.as_deref().map(parse_rational).transpose()?,
                ),
            };
            let tail_form = match tail_value {
                Some(c) if !c.is_zero() => TailForm::Constant(c),
                _ => TailForm::Zero,
            };
            let f = LebesgueFn::MuStep(MuStepFunction::new(explicit, tail_form));
            let out = lebesgue_extend(&f, &sp, &tol, budget).map_err(|e| e.to_string())?;
            let doc = numeric_document(
                "integrate lebesgue",
                &out,
                json!({"space": space, "function": f.to_string()}),
            );
            Ok(render(doc))
        }
        Cmd::Limit { seq } => {
            let f = builtin_seq(seq).ok_or_else(|| format!("unknown sequence {seq:?}"))?;
            let out = net_limit(&f, &tol, budget).map_err(|e| e.to_string())?;
            let doc = numeric_document(
                "limit",
                &out,
                json!({"seq": seq, "definition": f.to_string()}),
            );
            Ok(render(doc))
        }
        Cmd::Continuity { function, at } => {
            let f = parse_fn(function)?;
            let p = parse_rational(at)?;
            let out = continuity_at(&f, &p, &tol, budget).map_err(|e| e.to_string())?;
            let doc = numeric_document(
                "continuity",
                &out,
                json!({"fn": f.to_string(), "at": p.to_string(), "value": f.eval(&p).to_string()}),
            );
            Ok(render(doc))
        }
        Cmd::Derivative { function } => {
            let f = parse_fn(function)?;
            let out = derivative_at_zero(&f, &tol, budget).map_err(|e| e.to_string())?;
            Ok(render(numeric_document(
                "derivative",
                &out,
                json!({"fn": f.to_string(), "at": "0"}),
            )))
        }
        Cmd::Filters { space, core } => {
            let (top, names) = resolve_topology(space)?;
            match core {
                Some(core) => {
                    let mask = parse_named_set(core, &names)?;
                    let filter =
                        FiniteFilter::principal(top.size(), mask).map_err(|e| e.to_string())?;
                    let out = filter_extend(&top, &filter).map_err(|e| e.to_string())?;
                    let doc = set_document(
                        "filters",
                        &out,
                        json!({
                            "space": space,
                            "carrier": names,
                            "filter": format!("principal above {}", named_set(mask, &names)),
                        }),
                        &names,
                    );
                    Ok(render(doc))
                }
                None => {
                    let report = kbounded_closure_check(&top).map_err(|e| e.to_string())?;
                    report_result(&cli, "filters", report, json!({"space": space, "carrier": names}))
                }
            }
        }
        Cmd::Closure(which) => run_closure(&cli, which),
        Cmd::Measure(MeasureCmd::Extend { ring, set }) => {
            let pre = load_premeasure(ring)?;
            let names = element_names(pre.ring().omega());
            let mask = parse_named_set(&set.set, &names)?;
            let value = outer_measure(&pre, mask).map_err(|e| e.to_string())?;
            let doc = MeasureDocument {
                command: "measure extend".into(),
                set: named_set(mask, &names),
                value: value.to_string(),
                instance: json!({"ring": ring.display().to_string()}),
            };
            let text = if cli.json {
                to_json(&doc)
            } else {
                format!("outer measure of {} = {}\n", doc.set, doc.value)
            };
            Ok((text, 0))
        }
        Cmd::Measure(MeasureCmd::Restrict { ring }) => {
            let pre = load_premeasure(ring)?;
            let names = element_names(pre.ring().omega());
            match caratheodory_restrict(&pre) {
                Ok(measure) => {
                    let doc = RestrictDocument {
                        command: "measure restrict".into(),
                        sigma_members: measure
                            .sigma_members
                            .iter()
                            .map(|&s| named_set(s, &names))
                            .collect(),
                        values: measure
                            .sigma_members
                            .iter()
                            .map(|s| measure.table[s].to_string())
                            .collect(),
                        instance: json!({"ring": ring.display().to_string()}),
                    };
                    let text = if cli.json {
                        to_json(&doc)
                    } else {
                        let mut lines = vec!["restricted measure:".to_string()];
                        for (m, v) in doc.sigma_members.iter().zip(&doc.values) {
                            lines.push(format!("  {m} -> {v}"));
                        }
                        lines.join("\n") + "\n"
                    };
                    Ok((text, 0))
                }
                Err(e) => Ok((format!("refuted: {e}\n"), 2)),
            }
        }
        Cmd::Laws {
            suite,
            instance,
            seed,
            pairs,
        } => run_laws(&cli, suite, instance, *seed, *pairs, &tol, budget),
        Cmd::Fixtures => {
            let entries: Vec<CatalogEntry> = catalog()
                .into_iter()
                .map(|(name, kind, describe)| CatalogEntry {
                    name,
                    kind,
                    describe,
                })
                .collect();
            let doc = CatalogDocument {
                command: "fixtures".into(),
                entries,
            };
            let text = if cli.json {
                to_json(&doc)
            } else {
                let mut lines: Vec<String> = doc
                    .entries
                    .iter()
                    .map(|e| format!("{} ({}): {}", e.name, e.kind, e.describe))
                    .collect();
                lines.push(String::new());
                lines.join("\n")
            };
            Ok((text, 0))
        }
    }
}

fn element_names(n: usize) -> Vec<String> {
    (1..=n).map(|e| e.to_string()).collect()
}

fn resolve_space(space: &str) -> Result<ordclose::integration::AtomicMeasureSpace, String> {
    if let Some(sp) = builtin_space(space) {
        return Ok(sp);
    }
    let path = PathBuf::from(space);
    if path.exists() {
        return load_space(&path);
    }
    Err(format!("{space:?} is neither a builtin space nor a file"))
}

fn resolve_topology(
    space: &str,
) -> Result<(ordclose::filters::FiniteTopology, Vec<String>), String> {
    if let Some(top) = builtin_topology(space) {
        let names = element_names(top.size());
        return Ok((top, names));
    }
    let path = PathBuf::from(space);
    if path.exists() {
        return load_topology(&path);
    }
    Err(format!("{space:?} is neither a builtin topology nor a file"))
}

fn builtin_group(name: &str) -> Option<FiniteGroup> {
    match name {
        "s2" => FiniteGroup::symmetric(2).ok(),
        "s3" => FiniteGroup::symmetric(3).ok(),
        "s4" => FiniteGroup::symmetric(4).ok(),
        _ => name
            .strip_prefix('z')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| (1..=6).contains(&n))
            .and_then(|n| FiniteGroup::cyclic(n).ok()),
    }
}

fn run_closure(cli: &Cli, which: &ClosureCmd) -> Result<(String, u8), String> {
    let (command, system, label, input_mask, member_names): (
        &str,
        ClosureSystem,
        String,
        u64,
        Vec<String>,
    ) = match which {
        ClosureCmd::Topo { space, set } => {
            let (top, names) = resolve_topology(space)?;
            let mask = parse_named_set(&set.set, &names)?;
            let system = topological_system(&top).map_err(|e| e.to_string())?;
            let label = format!("closed-sets[{space}]");
            ("closure topo", system, label, mask, names)
        }
        ClosureCmd::Group { group, set } => {
            let g = if let Some(g) = builtin_group(group) {
                g
            } else {
                let path = PathBuf::from(group);
                if path.exists() {
                    load_group(&path)?
                } else {
                    return Err(format!("{group:?} is neither a builtin group nor a file"));
                }
            };
            let mut mask = 0u64;
            for label in set.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let idx = g
                    .element_of(label)
                    .ok_or_else(|| format!("no element labeled {label:?}"))?;
                mask |= 1 << idx;
            }
            let names = (0..g.order()).map(|i| g.label(i).to_string()).collect();
            let system = subgroup_system(&g).map_err(|e| e.to_string())?;
            let label = system.name().to_string();
            ("closure group", system, label, mask, names)
        }
        ClosureCmd::Sigma { carrier, set } => {
            let family = parse_family(set, *carrier)?;
            let system = sigma_algebra_system(*carrier).map_err(|e| e.to_string())?;
            let base = element_names(*carrier);
            let names = (0..(1u64 << carrier)).map(|s| named_set(s, &base)).collect();
            let label = system.name().to_string();
            ("closure sigma", system, label, family, names)
        }
    };
    let closure = system.l_closure(input_mask).map_err(|e| e.to_string())?;
    let members: Vec<String> = (0..system.universe_size())
        .filter(|&i| closure & (1 << i) != 0)
        .map(|i| member_names[i].clone())
        .collect();
    let doc = ClosureDocument {
        command: command.into(),
        system: label,
        input: named_set(input_mask, &member_names),
        closure: named_set(closure, &member_names),
        count: members.len(),
        members,
    };
    let text = if cli.json {
        to_json(&doc)
    } else {
        format!(
            "closure of {} in {}: {} ({} members: {})\n",
            doc.input,
            doc.system,
            doc.closure,
            doc.count,
            doc.members.join(", ")
        )
    };
    Ok((text, 0))
}

fn report_result(
    cli: &Cli,
    command: &str,
    report: ordclose::report::LawReport,
    instance: serde_json::Value,
) -> Result<(String, u8), String> {
    let status = if report.passed() { "verified" } else { "refuted" };
    let code = exit_code(status);
    let doc = ReportDocument {
        command: command.into(),
        status,
        report,
        instance,
    };
    let text = if cli.json {
        to_json(&doc)
    } else {
        plain_report(&doc)
    };
    Ok((text, code))
}

fn run_laws(
    cli: &Cli,
    suite: &str,
    instance: &str,
    seed: u64,
    pairs: usize,
    tol: &Rational,
    budget: u64,
) -> Result<(String, u8), String> {
    let meta = json!({"suite": suite, "instance": instance, "seed": seed, "pairs": pairs});
    let report = match (suite, instance) {
        ("additivity", "limits") => additivity_suite(
            &LimitsInstance,
            &random_seq_pairs(seed, pairs),
            tol,
            budget,
            seed,
        ),
        ("additivity", "riemann") => additivity_suite(
            &RiemannInstance::unit(),
            &random_integrand_pairs(seed, pairs),
            tol,
            budget,
            seed,
        ),
        ("scaling", "limits") => scaling_suite(
            &LimitsInstance,
            &random_seq_scalings(seed, pairs),
            tol,
            budget,
            seed,
        ),
        ("scaling", "riemann") => scaling_suite(
            &RiemannInstance::unit(),
            &random_integrand_scalings(seed, pairs),
            tol,
            budget,
            seed,
        ),
        ("product", "limits") => product_suite_limits(&random_seq_pairs(seed, pairs), tol, budget, seed),
        ("product", _) => {
            return Err("the product suite runs on the limits instance".into());
        }
        _ => {
            return Err(format!(
                "unknown suite/instance {suite:?}/{instance:?}; suites: additivity, scaling, product; instances: limits, riemann"
            ));
        }
    };
    report_result(cli, "laws", report, meta)
}

fn parse_oracle(name: &str) -> Result<RangeOracle, String> {
    if let Some(orc) = builtin_oracle(name) {
        return Ok(orc);
    }
    if let Some(spec) = name.strip_prefix("poly:") {
        let coeffs = parse_values(spec)?;
        if coeffs.is_empty() {
            return Err("poly: needs at least one coefficient".into());
        }
        return Ok(RangeOracle::Fn(FnExpr::Poly(coeffs)));
    }
    Err(format!(
        "unknown oracle {name:?}; builtins: identity, square, abs, dirichlet, or poly:c0,c1,..."
    ))
}

fn parse_fn(name: &str) -> Result<FnExpr, String> {
    match name {
        "identity" => Ok(FnExpr::identity()),
        "square" => Ok(FnExpr::mul(FnExpr::identity(), FnExpr::identity())),
        "cube" => Ok(FnExpr::Poly(vec![
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
        ])),
        "abs" => Ok(FnExpr::abs(FnExpr::identity())),
        "sign" => Ok(FnExpr::Sign),
        "step" => Ok(FnExpr::Step),
        other => {
            if let Some(spec) = other.strip_prefix("poly:") {
                let coeffs = parse_values(spec)?;
                if coeffs.is_empty() {
                    return Err("poly: needs at least one coefficient".into());
                }
                return Ok(FnExpr::Poly(coeffs));
            }
            if let Some(c) = other.strip_prefix("const:") {
                return Ok(FnExpr::constant(parse_rational(c)?));
            }
            Err(format!(
                "unknown function {other:?}; builtins: identity, square, cube, abs, sign, step, poly:c0,c1,..., const:c"
            ))
        }
    }
}
