//! Output documents. Every command renders one document, either as
//! pretty JSON or as plain lines, written once to stdout. Rational
//! endpoints are exact; decimals are display-only and rounded outward.

use ordclose::engine::{ExtensionOutcome, ExtensionStatus};
use ordclose::rational::{Rational, RoundDir};
use ordclose::report::LawReport;
use serde::Serialize;
use serde_json::Value;

pub const DECIMAL_DIGITS: u32 = 9;

#[derive(Serialize)]
pub struct ResultDocument {
    pub command: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_width: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal_display: Option<String>,
    pub iterations: u64,
    pub cost: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    pub instance: Value,
}

pub fn status_name(status: &ExtensionStatus) -> &'static str {
    match status {
        ExtensionStatus::Converged => "converged",
        ExtensionStatus::GapAtLeast(_) => "gap",
        ExtensionStatus::BudgetExhausted => "budget-exhausted",
        ExtensionStatus::NotKBounded => "not-k-bounded",
    }
}

/// 0 certified positive, 2 certified negative, 3 inconclusive.
pub fn exit_code(status: &str) -> u8 {
    match status {
        "converged" | "verified" => 0,
        "gap" | "not-k-bounded" | "refuted" => 2,
        _ => 3,
    }
}

fn gap_width(status: &ExtensionStatus) -> Option<String> {
    match status {
        ExtensionStatus::GapAtLeast(w) => Some(w.to_string()),
        _ => None,
    }
}

pub fn numeric_document(
    command: impl Into<String>,
    out: &ExtensionOutcome<Rational>,
    instance: Value,
) -> ResultDocument {
    let (lower, upper, decimal) = match &out.enclosure {
        Some(enc) => (
            Some(enc.lower().to_string()),
            Some(enc.upper().to_string()),
            Some(format!(
                "[{}, {}]",
                enc.lower().to_decimal(DECIMAL_DIGITS, RoundDir::Down),
                enc.upper().to_decimal(DECIMAL_DIGITS, RoundDir::Up)
            )),
        ),
        None => (None, None, None),
    };
    ResultDocument {
        command: command.into(),
        status: status_name(&out.status),
        gap_width: gap_width(&out.status),
        lower,
        upper,
        decimal_display: decimal,
        iterations: out.iterations,
        cost: out.cost,
        certificate: out.certificate.clone(),
        instance,
    }
}

/// Renders a mask through carrier names, e.g. {a,c} or {1,3}.
pub fn named_set(mask: u64, names: &[String]) -> String {
    let elems: Vec<&str> = (0..names.len())
        .filter(|&i| mask & (1 << i) != 0)
        .map(|i| names[i].as_str())
        .collect();
    format!("{{{}}}", elems.join(","))
}

/// Set-valued outcomes print their endpoints as point sets.
pub fn set_document(
    command: impl Into<String>,
    out: &ExtensionOutcome<u64>,
    instance: Value,
    names: &[String],
) -> ResultDocument {
    let (lower, upper) = match &out.enclosure {
        Some(enc) => (
            Some(named_set(*enc.lower(), names)),
            Some(named_set(*enc.upper(), names)),
        ),
        None => (None, None),
    };
    ResultDocument {
        command: command.into(),
        status: status_name(&out.status),
        gap_width: gap_width(&out.status),
        lower,
        upper,
        decimal_display: None,
        iterations: out.iterations,
        cost: out.cost,
        certificate: out.certificate.clone(),
        instance,
    }
}

#[derive(Serialize)]
pub struct ClosureDocument {
    pub command: String,
    pub system: String,
    pub input: String,
    pub closure: String,
    pub members: Vec<String>,
    pub count: usize,
}

#[derive(Serialize)]
pub struct MeasureDocument {
    pub command: String,
    pub set: String,
    pub value: String,
    pub instance: Value,
}

#[derive(Serialize)]
pub struct RestrictDocument {
    pub command: String,
    pub sigma_members: Vec<String>,
    pub values: Vec<String>,
    pub instance: Value,
}

#[derive(Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub status: &'static str,
    pub report: LawReport,
    pub instance: Value,
}

#[derive(Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: &'static str,
    pub describe: String,
}

#[derive(Serialize)]
pub struct CatalogDocument {
    pub command: String,
    pub entries: Vec<CatalogEntry>,
}

/// Renders a serializable document as pretty JSON with a trailing
/// newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn plain_result(doc: &ResultDocument) -> String {
    let mut lines = vec![format!("status: {}", doc.status)];
    if let Some(w) = &doc.gap_width {
        lines.push(format!("gap width: {w}"));
    }
    if let (Some(lo), Some(hi)) = (&doc.lower, &doc.upper) {
        lines.push(format!("interval: [{lo}, {hi}]"));
    }
    if let Some(d) = &doc.decimal_display {
        lines.push(format!("decimal: {d}"));
    }
    lines.push(format!("iterations: {}", doc.iterations));
    lines.push(format!("cost: {}", doc.cost));
    if let Some(c) = &doc.certificate {
        lines.push(format!("certificate: {c}"));
    }
    lines.join("\n") + "\n"
}

pub fn plain_report(doc: &ReportDocument) -> String {
    let mut lines = vec![
        format!("suite: {}", doc.report.suite),
        format!("status: {}", doc.status),
        format!(
            "cases: {} ({} skipped), violations: {}",
            doc.report.cases,
            doc.report.skipped,
            doc.report.violations.len()
        ),
    ];
    for v in &doc.report.violations {
        lines.push(format!("  {} expected {} got {}", v.inputs, v.expected, v.got));
    }
    lines.join("\n") + "\n"
}
