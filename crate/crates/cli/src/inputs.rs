//! Command-line and file input parsing. Sets are written with 1-based
//! elements ("1,3"), families of sets with semicolons ("1;1,2"), and
//! file inputs are JSON documents checked field by field.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use ordclose::closure_systems::{FiniteGroup, PreMeasure, SetRing};
use ordclose::filters::FiniteTopology;
use ordclose::integration::AtomicMeasureSpace;
use ordclose::rational::{ExtRational, Rational};
use serde::Deserialize;

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>()
        .map_err(|e| format!("bad rational {s:?}: {e}"))
}

/// Rational or "inf".
pub fn parse_ext(s: &str) -> Result<ExtRational, String> {
    if s == "inf" {
        Ok(ExtRational::Infinity)
    } else {
        parse_rational(s).map(ExtRational::Finite)
    }
}

/// Comma-separated 1-based elements; the empty string is the empty set.
pub fn parse_set(s: &str, size: usize) -> Result<u64, String> {
    let mut mask = 0u64;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let e: usize = part
            .parse()
            .map_err(|_| format!("bad element {part:?}"))?;
        if e == 0 || e > size {
            return Err(format!("element {e} outside 1..={size}"));
        }
        mask |= 1 << (e - 1);
    }
    Ok(mask)
}

/// Like `parse_set`, but elements may also be carrier names.
pub fn parse_named_set(s: &str, names: &[String]) -> Result<u64, String> {
    let mut mask = 0u64;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let by_name = names.iter().position(|n| n == part);
        let by_index = part
            .parse::<usize>()
            .ok()
            .filter(|&e| e >= 1 && e <= names.len())
            .map(|e| e - 1);
        let i = by_name
            .or(by_index)
            .ok_or_else(|| format!("unknown element {part:?}"))?;
        mask |= 1 << i;
    }
    Ok(mask)
}

/// Semicolon-separated sets over a base carrier, returned as a mask
/// over the powerset universe.
pub fn parse_family(s: &str, base: usize) -> Result<u64, String> {
    let mut family = 0u64;
    for part in s.split(';').map(str::trim) {
        if part.is_empty() && s.trim().is_empty() {
            continue;
        }
        let subset = parse_set(part, base)?;
        family |= 1u64 << subset;
    }
    Ok(family)
}

pub fn parse_values(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_rational)
        .collect()
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[derive(Deserialize)]
pub struct TopologyFile {
    pub carrier: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

/// Topology from named points; returns the point names in index order.
pub fn load_topology(path: &Path) -> Result<(FiniteTopology, Vec<String>), String> {
    let file: TopologyFile = read_json(path)?;
    let names = file.carrier;
    let index_of = |name: &str| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| format!("unknown point {name:?} in opens"))
    };
    let mut opens = Vec::new();
    for open in &file.opens {
        let mut mask = 0u64;
        for name in open {
            mask |= 1 << index_of(name)?;
        }
        opens.push(mask);
    }
    let top = FiniteTopology::new(names.len(), opens).map_err(|e| e.to_string())?;
    Ok((top, names))
}

#[derive(Deserialize)]
pub struct GroupFile {
    pub labels: Vec<String>,
    /// table[a][b] is the index of a∘b; indices are 0-based.
    pub table: Vec<Vec<usize>>,
}

pub fn load_group(path: &Path) -> Result<FiniteGroup, String> {
    let file: GroupFile = read_json(path)?;
    FiniteGroup::new(file.table, file.labels).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
pub struct RingFile {
    /// Carrier size; elements are 1..=carrier.
    pub carrier: usize,
    pub sets: Vec<Vec<usize>>,
    /// One value per set, rationals or "inf".
    pub mu: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AtomsField {
    Labels(Vec<String>),
    Tag(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightsField {
    List(Vec<String>),
    Formula { formula: String, ratio: String },
}

/// Measure-space description: finitely many labeled atoms with listed
/// weights, or atoms "nat" with a weight formula and an optional
/// declared bound on the total mass.
#[derive(Deserialize)]
pub struct SpaceFile {
    atoms: AtomsField,
    weights: WeightsField,
    tail_bound: Option<String>,
}

pub fn load_space(path: &Path) -> Result<AtomicMeasureSpace, String> {
    let file: SpaceFile = read_json(path)?;
    match (file.atoms, file.weights) {
        (AtomsField::Labels(labels), WeightsField::List(list)) => {
            if labels.len() != list.len() {
                return Err(format!(
                    "{}: {} atoms but {} weights",
                    path.display(),
                    labels.len(),
                    list.len()
                ));
            }
            if file.tail_bound.is_some() {
                return Err("tail_bound only applies to atoms \"nat\"".into());
            }
            let weights = list
                .iter()
                .map(|w| parse_rational(w))
                .collect::<Result<Vec<_>, _>>()?;
            AtomicMeasureSpace::finite(weights).map_err(|e| e.to_string())
        }
        (AtomsField::Tag(tag), WeightsField::Formula { formula, ratio }) => {
            if tag != "nat" {
                return Err(format!("unknown atoms tag {tag:?}, expected \"nat\""));
            }
            if formula != "geometric" {
                return Err(format!("unknown weight formula {formula:?}"));
            }
            let r = parse_rational(&ratio)?;
            let space = AtomicMeasureSpace::geometric(r.clone()).map_err(|e| e.to_string())?;
            if let Some(bound) = file.tail_bound {
                let bound = parse_rational(&bound)?;
                let total = r.clone() / (Rational::one() - r);
                if bound < total {
                    return Err(format!(
                        "declared tail_bound {bound} understates the total mass {total}"
                    ));
                }
            }
            Ok(space)
        }
        _ => Err("atoms and weights must both be explicit lists, or \"nat\" with a formula".into()),
    }
}

/// Step-function description for integration: values at atoms 1, 2,
/// ... and an optional eventual constant (default 0).
#[derive(Deserialize)]
pub struct FunctionFile {
    values: Vec<String>,
    tail: Option<String>,
}

pub fn load_function(path: &Path) -> Result<(Vec<Rational>, Option<Rational>), String> {
    let file: FunctionFile = read_json(path)?;
    let values = file
        .values
        .iter()
        .map(|v| parse_rational(v))
        .collect::<Result<Vec<_>, _>>()?;
    let tail = file.tail.as_deref().map(parse_rational).transpose()?;
    Ok((values, tail))
}

pub fn load_premeasure(path: &Path) -> Result<PreMeasure, String> {
    let file: RingFile = read_json(path)?;
    if file.sets.len() != file.mu.len() {
        return Err(format!(
            "{}: {} sets but {} mu values",
            path.display(),
            file.sets.len(),
            file.mu.len()
        ));
    }
    let mut members = Vec::new();
    let mut values = BTreeMap::new();
    for (set, mu) in file.sets.iter().zip(&file.mu) {
        let mut mask = 0u64;
        for &e in set {
            if e == 0 || e > file.carrier {
                return Err(format!("element {e} outside 1..={}", file.carrier));
            }
            mask |= 1 << (e - 1);
        }
        members.push(mask);
        values.insert(mask, parse_ext(mu)?);
    }
    let ring = SetRing::new(file.carrier, members).map_err(|e| e.to_string())?;
    PreMeasure::new(ring, values).map_err(|e| e.to_string())
}
