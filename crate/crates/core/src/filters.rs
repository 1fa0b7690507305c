//! Filters on finite topological spaces: neighborhood filters, limit
//! sets, convergence, and filter-based continuity.
//!
//! The extension picture is degenerate here on purpose: a filter with a
//! convergent filter below it is itself convergent, so the closure of
//! the kernel is the kernel and the engine either reproduces an exact
//! limit set or certifies that no kernel witness exists below.
//!
//! Carriers are {0, …, n−1} with subsets as bitmasks.

use std::collections::BTreeSet;
use std::fmt;

use crate::engine::{
    extend, ApproximantGenerator, Enclosure, ExtensionOutcome, ExtensionProblem, GeneratorStep,
    IsotonicMap,
};
use crate::order::{Preorder, SubsetDirection, SubsetValueOrder};
use crate::rational::Rational;
use crate::report::LawReport;
use crate::OrdcloseError;

/// Largest carrier for exhaustive filter enumeration.
pub const MAX_FILTER_CARRIER: usize = 4;
/// Largest carrier for exhaustive topology enumeration.
pub const MAX_TOPOLOGY_CARRIER: usize = 3;
const MAX_CARRIER: usize = 6;

fn full_mask(size: usize) -> u64 {
    (1u64 << size) - 1
}

/// Renders a bitmask as a set, e.g. `{0,2}`.
pub fn format_set(mask: u64) -> String {
    let mut out = String::from("{");
    let mut first = true;
    for i in 0..64 {
        if mask & (1 << i) != 0 {
            if !first {
                out.push(',');
            }
            out.push_str(&i.to_string());
            first = false;
        }
    }
    out.push('}');
    out
}

/// Topology on a finite carrier, validated exhaustively: empty set and
/// carrier open, opens closed under union and intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    size: usize,
    opens: BTreeSet<u64>,
}

impl FiniteTopology {
    pub fn new(size: usize, opens: impl IntoIterator<Item = u64>) -> Result<Self, OrdcloseError> {
        if size > MAX_CARRIER {
            return Err(OrdcloseError::CarrierTooLarge {
                size,
                max: MAX_CARRIER,
            });
        }
        let full = full_mask(size);
        let opens: BTreeSet<u64> = opens.into_iter().collect();
        for &o in &opens {
            if o & !full != 0 {
                return Err(OrdcloseError::InvalidInput(format!(
                    "open set {} leaves the carrier",
                    format_set(o)
                )));
            }
        }
        if !opens.contains(&0) || !opens.contains(&full) {
            return Err(OrdcloseError::InvalidInput(
                "empty set and carrier must be open".into(),
            ));
        }
        for &a in &opens {
            for &b in &opens {
                if !opens.contains(&(a | b)) {
                    return Err(OrdcloseError::InvalidInput(format!(
                        "union of opens {} and {} is not open",
                        format_set(a),
                        format_set(b)
                    )));
                }
                if !opens.contains(&(a & b)) {
                    return Err(OrdcloseError::InvalidInput(format!(
                        "intersection of opens {} and {} is not open",
                        format_set(a),
                        format_set(b)
                    )));
                }
            }
        }
        Ok(FiniteTopology { size, opens })
    }

    pub fn discrete(size: usize) -> Result<Self, OrdcloseError> {
        FiniteTopology::new(size, 0..=full_mask(size))
    }

    pub fn indiscrete(size: usize) -> Result<Self, OrdcloseError> {
        FiniteTopology::new(size, [0, full_mask(size)])
    }

    /// Two points with exactly one of them open.
    pub fn two_point_connected() -> Self {
        FiniteTopology::new(2, [0b00, 0b10, 0b11]).expect("valid by construction")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn carrier_mask(&self) -> u64 {
        full_mask(self.size)
    }

    pub fn opens(&self) -> impl Iterator<Item = u64> + '_ {
        self.opens.iter().copied()
    }

    pub fn is_open(&self, s: u64) -> bool {
        self.opens.contains(&s)
    }

    /// Smallest closed superset of s.
    pub fn closure(&self, s: u64) -> u64 {
        let full = self.carrier_mask();
        let mut acc = full;
        for &o in &self.opens {
            let closed = full & !o;
            if s & !closed == 0 {
                acc &= closed;
            }
        }
        acc
    }

    /// Intersection of all opens containing x; open itself, since opens
    /// are closed under intersection.
    pub fn min_open(&self, x: usize) -> u64 {
        let mut acc = self.carrier_mask();
        for &o in &self.opens {
            if o & (1 << x) != 0 {
                acc &= o;
            }
        }
        acc
    }

    /// All supersets of open sets containing x.
    pub fn neighborhood_filter(&self, x: usize) -> Result<FiniteFilter, OrdcloseError> {
        if x >= self.size {
            return Err(OrdcloseError::InvalidInput(format!(
                "point {x} outside carrier of size {}",
                self.size
            )));
        }
        FiniteFilter::principal(self.size, self.min_open(x))
    }

    /// Every topology on the carrier, by filtering all candidate
    /// families through the validator.
    pub fn all_topologies(size: usize) -> Result<Vec<FiniteTopology>, OrdcloseError> {
        if size > MAX_TOPOLOGY_CARRIER {
            return Err(OrdcloseError::CarrierTooLarge {
                size,
                max: MAX_TOPOLOGY_CARRIER,
            });
        }
        let full = full_mask(size);
        let optional: Vec<u64> = (1..full).collect();
        let mut out = Vec::new();
        for pick in 0u64..(1 << optional.len()) {
            let mut opens = vec![0, full];
            for (i, &s) in optional.iter().enumerate() {
                if pick & (1 << i) != 0 {
                    opens.push(s);
                }
            }
            if let Ok(top) = FiniteTopology::new(size, opens) {
                out.push(top);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "topology[")?;
        for (i, &o) in self.opens.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", format_set(o))?;
        }
        write!(f, "]")
    }
}

/// Proper filter: nonempty family without the empty set, upward closed
/// and closed under intersection, all checked exhaustively. On a finite
/// carrier such a family is the up-set of its core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFilter {
    size: usize,
    sets: BTreeSet<u64>,
}

impl FiniteFilter {
    pub fn new(size: usize, sets: impl IntoIterator<Item = u64>) -> Result<Self, OrdcloseError> {
        if size > MAX_CARRIER {
            return Err(OrdcloseError::CarrierTooLarge {
                size,
                max: MAX_CARRIER,
            });
        }
        let full = full_mask(size);
        let sets: BTreeSet<u64> = sets.into_iter().collect();
        if sets.is_empty() {
            return Err(OrdcloseError::InvalidInput("filter must be nonempty".into()));
        }
        if sets.contains(&0) {
            return Err(OrdcloseError::InvalidInput(
                "proper filter excludes the empty set".into(),
            ));
        }
        for &s in &sets {
            if s & !full != 0 {
                return Err(OrdcloseError::InvalidInput(format!(
                    "member {} leaves the carrier",
                    format_set(s)
                )));
            }
            for t in 0..=full {
                if t & s == s && !sets.contains(&t) {
                    return Err(OrdcloseError::InvalidInput(format!(
                        "not upward closed: {} missing above {}",
                        format_set(t),
                        format_set(s)
                    )));
                }
            }
        }
        for &s in &sets {
            for &t in &sets {
                if !sets.contains(&(s & t)) {
                    return Err(OrdcloseError::InvalidInput(format!(
                        "intersection {} of members missing",
                        format_set(s & t)
                    )));
                }
            }
        }
        Ok(FiniteFilter { size, sets })
    }

    /// All supersets of a nonempty core.
    pub fn principal(size: usize, core: u64) -> Result<Self, OrdcloseError> {
        if core == 0 {
            return Err(OrdcloseError::InvalidInput(
                "principal filter needs a nonempty core".into(),
            ));
        }
        let full = full_mask(size);
        if core & !full != 0 {
            return Err(OrdcloseError::InvalidInput(format!(
                "core {} leaves the carrier",
                format_set(core)
            )));
        }
        let sets = (0..=full).filter(|&t| t & core == core);
        FiniteFilter::new(size, sets)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn core(&self) -> u64 {
        self.sets
            .iter()
            .fold(full_mask(self.size), |acc, &s| acc & s)
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.sets.iter().copied()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.sets.contains(&s)
    }

    pub fn is_subfilter_of(&self, other: &FiniteFilter) -> bool {
        self.size == other.size && self.sets.is_subset(&other.sets)
    }

    /// Every filter on a small finite carrier: the principal filters of
    /// all nonempty cores.
    pub fn all_filters(size: usize) -> Result<Vec<FiniteFilter>, OrdcloseError> {
        if size > MAX_FILTER_CARRIER {
            return Err(OrdcloseError::CarrierTooLarge {
                size,
                max: MAX_FILTER_CARRIER,
            });
        }
        (1..=full_mask(size))
            .map(|core| FiniteFilter::principal(size, core))
            .collect()
    }

    /// Filter generated by the images of the members. All images are
    /// present, so the generated filter is the up-set of their
    /// intersection.
    pub fn pushforward(
        &self,
        map: &[usize],
        target_size: usize,
    ) -> Result<FiniteFilter, OrdcloseError> {
        check_map(map, self.size, target_size)?;
        let mut meet = full_mask(target_size);
        for s in self.members() {
            meet &= image(map, s);
        }
        FiniteFilter::principal(target_size, meet)
    }
}

impl fmt::Display for FiniteFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "up{}", format_set(self.core()))
    }
}

fn check_map(map: &[usize], from: usize, to: usize) -> Result<(), OrdcloseError> {
    if map.len() != from {
        return Err(OrdcloseError::InvalidInput(format!(
            "map covers {} points, carrier has {from}",
            map.len()
        )));
    }
    if let Some(y) = map.iter().find(|&&y| y >= to) {
        return Err(OrdcloseError::InvalidInput(format!(
            "map value {y} outside target carrier of size {to}"
        )));
    }
    Ok(())
}

fn image(map: &[usize], s: u64) -> u64 {
    let mut out = 0;
    for (x, &y) in map.iter().enumerate() {
        if s & (1 << x) != 0 {
            out |= 1 << y;
        }
    }
    out
}

/// Set of limits of a convergent filter: the intersection of the
/// closures of all members.
pub fn limit_set(top: &FiniteTopology, filter: &FiniteFilter) -> Result<u64, OrdcloseError> {
    if !is_convergent(top, filter) {
        return Err(OrdcloseError::NotConvergent);
    }
    Ok(filter
        .members()
        .fold(top.carrier_mask(), |acc, s| acc & top.closure(s)))
}

fn is_convergent(top: &FiniteTopology, filter: &FiniteFilter) -> bool {
    (0..top.size()).any(|x| {
        top.neighborhood_filter(x)
            .map(|u| u.is_subfilter_of(filter))
            .unwrap_or(false)
    })
}

/// Inclusion of filters as families of sets.
#[derive(Debug, Clone)]
pub struct FilterInclusion;

impl Preorder for FilterInclusion {
    type Elem = FiniteFilter;

    fn try_leq(&self, a: &FiniteFilter, b: &FiniteFilter) -> Option<bool> {
        Some(a.is_subfilter_of(b))
    }
}

/// Kernel map: limit sets of convergent filters, valued in subsets
/// ordered by reverse inclusion.
#[derive(Debug, Clone)]
pub struct LimitSetPhi {
    pub topology: FiniteTopology,
}

impl IsotonicMap for LimitSetPhi {
    type Input = FiniteFilter;
    type Value = u64;

    fn in_kernel(&self, f: &FiniteFilter) -> bool {
        is_convergent(&self.topology, f)
    }

    fn eval(&self, f: &FiniteFilter) -> Result<Enclosure<u64>, OrdcloseError> {
        limit_set(&self.topology, f).map(Enclosure::point)
    }
}

/// Witness search: walks the finite filter enumeration once, offering
/// each convergent filter as a bound where the inclusion allows it.
#[derive(Debug, Clone)]
pub struct FilterBoundSearch {
    pub topology: FiniteTopology,
}

impl ApproximantGenerator for FilterBoundSearch {
    type Candidate = FiniteFilter;

    fn next_step(
        &mut self,
        f: &FiniteFilter,
        k: u64,
    ) -> Result<GeneratorStep<FiniteFilter>, OrdcloseError> {
        let all = FiniteFilter::all_filters(self.topology.size())?;
        let idx = k as usize;
        let candidate = all.get(idx).cloned();
        let mut lower = None;
        let mut upper = None;
        if let Some(c) = candidate {
            if is_convergent(&self.topology, &c) {
                if c.is_subfilter_of(f) {
                    lower = Some(c.clone());
                }
                if f.is_subfilter_of(&c) {
                    upper = Some(c);
                }
            }
        }
        Ok(GeneratorStep {
            lower,
            upper,
            cost: 1,
            gap: None,
            exhausted: idx + 1 >= all.len(),
        })
    }

    fn exhaustive_on_finish(&self) -> bool {
        true
    }
}

pub type FilterProblem = ExtensionProblem<FilterInclusion, SubsetValueOrder, LimitSetPhi>;

pub fn filter_problem(top: FiniteTopology) -> FilterProblem {
    ExtensionProblem {
        candidate_order: FilterInclusion,
        value_order: SubsetValueOrder::new(top.carrier_mask(), SubsetDirection::Superset),
        phi: LimitSetPhi { topology: top },
    }
}

/// Runs the extension engine on a filter. Convergent filters come back
/// as exact limit sets; anything else has no kernel witness below it.
pub fn filter_extend(
    top: &FiniteTopology,
    filter: &FiniteFilter,
) -> Result<ExtensionOutcome<u64>, OrdcloseError> {
    let problem = filter_problem(top.clone());
    let mut gen = FilterBoundSearch {
        topology: top.clone(),
    };
    let budget = 4 * (1u64 << top.size());
    extend(&problem, &mut gen, filter, &Rational::one(), budget)
}

/// Enumerates every filter on the carrier and checks that each one
/// bracketed by convergent filters is itself convergent.
pub fn kbounded_closure_check(top: &FiniteTopology) -> Result<LawReport, OrdcloseError> {
    let all = FiniteFilter::all_filters(top.size())?;
    let mut report = LawReport::new("kbounded-filters-converge");
    for f in &all {
        let in_kernel = is_convergent(top, f);
        let below = all
            .iter()
            .any(|a| is_convergent(top, a) && a.is_subfilter_of(f));
        let above = all
            .iter()
            .any(|b| is_convergent(top, b) && f.is_subfilter_of(b));
        if below && above && !in_kernel {
            report.violation(
                format!("{top}, filter {f}"),
                "kernel-bounded filter converges",
                "non-convergent",
            );
        } else {
            report.case();
        }
    }
    Ok(report)
}

/// Continuity verdicts at one point, by both definitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointContinuity {
    pub point: usize,
    /// The neighborhood filter of the image refines the pushforward of
    /// the neighborhood filter.
    pub filter_continuous: bool,
    /// Every open around the image pulls back to a neighborhood.
    pub preimage_continuous: bool,
}

/// Per-point continuity of a map, decided through filters and, as a
/// cross-check, through open preimages. The two verdicts agree; the
/// exhaustive small-space test pins that down.
pub fn filter_continuity(
    tx: &FiniteTopology,
    ty: &FiniteTopology,
    map: &[usize],
) -> Result<Vec<PointContinuity>, OrdcloseError> {
    check_map(map, tx.size(), ty.size())?;
    let mut out = Vec::with_capacity(tx.size());
    for x in 0..tx.size() {
        let ux = tx.neighborhood_filter(x)?;
        let ufx = ty.neighborhood_filter(map[x])?;
        let pushed = ux.pushforward(map, ty.size())?;
        let filter_continuous = ufx.is_subfilter_of(&pushed);

        let preimage_continuous = ty.opens().filter(|&v| v & (1 << map[x]) != 0).all(|v| {
            let pre = preimage(map, tx.size(), v);
            tx.opens().any(|w| w & (1 << x) != 0 && w & !pre == 0)
        });

        out.push(PointContinuity {
            point: x,
            filter_continuous,
            preimage_continuous,
        });
    }
    Ok(out)
}

fn preimage(map: &[usize], from: usize, s: u64) -> u64 {
    let mut out = 0;
    for (x, &y) in map.iter().enumerate().take(from) {
        if s & (1 << y) != 0 {
            out |= 1 << x;
        }
    }
    out
}

/// All maps between carriers of the given sizes, each as a value table.
pub fn all_maps(from: usize, to: usize) -> Vec<Vec<usize>> {
    let count = (to as u64).pow(from as u32);
    (0..count)
        .map(|code| {
            let mut c = code;
            (0..from)
                .map(|_| {
                    let y = (c % to as u64) as usize;
                    c /= to as u64;
                    y
                })
                .collect()
        })
        .collect()
}
