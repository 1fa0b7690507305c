//! Certified two-sided enclosures for isotonic-extension problems.
//!
//! The crate is organized around one refinement engine (`engine`) that
//! squeezes a candidate between kernel elements with known values, and a
//! family of instantiations: roots and exponentials (`roots`), Riemann and
//! Lebesgue-style integration (`integration`), net limits, continuity and
//! 1-D derivatives (`limits_local`), filters on finite topological spaces
//! (`filters`), and one-sided closure systems with outer measures
//! (`closure_systems`). `algebra` runs the homomorphism law suites that tie
//! the instances together, and `fixtures` hosts the builtin examples the
//! CLI and the test suites share.

pub mod algebra;
pub mod closure_systems;
pub mod engine;
pub mod filters;
pub mod fixtures;
pub mod integration;
pub mod limits_local;
pub mod order;
pub mod rational;
pub mod report;
pub mod roots;

pub use engine::{Enclosure, ExtensionOutcome, ExtensionStatus};
pub use order::{Completeness, Preorder, ValueOrder};
pub use rational::{ExtRational, Rational, RoundDir};
pub use report::{LawReport, Violation};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdcloseError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("bound queries require a nonempty set")]
    EmptySet,
    #[error("no computable meet for the given elements")]
    NoMeet,
    #[error("no computable join for the given elements")]
    NoJoin,
    #[error("enclosure endpoints out of order: lower {lower} > upper {upper}")]
    EnclosureOrder { lower: String, upper: String },
    #[error("refinement budget of {budget} exhausted before reaching tolerance")]
    BudgetExhausted { budget: u64 },
    #[error("candidate is not bracketed by kernel elements")]
    NotKBounded,
    #[error("{0}")]
    Domain(String),
    #[error("filter does not refine any neighborhood filter")]
    NotConvergent,
    #[error("no kernel element dominates the candidate")]
    NotInKStar,
    #[error("carrier cannot be covered by ring sets")]
    NoCover,
    #[error("outer measure not additive on generated sigma-algebra: {witness}")]
    AdditivityViolation { witness: String },
    #[error("value series has no finite absolute-convergence certificate")]
    DivergentSeries,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("carrier of size {size} exceeds the enumeration bound {max}")]
    CarrierTooLarge { size: usize, max: usize },
}
