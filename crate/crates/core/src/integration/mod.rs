//! Integral enclosures: Darboux bracketing by step functions on an
//! interval, and integration over countable atomic measure spaces
//! where null sets are invisible to the order.

mod lebesgue;
mod riemann;

pub use lebesgue::{
    functional_compose, functional_image, lebesgue_extend, lebesgue_problem, mu_step_integral,
    vector_integral, AlmostEverywhereLeq, AtomSeq, AtomicMeasureSpace, LebesgueFn, LebesguePhi,
    LebesgueProblem, LebesgueTruncation, MuStepFunction, TailForm,
};
pub use riemann::{
    darboux_extend, darboux_sums, riemann_problem, step_integral, DyadicDarboux, PointwiseLeq,
    RangeOracle, RiemannCandidate, RiemannPhi, RiemannProblem, StepFunction1D,
};
