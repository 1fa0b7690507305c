//! Limits of sequences and local behavior of functions, both as
//! order-closure problems over constant witnesses.

pub(crate) mod interval;
mod local;
mod seq;

pub use local::{
    continuity_at, derivative_at_zero, distance_function, local_value_problem,
    metric_continuity_check, BallSchedule, ConstFnPhi, FnExpr, LocalValueProblem, LocallyLeq,
    TangentialLeq,
};
pub use seq::{
    classify_zero_limit, distance_net, metric_limit_check, net_limit, seq_limit_problem,
    FinallyLeq, Metric, SeqExpr, SeqLimitPhi, SeqLimitProblem, TailSchedule, ZeroLimitVerdict,
};
