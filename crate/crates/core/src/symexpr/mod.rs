//! Exact scalar expressions over a coordinate chart.
//!
//! Everything geometric in this crate bottoms out in [`Expr`]: parsing,
//! exact differentiation, canonical simplification, IEEE evaluation and the
//! symbolic-then-sampled zero test of [`Context::is_zero`].

mod canon;
mod chart;
mod expr;
mod parse;
mod zero;

pub use chart::Chart;
pub use expr::{EvalError, EvalErrorKind, Expr, Func, Node};
pub use parse::parse;
pub use zero::{Context, SamplingPlan, Witness, ZeroKind, ZeroVerdict};
