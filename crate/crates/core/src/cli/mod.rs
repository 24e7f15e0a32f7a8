//! Problem files, the expression grammar, and command dispatch.

mod dispatch;
mod expr;
mod problem;

pub use dispatch::{error_json, exit_code, run, Outcome};
pub use expr::{eval_fraction, eval_ratfunc, parse_expr, parse_fraction, parse_ratfunc, Expr, MAX_EXPONENT};
pub use problem::{parse_problem, print_problem, ProblemFile};
