//! Exact arithmetic over the base field: scalars, polynomials, rational
//! functions and rank computations.

mod gcd;
mod linalg;
mod mpoly;
mod ratfunc;
mod scalar;

pub use gcd::{poly_gcd, poly_lcm};
pub use linalg::{combine_rows, flatten_to_k, rank_over_k, FlatMatrix, RankResult};
pub use mpoly::{grlex_cmp, MPoly, Mono, PolyRing};
pub use ratfunc::{ratfunc_arith, reduce_term_bound, set_reduce_term_bound, ArithOp, RatFunc};
pub use scalar::{is_prime, Field, Scalar, MAX_PRIME};
