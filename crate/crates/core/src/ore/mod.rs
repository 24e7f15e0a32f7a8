//! The Ore extension `K[x; sigma, delta]` and its division ring of left
//! fractions `K(x; sigma, delta)`.

mod fraction;
mod poly;

pub use fraction::{central_power_check, weyl_check, OreFraction, WeylOrientation, CANCEL_DEGREE};
pub use poly::OrePoly;
