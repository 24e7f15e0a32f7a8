//! Automorphisms and twisted derivations of `k(y_1, ..., y_n)`, their orbits,
//! derivation towers, and discrete valuations on `k(t)`.

mod orbit;
mod presentation;
mod tower;
mod valuation;

pub use orbit::{affine_coefficients, affine_form, fixed_power_check, orbit_analyze, OrbitReport};
pub use presentation::{FieldPresentation, SkewDerivation, SkewEndo, SkewPair};
pub use tower::{delta_tower, LevelStatus, TowerReport};
pub use valuation::{length_profile, simple_places, valuation, LengthProfile, Place, DEFAULT_PLACE_DEGREE_BOUND};
