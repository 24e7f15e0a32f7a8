//! Normalization of `(sigma, delta)` and the classification pipelines that
//! turn orbit, tower and certificate evidence into verdicts.

mod normalize;
mod pipeline;
mod verdict;

pub use normalize::{normalize_presentation, shift_relation_holds, Normalization, NormalizationKind};
pub use pipeline::{classify, classify_automorphism, classify_derivation, x_power_central, Options, ProblemSpec};
pub use verdict::{Verdict, VerdictKind, Witness};
