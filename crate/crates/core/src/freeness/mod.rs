//! Words in `b(1-x)^-1` and `(1-x)^-1`, bounded independence certificates,
//! and the witnesses that feed them.

mod certificate;
mod witness;
mod words;

pub use certificate::{
    freeness_certify, freeness_certify_with, independence_check, independence_check_with, matrix_digest,
    relation_vanishes, CertificateVerdict, FreenessCertificate, IndependenceResult, Limits,
};
pub use witness::{monomial_products_check, valuation_witness, weyl_pair_from_additive, WeylPair};
pub use words::{build_word_v, build_word_w, build_word_w_by_products, WordIndex};
