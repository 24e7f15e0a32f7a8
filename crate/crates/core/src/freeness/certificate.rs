use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{flatten_to_k, rank_over_k, FlatMatrix, RatFunc, Scalar};
use crate::ore::{OreFraction, OrePoly};
use crate::skew::SkewPair;

use super::words::{build_word_w, WordIndex};

/// Cooperative resource bounds for certificate computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_words: usize,
    /// Largest number of terms in any numerator or denominator polynomial.
    pub max_terms: usize,
    /// Largest bit size of any coefficient.
    pub max_bits: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { max_words: 1 << 10, max_terms: 1 << 17, max_bits: 1 << 16 }
    }
}

impl Limits {
    fn check_poly(&self, what: &str, p: &OrePoly) -> Result<()> {
        let terms = p.max_terms();
        if terms > self.max_terms {
            return Err(Error::ResourceBoundExceeded(format!("{what}: {terms} terms exceed max_terms {}", self.max_terms)));
        }
        let bits = p.max_bit_size();
        if bits > self.max_bits {
            return Err(Error::ResourceBoundExceeded(format!("{what}: {bits}-bit coefficient exceeds max_bits {}", self.max_bits)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct IndependenceResult {
    pub independent: bool,
    pub rank: usize,
    /// A re-verified relation `sum_i c_i f_i = 0`, last nonzero entry normalized.
    pub relation: Option<Vec<Scalar>>,
    pub matrix: FlatMatrix,
    /// The common left denominator.
    pub common_den: OrePoly,
}

/// Deterministic SHA-256 of the column labels and entries.
pub fn matrix_digest(m: &FlatMatrix) -> String {
    let mut h = Sha256::new();
    h.update(format!("field {}\n", m.field));
    for (coord, mono) in &m.columns {
        let exps: Vec<String> = mono.iter().map(|e| e.to_string()).collect();
        h.update(format!("col {coord}:{}\n", exps.join(",")));
    }
    for row in &m.rows {
        let entries: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        h.update(entries.join(" "));
        h.update("\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// `k`-linear independence of fractions via a common left denominator.
pub fn independence_check(fracs: &[OreFraction]) -> Result<IndependenceResult> {
    independence_check_with(fracs, &Limits::default())
}

pub fn independence_check_with(fracs: &[OreFraction], limits: &Limits) -> Result<IndependenceResult> {
    let Some(first) = fracs.first() else {
        return Err(Error::InvalidArgument("independence check of an empty list".into()));
    };
    let ctx = first.ctx().clone();
    for f in fracs {
        if !Arc::ptr_eq(f.ctx(), &ctx) && !f.ctx().same_as(&ctx) {
            return Err(Error::ContextMismatch);
        }
    }
    // left fold in list order keeps the common denominator reproducible
    let mut common = first.den().clone();
    for f in &fracs[1..] {
        if f.den().is_one() || *f.den() == common {
            continue;
        }
        common = common.lclm(f.den())?.0;
        limits.check_poly("common denominator", &common)?;
    }
    let nums: Vec<OrePoly> = fracs
        .par_iter()
        .map(|f| -> Result<OrePoly> {
            let (q, r) = common.right_divide(f.den())?;
            if !r.is_zero() {
                return Err(Error::InvariantViolation("common denominator is not a left multiple".into()));
            }
            Ok(q.mul_unchecked(f.num()))
        })
        .collect::<Result<_>>()?;
    for n in &nums {
        limits.check_poly("numerator", n)?;
    }
    let width = nums.iter().map(|n| n.coeffs().len()).max().unwrap_or(0).max(1);
    let vectors: Vec<Vec<RatFunc>> = nums.iter().map(|n| (0..width).map(|i| n.coeff(i)).collect()).collect();
    let matrix = flatten_to_k(&vectors)?;
    let rr = rank_over_k(matrix.field, &matrix.rows);
    let relation = match rr.nullspace.first() {
        None => None,
        Some(v) => {
            let lambda = normalize_last(v);
            if !relation_vanishes(fracs, &lambda)? {
                return Err(Error::InvariantViolation("nullspace vector does not annihilate the fractions".into()));
            }
            Some(lambda)
        }
    };
    Ok(IndependenceResult { independent: rr.rank == fracs.len(), rank: rr.rank, relation, matrix, common_den: common })
}

fn normalize_last(v: &[Scalar]) -> Vec<Scalar> {
    let last = v.iter().rev().find(|c| !c.is_zero()).expect("nonzero null vector");
    let inv = last.inv().expect("nonzero");
    v.iter().map(|c| c.mul(&inv)).collect()
}

/// Sums `lambda_i f_i` as fractions.
pub fn relation_vanishes(fracs: &[OreFraction], lambda: &[Scalar]) -> Result<bool> {
    let ctx = fracs[0].ctx();
    let mut acc = OreFraction::zero(ctx);
    for (f, c) in fracs.iter().zip(lambda) {
        if !c.is_zero() {
            acc = acc.add_uncancelled(&f.scale_scalar(c))?;
        }
    }
    Ok(acc.is_zero())
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertificateVerdict {
    Independent,
    Dependent(BTreeMap<WordIndex, Scalar>),
}

/// Exact rank data for the words `W_I`, `|I| <= L`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreenessCertificate {
    pub witness: RatFunc,
    pub max_length: usize,
    pub word_count: usize,
    pub rank: usize,
    pub digest: String,
    pub verdict: CertificateVerdict,
}

impl FreenessCertificate {
    pub fn is_independent(&self) -> bool {
        self.verdict == CertificateVerdict::Independent
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("witness".into(), json!(self.witness.to_string()));
        m.insert("L".into(), json!(self.max_length));
        m.insert("word_count".into(), json!(self.word_count));
        m.insert("rank".into(), json!(self.rank));
        m.insert("digest".into(), json!(self.digest));
        match &self.verdict {
            CertificateVerdict::Independent => {
                m.insert("verdict".into(), json!("Independent"));
            }
            CertificateVerdict::Dependent(rel) => {
                m.insert("verdict".into(), json!("Dependent"));
                let rel: Map<String, Value> = rel.iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect();
                m.insert("relation".into(), Value::Object(rel));
            }
        }
        Value::Object(m)
    }

    /// Rebuilds the words and checks rank, digest and any stored relation.
    pub fn recheck(&self, ctx: &Arc<SkewPair>) -> Result<bool> {
        let again = freeness_certify(ctx, &self.witness, self.max_length)?;
        if again != *self {
            return Ok(false);
        }
        match &self.verdict {
            CertificateVerdict::Independent => Ok(self.rank == self.word_count),
            CertificateVerdict::Dependent(rel) => {
                let words = WordIndex::enumerate(self.max_length);
                let fracs = words.iter().map(|w| build_word_w(ctx, w, &self.witness)).collect::<Result<Vec<_>>>()?;
                let field = ctx.presentation().field();
                let lambda: Vec<Scalar> = words.iter().map(|w| rel.get(w).cloned().unwrap_or_else(|| field.zero())).collect();
                relation_vanishes(&fracs, &lambda)
            }
        }
    }
}

pub fn freeness_certify(ctx: &Arc<SkewPair>, b: &RatFunc, max_length: usize) -> Result<FreenessCertificate> {
    freeness_certify_with(ctx, b, max_length, &Limits::default())
}

pub fn freeness_certify_with(ctx: &Arc<SkewPair>, b: &RatFunc, max_length: usize, limits: &Limits) -> Result<FreenessCertificate> {
    if b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if max_length < 1 {
        return Err(Error::InvalidArgument("word length bound must be at least 1".into()));
    }
    if max_length >= 20 || WordIndex::count(max_length) > limits.max_words {
        return Err(Error::ResourceBoundExceeded(format!("words up to length {max_length} exceed max_words {}", limits.max_words)));
    }
    let words = WordIndex::enumerate(max_length);
    let fracs: Vec<OreFraction> = words.par_iter().map(|w| build_word_w(ctx, w, b)).collect::<Result<_>>()?;
    let res = independence_check_with(&fracs, limits)?;
    let verdict = match &res.relation {
        None => CertificateVerdict::Independent,
        Some(lambda) => CertificateVerdict::Dependent(
            words.iter().cloned().zip(lambda.iter().cloned()).filter(|(_, c)| !c.is_zero()).collect(),
        ),
    };
    Ok(FreenessCertificate {
        witness: b.clone(),
        max_length,
        word_count: words.len(),
        rank: res.rank,
        digest: matrix_digest(&res.matrix),
        verdict,
    })
}
