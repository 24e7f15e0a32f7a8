use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{RatFunc, Scalar};

use super::presentation::SkewEndo;

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitReport {
    /// Minimal `p >= 1` with `sigma^p(a) = a`.
    Finite { period: u64 },
    /// Certified by a closed form for an affine map.
    Infinite { reason: String },
    /// The distinct iterates `a, sigma(a), ...` seen before the bound ran out.
    Unknown { iterates: Vec<RatFunc> },
}

impl OrbitReport {
    pub fn to_json(&self) -> Value {
        match self {
            OrbitReport::Finite { period } => json!({ "kind": "Finite", "period": period }),
            OrbitReport::Infinite { reason } => json!({ "kind": "Infinite", "reason": reason }),
            OrbitReport::Unknown { iterates } => json!({
                "kind": "Unknown",
                "iterates": iterates.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            }),
        }
    }
}

/// `(alpha, beta)` when `sigma(y_i) = alpha*y_i + beta` with scalar `alpha != 0`, `beta`.
pub fn affine_form(s: &SkewEndo, i: usize) -> Option<(Scalar, Scalar)> {
    affine_coefficients(&s.images()[i], i)
}

/// `(alpha, beta)` when `img = alpha*y_i + beta`, `alpha != 0`.
pub fn affine_coefficients(img: &RatFunc, i: usize) -> Option<(Scalar, Scalar)> {
    let den = img.den().as_constant()?;
    let num = img.num();
    if num.total_degree()? > 1 {
        return None;
    }
    let field = num.field();
    let (mut alpha, mut beta) = (field.zero(), field.zero());
    for (m, c) in num.terms() {
        match m.iter().position(|&e| e > 0) {
            None => beta = c.clone(),
            Some(j) if j == i => alpha = c.clone(),
            Some(_) => return None,
        }
    }
    if alpha.is_zero() {
        return None;
    }
    let dinv = den.inv().ok()?;
    Some((alpha.mul(&dinv), beta.mul(&dinv)))
}

/// Closed-form order of `t -> alpha*t + beta`; `None` means infinite order.
fn affine_order(alpha: &Scalar, beta: &Scalar) -> Option<u64> {
    let d = alpha.multiplicative_order()?;
    // sigma^d(t) = t + beta*(1 + alpha + ... + alpha^(d-1))
    let mut shift = alpha.field().zero();
    let mut pw = alpha.field().one();
    for _ in 0..d {
        shift = shift.add(&pw);
        pw = pw.mul(alpha);
    }
    let shift = shift.mul(beta);
    if shift.is_zero() {
        return Some(d);
    }
    match alpha.field().characteristic() {
        0 => None,
        p => Some(d * p),
    }
}

fn infinite_reason(alpha: &Scalar, beta: &Scalar) -> String {
    if alpha.is_one() {
        format!("affine: alpha=1, beta={beta} != 0, char 0")
    } else {
        format!("affine: alpha={alpha} not a root of unity")
    }
}

/// Finite iff the orbit closes within `bound` steps; Infinite only when `a`
/// lives in a subfield `k(y_i)` on which `sigma` acts by an affine map of
/// infinite order.
pub fn orbit_analyze(s: &SkewEndo, a: &RatFunc, bound: u64) -> Result<OrbitReport> {
    if bound < 1 {
        return Err(Error::InvalidArgument("orbit bound must be at least 1".into()));
    }
    if a.is_constant() {
        return Ok(OrbitReport::Finite { period: 1 });
    }
    let n = s.presentation().nvars();
    let vars: Vec<usize> = (0..n).filter(|&i| a.num().involves(i) || a.den().involves(i)).collect();
    if let [i] = vars[..] {
        if let Some((alpha, beta)) = affine_form(s, i) {
            // a nonconstant element of k(y_i) fixed by sigma^m makes k(y_i)
            // finite over the fixed field, which forces sigma^m to have finite order
            if affine_order(&alpha, &beta).is_none() {
                return Ok(OrbitReport::Infinite { reason: infinite_reason(&alpha, &beta) });
            }
        }
    }
    let mut iterates = vec![a.clone()];
    let mut cur = a.clone();
    for p in 1..=bound {
        cur = s.apply_once(&cur);
        if cur == *a {
            return Ok(OrbitReport::Finite { period: p });
        }
        if p < bound {
            iterates.push(cur.clone());
        }
    }
    Ok(OrbitReport::Unknown { iterates })
}

/// Whether `sigma^n` fixes every generator.
pub fn fixed_power_check(s: &SkewEndo, n: u64) -> Result<bool> {
    if n < 1 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    if s.is_identity() {
        return Ok(true);
    }
    let gens = s.presentation().generators();
    let mut cur: Vec<RatFunc> = s.images().to_vec();
    for _ in 1..n {
        cur = cur.iter().map(|f| f.substitute(s.images())).collect();
    }
    Ok(cur == gens)
}
