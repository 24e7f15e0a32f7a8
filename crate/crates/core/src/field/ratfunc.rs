//! Rational functions `num / den` in `k(y_1, ..., y_n)`.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use super::gcd::poly_gcd;
use super::mpoly::{same_ring, MPoly, PolyRing};
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

static REDUCE_TERM_BOUND: AtomicUsize = AtomicUsize::new(20_000);

/// Above this many combined terms, gcd cancellation is skipped and the
/// fraction is stored unreduced. Equality stays exact either way.
pub fn set_reduce_term_bound(bound: usize) {
    REDUCE_TERM_BOUND.store(bound, Ordering::Relaxed);
}

pub fn reduce_term_bound() -> usize {
    REDUCE_TERM_BOUND.load(Ordering::Relaxed)
}

#[derive(Clone)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
    reduced: bool,
}

/// The arithmetic operations exposed through [`ratfunc_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic; rejects operands from different base fields.
pub fn ratfunc_arith(op: ArithOp, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::CharacteristicMismatch);
    }
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !same_ring(num.ring(), den.ring()) {
            return Err(Error::CharacteristicMismatch);
        }
        Ok(RatFunc::reduce_parts(num, den))
    }

    pub fn from_poly(p: MPoly) -> RatFunc {
        let den = MPoly::one(p.ring());
        RatFunc { num: p, den, reduced: true }
    }

    pub fn zero(ring: &Arc<PolyRing>) -> RatFunc {
        RatFunc::from_poly(MPoly::zero(ring))
    }

    pub fn one(ring: &Arc<PolyRing>) -> RatFunc {
        RatFunc::from_poly(MPoly::one(ring))
    }

    pub fn from_i64(ring: &Arc<PolyRing>, n: i64) -> RatFunc {
        RatFunc::from_poly(MPoly::from_i64(ring, n))
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Scalar) -> RatFunc {
        RatFunc::from_poly(MPoly::constant(ring, c))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> RatFunc {
        RatFunc::from_poly(MPoly::var(ring, i))
    }

    fn reduce_parts(num: MPoly, den: MPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero(num.ring());
        }
        if den.is_constant() {
            let c = den.leading_coeff().expect("nonzero").clone();
            let num = num.scale(&c.inv().expect("nonzero"));
            let den = MPoly::one(num.ring());
            return RatFunc { num, den, reduced: true };
        }
        if num.num_terms() + den.num_terms() > reduce_term_bound() {
            return RatFunc::normalize_den(num, den, false);
        }
        let g = poly_gcd(&num, &den);
        if g.is_one() {
            return RatFunc::normalize_den(num, den, true);
        }
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        RatFunc::normalize_den(num, den, true)
    }

    fn normalize_den(num: MPoly, den: MPoly, reduced: bool) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero(num.ring());
        }
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if lc.is_one() {
            return RatFunc { num, den, reduced };
        }
        let inv = lc.inv().expect("nonzero");
        RatFunc { num: num.scale(&inv), den: den.scale(&inv), reduced }
    }

    /// Idempotent normalization: cancels the gcd and makes the denominator monic.
    pub fn reduce(&self) -> RatFunc {
        if self.reduced {
            return self.clone();
        }
        let g = poly_gcd(&self.num, &self.den);
        let num = self.num.div_exact(&g).expect("gcd divides numerator");
        let den = self.den.div_exact(&g).expect("gcd divides denominator");
        RatFunc::normalize_den(num, den, true)
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.num.ring()
    }

    pub fn field(&self) -> Field {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_scalar().map(|c| c.is_one()).unwrap_or(false)
    }

    /// The value when this is an element of `k`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        let r = if self.reduced { self.clone() } else { self.reduce() };
        if !r.den.is_constant() {
            return None;
        }
        let n = r.num.as_constant()?;
        Some(n.mul(&r.den.leading_coeff().expect("nonzero").inv().expect("nonzero")))
    }

    pub fn is_constant(&self) -> bool {
        self.as_scalar().is_some()
    }

    /// Generator index when this equals a single variable.
    pub fn as_variable(&self) -> Option<usize> {
        if self.den.is_one() {
            self.num.as_variable()
        } else {
            None
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone(), reduced: self.reduced }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add_signed(other, true)
    }

    fn add_signed(&self, other: &RatFunc, negate: bool) -> RatFunc {
        let rhs_num = if negate { other.num.neg() } else { other.num.clone() };
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return RatFunc { num: rhs_num, den: other.den.clone(), reduced: other.reduced };
        }
        if self.den == other.den {
            let num = self.num.add(&rhs_num);
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::reduce_parts(num, self.den.clone());
        }
        if self.den.is_one() {
            let num = self.num.mul(&other.den).add(&rhs_num);
            return RatFunc::normalize_den(num, other.den.clone(), other.reduced);
        }
        if other.den.is_one() {
            let num = self.num.add(&rhs_num.mul(&self.den));
            return RatFunc::normalize_den(num, self.den.clone(), self.reduced);
        }
        // Henrici: only the shared part of the denominators can cancel
        let g = poly_gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&rhs_num.mul(&self.den));
            let den = self.den.mul(&other.den);
            let reduced = self.reduced && other.reduced;
            return RatFunc::normalize_den(num, den, reduced);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d2).add(&rhs_num.mul(&d1));
        let den = d1.mul(&other.den);
        if !(self.reduced && other.reduced) || num.is_zero() {
            return RatFunc::reduce_parts(num, den);
        }
        // reduced inputs: a common factor of num and den divides g
        let h = poly_gcd(&num, &g);
        if h.is_one() {
            return RatFunc::normalize_den(num, den, true);
        }
        let num = num.div_exact(&h).expect("gcd divides numerator");
        let den = den.div_exact(&h).expect("gcd divides denominator");
        RatFunc::normalize_den(num, den, true)
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.ring());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&other.num));
        }
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1).expect("divides") };
        let d2 = if g1.is_one() { other.den.clone() } else { other.den.div_exact(&g1).expect("divides") };
        let n2 = if g2.is_one() { other.num.clone() } else { other.num.div_exact(&g2).expect("divides") };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2).expect("divides") };
        let reduced = self.reduced && other.reduced;
        RatFunc::normalize_den(n1.mul(&n2), d1.mul(&d2), reduced)
    }

    pub fn scale(&self, c: &Scalar) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.ring());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone(), reduced: self.reduced }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::normalize_den(self.den.clone(), self.num.clone(), self.reduced))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = u32::try_from(e.unsigned_abs()).map_err(|_| Error::ResourceBoundExceeded("exponent too large".into()))?;
        Ok(RatFunc { num: base.num.pow(e), den: base.den.pow(e), reduced: base.reduced })
    }

    /// Exact equality, by structure when both sides are canonical and by
    /// cross-multiplication otherwise.
    pub fn equals(&self, other: &RatFunc) -> bool {
        if !same_ring(self.ring(), other.ring()) {
            return false;
        }
        if self.reduced && other.reduced {
            return self.num == other.num && self.den == other.den;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Substitutes `images[i]` for the `i`-th generator. Panics if the
    /// denominator maps to zero, which cannot happen for an automorphism.
    pub fn substitute(&self, images: &[RatFunc]) -> RatFunc {
        self.try_substitute(images).expect("substitution kills the denominator")
    }

    pub fn try_substitute(&self, images: &[RatFunc]) -> Result<RatFunc> {
        if self.num.is_constant() && self.den.is_constant() {
            return Ok(self.clone());
        }
        let (nn, nd) = substitute_poly(&self.num, images);
        let (dn, dd) = substitute_poly(&self.den, images);
        if dn.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // (nn / nd) / (dn / dd)
        Ok(RatFunc::reduce_parts(nn.mul(&dd), nd.mul(&dn)))
    }

    /// Formal partial derivative with respect to generator `var`.
    pub fn derivative(&self, var: usize) -> RatFunc {
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        if num.is_zero() {
            return RatFunc::zero(self.ring());
        }
        RatFunc::reduce_parts(num, self.den.mul(&self.den))
    }

    /// Re-expresses the function over a ring containing all its variables.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<RatFunc> {
        Ok(RatFunc { num: self.num.embed(target)?, den: self.den.embed(target)?, reduced: self.reduced })
    }

    pub fn max_terms(&self) -> usize {
        self.num.num_terms().max(self.den.num_terms())
    }

    pub fn max_bit_size(&self) -> u64 {
        self.num.max_bit_size().max(self.den.max_bit_size())
    }
}

/// Evaluates `p` at rational images with one shared denominator per
/// generator: returns `(numerator, denominator)`.
fn substitute_poly(p: &MPoly, images: &[RatFunc]) -> (MPoly, MPoly) {
    let ring = p.ring();
    let n = ring.nvars();
    let degs: Vec<u32> = (0..n).map(|i| p.degree_in(i).unwrap_or(0)).collect();
    let mut num_pows: Vec<Vec<MPoly>> = Vec::with_capacity(n);
    let mut den_pows: Vec<Vec<MPoly>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut np = vec![MPoly::one(ring)];
        let mut dp = vec![MPoly::one(ring)];
        for e in 1..=degs[i] as usize {
            np.push(np[e - 1].mul(images[i].num()));
            dp.push(dp[e - 1].mul(images[i].den()));
        }
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut acc = MPoly::zero(ring);
    for (m, c) in p.terms() {
        let mut t = MPoly::constant(ring, c.clone());
        for i in 0..n {
            let e = m[i] as usize;
            if e > 0 {
                t = t.mul(&num_pows[i][e]);
            }
            let rest = degs[i] as usize - e;
            if rest > 0 && !images[i].den().is_one() {
                t = t.mul(&den_pows[i][rest]);
            }
        }
        acc = acc.add(&t);
    }
    let mut den = MPoly::one(ring);
    for i in 0..n {
        if degs[i] > 0 && !images[i].den().is_one() {
            den = den.mul(&den_pows[i][degs[i] as usize]);
        }
    }
    (acc, den)
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let simple_den = self.den.num_terms() == 1
            && self.den.leading_coeff().map(|c| c.is_one()).unwrap_or(false)
            && self.den.leading_mono().map(|m| m.iter().filter(|&&e| e > 0).count() == 1).unwrap_or(false);
        if simple_den {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl std::ops::Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::add(self, rhs)
    }
}

impl std::ops::Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::sub(self, rhs)
    }
}

impl std::ops::Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::mul(self, rhs)
    }
}

impl std::ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::neg(self)
    }
}
