use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{RatFunc, Scalar};
use crate::skew::SkewPair;

use super::poly::{same_ctx, OrePoly};

/// Combined degree of a fraction above which a common left factor of
/// numerator and denominator is cancelled after arithmetic.
pub const CANCEL_DEGREE: usize = 8;

/// `den^-1 * num` in `K(x; sigma, delta)` with `den` monic.
#[derive(Clone)]
pub struct OreFraction {
    den: OrePoly,
    num: OrePoly,
}

/// Which orientation of the Weyl relation holds, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum WeylOrientation {
    /// `z*y - y*z = 1`
    ZyMinusYz,
    /// `y*z - z*y = 1`
    YzMinusZy,
}

impl OreFraction {
    /// `den^-1 * num`, renormalized so the denominator is monic.
    pub fn new(den: OrePoly, num: OrePoly) -> Result<OreFraction> {
        if !same_ctx(den.ctx(), num.ctx()) {
            return Err(Error::ContextMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(OreFraction::normalized(den, num))
    }

    fn normalized(den: OrePoly, num: OrePoly) -> OreFraction {
        if num.is_zero() {
            return OreFraction::zero(den.ctx());
        }
        let lc = den.leading_coeff().expect("nonzero denominator");
        if lc.is_one() {
            return OreFraction { den, num };
        }
        let a = lc.inv().expect("nonzero");
        OreFraction { den: den.scale_left(&a), num: num.scale_left(&a) }
    }

    pub fn from_poly(p: OrePoly) -> OreFraction {
        let ctx = p.ctx().clone();
        if p.is_zero() {
            return OreFraction::zero(&ctx);
        }
        OreFraction { den: OrePoly::one(&ctx), num: p }
    }

    pub fn from_ratfunc(ctx: &Arc<SkewPair>, a: RatFunc) -> OreFraction {
        OreFraction::from_poly(OrePoly::constant(ctx, a))
    }

    pub fn zero(ctx: &Arc<SkewPair>) -> OreFraction {
        OreFraction { den: OrePoly::one(ctx), num: OrePoly::zero(ctx) }
    }

    pub fn one(ctx: &Arc<SkewPair>) -> OreFraction {
        OreFraction { den: OrePoly::one(ctx), num: OrePoly::one(ctx) }
    }

    pub fn x(ctx: &Arc<SkewPair>) -> OreFraction {
        OreFraction::from_poly(OrePoly::x(ctx))
    }

    pub fn den(&self) -> &OrePoly {
        &self.den
    }

    pub fn num(&self) -> &OrePoly {
        &self.num
    }

    pub fn ctx(&self) -> &Arc<SkewPair> {
        self.den.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn check(&self, other: &OreFraction) -> Result<()> {
        if same_ctx(self.ctx(), other.ctx()) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn degree_sum(&self) -> usize {
        self.den.degree().unwrap_or(0) + self.num.degree().unwrap_or(0)
    }

    fn maybe_cancel(self) -> OreFraction {
        if self.degree_sum() > CANCEL_DEGREE {
            self.reduce()
        } else {
            self
        }
    }

    /// Cancels the greatest common left divisor of numerator and denominator.
    pub fn reduce(&self) -> OreFraction {
        if self.num.is_zero() {
            return OreFraction::zero(self.ctx());
        }
        if self.den.degree() == Some(0) {
            return self.clone();
        }
        if self.num.degree() == Some(0) {
            // a constant numerator leaves no left factor to cancel
            return self.clone();
        }
        let w = self.den.gcld(&self.num).expect("same context");
        if w.degree() == Some(0) {
            return self.clone();
        }
        let (den, r1) = self.den.left_divide(&w).expect("same context");
        let (num, r2) = self.num.left_divide(&w).expect("same context");
        debug_assert!(r1.is_zero() && r2.is_zero());
        OreFraction::normalized(den, num)
    }

    pub fn neg(&self) -> OreFraction {
        OreFraction { den: self.den.clone(), num: self.num.neg() }
    }

    pub fn add(&self, other: &OreFraction) -> Result<OreFraction> {
        Ok(self.add_uncancelled(other)?.maybe_cancel())
    }

    /// Sum without the cancellation pass; the denominator may keep a left
    /// factor in common with the numerator.
    pub fn add_uncancelled(&self, other: &OreFraction) -> Result<OreFraction> {
        self.check(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            let num = self.num.add_unchecked(&other.num);
            return Ok(OreFraction::normalized(self.den.clone(), num));
        }
        let (m, u1, u2) = self.den.lclm(&other.den)?;
        let num = u1.mul_unchecked(&self.num).add_unchecked(&u2.mul_unchecked(&other.num));
        Ok(OreFraction::normalized(m, num))
    }

    pub fn sub(&self, other: &OreFraction) -> Result<OreFraction> {
        self.add(&other.neg())
    }

    /// `s1^-1 r1 * s2^-1 r2 = (s' s1)^-1 (r' r2)` where `s' r1 = r' s2`.
    pub fn mul(&self, other: &OreFraction) -> Result<OreFraction> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(OreFraction::zero(self.ctx()));
        }
        let (s_prime, r_prime) = if other.den.is_one() {
            (OrePoly::one(self.ctx()), self.num.clone())
        } else if let Some(a) = self.num.as_constant() {
            // a * s2^-1 = (s2 * a^-1)^-1
            let ainv = OrePoly::constant(self.ctx(), a.inv()?);
            (other.den.mul_unchecked(&ainv), OrePoly::one(self.ctx()))
        } else {
            let (_, s_prime, r_prime) = self.num.lclm(&other.den)?;
            (s_prime, r_prime)
        };
        let den = s_prime.mul_unchecked(&self.den);
        let num = r_prime.mul_unchecked(&other.num);
        Ok(OreFraction::normalized(den, num).maybe_cancel())
    }

    pub fn inv(&self) -> Result<OreFraction> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(OreFraction::normalized(self.num.clone(), self.den.clone()))
    }

    pub fn div(&self, other: &OreFraction) -> Result<OreFraction> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<OreFraction> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = OreFraction::one(self.ctx());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// `a * self` for `a` in `K`.
    pub fn scale_left(&self, a: &RatFunc) -> Result<OreFraction> {
        OreFraction::from_ratfunc(self.ctx(), a.clone()).mul(self)
    }

    pub fn scale_scalar(&self, c: &Scalar) -> OreFraction {
        if c.is_zero() {
            return OreFraction::zero(self.ctx());
        }
        OreFraction { den: self.den.clone(), num: self.num.scale_scalar(c) }
    }

    /// Equality via `u1 r1 = u2 r2` where `u1 s1 = u2 s2 = lclm(s1, s2)`.
    pub fn frac_eq(&self, other: &OreFraction) -> Result<bool> {
        self.check(other)?;
        if self.den == other.den {
            return Ok(self.num == other.num);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(self.is_zero() && other.is_zero());
        }
        let (_, u1, u2) = self.den.lclm(&other.den)?;
        Ok(u1.mul_unchecked(&self.num) == u2.mul_unchecked(&other.num))
    }

    /// The polynomial when the denominator is 1 after cancellation.
    pub fn as_poly(&self) -> Option<OrePoly> {
        if self.den.is_one() {
            return Some(self.num.clone());
        }
        let (q, r) = self.num.left_divide(&self.den).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn max_bit_size(&self) -> u64 {
        self.den.max_bit_size().max(self.num.max_bit_size())
    }

    pub fn max_terms(&self) -> usize {
        self.den.max_terms().max(self.num.max_terms())
    }
}

impl PartialEq for OreFraction {
    fn eq(&self, other: &OreFraction) -> bool {
        self.frac_eq(other).unwrap_or(false)
    }
}

impl fmt::Debug for OreFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OreFraction({self})")
    }
}

/// `inv(den)*(num)`, or just the numerator when the denominator is 1.
impl fmt::Display for OreFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.is_one() {
            write!(f, "inv({})", self.den)
        } else {
            write!(f, "inv({})*({})", self.den, self.num)
        }
    }
}

/// Tests `z*y - y*z = 1` and `y*z - z*y = 1`.
pub fn weyl_check(y: &OreFraction, z: &OreFraction) -> Result<Option<WeylOrientation>> {
    let zy = z.mul(y)?;
    let yz = y.mul(z)?;
    let one = OreFraction::one(y.ctx());
    if zy.sub(&yz)?.frac_eq(&one)? {
        Ok(Some(WeylOrientation::ZyMinusYz))
    } else if yz.sub(&zy)?.frac_eq(&one)? {
        Ok(Some(WeylOrientation::YzMinusZy))
    } else {
        Ok(None)
    }
}

/// Whether `x^n` commutes with every generator of `K`.
pub fn central_power_check(ctx: &Arc<SkewPair>, n: u32) -> Result<bool> {
    if !ctx.is_pure_automorphism() {
        return Err(Error::RequiresPureAutomorphism);
    }
    if n < 1 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let xn = OrePoly::x(ctx).pow(n);
    for y in ctx.presentation().generators() {
        let yp = OrePoly::constant(ctx, y);
        if xn.mul_unchecked(&yp) != yp.mul_unchecked(&xn) {
            return Ok(false);
        }
    }
    Ok(true)
}
