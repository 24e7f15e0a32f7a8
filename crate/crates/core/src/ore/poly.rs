use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{RatFunc, Scalar};
use crate::skew::SkewPair;

/// `sum a_i x^i` in `K[x; sigma, delta]` with coefficients on the left.
#[derive(Clone)]
pub struct OrePoly {
    coeffs: Vec<RatFunc>,
    ctx: Arc<SkewPair>,
}

pub(crate) fn same_ctx(a: &Arc<SkewPair>, b: &Arc<SkewPair>) -> bool {
    Arc::ptr_eq(a, b) || a.same_as(b)
}

impl OrePoly {
    /// Drops trailing zero coefficients.
    pub fn new(ctx: &Arc<SkewPair>, mut coeffs: Vec<RatFunc>) -> OrePoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OrePoly { coeffs, ctx: ctx.clone() }
    }

    pub fn zero(ctx: &Arc<SkewPair>) -> OrePoly {
        OrePoly { coeffs: Vec::new(), ctx: ctx.clone() }
    }

    pub fn one(ctx: &Arc<SkewPair>) -> OrePoly {
        OrePoly::constant(ctx, RatFunc::one(ctx.ring()))
    }

    pub fn constant(ctx: &Arc<SkewPair>, a: RatFunc) -> OrePoly {
        OrePoly::new(ctx, vec![a])
    }

    /// `a x^n`.
    pub fn monomial(ctx: &Arc<SkewPair>, a: RatFunc, n: usize) -> OrePoly {
        let mut coeffs = vec![RatFunc::zero(ctx.ring()); n];
        coeffs.push(a);
        OrePoly::new(ctx, coeffs)
    }

    pub fn x(ctx: &Arc<SkewPair>) -> OrePoly {
        OrePoly::monomial(ctx, RatFunc::one(ctx.ring()), 1)
    }

    pub fn ctx(&self) -> &Arc<SkewPair> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFunc {
        self.coeffs.get(i).cloned().unwrap_or_else(|| RatFunc::zero(self.ctx.ring()))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn leading_coeff(&self) -> Option<&RatFunc> {
        self.coeffs.last()
    }

    /// The coefficient when the degree is 0.
    pub fn as_constant(&self) -> Option<RatFunc> {
        match self.coeffs.len() {
            0 => Some(RatFunc::zero(self.ctx.ring())),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn check(&self, other: &OrePoly) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &OrePoly) -> Result<OrePoly> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &OrePoly) -> Result<OrePoly> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub(crate) fn add_unchecked(&self, other: &OrePoly) -> OrePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = RatFunc::zero(self.ctx.ring());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a.add(b)
            })
            .collect();
        OrePoly::new(&self.ctx, coeffs)
    }

    pub(crate) fn sub_unchecked(&self, other: &OrePoly) -> OrePoly {
        self.add_unchecked(&other.neg())
    }

    pub fn neg(&self) -> OrePoly {
        OrePoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), ctx: self.ctx.clone() }
    }

    /// `a * self`.
    pub fn scale_left(&self, a: &RatFunc) -> OrePoly {
        if a.is_one() {
            return self.clone();
        }
        OrePoly::new(&self.ctx, self.coeffs.iter().map(|c| a.mul(c)).collect())
    }

    pub fn scale_scalar(&self, c: &Scalar) -> OrePoly {
        OrePoly::new(&self.ctx, self.coeffs.iter().map(|f| f.scale(c)).collect())
    }

    /// `self * x^k`.
    pub fn shift(&self, k: usize) -> OrePoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![RatFunc::zero(self.ctx.ring()); k];
        coeffs.extend(self.coeffs.iter().cloned());
        OrePoly { coeffs, ctx: self.ctx.clone() }
    }

    /// `x * self`, from `x a = sigma(a) x + delta(a)`.
    pub fn x_times(&self) -> OrePoly {
        if self.is_zero() {
            return self.clone();
        }
        let ctx = &self.ctx;
        let mut out = vec![RatFunc::zero(ctx.ring()); self.coeffs.len() + 1];
        for (k, h) in self.coeffs.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            out[k + 1] = out[k + 1].add(&ctx.apply_sigma(h, 1));
            if !ctx.is_pure_automorphism() {
                out[k] = out[k].add(&ctx.apply_delta(h));
            }
        }
        OrePoly::new(ctx, out)
    }

    /// `[g, x g, x^2 g, ..., x^n g]`.
    fn x_powers_times(g: &OrePoly, n: usize) -> Vec<OrePoly> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(g.clone());
        for i in 0..n {
            let next = out[i].x_times();
            out.push(next);
        }
        out
    }

    pub fn mul(&self, other: &OrePoly) -> Result<OrePoly> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &OrePoly) -> OrePoly {
        if self.is_zero() || other.is_zero() {
            return OrePoly::zero(&self.ctx);
        }
        if self.ctx.is_pure_automorphism() {
            return self.mul_pure_automorphism(other);
        }
        let powers = OrePoly::x_powers_times(other, self.coeffs.len() - 1);
        let mut acc = OrePoly::zero(&self.ctx);
        for (a, p) in self.coeffs.iter().zip(&powers) {
            if !a.is_zero() {
                acc = acc.add_unchecked(&p.scale_left(a));
            }
        }
        acc
    }

    /// `sum_i sum_j a_i sigma^i(b_j) x^(i+j)`.
    fn mul_pure_automorphism(&self, other: &OrePoly) -> OrePoly {
        let ring = self.ctx.ring();
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![RatFunc::zero(ring); n];
        let mut twisted: Vec<RatFunc> = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|b| self.ctx.apply_sigma(b, 1)).collect();
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        OrePoly::new(&self.ctx, out)
    }

    pub fn pow(&self, n: u32) -> OrePoly {
        let mut acc = OrePoly::one(&self.ctx);
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// `lc^-1 * self`.
    pub fn monic(&self) -> OrePoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale_left(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// `self * c` with leading coefficient one, `c` a nonzero constant.
    pub fn right_monic(&self) -> OrePoly {
        let (m, lc) = match (self.degree(), self.leading_coeff()) {
            (Some(m), Some(lc)) if !lc.is_one() => (m, lc),
            _ => return self.clone(),
        };
        // lc(self * c) = lc * sigma^m(c)
        let c = self.ctx.apply_sigma(&lc.inv().expect("nonzero leading coefficient"), -(m as i64));
        let out = self.mul_unchecked(&OrePoly::constant(&self.ctx, c));
        debug_assert!(out.is_monic());
        out
    }

    /// `(q, r)` with `self = q*g + r` and `deg r < deg g`.
    pub fn right_divide(&self, g: &OrePoly) -> Result<(OrePoly, OrePoly)> {
        self.check(g)?;
        let m = g.degree().ok_or(Error::DivisionByZeroPoly)?;
        let ctx = &self.ctx;
        let mut r = self.clone();
        let n = match r.degree() {
            Some(n) if n >= m => n,
            _ => return Ok((OrePoly::zero(ctx), r)),
        };
        let powers = OrePoly::x_powers_times(g, n - m);
        let mut q = vec![RatFunc::zero(ctx.ring()); n - m + 1];
        while let Some(d) = r.degree() {
            if d < m {
                break;
            }
            let k = d - m;
            let lead = powers[k].leading_coeff().expect("nonzero");
            let c = r.coeffs[d].div(lead)?;
            r = r.sub_unchecked(&powers[k].scale_left(&c));
            debug_assert!(r.degree().is_none_or(|e| e < d));
            q[k] = c;
        }
        Ok((OrePoly::new(ctx, q), r))
    }

    /// `(q, r)` with `self = g*q + r` and `deg r < deg g`.
    pub fn left_divide(&self, g: &OrePoly) -> Result<(OrePoly, OrePoly)> {
        self.check(g)?;
        let m = g.degree().ok_or(Error::DivisionByZeroPoly)?;
        let ctx = &self.ctx;
        let gm = g.leading_coeff().expect("nonzero").clone();
        let mut r = self.clone();
        let mut q = OrePoly::zero(ctx);
        while let Some(d) = r.degree() {
            if d < m {
                break;
            }
            let k = d - m;
            // g * c x^k has leading coefficient g_m sigma^m(c)
            let c = ctx.apply_sigma(&r.coeffs[d].div(&gm)?, -(m as i64));
            let term = OrePoly::monomial(ctx, c, k);
            r = r.sub_unchecked(&g.mul_unchecked(&term));
            debug_assert!(r.degree().is_none_or(|e| e < d));
            q = q.add_unchecked(&term);
        }
        Ok((q, r))
    }

    /// Monic greatest common right divisor.
    pub fn gcrd(&self, g: &OrePoly) -> Result<OrePoly> {
        self.check(g)?;
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            let (_, r) = a.right_divide(&b)?;
            a = b;
            // left unit factors do not change the left ideal; keeps sizes down
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Monic greatest common left divisor, up to a right unit factor.
    pub fn gcld(&self, g: &OrePoly) -> Result<OrePoly> {
        self.check(g)?;
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            let (_, r) = a.left_divide(&b)?;
            a = b;
            b = r.right_monic();
        }
        Ok(a.right_monic())
    }

    /// `(m, u, v)` with `m = u*self = v*g` monic of minimal degree.
    pub fn lclm(&self, g: &OrePoly) -> Result<(OrePoly, OrePoly, OrePoly)> {
        self.check(g)?;
        if self.is_zero() || g.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let ctx = &self.ctx;
        // invariant: r_i = s_i*self + t_i*g
        let (mut r0, mut r1) = (self.clone(), g.clone());
        let (mut s0, mut s1) = (OrePoly::one(ctx), OrePoly::zero(ctx));
        let (mut t0, mut t1) = (OrePoly::zero(ctx), OrePoly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.right_divide(&r1)?;
            let s = s0.sub_unchecked(&q.mul_unchecked(&s1));
            let t = t0.sub_unchecked(&q.mul_unchecked(&t1));
            // scaling the row on the left preserves the invariant
            let (r, s, t) = match r.leading_coeff() {
                Some(lc) if !lc.is_one() => {
                    let c = lc.inv()?;
                    (r.scale_left(&c), s.scale_left(&c), t.scale_left(&c))
                }
                _ => (r, s, t),
            };
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        // s1*self + t1*g = 0 with s1 != 0
        let m = s1.mul_unchecked(self);
        let lc_inv = m.leading_coeff().expect("nonzero").inv()?;
        Ok((m.scale_left(&lc_inv), s1.scale_left(&lc_inv), t1.neg().scale_left(&lc_inv)))
    }

    pub fn max_terms(&self) -> usize {
        self.coeffs.iter().map(|c| c.max_terms()).max().unwrap_or(0)
    }

    pub fn max_bit_size(&self) -> u64 {
        self.coeffs.iter().map(|c| c.max_bit_size()).max().unwrap_or(0)
    }
}

impl PartialEq for OrePoly {
    fn eq(&self, other: &OrePoly) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrePoly({self})")
    }
}

/// Highest power first, e.g. `t*X^2 + (t + 1)*X - 3`.
impl fmt::Display for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, c) = match c.num().leading_coeff() {
                Some(s) if s.is_negative() => (true, c.neg()),
                _ => (false, c.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let power = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            if power.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{power}")?;
            } else if c.is_constant() || c.as_variable().is_some() {
                write!(f, "{c}*{power}")?;
            } else {
                write!(f, "({c})*{power}")?;
            }
        }
        Ok(())
    }
}
