use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{is_prime, Field, MPoly, RatFunc, Scalar};

use super::presentation::SkewEndo;

/// Largest degree for which a finite place over `Q` is accepted.
pub const DEFAULT_PLACE_DEGREE_BOUND: u32 = 24;

/// A place of `k(t)`: a monic irreducible `p(t)` or the place at infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum Place {
    Finite(MPoly),
    Infinity,
}

impl Place {
    /// Normalizes `p` to be monic and checks irreducibility over `k`.
    pub fn finite(p: &MPoly) -> Result<Place> {
        Place::finite_with_bound(p, DEFAULT_PLACE_DEGREE_BOUND)
    }

    pub fn finite_with_bound(p: &MPoly, degree_bound: u32) -> Result<Place> {
        if p.ring().nvars() != 1 {
            return Err(Error::NotUnivariate);
        }
        let d = match p.total_degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::BadPlace(format!("{p} is constant"))),
        };
        if d > degree_bound {
            return Err(Error::BadPlace(format!("degree {d} exceeds the bound {degree_bound}")));
        }
        let p = p.monic();
        let coeffs = dense(&p);
        let irreducible = match p.field() {
            Field::Prime(q) => irreducible_mod_p(&coeffs, q),
            Field::Rational => irreducible_over_q(&coeffs)?,
        };
        if !irreducible {
            return Err(Error::BadPlace(format!("{p} is reducible")));
        }
        Ok(Place::Finite(p))
    }

    /// The place `t - c`.
    pub fn at(ring: &std::sync::Arc<crate::field::PolyRing>, c: Scalar) -> Result<Place> {
        let t = MPoly::var(ring, 0);
        Place::finite(&t.sub(&MPoly::constant(ring, c)))
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

fn dense(p: &MPoly) -> Vec<Scalar> {
    let d = p.total_degree().unwrap_or(0) as usize;
    let mut out = vec![p.field().zero(); d + 1];
    for (m, c) in p.terms() {
        out[m[0] as usize] = c.clone();
    }
    out
}

fn multiplicity(f: &MPoly, p: &MPoly) -> i64 {
    let mut k = 0;
    let mut cur = f.clone();
    while let Some(q) = cur.div_exact(p) {
        cur = q;
        k += 1;
    }
    k
}

/// `nu(f)` at the place.
pub fn valuation(pl: &Place, f: &RatFunc) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if f.ring().nvars() != 1 {
        return Err(Error::NotUnivariate);
    }
    Ok(match pl {
        Place::Finite(p) => {
            let p = p.embed(f.ring())?;
            multiplicity(f.num(), &p) - multiplicity(f.den(), &p)
        }
        Place::Infinity => {
            f.den().total_degree().unwrap_or(0) as i64 - f.num().total_degree().unwrap_or(0) as i64
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthProfile {
    /// `{n in [-window, window] : nu(sigma^n(u)) < 0}`.
    pub support: BTreeSet<i64>,
    /// `max - min` of the support when it avoids both window edges.
    pub length: Option<i64>,
}

pub fn length_profile(s: &SkewEndo, pl: &Place, u: &RatFunc, window: i64) -> Result<LengthProfile> {
    if u.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if window < 0 {
        return Err(Error::InvalidArgument("window must be nonnegative".into()));
    }
    let mut support = BTreeSet::new();
    for dir in [1i64, -1] {
        let mut cur = u.clone();
        let start = if dir == 1 { 0 } else { 1 };
        if dir == -1 {
            cur = s.apply(&cur, -1);
        }
        for k in start..=window {
            if valuation(pl, &cur)? < 0 {
                support.insert(dir * k);
            }
            if k < window {
                cur = s.apply(&cur, dir);
            }
        }
    }
    let length = match (support.first(), support.last()) {
        (Some(&lo), Some(&hi)) if lo > -window && hi < window => Some(hi - lo),
        _ => None,
    };
    Ok(LengthProfile { support, length })
}

// Dense univariate arithmetic over F_p, lowest degree first.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let mut b = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    r as u64
}

fn rem_mod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let li = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u128 * li as u128 % p as u128) as u64;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u128 * mi as u128 % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    rem_mod(&out.into_iter().map(|v| v as u64).collect::<Vec<_>>(), m, p)
}

fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or: `f` of degree `d` is irreducible iff `gcd(t^(p^i) - t, f) = 1` for `i <= d/2`.
fn irreducible_mod_p_u64(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d <= 1 {
        return d == 1;
    }
    let t = vec![0, 1];
    let mut h = rem_mod(&t, f, p);
    for _ in 0..d / 2 {
        // h <- h^p mod f
        let mut base = h.clone();
        let mut acc = vec![1u64];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, f, p);
            }
            base = mul_mod(&base, &base, f, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if gcd_mod(f, &diff, p).len() != 1 {
            return false;
        }
    }
    true
}

fn irreducible_mod_p(f: &[Scalar], p: u64) -> bool {
    let v: Vec<u64> = f
        .iter()
        .map(|c| match c {
            Scalar::Fp(v, _) => *v,
            Scalar::Q(_) => unreachable!("prime-field polynomial"),
        })
        .collect();
    irreducible_mod_p_u64(&v, p)
}

fn integer_coeffs(f: &[Scalar]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in f {
        l = l.lcm(c.as_rational().expect("rational coefficient").denom());
    }
    f.iter()
        .map(|c| {
            let q = c.as_rational().unwrap();
            q.numer() * (&l / q.denom())
        })
        .collect()
}

fn divisors(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i != n / i {
                out.push(BigInt::from(n / i));
            }
            if out.len() > cap {
                return None;
            }
        }
        i += 1;
        if i > 1 << 22 {
            return None;
        }
    }
    Some(out)
}

/// Rational roots of an integer polynomial; `None` when the end
/// coefficients are too large to enumerate divisors.
fn rational_roots_z(z: &[BigInt]) -> Option<Vec<BigRational>> {
    let mut z = z.to_vec();
    let mut out = Vec::new();
    if z.len() > 1 && z[0].is_zero() {
        out.push(BigRational::zero());
        while z.len() > 1 && z[0].is_zero() {
            z.remove(0);
        }
    }
    if z.len() <= 1 {
        return Some(out);
    }
    let ps = divisors(&z[0], 4096)?;
    let qs = divisors(z.last().unwrap(), 4096)?;
    let d = z.len() - 1;
    for num in &ps {
        for den in &qs {
            if !num.gcd(den).is_one() {
                continue;
            }
            for a in [num.clone(), -num] {
                // sum z_i a^i den^(d-i)
                let mut acc = BigInt::zero();
                for (i, zi) in z.iter().enumerate() {
                    acc += zi * a.pow(i as u32) * den.pow((d - i) as u32);
                }
                if acc.is_zero() {
                    out.push(BigRational::new(a, den.clone()));
                }
            }
        }
    }
    Some(out)
}

/// Irreducible modulo a prime not dividing the leading coefficient implies
/// irreducible over `Q`. Degrees 2 and 3 also fall back to the root test.
fn irreducible_over_q(f: &[Scalar]) -> Result<bool> {
    let d = f.len() - 1;
    if d == 1 {
        return Ok(true);
    }
    let z = integer_coeffs(f);
    if d <= 3 {
        if let Some(roots) = rational_roots_z(&z) {
            return Ok(roots.is_empty());
        }
    }
    let mut tried = 0;
    let mut q = 2u64;
    while tried < 64 {
        if is_prime(q) {
            let pq = BigInt::from(q);
            if !(z.last().unwrap() % &pq).is_zero() {
                tried += 1;
                let v: Vec<u64> = z.iter().map(|c| c.mod_floor(&pq).to_u64().unwrap()).collect();
                if irreducible_mod_p_u64(&v, q) {
                    return Ok(true);
                }
            }
        }
        q += 1;
    }
    if d <= 3 {
        return Err(Error::BadPlace("coefficients too large for the rational root search".into()));
    }
    Err(Error::BadPlace(format!("irreducibility of a degree-{d} polynomial over Q not established")))
}

/// Linear places dividing `f`, plus the remaining cofactor when it is
/// certified irreducible. Seeds witness searches.
pub fn simple_places(f: &MPoly) -> Vec<Place> {
    if f.ring().nvars() != 1 || f.is_constant() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut rest = f.monic();
    let field = f.field();
    let ring = f.ring().clone();
    let t = MPoly::var(&ring, 0);
    let candidates: Vec<Scalar> = match field {
        Field::Prime(p) => (0..p.min(4096)).map(|c| field.from_i64(c as i64)).collect(),
        Field::Rational => rational_roots_z(&integer_coeffs(&dense(&rest))).unwrap_or_default().into_iter().map(Scalar::Q).collect(),
    };
    for c in candidates {
        let lin = t.sub(&MPoly::constant(&ring, c));
        if rest.div_exact(&lin).is_some() {
            while let Some(q) = rest.div_exact(&lin) {
                rest = q;
            }
            out.push(Place::Finite(lin));
        }
    }
    if !rest.is_constant() {
        // a cofactor that is not certified irreducible is skipped
        if let Ok(pl) = Place::finite(&rest) {
            out.push(pl);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::presentation::FieldPresentation;

    fn ctx() -> (FieldPresentation, RatFunc) {
        let pres = FieldPresentation::new(Field::Rational, vec!["t".into()]).unwrap();
        let t = pres.generator(0);
        (pres, t)
    }

    fn shift(pres: &FieldPresentation) -> SkewEndo {
        let t = pres.generator(0);
        let one = RatFunc::one(pres.ring());
        SkewEndo::new(pres, vec![t.add(&one)], vec![t.sub(&one)]).unwrap()
    }

    #[test]
    fn spec_valuations() {
        let (pres, t) = ctx();
        let one = RatFunc::one(pres.ring());
        let c = |n| RatFunc::from_i64(pres.ring(), n);
        let at0 = Place::at(pres.ring(), Field::Rational.zero()).unwrap();
        let f = t.mul(&t).div(&t.sub(&one)).unwrap();
        assert_eq!(valuation(&at0, &f).unwrap(), 2);
        let g = t.mul(&t).add(&one).div(&t).unwrap();
        assert_eq!(valuation(&Place::Infinity, &g).unwrap(), -1);
        let h = t.add(&c(3)).inv().unwrap();
        assert_eq!(valuation(&at0, &h).unwrap(), 0);
        assert_eq!(valuation(&at0, &RatFunc::zero(pres.ring())), Err(Error::ZeroArgument));
    }

    #[test]
    fn irreducibility_checks() {
        let pres = FieldPresentation::new(Field::Rational, vec!["t".into()]).unwrap();
        let t = MPoly::var(pres.ring(), 0);
        let c = |n| MPoly::from_i64(pres.ring(), n);
        assert!(Place::finite(&t.mul(&t).add(&c(1))).is_ok());
        assert!(Place::finite(&t.mul(&t).sub(&c(1))).is_err());
        assert!(Place::finite(&t.pow(4).add(&c(2))).is_ok());
        // t^4 + 1 splits modulo every prime, so it cannot be certified
        assert!(Place::finite(&t.pow(4).add(&c(1))).is_err());
        let f5 = FieldPresentation::new(Field::prime(5).unwrap(), vec!["t".into()]).unwrap();
        let t5 = MPoly::var(f5.ring(), 0);
        let c5 = |n| MPoly::from_i64(f5.ring(), n);
        assert!(Place::finite(&t5.mul(&t5).add(&c5(2))).is_ok());
        assert!(Place::finite(&t5.mul(&t5).add(&c5(1))).is_err());
    }

    #[test]
    fn spec_length_profiles() {
        let (pres, t) = ctx();
        let s = shift(&pres);
        let at0 = Place::at(pres.ring(), Field::Rational.zero()).unwrap();
        let u = t.inv().unwrap();
        let lp = length_profile(&s, &at0, &u, 16).unwrap();
        assert_eq!(lp.support.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(lp.length, Some(0));
        let u2 = u.sub(&s.apply_once(&u));
        let lp = length_profile(&s, &at0, &u2, 16).unwrap();
        assert_eq!(lp.support.iter().copied().collect::<Vec<_>>(), vec![-1, 0]);
        assert_eq!(lp.length, Some(1));
        let lp = length_profile(&s, &at0, &t, 16).unwrap();
        assert!(lp.support.is_empty());
        assert_eq!(lp.length, None);
    }

    #[test]
    fn truncated_support_has_no_length() {
        let (pres, t) = ctx();
        let s = shift(&pres);
        let at0 = Place::at(pres.ring(), Field::Rational.zero()).unwrap();
        // sigma^n(u) = 1/(t + 3 + n) has its pole at 0 for n = -3, the window edge
        let u = t.add(&RatFunc::from_i64(pres.ring(), 3)).inv().unwrap();
        let lp = length_profile(&s, &at0, &u, 3).unwrap();
        assert_eq!(lp.support.iter().copied().collect::<Vec<_>>(), vec![-3]);
        assert_eq!(lp.length, None);
    }

    #[test]
    fn simple_places_of_products() {
        let (pres, _) = ctx();
        let t = MPoly::var(pres.ring(), 0);
        let c = |n| MPoly::from_i64(pres.ring(), n);
        let f = t.mul(&t.sub(&c(1))).mul(&t.mul(&t).add(&c(1)));
        let places = simple_places(&f);
        assert_eq!(places.len(), 3);
    }
}
