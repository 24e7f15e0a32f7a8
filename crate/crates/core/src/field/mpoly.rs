//! Sparse multivariate polynomials over `k`, kept in graded-lex descending order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

pub type Mono = SmallVec<[u32; 4]>;

/// The polynomial ring `k[y_1, ..., y_n]` that a polynomial lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: Field,
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new(field: Field, vars: Vec<String>) -> Result<Arc<PolyRing>> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::BadPresentation(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(PolyRing { field, vars }))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Graded lex: total degree first, then lexicographic with the first variable most significant.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[derive(Clone)]
pub struct MPoly {
    ring: Arc<PolyRing>,
    terms: Vec<(Mono, Scalar)>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl std::hash::Hash for MPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl MPoly {
    pub fn zero(ring: &Arc<PolyRing>) -> MPoly {
        MPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> MPoly {
        MPoly::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Scalar) -> MPoly {
        let mut terms = Vec::new();
        if !c.is_zero() {
            terms.push((Mono::from_elem(0, ring.nvars()), c));
        }
        MPoly { ring: ring.clone(), terms }
    }

    pub fn from_i64(ring: &Arc<PolyRing>, n: i64) -> MPoly {
        MPoly::constant(ring, ring.field.from_i64(n))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> MPoly {
        let mut m = Mono::from_elem(0, ring.nvars());
        m[i] = 1;
        MPoly { ring: ring.clone(), terms: vec![(m, ring.field.one())] }
    }

    pub fn monomial(ring: &Arc<PolyRing>, mono: Mono, c: Scalar) -> MPoly {
        debug_assert_eq!(mono.len(), ring.nvars());
        if c.is_zero() {
            return MPoly::zero(ring);
        }
        MPoly { ring: ring.clone(), terms: vec![(mono, c)] }
    }

    /// Builds a polynomial from arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms<I: IntoIterator<Item = (Mono, Scalar)>>(ring: &Arc<PolyRing>, terms: I) -> MPoly {
        let mut acc: HashMap<Mono, Scalar> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.len(), ring.nvars());
            match acc.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Mono, Scalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        MPoly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn terms(&self) -> &[(Mono, Scalar)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && !self.is_zero() && self.terms[0].1.is_one()
    }

    /// The constant term's value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            Some(self.ring.field.zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Index of the single variable this polynomial equals, if it is one.
    pub fn as_variable(&self) -> Option<usize> {
        if self.terms.len() != 1 || !self.terms[0].1.is_one() {
            return None;
        }
        let m = &self.terms[0].0;
        if m.iter().sum::<u32>() != 1 {
            return None;
        }
        m.iter().position(|&e| e == 1)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn leading_mono(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.iter().sum())
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|t| t.0[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.0[var] > 0)
    }

    pub fn max_bit_size(&self) -> u64 {
        self.terms.iter().map(|t| t.1.bit_size()).max().unwrap_or(0)
    }

    fn check(&self, other: &MPoly) {
        assert!(same_ring(&self.ring, &other.ring), "polynomials from different rings");
    }

    fn merge(&self, other: &MPoly, negate: bool) -> MPoly {
        self.check(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match grlex_cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { t.1.neg() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        MPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.merge(other, true)
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ring);
        }
        if c.is_one() {
            return self.clone();
        }
        MPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect(),
        }
    }

    /// Multiplies by the single term `c * mono`; order is preserved.
    pub fn mul_term(&self, mono: &[u32], c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ring);
        }
        MPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.iter().zip(mono).map(|(x, y)| x + y).collect(), a.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if self.ring.nvars() == 1 {
            return self.mul_dense_univariate(other);
        }
        let mut acc: HashMap<Mono, Scalar> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let p = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.add(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let mut terms: Vec<(Mono, Scalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        MPoly { ring: self.ring.clone(), terms }
    }

    fn mul_dense_univariate(&self, other: &MPoly) -> MPoly {
        let da = self.terms[0].0[0] as usize;
        let db = other.terms[0].0[0] as usize;
        let zero = self.ring.field.zero();
        let mut acc = vec![zero; da + db + 1];
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let k = (ma[0] + mb[0]) as usize;
                acc[k] = acc[k].add(&ca.mul(cb));
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Mono::from_elem(k as u32, 1), c))
            .collect();
        MPoly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut acc = MPoly::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        self.check(d);
        assert!(!d.is_zero(), "exact division by zero polynomial");
        if self.is_zero() {
            return Some(MPoly::zero(&self.ring));
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let inv = dc.inv().ok()?;
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !divides(dm, m) {
                    return None;
                }
                terms.push((m.iter().zip(dm).map(|(x, y)| x - y).collect(), c.mul(&inv)));
            }
            return Some(MPoly { ring: self.ring.clone(), terms });
        }
        if self.ring.nvars() == 1 && self.field() == Field::Rational {
            return self.div_exact_dense_q(d);
        }
        let (dm, dc) = &d.terms[0];
        let dinv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.terms.first().cloned() {
            if !divides(dm, &rm) {
                return None;
            }
            let qm: Mono = rm.iter().zip(dm).map(|(x, y)| x - y).collect();
            let qc = rc.mul(&dinv);
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(MPoly { ring: self.ring.clone(), terms: quot })
    }

    /// `(c, v)` with `self = c * sum v_i t^i` and `v` a primitive integer vector.
    fn primitive_dense_q(&self) -> (BigRational, Vec<BigInt>) {
        let deg = self.terms[0].0[0] as usize;
        let den = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.as_rational().expect("rational").denom()));
        let mut v = vec![BigInt::zero(); deg + 1];
        for (m, c) in &self.terms {
            v[m[0] as usize] = (c.as_rational().expect("rational") * &den).to_integer();
        }
        let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        for c in v.iter_mut() {
            *c /= &content;
        }
        (BigRational::new(content, den), v)
    }

    /// Univariate exact division over `Q`, done over `Z` on primitive parts.
    /// By Gauss's lemma every quotient digit is then an integer.
    fn div_exact_dense_q(&self, d: &MPoly) -> Option<MPoly> {
        let (ca, mut rem) = self.primitive_dense_q();
        let (cd, dv) = d.primitive_dense_q();
        let dd = dv.len() - 1;
        if rem.len() < dv.len() {
            return None;
        }
        let lc = dv.last().expect("nonzero");
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (qi, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in dv.iter().enumerate() {
                if !c.is_zero() {
                    rem[i + j] -= &qi * c;
                }
            }
            q[i] = qi;
        }
        if rem[..dd].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let scale = ca / cd;
        let terms = q
            .into_iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Mono::from_elem(k as u32, 1), Scalar::Q(&scale * BigRational::from_integer(c))))
            .collect();
        Some(MPoly { ring: self.ring.clone(), terms })
    }

    /// Coefficients with respect to `var`: entry `i` multiplies `var^i`
    /// and no longer involves `var`.
    pub fn to_univariate(&self, var: usize) -> Vec<MPoly> {
        let deg = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut buckets: Vec<Vec<(Mono, Scalar)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = m2[var] as usize;
            m2[var] = 0;
            buckets[e].push((m2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut ts| {
                ts.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
                MPoly { ring: self.ring.clone(), terms: ts }
            })
            .collect()
    }

    pub fn from_univariate(ring: &Arc<PolyRing>, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut m2 = m.clone();
                m2[var] += i as u32;
                terms.push((m2, a.clone()));
            }
        }
        terms.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
        MPoly { ring: ring.clone(), terms }
    }

    /// Formal partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> MPoly {
        let f = self.ring.field;
        let terms = self.terms.iter().filter(|(m, _)| m[var] > 0).map(|(m, c)| {
            let mut m2 = m.clone();
            let e = m2[var];
            m2[var] -= 1;
            (m2, c.mul(&f.from_i64(e as i64)))
        });
        MPoly::from_terms(&self.ring, terms)
    }

    /// Makes the graded-lex leading coefficient equal to 1.
    pub fn monic(&self) -> MPoly {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    /// Moves the polynomial into another ring with the same field whose
    /// variables include all of this ring's variables.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<MPoly> {
        if target.field != self.ring.field {
            return Err(Error::CharacteristicMismatch);
        }
        let map: Vec<usize> = self
            .ring
            .vars
            .iter()
            .map(|v| target.var_index(v).ok_or(Error::CharacteristicMismatch))
            .collect::<Result<_>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = Mono::from_elem(0, target.nvars());
            for (i, &e) in m.iter().enumerate() {
                m2[map[i]] = e;
            }
            (m2, c.clone())
        });
        Ok(MPoly::from_terms(target, terms))
    }
}

fn fmt_mono(f: &mut fmt::Formatter<'_>, vars: &[String], m: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{}", vars[i])?;
        } else {
            write!(f, "{}^{}", vars[i], e)?;
        }
    }
    Ok(())
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.iter().all(|&e| e == 0);
            if is_const {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                fmt_mono(f, &self.ring.vars, m)?;
            }
        }
        Ok(())
    }
}
