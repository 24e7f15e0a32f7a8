use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, PolyRing, RatFunc};

/// `K = k(y_1, ..., y_n)`, a purely transcendental function field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPresentation {
    ring: Arc<PolyRing>,
}

impl FieldPresentation {
    pub fn new(field: Field, vars: Vec<String>) -> Result<FieldPresentation> {
        if vars.is_empty() {
            return Err(Error::BadPresentation("at least one variable is required".into()));
        }
        Ok(FieldPresentation { ring: PolyRing::new(field, vars)? })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn vars(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_univariate(&self) -> bool {
        self.nvars() == 1
    }

    pub fn generator(&self, i: usize) -> RatFunc {
        RatFunc::var(&self.ring, i)
    }

    pub fn generators(&self) -> Vec<RatFunc> {
        (0..self.nvars()).map(|i| self.generator(i)).collect()
    }
}

/// A `k`-automorphism `sigma` of `K` given by generator images together with
/// the images of its inverse.
#[derive(Debug, Clone)]
pub struct SkewEndo {
    pres: FieldPresentation,
    images: Vec<RatFunc>,
    inverse_images: Vec<RatFunc>,
    identity: bool,
}

impl SkewEndo {
    /// Verifies `sigma(sigma^-1(y_i)) = y_i` and `sigma^-1(sigma(y_i)) = y_i`.
    pub fn new(pres: &FieldPresentation, images: Vec<RatFunc>, inverse_images: Vec<RatFunc>) -> Result<SkewEndo> {
        let n = pres.nvars();
        if images.len() != n || inverse_images.len() != n {
            return Err(Error::NotAnAutomorphism("one image per generator is required".into()));
        }
        if images.iter().chain(&inverse_images).any(|f| f.ring() != pres.ring()) {
            return Err(Error::CharacteristicMismatch);
        }
        let gens = pres.generators();
        for i in 0..n {
            let there_back = inverse_images[i]
                .try_substitute(&images)
                .map_err(|_| Error::NotAnAutomorphism(format!("sigma kills a denominator of sigma_inv({})", pres.vars()[i])))?;
            let back_there = images[i]
                .try_substitute(&inverse_images)
                .map_err(|_| Error::NotAnAutomorphism(format!("sigma_inv kills a denominator of sigma({})", pres.vars()[i])))?;
            if there_back != gens[i] || back_there != gens[i] {
                return Err(Error::NotAnAutomorphism(format!(
                    "sigma and sigma_inv are not mutually inverse on {}",
                    pres.vars()[i]
                )));
            }
        }
        let identity = images.iter().zip(&gens).all(|(a, b)| a == b);
        Ok(SkewEndo { pres: pres.clone(), images, inverse_images, identity })
    }

    pub fn identity(pres: &FieldPresentation) -> SkewEndo {
        let gens = pres.generators();
        SkewEndo { pres: pres.clone(), images: gens.clone(), inverse_images: gens, identity: true }
    }

    pub fn presentation(&self) -> &FieldPresentation {
        &self.pres
    }

    pub fn images(&self) -> &[RatFunc] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[RatFunc] {
        &self.inverse_images
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// `sigma^n(f)`; negative `n` uses the inverse images.
    pub fn apply(&self, f: &RatFunc, n: i64) -> RatFunc {
        if self.identity || n == 0 || f.is_constant() {
            return f.clone();
        }
        let images = if n > 0 { &self.images } else { &self.inverse_images };
        let mut cur = f.clone();
        for _ in 0..n.unsigned_abs() {
            cur = cur.substitute(images);
        }
        cur
    }

    pub fn apply_once(&self, f: &RatFunc) -> RatFunc {
        self.apply(f, 1)
    }
}

/// A `sigma`-derivation: `delta(ab) = sigma(a) delta(b) + delta(a) b`.
#[derive(Debug, Clone)]
pub struct SkewDerivation {
    sigma: Arc<SkewEndo>,
    images: Vec<RatFunc>,
    zero: bool,
    /// `c` with `delta = c * (sigma - 1)`, available whenever `sigma != 1`.
    inner: Option<RatFunc>,
}

impl SkewDerivation {
    /// Checks `delta(y_i) (sigma(y_j) - y_j) = delta(y_j) (sigma(y_i) - y_i)` for all pairs.
    pub fn new(sigma: Arc<SkewEndo>, images: Vec<RatFunc>) -> Result<SkewDerivation> {
        let pres = sigma.presentation();
        let n = pres.nvars();
        if images.len() != n {
            return Err(Error::InconsistentDerivation("one image per generator is required".into()));
        }
        if images.iter().any(|f| f.ring() != pres.ring()) {
            return Err(Error::CharacteristicMismatch);
        }
        let gens = pres.generators();
        let moves: Vec<RatFunc> = (0..n).map(|i| sigma.images()[i].sub(&gens[i])).collect();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = images[i].mul(&moves[j]);
                let rhs = images[j].mul(&moves[i]);
                if lhs != rhs {
                    return Err(Error::InconsistentDerivation(format!(
                        "delta({a})*(sigma({b}) - {b}) != delta({b})*(sigma({a}) - {a})",
                        a = pres.vars()[i],
                        b = pres.vars()[j]
                    )));
                }
            }
        }
        let zero = images.iter().all(|f| f.is_zero());
        let inner = if zero || sigma.is_identity() {
            None
        } else {
            let i = (0..n).find(|&i| !moves[i].is_zero()).expect("sigma is not the identity");
            let c = images[i].div(&moves[i])?;
            for j in 0..n {
                if c.mul(&moves[j]) != images[j] {
                    return Err(Error::InconsistentDerivation(format!(
                        "delta({}) is not c*(sigma - 1) applied to it",
                        pres.vars()[j]
                    )));
                }
            }
            Some(c)
        };
        Ok(SkewDerivation { sigma, images, zero, inner })
    }

    pub fn zero(sigma: Arc<SkewEndo>) -> SkewDerivation {
        let ring = sigma.presentation().ring().clone();
        let n = sigma.presentation().nvars();
        SkewDerivation { sigma, images: vec![RatFunc::zero(&ring); n], zero: true, inner: None }
    }

    pub fn twist(&self) -> &Arc<SkewEndo> {
        &self.sigma
    }

    pub fn images(&self) -> &[RatFunc] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// The `c` with `delta = c * (sigma - 1)` when `sigma` is not the identity.
    pub fn inner_coefficient(&self) -> Option<&RatFunc> {
        self.inner.as_ref()
    }

    /// `delta(f)`. Uses the chain rule when `sigma = 1` and the inner form
    /// `c * (sigma(f) - f)` otherwise; both agree with
    /// [`SkewDerivation::apply_twisted_leibniz`].
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        if self.zero || f.is_constant() {
            return RatFunc::zero(f.ring());
        }
        match &self.inner {
            Some(c) => c.mul(&self.sigma.apply_once(f).sub(f)),
            None => {
                let mut acc = RatFunc::zero(f.ring());
                for (i, img) in self.images.iter().enumerate() {
                    if img.is_zero() || !(f.num().involves(i) || f.den().involves(i)) {
                        continue;
                    }
                    acc = acc.add(&f.derivative(i).mul(img));
                }
                acc
            }
        }
    }

    /// Direct evaluation from the generator images using only additivity,
    /// `delta(ab) = sigma(a) delta(b) + delta(a) b` and
    /// `delta(b^-1) = -sigma(b)^-1 delta(b) b^-1`.
    pub fn apply_twisted_leibniz(&self, f: &RatFunc) -> RatFunc {
        let ring = f.ring();
        let poly_delta = |p: &crate::field::MPoly| -> RatFunc {
            let mut acc = RatFunc::zero(ring);
            for (m, c) in p.terms() {
                // the monomial as an ordered product of generator factors
                let mut prefix = RatFunc::one(ring);
                let mut term = RatFunc::zero(ring);
                let factors: Vec<usize> = m.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect();
                for (pos, &g) in factors.iter().enumerate() {
                    let mut suffix = RatFunc::one(ring);
                    for &h in &factors[pos + 1..] {
                        suffix = suffix.mul(&RatFunc::var(ring, h));
                    }
                    let piece = self.sigma.apply_once(&prefix).mul(&self.images[g]).mul(&suffix);
                    term = term.add(&piece);
                    prefix = prefix.mul(&RatFunc::var(ring, g));
                }
                acc = acc.add(&term.scale(c));
            }
            acc
        };
        let num = RatFunc::from_poly(f.num().clone());
        let den = RatFunc::from_poly(f.den().clone());
        let den_inv = den.inv().expect("nonzero denominator");
        // delta(n * d^-1) = sigma(n) delta(d^-1) + delta(n) d^-1
        let delta_den_inv = self.sigma.apply_once(&den).inv().expect("nonzero").mul(&poly_delta(f.den())).mul(&den_inv).neg();
        self.sigma.apply_once(&num).mul(&delta_den_inv).add(&poly_delta(f.num()).mul(&den_inv))
    }
}

/// The pair `(sigma, delta)` with the derived map `psi = (sigma - 1) + delta`
/// and a declared subfield of constants.
#[derive(Debug, Clone)]
pub struct SkewPair {
    sigma: Arc<SkewEndo>,
    delta: SkewDerivation,
    constants: Vec<RatFunc>,
}

impl SkewPair {
    /// Every declared constant must satisfy `psi(e) = 0`.
    pub fn new(delta: SkewDerivation, constants: Vec<RatFunc>) -> Result<SkewPair> {
        let pair = SkewPair { sigma: delta.twist().clone(), delta, constants: Vec::new() };
        for e in &constants {
            if !pair.apply_psi(e).is_zero() {
                return Err(Error::BadPresentation(format!("declared constant {e} has psi({e}) != 0")));
            }
        }
        Ok(SkewPair { constants, ..pair })
    }

    pub fn pure_automorphism(sigma: SkewEndo) -> SkewPair {
        let sigma = Arc::new(sigma);
        SkewPair { delta: SkewDerivation::zero(sigma.clone()), sigma, constants: Vec::new() }
    }

    pub fn pure_derivation(pres: &FieldPresentation, images: Vec<RatFunc>) -> Result<SkewPair> {
        let sigma = Arc::new(SkewEndo::identity(pres));
        SkewPair::new(SkewDerivation::new(sigma, images)?, Vec::new())
    }

    pub fn presentation(&self) -> &FieldPresentation {
        self.sigma.presentation()
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.presentation().ring()
    }

    pub fn sigma(&self) -> &SkewEndo {
        &self.sigma
    }

    pub fn sigma_arc(&self) -> &Arc<SkewEndo> {
        &self.sigma
    }

    pub fn delta(&self) -> &SkewDerivation {
        &self.delta
    }

    pub fn constants(&self) -> &[RatFunc] {
        &self.constants
    }

    pub fn is_pure_automorphism(&self) -> bool {
        self.delta.is_zero()
    }

    pub fn is_pure_derivation(&self) -> bool {
        self.sigma.is_identity()
    }

    pub fn apply_sigma(&self, f: &RatFunc, n: i64) -> RatFunc {
        self.sigma.apply(f, n)
    }

    pub fn apply_delta(&self, f: &RatFunc) -> RatFunc {
        self.delta.apply(f)
    }

    /// `psi(f) = sigma(f) - f + delta(f)`.
    pub fn apply_psi(&self, f: &RatFunc) -> RatFunc {
        self.sigma.apply_once(f).sub(f).add(&self.delta.apply(f))
    }

    /// Structural equality of the defining data.
    pub fn same_as(&self, other: &SkewPair) -> bool {
        self.presentation() == other.presentation()
            && self.sigma.images() == other.sigma.images()
            && self.delta.images() == other.delta.images()
    }
}
