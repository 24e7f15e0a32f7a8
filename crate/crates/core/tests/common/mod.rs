#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewfree::field::{Field, MPoly, Mono, PolyRing, RatFunc};
use skewfree::ore::{OreFraction, OrePoly};
use skewfree::skew::{FieldPresentation, SkewDerivation, SkewEndo, SkewPair};

pub fn ring(field: Field, vars: &[&str]) -> Arc<PolyRing> {
    PolyRing::new(field, vars.iter().map(|s| s.to_string()).collect()).unwrap()
}

pub fn pres(field: Field, vars: &[&str]) -> FieldPresentation {
    FieldPresentation::new(field, vars.iter().map(|s| s.to_string()).collect()).unwrap()
}

/// `k(t)` with `sigma(t) = alpha*t + beta`.
pub fn affine_ctx(field: Field, alpha: i64, beta: i64) -> Arc<SkewPair> {
    let p = pres(field, &["t"]);
    let t = p.generator(0);
    let a = RatFunc::constant(p.ring(), field.from_i64(alpha));
    let b = RatFunc::constant(p.ring(), field.from_i64(beta));
    let img = t.mul(&a).add(&b);
    let inv = t.sub(&b).div(&a).unwrap();
    Arc::new(SkewPair::pure_automorphism(SkewEndo::new(&p, vec![img], vec![inv]).unwrap()))
}

/// `k(t)` with `delta = d/dt`.
pub fn d_dt_ctx(field: Field) -> Arc<SkewPair> {
    let p = pres(field, &["t"]);
    let one = RatFunc::one(p.ring());
    Arc::new(SkewPair::pure_derivation(&p, vec![one]).unwrap())
}

/// `Q(t)` with `sigma(t) = t + 1`, `delta(t) = t`.
pub fn mixed_ctx() -> Arc<SkewPair> {
    let p = pres(Field::Rational, &["t"]);
    let t = p.generator(0);
    let one = RatFunc::one(p.ring());
    let endo = Arc::new(SkewEndo::new(&p, vec![t.add(&one)], vec![t.sub(&one)]).unwrap());
    let d = SkewDerivation::new(endo, vec![t]).unwrap();
    Arc::new(SkewPair::new(d, vec![]).unwrap())
}

/// `k(t)` with `sigma = 1`, `delta = 0`.
pub fn commutative_ctx(field: Field) -> Arc<SkewPair> {
    let p = pres(field, &["t"]);
    Arc::new(SkewPair::pure_automorphism(SkewEndo::identity(&p)))
}

pub fn poly_from(ring: &Arc<PolyRing>, terms: &[(Vec<u32>, i64)]) -> MPoly {
    let f = ring.field();
    MPoly::from_terms(ring, terms.iter().map(|(m, c)| (m.iter().copied().collect::<Mono>(), f.from_i64(*c))))
}

pub fn poly_strategy(ring: Arc<PolyRing>, max_terms: usize, max_deg: u32, coeff: i64) -> impl Strategy<Value = MPoly> {
    let n = ring.nvars();
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), -coeff..=coeff), 0..=max_terms)
        .prop_map(move |terms| {
            let terms: Vec<(Vec<u32>, i64)> = terms;
            poly_from(&ring, &terms)
        })
}

pub fn nonzero_poly_strategy(ring: Arc<PolyRing>, max_terms: usize, max_deg: u32, coeff: i64) -> impl Strategy<Value = MPoly> {
    poly_strategy(ring, max_terms, max_deg, coeff).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn ratfunc_strategy(ring: Arc<PolyRing>, max_terms: usize, max_deg: u32, coeff: i64) -> impl Strategy<Value = RatFunc> {
    (poly_strategy(ring.clone(), max_terms, max_deg, coeff), nonzero_poly_strategy(ring, max_terms, max_deg, coeff))
        .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

pub fn nonzero_ratfunc_strategy(ring: Arc<PolyRing>, max_terms: usize, max_deg: u32, coeff: i64) -> impl Strategy<Value = RatFunc> {
    ratfunc_strategy(ring, max_terms, max_deg, coeff).prop_filter("nonzero", |f| !f.is_zero())
}

pub fn random_poly<R: Rng>(rng: &mut R, ring: &Arc<PolyRing>, max_terms: usize, max_deg: u32, coeff: i64) -> MPoly {
    let n = ring.nvars();
    let k = rng.gen_range(0..=max_terms);
    let terms: Vec<(Vec<u32>, i64)> =
        (0..k).map(|_| ((0..n).map(|_| rng.gen_range(0..=max_deg)).collect(), rng.gen_range(-coeff..=coeff))).collect();
    poly_from(ring, &terms)
}

pub fn random_ratfunc<R: Rng>(rng: &mut R, ring: &Arc<PolyRing>, max_terms: usize, max_deg: u32, coeff: i64) -> RatFunc {
    loop {
        let den = random_poly(rng, ring, max_terms, max_deg, coeff);
        if den.is_zero() {
            continue;
        }
        let num = random_poly(rng, ring, max_terms, max_deg, coeff);
        return RatFunc::new(num, den).unwrap();
    }
}

pub fn random_nonzero_ratfunc<R: Rng>(rng: &mut R, ring: &Arc<PolyRing>, max_terms: usize, max_deg: u32, coeff: i64) -> RatFunc {
    loop {
        let f = random_ratfunc(rng, ring, max_terms, max_deg, coeff);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Sums of `c/(t+a)^e` keep all poles on the integer orbit of `t = 0`.
pub fn random_orbit_element<R: Rng>(rng: &mut R, r: &Arc<PolyRing>) -> RatFunc {
    let mut acc = RatFunc::zero(r);
    for _ in 0..rng.gen_range(1..=3) {
        let a = rng.gen_range(-4..=4);
        let e = rng.gen_range(1..=2);
        let c = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let src = format!("{c}/(t+{a})^{e}");
        acc = acc.add(&skewfree::cli::parse_ratfunc(&src, r).unwrap());
    }
    acc.add(&RatFunc::from_poly(random_poly(rng, r, 2, 2, 3)))
}

/// `s^-1 r` with commuting `x`, as an element of `k(t, x)`.
pub fn as_bivariate(f: &OreFraction, r2: &Arc<PolyRing>) -> RatFunc {
    let lift = |p: &OrePoly| {
        let x = RatFunc::var(r2, 1);
        let mut acc = RatFunc::zero(r2);
        for (i, c) in p.coeffs().iter().enumerate() {
            acc = acc.add(&c.embed(r2).unwrap().mul(&x.pow(i as i64).unwrap()));
        }
        acc
    };
    lift(f.num()).div(&lift(f.den())).unwrap()
}

/// Random `+ - * /` chains in `Q(t)(x)` with `sigma = 1`, `delta = 0`, each
/// step compared against the same operation on `Q(t, x)`.
pub fn commutative_oracle(seed: u64, steps: usize) -> Result<(), String> {
    let ctx = commutative_ctx(Field::Rational);
    let r1 = ctx.ring().clone();
    let r2 = ring(Field::Rational, &["t", "x"]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_frac = |rng: &mut ChaCha8Rng| loop {
        let den: Vec<RatFunc> = (0..rng.gen_range(1..=3)).map(|_| random_ratfunc(rng, &r1, 2, 1, 3)).collect();
        let num: Vec<RatFunc> = (0..rng.gen_range(1..=3)).map(|_| random_ratfunc(rng, &r1, 2, 1, 3)).collect();
        let den = OrePoly::new(&ctx, den);
        if den.is_zero() {
            continue;
        }
        break OreFraction::new(den, OrePoly::new(&ctx, num)).unwrap();
    };
    let mut acc = random_frac(&mut rng);
    for step in 0..steps {
        // periodic restarts keep sizes bounded
        if step % 5 == 0 {
            acc = random_frac(&mut rng);
        }
        let b = random_frac(&mut rng);
        let (ab, bb) = (as_bivariate(&acc, &r2), as_bivariate(&b, &r2));
        let (got, want) = match rng.gen_range(0..4) {
            0 => (acc.add(&b).unwrap(), ab.add(&bb)),
            1 => (acc.sub(&b).unwrap(), ab.sub(&bb)),
            2 => (acc.mul(&b).unwrap(), ab.mul(&bb)),
            _ if !b.is_zero() => (acc.div(&b).unwrap(), ab.div(&bb).unwrap()),
            _ => (acc.mul(&b).unwrap(), ab.mul(&bb)),
        };
        let got_b = as_bivariate(&got, &r2);
        if got_b != want {
            return Err(format!("step {step}: got {got_b}, want {want}"));
        }
        acc = got;
    }
    Ok(())
}
