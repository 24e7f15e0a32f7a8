mod common;

use std::sync::Arc;

use proptest::prelude::*;
use skewfree::field::{Field, PolyRing, RatFunc};
use skewfree::ore::{central_power_check, weyl_check, OreFraction, OrePoly, WeylOrientation};
use skewfree::skew::SkewPair;
use skewfree::Error;

use common::*;

fn rf(src: &str, r: &Arc<PolyRing>) -> RatFunc {
    skewfree::cli::parse_ratfunc(src, r).unwrap()
}

fn op(ctx: &Arc<SkewPair>, coeffs: &[&str]) -> OrePoly {
    OrePoly::new(ctx, coeffs.iter().map(|c| rf(c, ctx.ring())).collect())
}

fn poly_frac(ctx: &Arc<SkewPair>, coeffs: &[&str]) -> OreFraction {
    OreFraction::from_poly(op(ctx, coeffs))
}

fn one_minus_x(ctx: &Arc<SkewPair>) -> OreFraction {
    poly_frac(ctx, &["1", "-1"])
}

#[test]
fn addition_examples() {
    let ctx = affine_ctx(Field::Rational, 1, 1);
    let a = one_minus_x(&ctx).inv().unwrap();
    assert_eq!(a.add(&OreFraction::zero(&ctx)).unwrap(), a);
    let two = Field::Rational.from_i64(2);
    assert_eq!(a.add(&a).unwrap(), a.scale_scalar(&two));
    assert_eq!(a.add(&a).unwrap().den(), a.den());

    let x = OreFraction::x(&ctx);
    let s = x.inv().unwrap().add(&OreFraction::one(&ctx)).unwrap();
    let want = OreFraction::new(OrePoly::x(&ctx), op(&ctx, &["1", "1"])).unwrap();
    assert_eq!(s, want);
    assert_eq!(x.mul(&s).unwrap(), poly_frac(&ctx, &["1", "1"]));

    let other = affine_ctx(Field::Rational, 2, 0);
    assert!(matches!(a.add(&OreFraction::one(&other)), Err(Error::ContextMismatch)));
}

#[test]
fn multiplication_examples() {
    let ctx = affine_ctx(Field::Rational, 1, 1);
    let a = one_minus_x(&ctx);
    assert_eq!(a.inv().unwrap().mul(&a).unwrap(), OreFraction::one(&ctx));
    let b = OreFraction::from_ratfunc(&ctx, rf("1/t", ctx.ring()));
    assert_eq!(OreFraction::one(&ctx).mul(&b).unwrap(), b);

    let weyl = d_dt_ctx(Field::Rational);
    let x = OreFraction::x(&weyl);
    let tinv = OreFraction::from_ratfunc(&weyl, rf("1/t", weyl.ring()));
    let comm = x.mul(&tinv).unwrap().sub(&tinv.mul(&x).unwrap()).unwrap();
    assert_eq!(comm, OreFraction::from_ratfunc(&weyl, rf("-1/t^2", weyl.ring())));
}

#[test]
fn inverse_examples() {
    let ctx = affine_ctx(Field::Rational, 1, 1);
    let inv = one_minus_x(&ctx).inv().unwrap();
    assert_eq!(inv.den(), &op(&ctx, &["-1", "1"]));
    assert_eq!(inv.num(), &op(&ctx, &["-1"]));
    assert_eq!(inv.inv().unwrap(), one_minus_x(&ctx));

    let tx = poly_frac(&ctx, &["0", "t"]);
    let ti = tx.inv().unwrap();
    assert_eq!(tx.mul(&ti).unwrap(), OreFraction::one(&ctx));
    assert_eq!(ti.mul(&tx).unwrap(), OreFraction::one(&ctx));
    assert!(matches!(OreFraction::zero(&ctx).inv(), Err(Error::DivisionByZero)));
}

#[test]
fn equality_examples() {
    let ctx = mixed_ctx();
    let s = op(&ctx, &["t", "1", "1"]);
    let r = op(&ctx, &["1/t", "t"]);
    let w = op(&ctx, &["t^2", "3"]);
    let a = OreFraction::new(s.clone(), r.clone()).unwrap();
    let b = OreFraction::new(w.mul(&s).unwrap(), w.mul(&r).unwrap()).unwrap();
    assert!(a.frac_eq(&b).unwrap());

    let comm = commutative_ctx(Field::Rational);
    let p = one_minus_x(&comm).inv().unwrap();
    let q = poly_frac(&comm, &["1", "1"]).inv().unwrap();
    assert!(!p.frac_eq(&q).unwrap());
}

#[test]
fn weyl_examples() {
    let weyl = d_dt_ctx(Field::Rational);
    let t = OreFraction::from_ratfunc(&weyl, weyl.presentation().generator(0));
    let x = OreFraction::x(&weyl);
    assert_eq!(weyl_check(&t, &x).unwrap(), Some(WeylOrientation::ZyMinusYz));
    assert_eq!(weyl_check(&x, &t).unwrap(), Some(WeylOrientation::YzMinusZy));
    assert_eq!(weyl_check(&x, &x).unwrap(), None);

    // sigma(u) = u + 1: z = u x^-1 satisfies x z - z x = 1
    let shift = affine_ctx(Field::Rational, 1, 1);
    let u = OreFraction::from_ratfunc(&shift, shift.presentation().generator(0));
    let x = OreFraction::x(&shift);
    let z = u.mul(&x.inv().unwrap()).unwrap();
    assert_eq!(weyl_check(&z, &x).unwrap(), Some(WeylOrientation::ZyMinusYz));
    let direct = x.mul(&z).unwrap().sub(&z.mul(&x).unwrap()).unwrap();
    assert_eq!(direct, OreFraction::one(&shift));
}

#[test]
fn central_power_examples() {
    let refl = affine_ctx(Field::Rational, -1, 0);
    assert!(central_power_check(&refl, 2).unwrap());
    assert!(!central_power_check(&refl, 1).unwrap());
    let comm = commutative_ctx(Field::Rational);
    for n in 1..5 {
        assert!(central_power_check(&comm, n).unwrap());
    }
    let f5 = affine_ctx(Field::prime(5).unwrap(), 1, 1);
    assert!(central_power_check(&f5, 5).unwrap());
    assert!(!central_power_check(&f5, 4).unwrap());
    assert!(matches!(central_power_check(&mixed_ctx(), 2), Err(Error::RequiresPureAutomorphism)));
}

fn poly_strategy_t(max_len: usize) -> impl Strategy<Value = Vec<RatFunc>> {
    prop::collection::vec(ratfunc_strategy(ring(Field::Rational, &["t"]), 2, 1, 3), 0..=max_len)
}

fn lift(ctx: &Arc<SkewPair>, v: &[RatFunc]) -> OrePoly {
    OrePoly::new(ctx, v.iter().map(|c| c.embed(ctx.ring()).unwrap()).collect())
}

fn fraction_strategy() -> impl Strategy<Value = (Vec<RatFunc>, Vec<RatFunc>)> {
    (poly_strategy_t(2).prop_filter("nonzero", |v| v.iter().any(|c| !c.is_zero())), poly_strategy_t(2))
}

fn to_frac(ctx: &Arc<SkewPair>, (den, num): &(Vec<RatFunc>, Vec<RatFunc>)) -> OreFraction {
    OreFraction::new(lift(ctx, den), lift(ctx, num)).unwrap()
}

fn contexts() -> Vec<Arc<SkewPair>> {
    vec![affine_ctx(Field::Rational, 1, 1), affine_ctx(Field::Rational, -1, 0), d_dt_ctx(Field::Rational), mixed_ctx()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn division_ring_axioms(a in fraction_strategy(), b in fraction_strategy(), c in fraction_strategy()) {
        for ctx in contexts() {
            let (a, b, c) = (to_frac(&ctx, &a), to_frac(&ctx, &b), to_frac(&ctx, &c));
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(b.add(&c).unwrap().mul(&a).unwrap(), b.mul(&a).unwrap().add(&c.mul(&a).unwrap()).unwrap());
            prop_assert!(a.sub(&a).unwrap().is_zero());
            if !a.is_zero() {
                let ai = a.inv().unwrap();
                prop_assert_eq!(a.mul(&ai).unwrap(), OreFraction::one(&ctx));
                prop_assert_eq!(ai.mul(&a).unwrap(), OreFraction::one(&ctx));
                prop_assert!(ai.den().is_monic());
            }
        }
    }

    #[test]
    fn polynomials_embed_as_a_subring(f in poly_strategy_t(3), g in poly_strategy_t(3)) {
        for ctx in contexts() {
            let (f, g) = (lift(&ctx, &f), lift(&ctx, &g));
            let (ff, fg) = (OreFraction::from_poly(f.clone()), OreFraction::from_poly(g.clone()));
            prop_assert_eq!(ff.mul(&fg).unwrap(), OreFraction::from_poly(f.mul(&g).unwrap()));
            prop_assert_eq!(ff.add(&fg).unwrap(), OreFraction::from_poly(f.add(&g).unwrap()));
        }
    }
}

#[test]
fn commutative_context_matches_bivariate_rational_functions() {
    if let Err(msg) = commutative_oracle(2024, 500) {
        panic!("{msg}");
    }
}
