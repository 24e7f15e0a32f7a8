mod common;

use std::sync::Arc;

use proptest::prelude::*;
use skewfree::field::{Field, PolyRing, RatFunc, Scalar};
use skewfree::freeness::{
    build_word_v, build_word_w, build_word_w_by_products, freeness_certify, freeness_certify_with, independence_check,
    monomial_products_check, relation_vanishes, valuation_witness, weyl_pair_from_additive, CertificateVerdict,
    Limits, WordIndex,
};
use skewfree::ore::{OreFraction, OrePoly, WeylOrientation};
use skewfree::skew::{Place, SkewPair};
use skewfree::Error;

use common::*;

fn rf(src: &str, r: &Arc<PolyRing>) -> RatFunc {
    skewfree::cli::parse_ratfunc(src, r).unwrap()
}

fn w(bits: &[u8]) -> WordIndex {
    WordIndex::new(bits).unwrap()
}

fn geometric(ctx: &Arc<SkewPair>) -> OreFraction {
    OreFraction::from_poly(OrePoly::new(ctx, vec![RatFunc::one(ctx.ring()), rf("-1", ctx.ring())])).inv().unwrap()
}

fn scalar(f: &OreFraction, c: &RatFunc) -> OreFraction {
    OreFraction::from_ratfunc(f.ctx(), c.clone()).mul(f).unwrap()
}

fn b_pow(b: &RatFunc, bit: bool) -> RatFunc {
    if bit {
        b.clone()
    } else {
        RatFunc::one(b.ring())
    }
}

#[test]
fn word_index_basics() {
    for l in 0..7 {
        let all = WordIndex::enumerate(l);
        assert_eq!(all.len(), WordIndex::count(l));
        assert_eq!(all.len(), (1 << (l + 1)) - 1);
        assert_eq!(all.iter().filter(|i| !i.is_empty()).count(), (1 << (l + 1)) - 2);
    }
    let first: Vec<String> = WordIndex::enumerate(2).iter().map(|i| i.to_string()).collect();
    assert_eq!(first, ["()", "(0)", "(1)", "(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
    assert_eq!(w(&[1, 0, 1]).truncated(), w(&[0, 1]));
    assert_eq!(w(&[1]).truncated(), WordIndex::empty());
    assert_eq!(w(&[1, 0]).first(), Some(true));
    assert!(WordIndex::new(&[0, 2]).is_err());
}

#[test]
fn word_examples() {
    let ctx = affine_ctx(Field::Rational, 1, 1);
    let r = ctx.ring();
    let b = rf("1/t", r);
    let g = geometric(&ctx);
    assert_eq!(build_word_w(&ctx, &WordIndex::empty(), &b).unwrap(), OreFraction::one(&ctx));
    assert_eq!(build_word_w(&ctx, &w(&[0]), &b).unwrap(), g);
    let by_hand = scalar(&g, &b).mul(&g).unwrap();
    assert_eq!(build_word_w(&ctx, &w(&[1, 0]), &b).unwrap(), by_hand);
    // other association order
    let by_hand2 = OreFraction::from_ratfunc(&ctx, b.clone()).mul(&g.mul(&g).unwrap()).unwrap();
    assert_eq!(by_hand, by_hand2);

    assert_eq!(build_word_v(&ctx, &WordIndex::empty(), &b).unwrap(), g);
    let one_minus_x = g.inv().unwrap();
    let v1 = build_word_v(&ctx, &w(&[1]), &b).unwrap();
    assert!(one_minus_x.mul(&v1).unwrap().frac_eq(&build_word_w(&ctx, &w(&[1]), &b).unwrap()).unwrap());
    let x = OreFraction::x(&ctx);
    let v0 = build_word_v(&ctx, &WordIndex::empty(), &b).unwrap();
    assert!(x.mul(&v0).unwrap().frac_eq(&v0.sub(&OreFraction::one(&ctx)).unwrap()).unwrap());

    assert!(matches!(build_word_w(&ctx, &w(&[1]), &RatFunc::zero(r)), Err(Error::ZeroArgument)));
}

fn check_rewriting(ctx: &Arc<SkewPair>, b: &RatFunc) {
    let x = OreFraction::x(ctx);
    let one_minus_x = geometric(ctx).inv().unwrap();
    for idx in WordIndex::enumerate(3) {
        let v = build_word_v(ctx, &idx, b).unwrap();
        let wi = build_word_w(ctx, &idx, b).unwrap();
        assert_eq!(wi, build_word_w_by_products(ctx, &idx, b).unwrap(), "{idx}");
        assert_eq!(one_minus_x.mul(&v).unwrap(), wi, "{idx}");
        let xv = x.mul(&v).unwrap();
        match idx.first() {
            None => assert_eq!(xv, v.sub(&OreFraction::one(ctx)).unwrap()),
            Some(bit) => {
                let tail = scalar(&build_word_v(ctx, &idx.truncated(), b).unwrap(), &b_pow(b, bit));
                assert_eq!(xv, v.sub(&tail).unwrap(), "{idx}");
                assert_eq!(wi, tail, "{idx}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn rewriting_identities_under_shift(b in nonzero_ratfunc_strategy(ring(Field::Rational, &["t"]), 2, 2, 3)) {
        let ctx = affine_ctx(Field::Rational, 1, 1);
        check_rewriting(&ctx, &b.embed(ctx.ring()).unwrap());
    }

    #[test]
    fn rewriting_identities_with_derivation(b in nonzero_ratfunc_strategy(ring(Field::Rational, &["t"]), 2, 2, 3)) {
        let ctx = mixed_ctx();
        check_rewriting(&ctx, &b.embed(ctx.ring()).unwrap());
    }

    #[test]
    fn rewriting_identities_mod_p(b in nonzero_ratfunc_strategy(ring(Field::Prime(5), &["t"]), 2, 2, 4)) {
        let ctx = d_dt_ctx(Field::Prime(5));
        check_rewriting(&ctx, &b.embed(ctx.ring()).unwrap());
    }
}

#[test]
fn independence_examples() {
    let ctx = affine_ctx(Field::Rational, 1, 1);
    let r = ctx.ring();
    let res = independence_check(&[OreFraction::one(&ctx), geometric(&ctx)]).unwrap();
    assert!(res.independent);
    assert_eq!(res.rank, 2);
    assert!(res.relation.is_none());

    let one = RatFunc::one(r);
    let pair = [build_word_w(&ctx, &w(&[0]), &one).unwrap(), build_word_w(&ctx, &w(&[1]), &one).unwrap()];
    let res = independence_check(&pair).unwrap();
    assert!(!res.independent);
    assert_eq!(res.rank, 1);
    let rel = res.relation.unwrap();
    assert_eq!(rel, vec![Field::Rational.from_i64(-1), Field::Rational.from_i64(1)]);
    assert!(relation_vanishes(&pair, &rel).unwrap());
    assert!(!relation_vanishes(&pair, &[Field::Rational.from_i64(1), Field::Rational.from_i64(1)]).unwrap());

    let b = rf("1/t", r);
    let words: Vec<OreFraction> = WordIndex::enumerate(2).iter().map(|i| build_word_w(&ctx, i, &b).unwrap()).collect();
    let res = independence_check(&words).unwrap();
    assert!(res.independent);
    assert_eq!(res.rank, 7);

    let other = affine_ctx(Field::Rational, 2, 0);
    assert!(matches!(independence_check(&[OreFraction::one(&ctx), OreFraction::one(&other)]), Err(Error::ContextMismatch)));
}

#[test]
fn one_and_b_are_independent_outside_the_prime_field() {
    for (ctx, srcs) in [
        (affine_ctx(Field::Rational, 1, 1), vec!["t", "1/t", "(t^2+1)/(t-3)"]),
        (mixed_ctx(), vec!["t+1/2", "1/(t^2+t+1)"]),
        (d_dt_ctx(Field::Prime(3)), vec!["t", "2/(t+1)"]),
    ] {
        for s in srcs {
            let b = OreFraction::from_ratfunc(&ctx, rf(s, ctx.ring()));
            let res = independence_check(&[OreFraction::one(&ctx), b]).unwrap();
            assert!(res.independent, "{s}");
        }
    }
    let ctx = affine_ctx(Field::Rational, 1, 1);
    let b = OreFraction::from_ratfunc(&ctx, rf("7/3", ctx.ring()));
    assert!(!independence_check(&[OreFraction::one(&ctx), b]).unwrap().independent);
}

#[test]
fn certificate_examples() {
    let ctx = affine_ctx(Field::Rational, 2, 0);
    let cert = freeness_certify(&ctx, &rf("1/(t-1)", ctx.ring()), 3).unwrap();
    assert!(cert.is_independent());
    assert_eq!((cert.word_count, cert.rank), (15, 15));
    assert!(cert.recheck(&ctx).unwrap());
    assert_eq!(cert, freeness_certify(&ctx, &rf("1/(t-1)", ctx.ring()), 3).unwrap());
    let json = cert.to_json();
    for key in ["witness", "L", "word_count", "rank", "digest", "verdict"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert!(json.get("relation").is_none());
    assert_eq!(json["verdict"], "Independent");

    for ctx in [affine_ctx(Field::Rational, 1, 1), mixed_ctx(), d_dt_ctx(Field::Prime(7))] {
        let cert = freeness_certify(&ctx, &RatFunc::one(ctx.ring()), 1).unwrap();
        let CertificateVerdict::Dependent(rel) = &cert.verdict else { panic!("b = 1 must be dependent") };
        assert!(!rel.is_empty());
        assert!(cert.rank < cert.word_count);
        assert!(cert.recheck(&ctx).unwrap());
        assert_eq!(cert.to_json()["verdict"], "Dependent");
        assert!(cert.to_json()["relation"].is_object());
    }

    let b = rf("1/(t-1)", ctx.ring());
    assert!(matches!(freeness_certify(&ctx, &RatFunc::zero(ctx.ring()), 2), Err(Error::ZeroArgument)));
    assert!(matches!(freeness_certify(&ctx, &b, 0), Err(Error::InvalidArgument(_))));
    let tight = Limits { max_words: 7, ..Limits::default() };
    assert!(freeness_certify_with(&ctx, &b, 2, &tight).is_ok());
    assert!(matches!(freeness_certify_with(&ctx, &b, 3, &tight), Err(Error::ResourceBoundExceeded(_))));
    let tiny = Limits { max_bits: 2, ..Limits::default() };
    assert!(matches!(freeness_certify_with(&ctx, &rf("1/(t-1000)", ctx.ring()), 2, &tiny), Err(Error::ResourceBoundExceeded(_))));
}

#[test]
fn tampered_certificates_fail_recheck() {
    let ctx = affine_ctx(Field::Rational, 2, 0);
    let mut cert = freeness_certify(&ctx, &rf("1/(t-1)", ctx.ring()), 2).unwrap();
    cert.digest.replace_range(0..1, if cert.digest.starts_with('0') { "1" } else { "0" });
    assert!(!cert.recheck(&ctx).unwrap());

    let mut cert = freeness_certify(&ctx, &RatFunc::one(ctx.ring()), 1).unwrap();
    if let CertificateVerdict::Dependent(rel) = &mut cert.verdict {
        for c in rel.values_mut() {
            *c = c.add(&Field::Rational.from_i64(1));
        }
    }
    assert!(!cert.recheck(&ctx).unwrap());
}

#[test]
fn independence_is_monotone_in_length() {
    for (ctx, b) in [(affine_ctx(Field::Rational, 2, 0), "1/(t-1)"), (affine_ctx(Field::Rational, 1, 1), "1/t")] {
        let b = rf(b, ctx.ring());
        let ranks: Vec<(usize, usize, bool)> = (1..=3)
            .map(|l| {
                let c = freeness_certify(&ctx, &b, l).unwrap();
                (c.rank, c.word_count, c.is_independent())
            })
            .collect();
        for pair in ranks.windows(2) {
            // a longer independent certificate forces the shorter one
            if pair[1].2 {
                assert!(pair[0].2);
            }
            // words of length <= L are a prefix, so rank never drops
            assert!(pair[0].0 <= pair[1].0);
            assert!(pair[1].0 - pair[0].0 <= pair[1].1 - pair[0].1);
        }
    }
}

#[test]
fn constant_witnesses_give_sound_relations() {
    let ctx = mixed_ctx();
    for (b, l) in [("2", 1), ("-1/3", 2), ("5", 2)] {
        let b = rf(b, ctx.ring());
        let cert = freeness_certify(&ctx, &b, l).unwrap();
        assert!(!cert.is_independent());
        assert!(cert.recheck(&ctx).unwrap());
        let CertificateVerdict::Dependent(rel) = &cert.verdict else { unreachable!() };
        let words = WordIndex::enumerate(l);
        let fracs: Vec<OreFraction> = words.iter().map(|i| build_word_w(&ctx, i, &b).unwrap()).collect();
        let lambda: Vec<Scalar> = words.iter().map(|i| rel.get(i).cloned().unwrap_or_else(|| Field::Rational.zero())).collect();
        assert!(relation_vanishes(&fracs, &lambda).unwrap());
    }
}

/// Coefficients `c_0..c_n` of a truncated series `sum c_i x^i` in
/// `K[[x; sigma]]`, where `x c = sigma(c) x`.
type Series = Vec<RatFunc>;

fn series_mul(ctx: &Arc<SkewPair>, a: &Series, c: &Series) -> Series {
    let n = a.len();
    let mut out = vec![RatFunc::zero(ctx.ring()); n];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, cj) in c.iter().enumerate().take(n - i) {
            out[i + j] = out[i + j].add(&ai.mul(&ctx.apply_sigma(cj, i as i64)));
        }
    }
    out
}

/// `W_I` expanded with `(1-x)^-1 = 1 + x + x^2 + ...`.
fn word_series(ctx: &Arc<SkewPair>, idx: &WordIndex, b: &RatFunc, n: usize) -> Series {
    let mut acc = vec![RatFunc::zero(ctx.ring()); n];
    acc[0] = RatFunc::one(ctx.ring());
    for &bit in idx.bits() {
        acc = series_mul(ctx, &acc, &vec![b_pow(b, bit); n]);
    }
    acc
}

#[test]
fn shift_witness_relation_agrees_with_power_series() {
    let ctx = affine_ctx(Field::Rational, 1, 1);
    let r = ctx.ring();
    let b = rf("1/t", r);
    let cert = freeness_certify(&ctx, &b, 3).unwrap();
    assert_eq!(cert.word_count, 15);
    let CertificateVerdict::Dependent(rel) = &cert.verdict else {
        // nothing to cross-check when no relation is found
        return;
    };
    assert!(cert.recheck(&ctx).unwrap());
    let n = 10;
    let combine = |rel: &[(WordIndex, Scalar)]| {
        let mut total = vec![RatFunc::zero(r); n];
        for (idx, c) in rel {
            for (t, s) in total.iter_mut().zip(word_series(&ctx, idx, &b, n)) {
                *t = t.add(&s.scale(c));
            }
        }
        total
    };
    let rel: Vec<(WordIndex, Scalar)> = rel.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    assert!(combine(&rel).iter().all(|c| c.is_zero()), "relation fails in K[[x; sigma]]");
    // the oracle is not vacuous: perturbing one coefficient breaks it
    let mut bad = rel.clone();
    bad[0].1 = bad[0].1.add(&Field::Rational.from_i64(1));
    assert!(combine(&bad).iter().any(|c| !c.is_zero()));
}

#[test]
fn monomial_products_examples() {
    let r = ring(Field::Rational, &["y0", "y1", "y2", "y3"]);
    let ys: Vec<RatFunc> = (0..4).map(|i| RatFunc::var(&r, i)).collect();
    assert!(monomial_products_check(&ys).unwrap());

    let r = ring(Field::Rational, &["t"]);
    let one = RatFunc::one(&r);
    assert!(!monomial_products_check(&[one.clone(), one.clone()]).unwrap());

    // a_i = t + i: -a0 - a0 a1 + a0 a2 = -t - t(t+1) + t(t+2) = 0
    let a: Vec<RatFunc> = ["t", "t+1", "t+2"].iter().map(|s| rf(s, &r)).collect();
    let rel = a[0].neg().sub(&a[0].mul(&a[1])).add(&a[0].mul(&a[2]));
    assert!(rel.is_zero());
    assert!(!monomial_products_check(&a).unwrap());

    // binary exponents: every product is a distinct power of t
    let a: Vec<RatFunc> = ["1/t", "t", "t^2", "t^4"].iter().map(|s| rf(s, &r)).collect();
    assert!(monomial_products_check(&a).unwrap());
    // 8 products of degree <= 4 cannot be independent
    let a: Vec<RatFunc> = ["1", "t", "t+1", "t^2+1"].iter().map(|s| rf(s, &r)).collect();
    assert!(!monomial_products_check(&a).unwrap());

    assert!(monomial_products_check(&[one]).is_err());
}

#[test]
fn valuation_witness_examples() {
    let ctx = affine_ctx(Field::Rational, 1, 1);
    let r = ctx.ring();
    let place = Place::at(r, Field::Rational.zero()).unwrap();
    let cands: Vec<RatFunc> = ["t", "1/t", "1/t+1/(t+1)"].iter().map(|s| rf(s, r)).collect();
    let (best, lp) = valuation_witness(ctx.sigma(), &place, 5, &cands).unwrap().unwrap();
    assert_eq!(best, rf("1/t", r));
    assert_eq!(lp.length, Some(0));
    // order of candidates does not matter when lengths differ
    let rev: Vec<RatFunc> = cands.iter().rev().cloned().collect();
    assert_eq!(valuation_witness(ctx.sigma(), &place, 5, &rev).unwrap().unwrap().0, best);
    let (b, lp) = valuation_witness(ctx.sigma(), &place, 5, &cands[2..]).unwrap().unwrap();
    assert_eq!(b, cands[2]);
    assert_eq!(lp.length, Some(1));

    let polys: Vec<RatFunc> = ["t", "t^2+3", "5"].iter().map(|s| rf(s, r)).collect();
    assert!(valuation_witness(ctx.sigma(), &place, 5, &polys).unwrap().is_none());

    let ctx = affine_ctx(Field::Rational, 2, 0);
    let r = ctx.ring();
    let place = Place::at(r, Field::Rational.from_i64(1)).unwrap();
    let (b, lp) = valuation_witness(ctx.sigma(), &place, 6, &[rf("1/(t-1)", r)]).unwrap().unwrap();
    assert_eq!(b, rf("1/(t-1)", r));
    assert_eq!(lp.length, Some(0));
}

#[test]
fn weyl_pair_examples() {
    let ctx = affine_ctx(Field::Rational, 1, 1);
    let r = ctx.ring();
    let t = rf("t", r);
    let pair = weyl_pair_from_additive(&ctx, &t, &RatFunc::one(r)).unwrap();
    assert!(pair.verified());
    assert_eq!(pair.y, OreFraction::from_ratfunc(&ctx, t.clone()));
    let x = OreFraction::x(&ctx);
    assert_eq!(pair.z, pair.y.mul(&x.inv().unwrap()).unwrap());
    // x z - z x = 1 checked directly
    let comm = x.mul(&pair.z).unwrap().sub(&pair.z.mul(&x).unwrap()).unwrap();
    assert_eq!(comm, OreFraction::one(&ctx));
    assert!(matches!(pair.orientation, Some(WeylOrientation::ZyMinusYz) | Some(WeylOrientation::YzMinusZy)));

    let ctx = affine_ctx(Field::Rational, 1, 2);
    let r = ctx.ring();
    let pair = weyl_pair_from_additive(&ctx, &rf("t", r), &rf("2", r)).unwrap();
    assert!(pair.verified());
    assert_eq!(pair.y, OreFraction::from_ratfunc(&ctx, rf("t/2", r)));
    assert_eq!(ctx.apply_sigma(&rf("t/2", r), 1), rf("t/2 + 1", r));

    let ctx = affine_ctx(Field::Rational, 2, 0);
    let r = ctx.ring();
    assert!(matches!(weyl_pair_from_additive(&ctx, &rf("t", r), &RatFunc::one(r)), Err(Error::NotAdditiveEigen)));
    assert!(matches!(weyl_pair_from_additive(&ctx, &rf("t", r), &RatFunc::zero(r)), Err(Error::ZeroArgument)));
    // sigma(t) - t = t holds, but alpha = t is not sigma-fixed: y = 1 and z = x^-1 commute with x
    let pair = weyl_pair_from_additive(&ctx, &rf("t", r), &rf("t", r)).unwrap();
    assert_eq!(pair.y, OreFraction::one(&ctx));
    assert!(!pair.verified());
}
