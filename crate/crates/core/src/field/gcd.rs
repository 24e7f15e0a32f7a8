//! Multivariate gcd by recursive content / primitive-part pseudo-remainder sequences.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::mpoly::MPoly;
use super::scalar::{Field, Scalar};

/// Modulus for the coprimality pre-check in characteristic 0.
const CHECK_PRIME: u64 = 2_147_483_647;

/// Greatest common divisor, normalized to leading coefficient 1; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() && b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(a.ring());
    }
    if a == b {
        return a.monic();
    }
    gcd_rec(a, b).monic()
}

/// Lowest common multiple, normalized monic.
pub fn poly_lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero(a.ring());
    }
    let g = poly_gcd(a, b);
    a.div_exact(&g).expect("gcd divides").mul(b).monic()
}

fn first_common_var(a: &MPoly, b: &MPoly) -> Option<usize> {
    (0..a.ring().nvars()).find(|&v| a.involves(v) || b.involves(v))
}

fn content_wrt(coeffs: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero(coeffs[0].ring());
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.clone() } else { gcd_rec(&g, c) };
        if g.is_constant() {
            return MPoly::one(g.ring());
        }
    }
    g
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(a.ring());
    }
    let v = first_common_var(a, b).expect("nonconstant");
    if !a.involves(v) {
        let cb = content_wrt(&b.to_univariate(v));
        return gcd_rec(a, &cb);
    }
    if !b.involves(v) {
        let ca = content_wrt(&a.to_univariate(v));
        return gcd_rec(&ca, b);
    }
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let ca = content_wrt(&ua);
    let cb = content_wrt(&ub);
    let gc = gcd_rec(&ca, &cb);
    let pa = divide_coeffs(&ua, &ca);
    let pb = divide_coeffs(&ub, &cb);
    if coprime_mod_check(&pa, &pb) {
        return gc;
    }
    let g = match modular_gcd_q(&pa, &pb) {
        Some(g) => g,
        None => primitive_prs(pa, pb),
    };
    let g = MPoly::from_univariate(a.ring(), v, &g);
    gc.mul(&g)
}

fn divide_coeffs(coeffs: &[MPoly], c: &MPoly) -> Vec<MPoly> {
    let out: Vec<MPoly> = if c.is_one() {
        coeffs.to_vec()
    } else {
        coeffs.iter().map(|x| x.div_exact(c).expect("content divides")).collect()
    };
    normalize_scalar_content(out)
}

fn normalize_scalar_content(coeffs: Vec<MPoly>) -> Vec<MPoly> {
    let Some(lead) = coeffs.iter().rev().find(|c| !c.is_zero()).and_then(|c| c.leading_coeff().cloned()) else {
        return coeffs;
    };
    let content = match lead.field() {
        Field::Rational => rational_content(coeffs.iter().flat_map(|c| c.terms().iter().map(|t| &t.1)), lead.is_negative()),
        Field::Prime(_) => lead,
    };
    if content.is_one() {
        return coeffs;
    }
    let inv = content.inv().expect("nonzero content");
    coeffs.iter().map(|c| c.scale(&inv)).collect()
}

/// gcd of numerators over lcm of denominators, with the requested sign.
fn rational_content<'a, I: Iterator<Item = &'a Scalar>>(coeffs: I, negative: bool) -> Scalar {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in coeffs {
        let q = c.as_rational().expect("rational coefficient");
        num = num.gcd(q.numer());
        den = den.lcm(q.denom());
    }
    if num.is_zero() {
        return Field::Rational.one();
    }
    if negative {
        num = -num;
    }
    Scalar::Q(BigRational::new(num, den))
}

fn trim(v: &mut Vec<MPoly>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b` on coefficient vectors.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lcb = &b[db];
    if r.len() < b.len() {
        return r;
    }
    let mut e = (r.len() - b.len() + 1) as i64;
    while r.len() >= b.len() {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = c.mul(lcb);
        }
        for (i, bc) in b.iter().enumerate() {
            let t = lr.mul(bc);
            r[i + shift] = r[i + shift].sub(&t);
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

fn primitive_prs(mut a: Vec<MPoly>, mut b: Vec<MPoly>) -> Vec<MPoly> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if r.len() == 1 {
            return vec![MPoly::one(b[0].ring())];
        }
        let c = content_wrt(&r);
        a = b;
        b = divide_coeffs(&r, &c);
    }
}

/// `c` in `F_p`, `None` when a denominator vanishes.
fn scalar_mod(c: &Scalar, p: u64) -> Option<u64> {
    match c {
        Scalar::Fp(v, _) => Some(*v),
        Scalar::Q(q) => {
            let m = BigInt::from(p);
            let d = q.denom().mod_floor(&m).to_u64()?;
            if d == 0 {
                return None;
            }
            let n = q.numer().mod_floor(&m).to_u64()?;
            Some(mulm(n, pow_mod(d, p - 2, p), p))
        }
    }
}

fn mulm(u: u64, v: u64, p: u64) -> u64 {
    ((u as u128 * v as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    acc
}

/// Value of `c` at `point` modulo `p`.
fn eval_mod(c: &MPoly, point: &[u64], p: u64) -> Option<u64> {
    let mut acc = 0u64;
    for (m, a) in c.terms() {
        let mut t = scalar_mod(a, p)?;
        for (x, &e) in point.iter().zip(m.iter()) {
            if e > 0 {
                t = mulm(t, pow_mod(*x, e as u64, p), p);
            }
        }
        acc = (acc + t) % p;
    }
    Some(acc)
}

/// `true` only when `a` and `b`, primitive in their main variable, have
/// coprime images under some evaluation of the other variables modulo a
/// prime that keeps both leading coefficients. The image of a common
/// factor of positive degree would survive such an evaluation, so this
/// certifies that the gcd has degree 0.
fn coprime_mod_check(a: &[MPoly], b: &[MPoly]) -> bool {
    let field = a[0].field();
    let p = match field {
        Field::Rational => CHECK_PRIME,
        Field::Prime(q) => q,
    };
    let n = a[0].ring().nvars();
    for attempt in 0..3u64 {
        let point: Vec<u64> = (0..n as u64).map(|i| (3 + attempt * 7919 + i * 104_729 + attempt * i * 31) % p).collect();
        let image = |v: &[MPoly]| -> Option<Vec<u64>> { v.iter().map(|c| eval_mod(c, &point, p)).collect() };
        let (Some(x), Some(y)) = (image(a), image(b)) else {
            return false;
        };
        if x.last() == Some(&0) || y.last() == Some(&0) {
            continue;
        }
        return univariate_coprime_mod(x, y, p);
    }
    false
}

fn univariate_coprime_mod(mut x: Vec<u64>, mut y: Vec<u64>, p: u64) -> bool {
    loop {
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while y.last() == Some(&0) {
            y.pop();
        }
        if y.is_empty() {
            return x.len() <= 1;
        }
        if y.len() == 1 {
            return true;
        }
        let li = pow_mod(*y.last().expect("nonempty"), p - 2, p);
        while x.len() >= y.len() {
            let lx = *x.last().expect("nonempty");
            if lx != 0 {
                let f = mulm(lx, li, p);
                let shift = x.len() - y.len();
                for (i, &yc) in y.iter().enumerate() {
                    let t = mulm(f, yc, p);
                    x[i + shift] = (x[i + shift] + p - t) % p;
                }
            }
            x.pop();
            while x.last() == Some(&0) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
}

/// Deterministic Miller-Rabin; bases 2, 3, 5, 7 suffice below `3.2e9`.
fn is_prime_u32(n: u64) -> bool {
    if n < 2 || n % 2 == 0 {
        return n == 2;
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 3, 5, 7] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// The largest primes below `2^31`, descending. Images beyond this many
/// primes fall back to the pseudo-remainder sequence.
fn modular_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| (0..1u64 << 31).rev().filter(|&n| is_prime_u32(n)).take(160).collect())
}

/// Primitive integer coefficients of a univariate polynomial over `Q`.
fn integer_coeffs(v: &[MPoly]) -> Option<Vec<BigInt>> {
    let qs: Vec<BigRational> = v
        .iter()
        .map(|c| match c.as_constant() {
            Some(s) => s.as_rational().cloned(),
            None => None,
        })
        .collect::<Option<_>>()?;
    let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * &den).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    Some(ints.into_iter().map(|c| c / &content).collect())
}

fn residues(v: &[BigInt], p: u64) -> Vec<u64> {
    let m = BigInt::from(p);
    v.iter().map(|c| c.mod_floor(&m).to_u64().expect("reduced")).collect()
}

/// Monic gcd over `F_p`.
fn gcd_mod(mut x: Vec<u64>, mut y: Vec<u64>, p: u64) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let li = pow_mod(*y.last().expect("nonempty"), p - 2, p);
        while x.len() >= y.len() {
            let lx = *x.last().expect("nonempty");
            let f = mulm(lx, li, p);
            let shift = x.len() - y.len();
            for (i, &yc) in y.iter().enumerate() {
                x[i + shift] = (x[i + shift] + p - mulm(f, yc, p)) % p;
            }
            x.pop();
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    if let Some(&l) = x.last() {
        let li = pow_mod(l, p - 2, p);
        for c in x.iter_mut() {
            *c = mulm(*c, li, p);
        }
    }
    x
}

/// Gcd of univariate polynomials over `Q` by images modulo word-size primes,
/// Chinese remaindering, and a trial-division check. `None` when the inputs
/// are not univariate over `Q`.
fn modular_gcd_q(a: &[MPoly], b: &[MPoly]) -> Option<Vec<MPoly>> {
    if a[0].field() != Field::Rational {
        return None;
    }
    let ring = a[0].ring().clone();
    let ai = integer_coeffs(a)?;
    let bi = integer_coeffs(b)?;
    let lc_gcd = ai.last().expect("nonzero").gcd(bi.last().expect("nonzero"));
    let to_poly = |v: &[BigInt]| -> Vec<MPoly> {
        v.iter().map(|c| MPoly::constant(&ring, Scalar::Q(BigRational::from_integer(c.clone())))).collect()
    };
    let (pa, pb) = (MPoly::from_univariate(&ring, 0, &to_poly(&ai)), MPoly::from_univariate(&ring, 0, &to_poly(&bi)));
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<BigInt>> = None;
    for &p in modular_primes() {
        let pm = BigInt::from(p);
        if (&lc_gcd % &pm).is_zero() {
            continue;
        }
        let g = gcd_mod(residues(&ai, p), residues(&bi, p), p);
        if g.len() == 1 {
            return Some(vec![MPoly::one(&ring)]);
        }
        if !acc.is_empty() && g.len() > acc.len() {
            // unlucky prime
            continue;
        }
        let scale = lc_gcd.mod_floor(&pm).to_u64().expect("reduced");
        let img: Vec<u64> = g.iter().map(|&c| mulm(c, scale, p)).collect();
        if acc.is_empty() || g.len() < acc.len() {
            acc = img.iter().map(|&c| BigInt::from(c)).collect();
            modulus = pm;
            last = None;
            continue;
        }
        // CRT: c + M * ((r - c) * M^-1 mod p)
        let minv = pow_mod(modulus.mod_floor(&pm).to_u64().expect("reduced"), p - 2, p);
        for (c, &r) in acc.iter_mut().zip(&img) {
            let cm = c.mod_floor(&pm).to_u64().expect("reduced");
            let k = mulm((r + p - cm) % p, minv, p);
            *c += &modulus * BigInt::from(k);
        }
        modulus *= &pm;
        let half = &modulus >> 1usize;
        let sym: Vec<BigInt> = acc.iter().map(|c| if *c > half { c - &modulus } else { c.clone() }).collect();
        if last.as_ref() == Some(&sym) {
            let content = sym.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            let prim: Vec<BigInt> = sym.iter().map(|c| c / &content).collect();
            let cand = MPoly::from_univariate(&ring, 0, &to_poly(&prim));
            if pa.div_exact(&cand).is_some() && pb.div_exact(&cand).is_some() {
                return Some(to_poly(&prim));
            }
        }
        last = Some(sym);
    }
    None
}
