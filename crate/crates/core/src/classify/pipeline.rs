use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::field::{MPoly, Mono, RatFunc};
use crate::freeness::{freeness_certify_with, weyl_pair_from_additive, FreenessCertificate, Limits};
use crate::ore::{central_power_check, weyl_check, OreFraction, OrePoly};
use crate::skew::{
    affine_form, delta_tower, fixed_power_check, length_profile, orbit_analyze, simple_places, FieldPresentation,
    LengthProfile, OrbitReport, Place, SkewEndo, SkewPair,
};

use super::normalize::normalize_presentation;
use super::verdict::{Verdict, VerdictKind, Witness};

/// Tunables for the classification pipelines.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub orbit_bound: u64,
    /// Half-width of the window used for valuation supports.
    pub window: i64,
    pub word_length: usize,
    /// Tower depth; `None` means one more than the number of generators.
    pub tower_depth: Option<usize>,
    /// Run bounded word certificates alongside Weyl evidence.
    pub certify: bool,
    /// Extra witness candidates tried before the default pool.
    pub candidates: Vec<RatFunc>,
    /// Largest `p^m` tried as a nilpotency exponent of `delta` in char `p`.
    pub max_nilpotent_power: u64,
    pub limits: Limits,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            orbit_bound: 64,
            window: 16,
            word_length: 3,
            tower_depth: None,
            certify: true,
            candidates: Vec::new(),
            max_nilpotent_power: 1 << 10,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub pair: Arc<SkewPair>,
    pub options: Options,
}

impl ProblemSpec {
    pub fn new(pair: Arc<SkewPair>) -> ProblemSpec {
        ProblemSpec { pair, options: Options::default() }
    }

    pub fn presentation(&self) -> &FieldPresentation {
        self.pair.presentation()
    }
}

/// Routes by the shape of `(sigma, delta)`; mixed pairs are normalized first.
pub fn classify(spec: &ProblemSpec) -> Result<Verdict> {
    let ctx = &spec.pair;
    if ctx.is_pure_automorphism() {
        return classify_automorphism(spec);
    }
    if ctx.is_pure_derivation() {
        return classify_derivation(spec);
    }
    let norm = normalize_presentation(ctx)?;
    let inner = ProblemSpec { pair: norm.pair.clone(), options: spec.options.clone() };
    let mut v = classify_automorphism(&inner)?;
    v.diagnostics.insert(0, format!("normalized: x' = x + ({}) twists by sigma alone", norm.shift));
    Ok(v)
}

pub fn classify_automorphism(spec: &ProblemSpec) -> Result<Verdict> {
    let ctx = &spec.pair;
    if !ctx.is_pure_automorphism() {
        return Err(Error::RequiresPureAutomorphism);
    }
    let opts = &spec.options;
    let s = ctx.sigma();
    let pres = ctx.presentation();
    if s.is_identity() {
        let mut v = Verdict::new(VerdictKind::Commutative);
        v.theorem_tag = Some("trivial twist: commutative".into());
        return Ok(v);
    }
    let reports: Vec<OrbitReport> = pres
        .generators()
        .iter()
        .map(|g| orbit_analyze(s, g, opts.orbit_bound))
        .collect::<Result<_>>()?;
    let mut diagnostics: Vec<String> =
        pres.vars().iter().zip(&reports).map(|(v, r)| format!("orbit of {v}: {}", r.to_json())).collect();

    let periods: Option<BTreeMap<String, u64>> = pres
        .vars()
        .iter()
        .zip(&reports)
        .map(|(v, r)| match r {
            OrbitReport::Finite { period } => Some((v.clone(), *period)),
            _ => None,
        })
        .collect();
    if let Some(periods) = periods {
        let n = periods.values().fold(1u64, |acc, p| acc.lcm(p));
        if n > u32::MAX as u64 || !fixed_power_check(s, n)? || !central_power_check(ctx, n as u32)? {
            diagnostics.push(format!("common period {n} failed the central power check"));
            return Ok(Verdict::unknown(diagnostics));
        }
        let mut v = Verdict::new(VerdictKind::PI);
        v.theorem_tag = Some("finite sigma-order: x^n central".into());
        v.witness = Some(Witness::OrbitPeriods { periods });
        v.central_power = Some(n);
        v.diagnostics = diagnostics;
        return Ok(v);
    }

    let infinite: Vec<usize> = (0..reports.len()).filter(|&i| matches!(reports[i], OrbitReport::Infinite { .. })).collect();
    if infinite.is_empty() {
        diagnostics.push("no generator has a certified orbit type; bound exhausted".into());
        return Ok(Verdict::unknown(diagnostics));
    }
    let p = pres.field().characteristic();
    if p != 0 && fixed_power_check(s, p)? {
        // sigma^p = 1 on generators: the char-p side condition cannot hold
        diagnostics.push(format!("sigma^{p} fixes every generator"));
        return Ok(Verdict::unknown(diagnostics));
    }

    let mut weyl: Option<Witness> = None;
    if p == 0 {
        for &i in &infinite {
            let Some((alpha, beta)) = affine_form(s, i) else { continue };
            if !alpha.is_one() || beta.is_zero() {
                continue;
            }
            let beta = RatFunc::constant(ctx.ring(), beta);
            let pair = weyl_pair_from_additive(ctx, &pres.generator(i), &beta)?;
            if let Some(orientation) = pair.orientation {
                // orientation was computed for the ordered pair (z, x)
                weyl = Some(Witness::WeylPair { y: pair.z.to_string(), z: "X".into(), orientation });
                break;
            }
        }
    }

    let mut cert_free: Option<(Witness, FreenessCertificate)> = None;
    if weyl.is_none() || opts.certify {
        for &i in &infinite {
            match valuation_route(ctx, i, opts, &mut diagnostics)? {
                Some(found) => {
                    cert_free = Some(found);
                    break;
                }
                None => continue,
            }
        }
    }

    if let Some(w) = weyl {
        let mut v = Verdict::new(VerdictKind::Free);
        v.theorem_tag = Some("additive generator: Weyl escape".into());
        v.witness = Some(w);
        if let Some((_, cert)) = cert_free {
            v.certificate = Some(cert);
        }
        v.diagnostics = diagnostics;
        return Ok(v);
    }
    if let Some((w, cert)) = cert_free {
        let mut v = Verdict::new(VerdictKind::Free);
        v.theorem_tag = Some("infinite orbit: valuation length witness".into());
        v.witness = Some(w);
        v.certificate = Some(cert);
        v.diagnostics = diagnostics;
        return Ok(v);
    }
    diagnostics.push("infinite orbit found but no independent word certificate".into());
    Ok(Verdict::unknown(diagnostics))
}

/// The restriction `k(y_i)` of a multivariate presentation when `sigma`
/// preserves it; univariate inputs pass through unchanged.
fn univariate_slice(ctx: &Arc<SkewPair>, i: usize) -> Result<Option<Arc<SkewPair>>> {
    let pres = ctx.presentation();
    if pres.is_univariate() {
        return Ok(Some(ctx.clone()));
    }
    let sub = FieldPresentation::new(pres.field(), vec![pres.vars()[i].clone()])?;
    let img = restrict(&ctx.sigma().images()[i], i, &sub);
    let inv = restrict(&ctx.sigma().inverse_images()[i], i, &sub);
    let (Some(img), Some(inv)) = (img, inv) else { return Ok(None) };
    let sigma = SkewEndo::new(&sub, vec![img], vec![inv])?;
    Ok(Some(Arc::new(SkewPair::pure_automorphism(sigma))))
}

fn restrict(f: &RatFunc, i: usize, sub: &FieldPresentation) -> Option<RatFunc> {
    let ring = sub.ring();
    let one_var = |p: &MPoly| -> Option<MPoly> {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            if m.iter().enumerate().any(|(j, &e)| j != i && e > 0) {
                return None;
            }
            let mono: Mono = std::iter::once(m[i]).collect();
            terms.push((mono, c.clone()));
        }
        Some(MPoly::from_terms(ring, terms))
    };
    RatFunc::new(one_var(f.num())?, one_var(f.den())?).ok()
}

/// Tries `b = 1/p(t)` at places seeded from the data of `sigma`, shortest
/// length first, until a word certificate comes back independent.
fn valuation_route(
    ctx: &Arc<SkewPair>,
    i: usize,
    opts: &Options,
    diagnostics: &mut Vec<String>,
) -> Result<Option<(Witness, FreenessCertificate)>> {
    let Some(slice) = univariate_slice(ctx, i)? else {
        diagnostics.push(format!("sigma does not preserve k({})", ctx.presentation().vars()[i]));
        return Ok(None);
    };
    let s = slice.sigma();
    let ring = slice.ring().clone();
    let field = ring.field();
    let mut places: Vec<Place> = Vec::new();
    for c in [0i64, 1, -1, 2, -2] {
        let pl = Place::at(&ring, field.from_i64(c))?;
        if !places.contains(&pl) {
            places.push(pl);
        }
    }
    for f in s.images().iter().chain(s.inverse_images()) {
        for p in simple_places(f.num()).into_iter().chain(simple_places(f.den())) {
            if !places.contains(&p) {
                places.push(p);
            }
        }
    }
    let mut user: Vec<RatFunc> = Vec::new();
    if ctx.presentation().is_univariate() {
        user.extend(opts.candidates.iter().cloned());
    }

    let mut found: Vec<(i64, RatFunc, Place, LengthProfile)> = Vec::new();
    for pl in &places {
        let Place::Finite(poly) = pl else { continue };
        let own = RatFunc::from_poly(poly.clone()).inv()?;
        for b in user.iter().chain(std::iter::once(&own)) {
            let lp = length_profile(s, pl, b, opts.window)?;
            if let Some(len) = lp.length {
                if !found.iter().any(|(_, fb, _, _)| fb == b) {
                    found.push((len, b.clone(), pl.clone(), lp));
                }
            }
        }
    }
    found.sort_by_key(|(len, ..)| *len);
    for (_, b, pl, lp) in found.into_iter().take(3) {
        let cert = match freeness_certify_with(&slice, &b, opts.word_length, &opts.limits) {
            Ok(c) => c,
            Err(e @ Error::ResourceBoundExceeded(_)) => {
                diagnostics.push(format!("certificate for b = {b}: {e}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        if cert.is_independent() {
            let w = Witness::Valuation { b: b.to_string(), place: pl.to_string(), profile: lp };
            return Ok(Some((w, cert)));
        }
        diagnostics.push(format!(
            "words for b = {b} at L = {}: rank {} of {}, dependent",
            cert.max_length, cert.rank, cert.word_count
        ));
    }
    Ok(None)
}

/// Whether `x^n a = a x^n` for every generator `a`, by expansion.
pub fn x_power_central(ctx: &Arc<SkewPair>, n: u32) -> bool {
    let xn = OrePoly::x(ctx).pow(n);
    ctx.presentation().generators().into_iter().all(|y| {
        let yp = OrePoly::constant(ctx, y);
        xn.mul_unchecked(&yp) == yp.mul_unchecked(&xn)
    })
}

pub fn classify_derivation(spec: &ProblemSpec) -> Result<Verdict> {
    let ctx = &spec.pair;
    if !ctx.is_pure_derivation() {
        return Err(Error::RequiresPureDerivation);
    }
    let opts = &spec.options;
    let pres = ctx.presentation();
    if ctx.delta().is_zero() {
        let mut v = Verdict::new(VerdictKind::Commutative);
        v.theorem_tag = Some("zero derivation: commutative".into());
        return Ok(v);
    }
    let gens = pres.generators();
    let p = pres.field().characteristic();
    if p == 0 {
        let i = (0..gens.len()).find(|&i| !ctx.apply_delta(&gens[i]).is_zero()).expect("delta is nonzero");
        let a = &gens[i];
        let da = ctx.apply_delta(a);
        let y = OreFraction::from_ratfunc(ctx, a.clone());
        let z = OreFraction::x(ctx).mul(&OreFraction::from_ratfunc(ctx, da.inv()?))?;
        let Some(orientation) = weyl_check(&y, &z)? else {
            return Err(Error::InvariantViolation(format!("Weyl relation fails for y = {a}")));
        };
        let mut v = Verdict::new(VerdictKind::Free);
        v.theorem_tag = Some("nonzero derivation in char 0: Weyl pair".into());
        v.witness = Some(Witness::WeylPair { y: y.to_string(), z: z.to_string(), orientation });
        if opts.certify {
            match freeness_certify_with(ctx, a, opts.word_length, &opts.limits) {
                Ok(c) if c.is_independent() => v.certificate = Some(c),
                Ok(c) => v.diagnostics.push(format!(
                    "words for b = {a} at L = {}: rank {} of {}, dependent",
                    c.max_length, c.rank, c.word_count
                )),
                Err(e @ Error::ResourceBoundExceeded(_)) => v.diagnostics.push(format!("certificate for b = {a}: {e}")),
                Err(e) => return Err(e),
            }
        }
        return Ok(v);
    }

    let depth = opts.tower_depth.unwrap_or(gens.len() + 1);
    let towers: Vec<(String, crate::skew::TowerReport)> = pres
        .vars()
        .iter()
        .zip(&gens)
        .map(|(v, g)| Ok((v.clone(), delta_tower(ctx.delta(), g, depth)?)))
        .collect::<Result<_>>()?;
    let mut diagnostics: Vec<String> = towers
        .iter()
        .map(|(v, r)| {
            let strict = r.levels.iter().take_while(|l| **l == crate::skew::LevelStatus::Strict).count();
            format!("tower from {v}: strict through level {strict} of {}", r.levels.len())
        })
        .collect();

    // delta^(p^m) is again a derivation, so vanishing on generators makes x^(p^m) central
    let mut power = p;
    while power <= opts.max_nilpotent_power {
        let vanishes = gens.iter().all(|g| {
            let mut cur = g.clone();
            for _ in 0..power {
                cur = ctx.apply_delta(&cur);
                if cur.is_zero() {
                    return true;
                }
            }
            false
        });
        if vanishes {
            if power > u32::MAX as u64 || !x_power_central(ctx, power as u32) {
                return Err(Error::InvariantViolation(format!("x^{power} is not central")));
            }
            diagnostics.push(format!("delta^{power} vanishes on every generator"));
            let mut v = Verdict::new(VerdictKind::PI);
            v.theorem_tag = Some("nilpotent derivation in char p: x^n central".into());
            v.witness = Some(Witness::NilpotentDerivation { power, towers });
            v.central_power = Some(power);
            v.diagnostics = diagnostics;
            return Ok(v);
        }
        power = power.saturating_mul(p);
    }
    diagnostics.push(format!(
        "K has finite degree over the constants, so every tower stalls; no central x^(p^m) found up to {}",
        opts.max_nilpotent_power
    ));
    Ok(Verdict::unknown(diagnostics))
}
