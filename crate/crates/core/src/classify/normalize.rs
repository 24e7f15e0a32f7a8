use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::RatFunc;
use crate::ore::OrePoly;
use crate::skew::{SkewEndo, SkewPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationKind {
    PureAutomorphism,
    PureDerivation,
    /// `delta` was inner and has been absorbed into `x`.
    Shifted,
}

impl NormalizationKind {
    pub fn describe(&self) -> &'static str {
        match self {
            NormalizationKind::PureAutomorphism => "pure automorphism type",
            NormalizationKind::PureDerivation => "pure derivation type",
            NormalizationKind::Shifted => "shifted to pure automorphism type",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Normalization {
    pub pair: Arc<SkewPair>,
    /// `x' = x + shift` in the original ring.
    pub shift: RatFunc,
    /// `c = (b - sigma(b))^-1 delta(b)`; `shift = sign * c`.
    pub c: RatFunc,
    pub sign: i8,
    pub kind: NormalizationKind,
}

impl Normalization {
    pub fn to_json(&self) -> Value {
        let pres = self.pair.presentation();
        let sigma: serde_json::Map<String, Value> = pres
            .vars()
            .iter()
            .zip(self.pair.sigma().images())
            .map(|(v, img)| (v.clone(), json!(img.to_string())))
            .collect();
        let delta: serde_json::Map<String, Value> = pres
            .vars()
            .iter()
            .zip(self.pair.delta().images())
            .map(|(v, img)| (v.clone(), json!(img.to_string())))
            .collect();
        json!({
            "report": self.kind.describe(),
            "shift": self.shift.to_string(),
            "c": self.c.to_string(),
            "sign": self.sign,
            "sigma": sigma,
            "delta": delta,
        })
    }
}

/// `x' a = sigma(a) x'` for every generator `a`, expanded in the original ring.
pub fn shift_relation_holds(ctx: &Arc<SkewPair>, shift: &RatFunc) -> bool {
    let xp = OrePoly::x(ctx).add_unchecked(&OrePoly::constant(ctx, shift.clone()));
    ctx.presentation().generators().iter().all(|a| {
        let a_poly = OrePoly::constant(ctx, a.clone());
        let sa = OrePoly::constant(ctx, ctx.apply_sigma(a, 1));
        xp.mul_unchecked(&a_poly) == sa.mul_unchecked(&xp)
    })
}

/// Rewrites a mixed `(sigma, delta)` as a pure automorphism by replacing `x`
/// with `x + eps*c`; the sign is chosen by expansion.
pub fn normalize_presentation(ctx: &Arc<SkewPair>) -> Result<Normalization> {
    let ring = ctx.ring();
    let zero = RatFunc::zero(ring);
    if ctx.is_pure_automorphism() {
        let kind = NormalizationKind::PureAutomorphism;
        return Ok(Normalization { pair: ctx.clone(), shift: zero.clone(), c: zero, sign: 1, kind });
    }
    if ctx.is_pure_derivation() {
        let kind = NormalizationKind::PureDerivation;
        return Ok(Normalization { pair: ctx.clone(), shift: zero.clone(), c: zero, sign: 1, kind });
    }
    let pres = ctx.presentation();
    let gens = pres.generators();
    let b = gens
        .iter()
        .find(|g| ctx.apply_sigma(g, 1) != **g)
        .ok_or_else(|| Error::InvariantViolation("sigma moves no generator".into()))?;
    let c = b.sub(&ctx.apply_sigma(b, 1)).inv()?.mul(&ctx.apply_delta(b));
    for (i, y) in gens.iter().enumerate() {
        let want = c.mul(&y.sub(&ctx.apply_sigma(y, 1)));
        if ctx.apply_delta(y) != want {
            return Err(Error::InconsistentDerivation(format!(
                "delta({v}) != c*({v} - sigma({v})) with c = {c}",
                v = pres.vars()[i]
            )));
        }
    }
    for sign in [1i8, -1] {
        let shift = if sign == 1 { c.clone() } else { c.neg() };
        if shift_relation_holds(ctx, &shift) {
            let sigma = SkewEndo::new(pres, ctx.sigma().images().to_vec(), ctx.sigma().inverse_images().to_vec())?;
            let pair = Arc::new(SkewPair::pure_automorphism(sigma));
            return Ok(Normalization { pair, shift, c, sign, kind: NormalizationKind::Shifted });
        }
    }
    Err(Error::InvariantViolation(format!("neither x + {c} nor x - {c} twists by sigma alone")))
}
