use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{flatten_to_k, rank_over_k, RatFunc};
use crate::ore::{weyl_check, OreFraction, WeylOrientation};
use crate::skew::{length_profile, LengthProfile, Place, SkewEndo, SkewPair};

/// Whether `{a_0} ∪ {a_0 a_i1 ... a_im : 0 < i1 < ... < im}` is `k`-independent.
pub fn monomial_products_check(elems: &[RatFunc]) -> Result<bool> {
    if elems.len() < 2 {
        return Err(Error::InvalidArgument("need a_0 and at least one a_i".into()));
    }
    let n = elems.len() - 1;
    if n > 16 {
        return Err(Error::ResourceBoundExceeded(format!("2^{n} products")));
    }
    let products: Vec<Vec<RatFunc>> = (0..1usize << n)
        .map(|mask| {
            let mut p = elems[0].clone();
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    p = p.mul(&elems[i + 1]);
                }
            }
            vec![p]
        })
        .collect();
    let m = flatten_to_k(&products)?;
    Ok(rank_over_k(m.field, &m.rows).rank == products.len())
}

/// A candidate of minimal length among those with an untruncated nonempty
/// support; ties go to the earliest candidate.
pub fn valuation_witness(
    s: &SkewEndo,
    pl: &Place,
    window: i64,
    candidates: &[RatFunc],
) -> Result<Option<(RatFunc, LengthProfile)>> {
    let mut best: Option<(RatFunc, LengthProfile)> = None;
    for c in candidates {
        if c.is_zero() {
            continue;
        }
        let lp = length_profile(s, pl, c, window)?;
        let Some(len) = lp.length else { continue };
        if best.as_ref().is_none_or(|(_, b)| len < b.length.expect("qualified")) {
            best = Some((c.clone(), lp));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct WeylPair {
    pub y: OreFraction,
    pub z: OreFraction,
    /// Orientation in which `x z - z x = 1` holds, when it does.
    pub orientation: Option<WeylOrientation>,
}

impl WeylPair {
    pub fn verified(&self) -> bool {
        self.orientation.is_some()
    }
}

/// From `sigma(u) - u = alpha`: `y = u alpha^-1` and `z = y x^-1`, checked
/// against `x z - z x = 1`.
pub fn weyl_pair_from_additive(ctx: &Arc<SkewPair>, u: &RatFunc, alpha: &RatFunc) -> Result<WeylPair> {
    if alpha.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if ctx.apply_sigma(u, 1).sub(u) != *alpha {
        return Err(Error::NotAdditiveEigen);
    }
    let y_elt = u.div(alpha)?;
    let y = OreFraction::from_ratfunc(ctx, y_elt);
    let x = OreFraction::x(ctx);
    let z = y.mul(&x.inv()?)?;
    // weyl_check(y', z') tests z' y' - y' z' = 1; here z' = x, y' = z
    let orientation = weyl_check(&z, &x)?;
    Ok(WeylPair { y, z, orientation })
}
