use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::RatFunc;
use crate::ore::{OreFraction, OrePoly};
use crate::skew::SkewPair;

/// A bit tuple `(i_1, ..., i_r)`, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordIndex {
    bits: Vec<bool>,
}

impl WordIndex {
    pub fn empty() -> WordIndex {
        WordIndex { bits: Vec::new() }
    }

    pub fn new(bits: &[u8]) -> Result<WordIndex> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("word bits must be 0 or 1".into()));
        }
        Ok(WordIndex { bits: bits.iter().map(|&b| b == 1).collect() })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn first(&self) -> Option<bool> {
        self.bits.first().copied()
    }

    /// `I'`: the tuple without its first bit.
    pub fn truncated(&self) -> WordIndex {
        WordIndex { bits: self.bits.iter().skip(1).copied().collect() }
    }

    /// All indices of length `<= max_len`: shorter first, then lexicographic.
    pub fn enumerate(max_len: usize) -> Vec<WordIndex> {
        let mut out = vec![WordIndex::empty()];
        for r in 1..=max_len {
            for code in 0..(1usize << r) {
                let bits = (0..r).map(|j| (code >> (r - 1 - j)) & 1 == 1).collect();
                out.push(WordIndex { bits });
            }
        }
        out
    }

    /// `2^(L+1) - 1`.
    pub fn count(max_len: usize) -> usize {
        (1usize << (max_len + 1)) - 1
    }
}

impl fmt::Display for WordIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.bits.iter().map(|&b| if b { "1" } else { "0" }).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn one_minus_x(ctx: &Arc<SkewPair>) -> OrePoly {
    OrePoly::one(ctx).sub_unchecked(&OrePoly::x(ctx))
}

/// `P_I = (1-x) b^-i_r ... (1-x) b^-i_1`, so that `W_I = P_I^-1`.
fn word_inverse(ctx: &Arc<SkewPair>, idx: &WordIndex, b_inv: &RatFunc) -> OrePoly {
    let factor0 = one_minus_x(ctx);
    let factor1 = factor0.mul_unchecked(&OrePoly::constant(ctx, b_inv.clone()));
    let mut p = OrePoly::one(ctx);
    for &bit in idx.bits() {
        p = if bit { &factor1 } else { &factor0 }.mul_unchecked(&p);
    }
    p
}

fn check_b(ctx: &Arc<SkewPair>, b: &RatFunc) -> Result<RatFunc> {
    if b.ring() != ctx.ring() {
        return Err(Error::ContextMismatch);
    }
    b.inv().map_err(|_| Error::ZeroArgument)
}

/// `W_I = b^i_1 (1-x)^-1 b^i_2 (1-x)^-1 ... b^i_r (1-x)^-1`, `W_() = 1`.
pub fn build_word_w(ctx: &Arc<SkewPair>, idx: &WordIndex, b: &RatFunc) -> Result<OreFraction> {
    let b_inv = check_b(ctx, b)?;
    OreFraction::new(word_inverse(ctx, idx, &b_inv), OrePoly::one(ctx))
}

/// `V_I = (1-x)^-1 W_I`, `V_() = (1-x)^-1`.
pub fn build_word_v(ctx: &Arc<SkewPair>, idx: &WordIndex, b: &RatFunc) -> Result<OreFraction> {
    let b_inv = check_b(ctx, b)?;
    let den = word_inverse(ctx, idx, &b_inv).mul_unchecked(&one_minus_x(ctx));
    OreFraction::new(den, OrePoly::one(ctx))
}

/// Reference construction of `W_I` as a left-to-right product of fractions.
pub fn build_word_w_by_products(ctx: &Arc<SkewPair>, idx: &WordIndex, b: &RatFunc) -> Result<OreFraction> {
    check_b(ctx, b)?;
    let g = OreFraction::from_poly(one_minus_x(ctx)).inv()?;
    let bf = OreFraction::from_ratfunc(ctx, b.clone());
    let mut acc = OreFraction::one(ctx);
    for &bit in idx.bits() {
        if bit {
            acc = acc.mul(&bf)?;
        }
        acc = acc.mul(&g)?;
    }
    Ok(acc)
}
