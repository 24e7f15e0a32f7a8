use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::RatFunc;

use super::presentation::SkewDerivation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum LevelStatus {
    Strict,
    Stalled,
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TowerReport {
    /// `b_i = delta^i(a)` for `i < depth`.
    pub elements: Vec<RatFunc>,
    /// Status of `F_i ⊊ F_{i+1}` for `i = 1 .. depth-1`, first entry is level 1.
    pub levels: Vec<LevelStatus>,
}

impl TowerReport {
    pub fn all_strict(&self) -> bool {
        self.levels.iter().all(|&l| l == LevelStatus::Strict)
    }

    pub fn stalled(&self) -> bool {
        self.levels.contains(&LevelStatus::Stalled)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "elements": self.elements.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "levels": self.levels.iter().enumerate().map(|(i, l)| json!({ "level": i + 1, "status": l })).collect::<Vec<_>>(),
        })
    }
}

/// Iterated derivatives of `a` with a decidable strictness test: a level is
/// Strict when `b_0, ..., b_i` are pairwise distinct generators, and Stalled
/// from the first `b_i` that is constant or repeats an earlier element.
pub fn delta_tower(d: &SkewDerivation, a: &RatFunc, depth: usize) -> Result<TowerReport> {
    if !d.twist().is_identity() {
        return Err(Error::RequiresPureDerivation);
    }
    if a.field().characteristic() == 0 {
        return Err(Error::WrongCharacteristic);
    }
    if depth < 1 {
        return Err(Error::InvalidArgument("tower depth must be at least 1".into()));
    }
    let mut elements = vec![a.clone()];
    for _ in 1..depth {
        let next = d.apply(elements.last().unwrap());
        elements.push(next);
    }
    let mut levels = Vec::with_capacity(depth.saturating_sub(1));
    let mut stalled = false;
    for i in 1..depth {
        let b = &elements[i];
        if stalled || b.is_constant() || elements[..i].contains(b) {
            stalled = true;
            levels.push(LevelStatus::Stalled);
            continue;
        }
        let gens: Option<Vec<usize>> = elements[..=i].iter().map(|e| e.as_variable()).collect();
        let strict = match gens {
            Some(mut g) => {
                g.sort_unstable();
                g.windows(2).all(|w| w[0] != w[1])
            }
            None => false,
        };
        levels.push(if strict { LevelStatus::Strict } else { LevelStatus::Undecided });
    }
    Ok(TowerReport { elements, levels })
}
