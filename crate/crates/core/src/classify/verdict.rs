use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::freeness::FreenessCertificate;
use crate::ore::WeylOrientation;
use crate::skew::{LengthProfile, TowerReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum VerdictKind {
    Free,
    PI,
    Commutative,
    Unknown,
}

/// Constructive evidence behind a verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `y`, `z` with a verified Weyl relation.
    WeylPair { y: String, z: String, orientation: WeylOrientation },
    /// A valuation witness `b` feeding a word certificate.
    Valuation { b: String, place: String, profile: LengthProfile },
    /// Strict derivation towers from the listed starting elements.
    Towers { reports: Vec<(String, TowerReport)> },
    /// `sigma`-orbit periods of the generators.
    OrbitPeriods { periods: BTreeMap<String, u64> },
    /// `delta^power` vanishes on every generator; towers are reported alongside.
    NilpotentDerivation { power: u64, towers: Vec<(String, TowerReport)> },
}

impl Witness {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::WeylPair { y, z, orientation } => {
                let relation = match orientation {
                    WeylOrientation::ZyMinusYz => "z*y - y*z = 1",
                    WeylOrientation::YzMinusZy => "y*z - z*y = 1",
                };
                json!({ "type": "weyl-pair", "y": y, "z": z, "relation": relation })
            }
            Witness::Valuation { b, place, profile } => json!({
                "type": "valuation",
                "b": b,
                "place": place,
                "support": profile.support.iter().collect::<Vec<_>>(),
                "length": profile.length,
            }),
            Witness::Towers { reports } => json!({ "type": "delta-towers", "towers": towers_json(reports) }),
            Witness::OrbitPeriods { periods } => json!({ "type": "orbit-periods", "periods": periods }),
            Witness::NilpotentDerivation { power, towers } => {
                json!({ "type": "nilpotent-derivation", "power": power, "towers": towers_json(towers) })
            }
        }
    }
}

fn towers_json(reports: &[(String, TowerReport)]) -> Vec<Value> {
    reports.iter().map(|(a, r)| json!({ "start": a, "report": r.to_json() })).collect()
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub theorem_tag: Option<String>,
    pub witness: Option<Witness>,
    pub certificate: Option<FreenessCertificate>,
    /// `n` with `x^n` central, for PI verdicts.
    pub central_power: Option<u64>,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    pub(crate) fn new(kind: VerdictKind) -> Verdict {
        Verdict { kind, theorem_tag: None, witness: None, certificate: None, central_power: None, diagnostics: Vec::new() }
    }

    pub(crate) fn unknown(diagnostics: Vec<String>) -> Verdict {
        Verdict { diagnostics, ..Verdict::new(VerdictKind::Unknown) }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), json!(self.kind));
        m.insert("theorem_tag".into(), json!(self.theorem_tag));
        if let Some(w) = &self.witness {
            m.insert("witness".into(), w.to_json());
        }
        if let Some(c) = &self.certificate {
            m.insert("certificate".into(), c.to_json());
        }
        if let Some(n) = self.central_power {
            m.insert("central_power".into(), json!(n));
        }
        m.insert("diagnostics".into(), json!(self.diagnostics));
        Value::Object(m)
    }
}
