//! Output documents. Every rational is written as a `"p/q"` string (integers
//! without the denominator) so reports never pass through binary floats.

use std::fmt;

use coherence_core::rational::{self, Rational};
use coherence_core::{CoherenceReport, ExtensionInterval};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// An exact rational that serializes as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        struct QVisitor;

        impl Visitor<'_> for QVisitor {
            type Value = Q;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\", a finite decimal string, or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                rational::parse(v).map(Q).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(rational::int(v)))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Q, E> {
                Err(E::custom(format!("float {v} is not exact; quote it as a string")))
            }
        }

        d.deserialize_any(QVisitor)
    }
}

fn qs(values: &[Rational]) -> Vec<Q> {
    values.iter().cloned().map(Q).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<LevelDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<IntervalDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compound: Option<CompoundDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constituents: Vec<ConstituentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationDoc>,
}

impl ReportDocument {
    pub fn new(command: &str) -> ReportDocument {
        ReportDocument {
            command: command.into(),
            verdict: None,
            trace: Vec::new(),
            diagnostics: None,
            interval: None,
            compound: None,
            constituents: Vec::new(),
            simulation: None,
        }
    }

    pub fn from_check(report: &CoherenceReport) -> ReportDocument {
        let mut doc = ReportDocument::new("check");
        doc.verdict = Some(verdict(report.coherent).into());
        doc.trace = report
            .trace
            .iter()
            .map(|l| LevelDoc {
                indices: l.indices.clone(),
                solvable: l.solvable,
                upper_masses: qs(&l.upper_masses),
                zero_mass: l.zero_mass.clone(),
                witness: l.witness.as_deref().map(qs),
            })
            .collect();
        doc.diagnostics = report.gain_diagnostic.as_ref().map(|g| DiagnosticDoc {
            indices: g.indices.clone(),
            s: qs(&g.s),
            gains: qs(&g.gains),
        });
        doc
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report documents always serialize")
    }

    pub fn from_toml(text: &str) -> Result<ReportDocument, toml::de::Error> {
        toml::from_str(text)
    }
}

pub fn verdict(coherent: bool) -> &'static str {
    if coherent {
        "coherent"
    } else {
        "incoherent"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub indices: Vec<usize>,
    pub solvable: bool,
    #[serde(default)]
    pub upper_masses: Vec<Q>,
    #[serde(default)]
    pub zero_mass: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Q>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticDoc {
    /// Members engaged at the failing level.
    pub indices: Vec<usize>,
    /// Bet coefficients, one per member, zero outside the failing level.
    pub s: Vec<Q>,
    /// Gain on each constituent of the failing level.
    pub gains: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalDoc {
    pub target: String,
    pub lower: Q,
    pub upper: Q,
    pub attained: bool,
}

impl IntervalDoc {
    pub fn new(target: &str, iv: &ExtensionInterval) -> IntervalDoc {
        IntervalDoc {
            target: target.into(),
            lower: Q(iv.lower.clone()),
            upper: Q(iv.upper.clone()),
            attained: iv.attained,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompoundDoc {
    pub kind: String,
    pub operands: Vec<usize>,
    pub given: String,
    pub cases: Vec<CaseDoc>,
    /// Closed-form prevision bounds for the compound.
    pub lower: Q,
    pub upper: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseDoc {
    pub event: String,
    pub value: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstituentDoc {
    /// Zero for the constituent outside every conditioning event.
    pub id: usize,
    pub assignment: String,
    pub worlds: usize,
    /// One entry per member: a value, or "outside".
    pub cells: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDoc {
    pub rng: String,
    pub seed: u64,
    pub trials: u64,
    pub max_len: u32,
    pub mean: f64,
    pub std_error: f64,
    pub indeterminate_count: u64,
    pub indeterminate_fraction: f64,
    /// `P(C|A)` computed exactly from the inputs.
    pub exact: Q,
}
