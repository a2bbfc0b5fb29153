//! JSON trace output.
//!
//! Keys appear in a fixed order and every real number is written with six
//! decimal places, so traces from identical runs are byte-identical.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::QueryOutcome;
use crate::corpus::{EvidenceUnit, UnitId};
use crate::gate::{GateTrace, ReasonCode};
use crate::select::{MueWeights, ScoredCandidate};

/// A selected unit with its text, provenance and signals.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceRecord {
    pub unit_id: UnitId,
    pub doc: String,
    pub ordinal: usize,
    pub text: String,
    pub sim: f64,
    pub rel: f64,
    pub ci: f64,
    pub mue: f64,
}

impl EvidenceRecord {
    pub fn new(unit: &EvidenceUnit, scored: &ScoredCandidate) -> Self {
        Self {
            unit_id: unit.id(),
            doc: unit.doc_id().to_owned(),
            ordinal: unit.ordinal(),
            text: unit.text().to_owned(),
            sim: scored.sim,
            rel: scored.rel,
            ci: scored.ci,
            mue: scored.mue,
        }
    }

    pub fn citation(&self) -> String {
        format!("[{}:{}]", self.doc, self.ordinal)
    }
}

/// A real number written as `{:.6}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Fixed(pub f64);

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite value {}", self.0)));
        }
        RawValue::from_string(format!("{:.6}", self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

pub(crate) fn fixed_weights(w: &MueWeights) -> [Fixed; 3] {
    w.as_array().map(Fixed)
}

fn flag(b: bool) -> u8 {
    u8::from(b)
}

#[derive(Serialize)]
struct EvidenceJson<'a> {
    doc: &'a str,
    ordinal: usize,
    text: &'a str,
    sim: Fixed,
    rel: Fixed,
    ci: Fixed,
    mue: Fixed,
}

#[derive(Serialize)]
pub(crate) struct GateJson {
    pub n: usize,
    pub mean_rel: Fixed,
    pub mean_mue: Fixed,
    pub max_sim: Fixed,
    pub max_rel: Fixed,
    pub retrieval_pct: u32,
    pub anchor_ok: u8,
    pub phrase_ok: u8,
    pub gate: &'static str,
    pub reasons: Vec<ReasonCode>,
}

impl From<&GateTrace> for GateJson {
    fn from(t: &GateTrace) -> Self {
        Self {
            n: t.n,
            mean_rel: Fixed(t.mean_rel),
            mean_mue: Fixed(t.mean_mue),
            max_sim: Fixed(t.max_sim),
            max_rel: Fixed(t.max_rel),
            retrieval_pct: t.retrieval_pct(),
            anchor_ok: flag(t.anchor_ok),
            phrase_ok: flag(t.phrase_ok),
            gate: t.decision.as_str(),
            reasons: t.reasons.clone(),
        }
    }
}

#[derive(Serialize)]
struct OutcomeJson<'a> {
    question: &'a str,
    weights: [Fixed; 3],
    #[serde(flatten)]
    gate: GateJson,
    evidence: Vec<EvidenceJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    answer: Option<&'a str>,
}

impl QueryOutcome {
    /// Single-line JSON trace. The `answer` key is absent on FAIL.
    pub fn to_json(&self) -> String {
        let json = OutcomeJson {
            question: &self.question,
            weights: fixed_weights(&self.weights),
            gate: GateJson::from(&self.trace),
            evidence: self
                .evidence
                .iter()
                .map(|e| EvidenceJson {
                    doc: &e.doc,
                    ordinal: e.ordinal,
                    text: &e.text,
                    sim: Fixed(e.sim),
                    rel: Fixed(e.rel),
                    ci: Fixed(e.ci),
                    mue: Fixed(e.mue),
                })
                .collect(),
            answer: self.answer.as_deref(),
        };
        serde_json::to_string(&json).expect("trace values are finite")
    }
}
