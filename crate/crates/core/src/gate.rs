//! The evidence gate.
//!
//! A query may be answered only when all five checks hold over the selected
//! evidence set `E`:
//!
//! | code       | condition                                                   |
//! |------------|-------------------------------------------------------------|
//! | `COUNT`    | `|E| ≥ k_min`                                               |
//! | `MEAN_REL` | mean Rel over `E` ≥ `mean_rel_min`                          |
//! | `MEAN_MUE` | mean MUE over `E` ≥ `mean_mue_min`                          |
//! | `ANCHOR`   | some unit has Rel ≥ `tau_rel` and Sim ≥ `tau_sim`           |
//! | `PHRASE`   | if the query matched a high-risk phrase, some unit contains one of the matched phrases |
//!
//! Means over an empty set are 0. Failed checks are reported in the order
//! above.

use serde::Serialize;

use crate::corpus::Corpus;
use crate::lexical::{unit_contains_phrase, Phrase};
use crate::select::EvidenceSet;
use crate::{check_unit_interval, ParamError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateConfig {
    pub k_min: usize,
    pub tau_rel: f64,
    pub tau_sim: f64,
    pub mean_rel_min: f64,
    pub mean_mue_min: f64,
    pub phrase_anchoring: bool,
}

impl Default for GateConfig {
    fn default() -> Self {
        Self {
            k_min: 1,
            tau_rel: 0.30,
            tau_sim: 0.35,
            mean_rel_min: 0.60,
            mean_mue_min: 0.65,
            phrase_anchoring: true,
        }
    }
}

impl GateConfig {
    pub fn validate(&self) -> Result<(), ParamError> {
        check_unit_interval("tau_rel", self.tau_rel)?;
        check_unit_interval("tau_sim", self.tau_sim)?;
        check_unit_interval("mean_rel_min", self.mean_rel_min)?;
        check_unit_interval("mean_mue_min", self.mean_mue_min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReasonCode {
    Count,
    MeanRel,
    MeanMue,
    Anchor,
    Phrase,
}

impl ReasonCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReasonCode::Count => "COUNT",
            ReasonCode::MeanRel => "MEAN_REL",
            ReasonCode::MeanMue => "MEAN_MUE",
            ReasonCode::Anchor => "ANCHOR",
            ReasonCode::Phrase => "PHRASE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Pass,
    Fail,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Pass => "PASS",
            Decision::Fail => "FAIL",
        }
    }
}

/// Set-level statistics the gate decides on.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GateObservation {
    pub n: usize,
    pub max_sim: f64,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub mean_mue: f64,
    pub anchor_ok: bool,
    pub phrase_ok: bool,
}

impl GateObservation {
    /// Summarizes `evidence`; `phrase_ok` is vacuously true when `matched`
    /// is empty or phrase anchoring is off.
    pub fn from_evidence(
        evidence: &EvidenceSet,
        matched: &[Phrase],
        corpus: &Corpus,
        config: &GateConfig,
    ) -> Self {
        let selected = &evidence.selected;
        let n = selected.len();
        let mean = |f: fn(&crate::select::ScoredCandidate) -> f64| {
            if n == 0 {
                0.0
            } else {
                selected.iter().map(f).sum::<f64>() / n as f64
            }
        };
        let max = |f: fn(&crate::select::ScoredCandidate) -> f64| {
            selected.iter().map(f).fold(0.0, f64::max)
        };
        let anchor_ok = selected
            .iter()
            .any(|c| c.rel >= config.tau_rel && c.sim >= config.tau_sim);
        let phrase_ok = !config.phrase_anchoring
            || matched.is_empty()
            || selected.iter().any(|c| {
                corpus
                    .unit(c.unit_id)
                    .is_some_and(|u| matched.iter().any(|p| unit_contains_phrase(u.text(), p)))
            });
        Self {
            n,
            max_sim: max(|c| c.sim),
            max_rel: max(|c| c.rel),
            mean_rel: mean(|c| c.rel),
            mean_mue: mean(|c| c.mue),
            anchor_ok,
            phrase_ok,
        }
    }
}

/// The audit record of one gate evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct GateTrace {
    pub n: usize,
    pub max_sim: f64,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub mean_mue: f64,
    pub anchor_ok: bool,
    pub phrase_ok: bool,
    pub decision: Decision,
    pub reasons: Vec<ReasonCode>,
}

impl GateTrace {
    /// `round(max_sim · 100)`, the percentage column of sweep tables.
    pub fn retrieval_pct(&self) -> u32 {
        (self.max_sim * 100.0).round() as u32
    }

    pub fn passed(&self) -> bool {
        self.decision == Decision::Pass
    }
}

/// Applies the five checks to precomputed statistics.
pub fn decide(obs: &GateObservation, config: &GateConfig) -> GateTrace {
    let checks = [
        (ReasonCode::Count, obs.n >= config.k_min),
        (ReasonCode::MeanRel, obs.mean_rel >= config.mean_rel_min),
        (ReasonCode::MeanMue, obs.mean_mue >= config.mean_mue_min),
        (ReasonCode::Anchor, obs.anchor_ok),
        (ReasonCode::Phrase, obs.phrase_ok),
    ];
    let reasons: Vec<ReasonCode> = checks
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(code, _)| *code)
        .collect();
    GateTrace {
        n: obs.n,
        max_sim: obs.max_sim,
        max_rel: obs.max_rel,
        mean_rel: obs.mean_rel,
        mean_mue: obs.mean_mue,
        anchor_ok: obs.anchor_ok,
        phrase_ok: obs.phrase_ok,
        decision: if reasons.is_empty() {
            Decision::Pass
        } else {
            Decision::Fail
        },
        reasons,
    }
}

/// Evaluates the gate over a selected evidence set. Never errors: any
/// unmet condition is a FAIL with its reason code.
pub fn evaluate_gate(
    evidence: &EvidenceSet,
    matched: &[Phrase],
    corpus: &Corpus,
    config: &GateConfig,
) -> GateTrace {
    decide(
        &GateObservation::from_evidence(evidence, matched, corpus, config),
        config,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::UnitId;
    use crate::select::ScoredCandidate;
    use proptest::prelude::*;

    fn cand(id: u64, sim: f64, rel: f64, mue: f64) -> ScoredCandidate {
        ScoredCandidate { unit_id: UnitId(id), sim, rel, ci: 0.0, mue }
    }

    fn set(c: Vec<ScoredCandidate>) -> EvidenceSet {
        EvidenceSet { selected: c, exhausted: false }
    }

    #[test]
    fn empty_set_fails_count_and_anchor() {
        let t = evaluate_gate(&EvidenceSet::default(), &[], &Corpus::new(), &GateConfig::default());
        assert_eq!(t.decision, Decision::Fail);
        assert_eq!(t.n, 0);
        assert_eq!((t.mean_rel, t.mean_mue), (0.0, 0.0));
        assert!(t.reasons.contains(&ReasonCode::Count));
        assert!(t.reasons.contains(&ReasonCode::Anchor));
        assert!(t.phrase_ok);
    }

    #[test]
    fn weak_topical_set_fails_like_the_condition_example() {
        // six units, top similarity about 0.46, mean Rel about 0.07, no anchor
        let sims = [0.456, 0.44, 0.43, 0.41, 0.40, 0.38];
        let rels = [0.0, 0.163, 0.0, 0.125, 0.0, 0.15];
        let c: Vec<_> = (0..6).map(|i| cand(i, sims[i as usize], rels[i as usize], 0.528)).collect();
        let t = evaluate_gate(&set(c), &[], &Corpus::new(), &GateConfig::default());
        assert_eq!(t.decision, Decision::Fail);
        assert!((t.mean_rel - 0.073).abs() < 1e-3);
        assert!(!t.anchor_ok);
        assert!(t.reasons.contains(&ReasonCode::MeanRel));
        assert!(t.reasons.contains(&ReasonCode::Anchor));
        assert_eq!(t.retrieval_pct(), 46);
    }

    #[test]
    fn reasons_follow_fixed_order() {
        let obs = GateObservation::default();
        let t = decide(&obs, &GateConfig::default());
        let codes: Vec<_> = t.reasons.iter().map(|r| r.as_str()).collect();
        assert_eq!(codes, ["COUNT", "MEAN_REL", "MEAN_MUE", "ANCHOR", "PHRASE"]);
    }

    #[test]
    fn phrase_check_binds_only_on_match() {
        let mut corpus = Corpus::new();
        corpus
            .ingest_records("t", &["Due process requires notice.", "Notice and a hearing."])
            .unwrap();
        let phrase = Phrase::new("due process").unwrap();
        let strong = |id| cand(id, 0.9, 1.0, 0.9);
        let cfg = GateConfig::default();

        let t = evaluate_gate(&set(vec![strong(1)]), std::slice::from_ref(&phrase), &corpus, &cfg);
        assert!(!t.phrase_ok);
        assert_eq!(t.reasons, [ReasonCode::Phrase]);

        let t = evaluate_gate(&set(vec![strong(1), strong(0)]), std::slice::from_ref(&phrase), &corpus, &cfg);
        assert!(t.passed());
        assert!(t.reasons.is_empty());

        let t = evaluate_gate(&set(vec![strong(1)]), &[], &corpus, &cfg);
        assert!(t.phrase_ok && t.passed());

        let off = GateConfig { phrase_anchoring: false, ..cfg };
        let t = evaluate_gate(&set(vec![strong(1)]), &[phrase], &corpus, &off);
        assert!(t.phrase_ok && t.passed());
    }

    #[test]
    fn config_validation() {
        assert!(GateConfig::default().validate().is_ok());
        assert!(GateConfig { tau_rel: 1.5, ..Default::default() }.validate().is_err());
        assert!(GateConfig { mean_mue_min: -0.1, ..Default::default() }.validate().is_err());
    }

    fn arb_set() -> impl Strategy<Value = EvidenceSet> {
        proptest::collection::vec((0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64), 0..7).prop_map(|v| {
            set(v.into_iter().enumerate().map(|(i, (s, r, m))| cand(i as u64, s, r, m)).collect())
        })
    }

    proptest! {
        #[test]
        fn anchor_is_monotone_in_thresholds(e in arb_set(), a in 0.0..=1.0f64, b in 0.0..=1.0f64, da in 0.0..=0.5f64, db in 0.0..=0.5f64) {
            let low = GateConfig { tau_rel: a, tau_sim: b, ..Default::default() };
            let high = GateConfig { tau_rel: (a + da).min(1.0), tau_sim: (b + db).min(1.0), ..Default::default() };
            let c = Corpus::new();
            let lo = evaluate_gate(&e, &[], &c, &low);
            let hi = evaluate_gate(&e, &[], &c, &high);
            prop_assert!(!hi.anchor_ok || lo.anchor_ok);
        }

        #[test]
        fn pass_implies_count_and_anchor(e in arb_set()) {
            let t = evaluate_gate(&e, &[], &Corpus::new(), &GateConfig::default());
            prop_assert_eq!(t.passed(), t.reasons.is_empty());
            if t.passed() {
                prop_assert!(t.n >= 1 && t.anchor_ok);
            }
            prop_assert_eq!(t.clone(), evaluate_gate(&e, &[], &Corpus::new(), &GateConfig::default()));
        }
    }
}
