//! Deterministic evidence selection for retrieval-augmented question answering.
//!
//! A query runs through five fixed stages:
//!
//! 1. exact top-k retrieval of candidate evidence units by cosine similarity
//!    ([`index`]),
//! 2. per-unit Meaning–Utility Estimation, a convex combination of
//!    conceptual importance, semantic similarity and lexical relevance
//!    ([`select::MueWeights`]),
//! 3. Diversity–Utility Estimation, a greedy loop that suppresses
//!    near-duplicates ([`select::due_select`]),
//! 4. the evidence gate ([`gate::evaluate_gate`]),
//! 5. answer assembly from the admitted units only, and only on PASS
//!    ([`pipeline::Engine::run_query`]).
//!
//! Every stage is a pure function of the corpus, the configuration and the
//! query, so identical inputs produce byte-identical traces.
//!
//! ```
//! use evidence_gate::corpus::Corpus;
//! use evidence_gate::pipeline::{Engine, PipelineConfig};
//!
//! let mut corpus = Corpus::new();
//! corpus
//!     .ingest_document("rights", "Human rights are universal. Human rights protect human dignity.")
//!     .unwrap();
//! let engine = Engine::build(corpus, PipelineConfig::default()).unwrap();
//! let outcome = engine.run_query("What is human rights?").unwrap();
//! assert!(outcome.answer.is_some());
//! assert_eq!(outcome.trace.n, 2);
//! ```

pub mod concept;
pub mod corpus;
pub mod embed;
pub mod gate;
pub mod index;
pub mod lexical;
pub mod pipeline;
pub mod select;

#[cfg(doctest)]
mod book;

/// A configuration value outside its legal range.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid parameter `{name}`: {reason}")]
pub struct ParamError {
    pub name: &'static str,
    pub reason: String,
}

impl ParamError {
    pub(crate) fn new(name: &'static str, reason: impl Into<String>) -> Self {
        Self {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<(), ParamError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ParamError::new(name, format!("{value} is outside [0, 1]")))
    }
}
