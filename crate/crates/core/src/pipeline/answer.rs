//! Answer assembly from admitted evidence.
//!
//! [`Extractive`] returns the selected units verbatim with citation tags.
//! [`HttpGenerator`] hands the query and evidence to an external generator
//! and returns its reply unchanged.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::EvidenceRecord;

#[derive(Debug, thiserror::Error)]
pub enum GeneratorError {
    #[error("answer generator unavailable: {0}")]
    Unavailable(String),
    #[error("answer generator protocol error: {0}")]
    Protocol(String),
}

pub trait AnswerAssembler {
    fn assemble(&self, query: &str, evidence: &[EvidenceRecord]) -> Result<String, GeneratorError>;
}

/// One `[doc_id:ordinal] text` line per unit, in selection order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Extractive;

impl AnswerAssembler for Extractive {
    fn assemble(&self, _query: &str, evidence: &[EvidenceRecord]) -> Result<String, GeneratorError> {
        Ok(evidence
            .iter()
            .map(|e| format!("{} {}", e.citation(), e.text))
            .collect::<Vec<_>>()
            .join("\n"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandoffProvenance {
    pub doc: String,
    pub ordinal: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandoffEvidence {
    pub text: String,
    pub provenance: HandoffProvenance,
}

/// Payload POSTed to an external generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandoffRequest {
    pub query: String,
    pub evidence: Vec<HandoffEvidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandoffResponse {
    pub answer: String,
}

impl HandoffRequest {
    pub fn new(query: &str, evidence: &[EvidenceRecord]) -> Self {
        Self {
            query: query.to_owned(),
            evidence: evidence
                .iter()
                .map(|e| HandoffEvidence {
                    text: e.text.clone(),
                    provenance: HandoffProvenance {
                        doc: e.doc.clone(),
                        ordinal: e.ordinal,
                    },
                })
                .collect(),
        }
    }
}

pub struct HttpGenerator {
    endpoint: String,
    agent: ureq::Agent,
}

impl HttpGenerator {
    pub fn new(endpoint: &str, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(true)
            .build()
            .into();
        Self {
            endpoint: endpoint.to_owned(),
            agent,
        }
    }
}

impl AnswerAssembler for HttpGenerator {
    fn assemble(&self, query: &str, evidence: &[EvidenceRecord]) -> Result<String, GeneratorError> {
        let mut response = self
            .agent
            .post(&self.endpoint)
            .send_json(HandoffRequest::new(query, evidence))
            .map_err(|e| GeneratorError::Unavailable(e.to_string()))?;
        let reply: HandoffResponse = response
            .body_mut()
            .read_json()
            .map_err(|e| GeneratorError::Protocol(e.to_string()))?;
        Ok(reply.answer)
    }
}
