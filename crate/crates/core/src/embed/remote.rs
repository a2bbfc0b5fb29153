use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{EmbedError, EmbeddingProvider, EmbeddingVector};
use crate::ParamError;

/// Body of the POST sent to the embedding service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedRequest {
    pub texts: Vec<String>,
}

/// Expected reply: one vector per requested text, in request order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedResponse {
    pub vectors: Vec<Vec<f64>>,
}

/// Client for an external sentence encoder.
///
/// Vectors are normalized here whatever the server returns, blank texts
/// always map to the zero vector, and every text is fetched at most once
/// per client so repeated lookups within a run are identical.
pub struct RemoteEmbedder {
    endpoint: String,
    agent: ureq::Agent,
    cache: Mutex<HashMap<String, EmbeddingVector>>,
    // held for the duration of a fetch so concurrent callers never race
    // two requests for the same text
    fetch: Mutex<()>,
    dimension: OnceLock<usize>,
}

impl RemoteEmbedder {
    pub fn new(endpoint: &str, timeout: Duration) -> Result<Self, ParamError> {
        if endpoint.is_empty() {
            return Err(ParamError::new("endpoint", "must not be empty"));
        }
        if timeout.is_zero() {
            return Err(ParamError::new("timeout_ms", "must be positive"));
        }
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(true)
            .build()
            .into();
        Ok(Self {
            endpoint: endpoint.to_owned(),
            agent,
            cache: Mutex::new(HashMap::new()),
            fetch: Mutex::new(()),
            dimension: OnceLock::new(),
        })
    }

    /// Dimension learned from the first response, if any.
    pub fn dimension(&self) -> Option<usize> {
        self.dimension.get().copied()
    }

    fn cached(&self, text: &str) -> Option<EmbeddingVector> {
        self.cache.lock().expect("cache lock").get(text).cloned()
    }

    fn request(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EmbedError> {
        let body = EmbedRequest {
            texts: texts.to_vec(),
        };
        let mut response = self
            .agent
            .post(&self.endpoint)
            .send_json(&body)
            .map_err(|e| EmbedError::RemoteUnavailable(e.to_string()))?;
        let reply: EmbedResponse = response
            .body_mut()
            .read_json()
            .map_err(|e| EmbedError::Protocol(e.to_string()))?;
        if reply.vectors.len() != texts.len() {
            return Err(EmbedError::Protocol(format!(
                "requested {} vectors, received {}",
                texts.len(),
                reply.vectors.len()
            )));
        }
        Ok(reply.vectors)
    }

    fn check_dimension(&self, found: usize) -> Result<usize, EmbedError> {
        if found == 0 {
            return Err(EmbedError::Protocol("empty vector".into()));
        }
        let expected = *self.dimension.get_or_init(|| found);
        if expected != found {
            return Err(EmbedError::DimensionMismatch { expected, found });
        }
        Ok(expected)
    }
}

impl EmbeddingProvider for RemoteEmbedder {
    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbedError> {
        let mut out = self.embed_batch(&[text])?;
        Ok(out.remove(0))
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbedError> {
        let _guard = self.fetch.lock().expect("fetch lock");

        let mut missing: Vec<String> = Vec::new();
        for text in texts {
            if self.cached(text).is_none() && !missing.iter().any(|m| m == text) {
                missing.push((*text).to_owned());
            }
        }

        if !missing.is_empty() {
            let raw = self.request(&missing)?;
            let mut fresh = Vec::with_capacity(raw.len());
            for (text, components) in missing.into_iter().zip(raw) {
                let dimension = self.check_dimension(components.len())?;
                if components.iter().any(|x| !x.is_finite()) {
                    return Err(EmbedError::Protocol(format!(
                        "non-finite component in vector for {text:?}"
                    )));
                }
                let vector = if text.trim().is_empty() {
                    EmbeddingVector::zero(dimension)
                } else {
                    EmbeddingVector::normalized(components)
                };
                fresh.push((text, vector));
            }
            self.cache.lock().expect("cache lock").extend(fresh);
        }

        let cache = self.cache.lock().expect("cache lock");
        Ok(texts.iter().map(|t| cache[*t].clone()).collect())
    }
}
