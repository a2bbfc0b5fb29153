//! Unit-norm sentence embeddings and the clamped cosine similarity `Sim`.
//!
//! Two providers implement [`EmbeddingProvider`]: [`HashingEmbedder`], a
//! deterministic signed feature-hashing model that needs no network, and
//! [`RemoteEmbedder`], a JSON-over-HTTP client for an external sentence
//! encoder. Both return vectors with Euclidean norm 1, or the zero vector
//! for text without tokens.

mod hashing;
mod remote;

use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use hashing::{HashingEmbedder, DEFAULT_DIMENSION, HASH_SEED};
pub use remote::{EmbedRequest, EmbedResponse, RemoteEmbedder};

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("embedding service unavailable: {0}")]
    RemoteUnavailable(String),
    #[error("embedding service protocol error: {0}")]
    Protocol(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    components: Vec<f64>,
}

impl EmbeddingVector {
    pub fn zero(dimension: usize) -> Self {
        Self {
            components: vec![0.0; dimension],
        }
    }

    /// L2-normalizes `raw`; an all-zero input stays zero.
    pub fn normalized(mut raw: Vec<f64>) -> Self {
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            raw.iter_mut().for_each(|x| *x /= norm);
        }
        Self { components: raw }
    }

    /// Wraps components that are already unit-norm or zero, as read back
    /// from an index file.
    pub(crate) fn from_components(components: Vec<f64>) -> Self {
        Self { components }
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&x| x == 0.0)
    }
}

/// Cosine similarity of two unit-norm vectors, clamped to `[0, 1]`.
///
/// Negative cosines map to 0; a zero vector is similar to nothing.
pub fn sim(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64, EmbedError> {
    if a.dimension() != b.dimension() {
        return Err(EmbedError::DimensionMismatch {
            expected: a.dimension(),
            found: b.dimension(),
        });
    }
    Ok(dot(&a.components, &b.components).clamp(0.0, 1.0))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub trait EmbeddingProvider: Send + Sync {
    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbedError>;

    /// Embeds several texts; results are in input order.
    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbedError> {
        texts.iter().map(|t| self.embed(t)).collect()
    }
}

/// Which provider to build and how.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ProviderConfig {
    LocalHash { dimension: usize },
    Remote { endpoint: String, timeout_ms: u64 },
}

impl Default for ProviderConfig {
    fn default() -> Self {
        ProviderConfig::LocalHash {
            dimension: DEFAULT_DIMENSION,
        }
    }
}

impl ProviderConfig {
    pub fn build(&self) -> Result<Box<dyn EmbeddingProvider>, crate::ParamError> {
        Ok(match self {
            ProviderConfig::LocalHash { dimension } => Box::new(HashingEmbedder::new(*dimension)?),
            ProviderConfig::Remote {
                endpoint,
                timeout_ms,
            } => Box::new(RemoteEmbedder::new(
                endpoint,
                Duration::from_millis(*timeout_ms),
            )?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(components: Vec<f64>) -> EmbeddingVector {
        EmbeddingVector::normalized(components)
    }

    #[test]
    fn self_similarity_is_one() {
        let v = unit(vec![0.3, -0.2, 0.9]);
        assert!((sim(&v, &v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn opposite_and_orthogonal_vectors_clamp_to_zero() {
        let v = unit(vec![1.0, 2.0]);
        let neg = unit(vec![-1.0, -2.0]);
        assert_eq!(sim(&v, &neg).unwrap(), 0.0);
        assert_eq!(sim(&unit(vec![1.0, 0.0]), &unit(vec![0.0, 1.0])).unwrap(), 0.0);
    }

    #[test]
    fn zero_vector_is_similar_to_nothing() {
        let z = EmbeddingVector::zero(3);
        assert!(z.is_zero());
        assert_eq!(sim(&z, &unit(vec![1.0, 0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(EmbeddingVector::normalized(vec![0.0; 3]), z);
    }

    #[test]
    fn dimension_mismatch() {
        let err = sim(&EmbeddingVector::zero(2), &EmbeddingVector::zero(3)).unwrap_err();
        assert!(matches!(err, EmbedError::DimensionMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn provider_config_json_shape() {
        let json = serde_json::to_string(&ProviderConfig::default()).unwrap();
        assert_eq!(json, r#"{"mode":"local_hash","dimension":256}"#);
        let remote: ProviderConfig =
            serde_json::from_str(r#"{"mode":"remote","endpoint":"http://x/embed","timeout_ms":5}"#).unwrap();
        assert!(matches!(remote, ProviderConfig::Remote { timeout_ms: 5, .. }));
    }

    proptest! {
        #[test]
        fn sim_symmetric_and_bounded(
            a in proptest::collection::vec(-1.0f64..1.0, 8),
            b in proptest::collection::vec(-1.0f64..1.0, 8),
        ) {
            let (a, b) = (unit(a), unit(b));
            let ab = sim(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert_eq!(ab, sim(&b, &a).unwrap());
        }
    }
}
