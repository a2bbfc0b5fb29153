//! Exact inner-product retrieval over unit embeddings.
//!
//! Candidates are ranked by clamped cosine, descending, with ties broken by
//! ascending unit id, so the candidate list is a total order and a larger
//! `cand_k` only ever extends it.

mod persist;

use std::cmp::Ordering;
use std::path::Path;

use crate::corpus::{Corpus, UnitId};
use crate::embed::{dot, EmbedError, EmbeddingProvider, EmbeddingVector};

pub use persist::{IndexError, FORMAT_VERSION, MAGIC};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub unit_id: UnitId,
    pub sim: f64,
}

/// Descending similarity, then ascending unit id.
pub fn candidate_order(a: &Candidate, b: &Candidate) -> Ordering {
    b.sim.total_cmp(&a.sim).then(a.unit_id.cmp(&b.unit_id))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorIndex {
    dimension: usize,
    entries: Vec<(UnitId, EmbeddingVector)>,
}

impl VectorIndex {
    /// Embeds every unit of `corpus` in unit id order.
    pub fn build(corpus: &Corpus, provider: &dyn EmbeddingProvider) -> Result<Self, EmbedError> {
        let texts: Vec<&str> = corpus.units().iter().map(|u| u.text()).collect();
        let vectors = provider.embed_batch(&texts)?;
        let dimension = match vectors.first() {
            Some(v) => v.dimension(),
            // an empty index still needs a dimension for query checks
            None => provider.embed("")?.dimension(),
        };
        let mut entries = Vec::with_capacity(vectors.len());
        for (unit, vector) in corpus.units().iter().zip(vectors) {
            if vector.dimension() != dimension {
                return Err(EmbedError::DimensionMismatch {
                    expected: dimension,
                    found: vector.dimension(),
                });
            }
            entries.push((unit.id(), vector));
        }
        Ok(Self { dimension, entries })
    }

    pub(crate) fn from_parts(dimension: usize, entries: Vec<(UnitId, EmbeddingVector)>) -> Self {
        Self { dimension, entries }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(UnitId, EmbeddingVector)] {
        &self.entries
    }

    pub fn vector(&self, id: UnitId) -> Option<&EmbeddingVector> {
        self.entries
            .binary_search_by_key(&id, |(uid, _)| *uid)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// Clamped cosine between two indexed units; 0 if either is missing.
    pub fn pair_sim(&self, a: UnitId, b: UnitId) -> f64 {
        match (self.vector(a), self.vector(b)) {
            (Some(x), Some(y)) => dot(x.components(), y.components()).clamp(0.0, 1.0),
            _ => 0.0,
        }
    }

    /// The `cand_k` most similar units to `query`, best first.
    pub fn top_candidates(
        &self,
        query: &EmbeddingVector,
        cand_k: usize,
    ) -> Result<Vec<Candidate>, EmbedError> {
        if query.dimension() != self.dimension {
            return Err(EmbedError::DimensionMismatch {
                expected: self.dimension,
                found: query.dimension(),
            });
        }
        if cand_k == 0 {
            return Ok(Vec::new());
        }
        let q = query.components();
        let mut scored: Vec<Candidate> = self
            .entries
            .iter()
            .map(|(id, v)| Candidate {
                unit_id: *id,
                sim: dot(q, v.components()).clamp(0.0, 1.0),
            })
            .collect();
        if cand_k < scored.len() {
            scored.select_nth_unstable_by(cand_k - 1, candidate_order);
            scored.truncate(cand_k);
        }
        scored.sort_unstable_by(candidate_order);
        Ok(scored)
    }

    pub fn save(&self, path: &Path) -> Result<(), IndexError> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, IndexError> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}
