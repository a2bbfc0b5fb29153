use std::hash::Hasher;

use fnv::FnvHasher;

use super::{EmbedError, EmbeddingProvider, EmbeddingVector};
use crate::lexical::{tokenize, WordList};
use crate::ParamError;

pub const DEFAULT_DIMENSION: usize = 256;

/// Initial FNV-1a state. Fixed so that vectors never change between runs.
pub const HASH_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// Signed feature hashing over content tokens.
///
/// Each token (bundled stopwords removed, or all tokens if that leaves
/// none) is hashed with 64-bit FNV-1a from [`HASH_SEED`]. The hash modulo
/// the dimension picks the bucket and its top bit picks the sign. The
/// bucket counts are then L2-normalized.
#[derive(Debug, Clone)]
pub struct HashingEmbedder {
    dimension: usize,
}

impl HashingEmbedder {
    pub fn new(dimension: usize) -> Result<Self, ParamError> {
        if dimension == 0 {
            return Err(ParamError::new("dimension", "must be positive"));
        }
        Ok(Self { dimension })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    fn vectorize(&self, text: &str) -> EmbeddingVector {
        let tokens = tokenize(text);
        let stopwords = WordList::bundled_stopwords();
        let mut content: Vec<&str> = tokens
            .iter()
            .map(String::as_str)
            .filter(|t| !stopwords.contains(t))
            .collect();
        if content.is_empty() {
            content = tokens.iter().map(String::as_str).collect();
        }

        let mut raw = vec![0.0; self.dimension];
        for token in content {
            let mut hasher = FnvHasher::with_key(HASH_SEED);
            hasher.write(token.as_bytes());
            let h = hasher.finish();
            let bucket = (h % self.dimension as u64) as usize;
            raw[bucket] += if h >> 63 == 0 { 1.0 } else { -1.0 };
        }
        EmbeddingVector::normalized(raw)
    }
}

impl EmbeddingProvider for HashingEmbedder {
    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbedError> {
        Ok(self.vectorize(text))
    }
}
