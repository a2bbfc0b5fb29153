//! Meaning–Utility Estimation and Diversity–Utility Estimation.
//!
//! Each candidate receives a fixed convex combination of three signals,
//!
//! ```text
//! MUE(u) = λ·CI(u) + μ·Sim(u, Q) + ν·Rel(u, Q)
//! ```
//!
//! and [`due_select`] then accumulates evidence greedily while suppressing
//! near-duplicates of what has already been chosen.

mod due;

use serde::Serialize;

use crate::concept::CorpusStats;
use crate::corpus::{Corpus, UnitId};
use crate::index::Candidate;
use crate::lexical::{ContentTermSet, Lexicon};
use crate::ParamError;

pub use due::{due_select, due_select_traced, DueParams, DueStep, EvidenceSet};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Fixed signal weights: `lambda` on CI, `mu` on Sim, `nu` on Rel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MueWeights {
    lambda: f64,
    mu: f64,
    nu: f64,
}

impl Default for MueWeights {
    fn default() -> Self {
        Self {
            lambda: 0.5,
            mu: 0.3,
            nu: 0.2,
        }
    }
}

impl MueWeights {
    /// Weights must be non-negative and sum to 1 (within 1e-9).
    pub fn new(lambda: f64, mu: f64, nu: f64) -> Result<Self, ParamError> {
        for (name, w) in [("lambda", lambda), ("mu", mu), ("nu", nu)] {
            if !(w.is_finite() && w >= 0.0) {
                return Err(ParamError::new(name, format!("{w} is not a non-negative weight")));
            }
        }
        let sum = lambda + mu + nu;
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(ParamError::new("weights", format!("sum to {sum}, not 1")));
        }
        Ok(Self { lambda, mu, nu })
    }

    /// Parses `"0.5,0.3,0.2"`.
    pub fn parse(s: &str) -> Result<Self, ParamError> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| ParamError::new("weights", format!("`{s}`: {e}")))?;
        match parts[..] {
            [l, m, n] => Self::new(l, m, n),
            _ => Err(ParamError::new("weights", format!("`{s}` needs three values"))),
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.lambda, self.mu, self.nu]
    }

    pub fn mue(&self, ci: f64, sim: f64, rel: f64) -> f64 {
        self.lambda * ci + self.mu * sim + self.nu * rel
    }
}

/// The signal bundle of one candidate unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoredCandidate {
    pub unit_id: UnitId,
    pub sim: f64,
    pub rel: f64,
    pub ci: f64,
    pub mue: f64,
}

impl ScoredCandidate {
    pub fn new(unit_id: UnitId, sim: f64, rel: f64, ci: f64, weights: &MueWeights) -> Self {
        Self {
            unit_id,
            sim,
            rel,
            ci,
            mue: weights.mue(ci, sim, rel),
        }
    }
}

/// Everything needed to score candidates of one corpus.
#[derive(Debug, Clone, Copy)]
pub struct Scorer<'a> {
    pub corpus: &'a Corpus,
    pub stats: &'a CorpusStats,
    pub lexicon: &'a Lexicon,
    pub weights: MueWeights,
    pub fuzzy: bool,
}

impl Scorer<'_> {
    /// One scored entry per candidate, in input order. Each unit is scored
    /// on its own; no signal depends on the other candidates.
    pub fn score_candidates(
        &self,
        candidates: &[Candidate],
        terms: &ContentTermSet,
    ) -> Vec<ScoredCandidate> {
        candidates
            .iter()
            .filter_map(|c| {
                let unit = self.corpus.unit(c.unit_id)?;
                let rel = self.lexicon.rel(unit.text(), terms, self.fuzzy);
                let ci = self.stats.ci(unit.text());
                Some(ScoredCandidate::new(c.unit_id, c.sim, rel, ci, &self.weights))
            })
            .collect()
    }
}
