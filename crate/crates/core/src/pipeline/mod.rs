//! End-to-end query execution: analyze → retrieve → score → select → gate
//! → answer (on PASS only).

mod answer;
mod bundle;
mod config;
mod sweep;
mod trace;

use crate::concept::CorpusStats;
use crate::corpus::{Corpus, CorpusError, UnitId};
use crate::embed::{EmbedError, EmbeddingProvider, EmbeddingVector};
use crate::gate::{decide, evaluate_gate, GateObservation, GateTrace};
use crate::index::{Candidate, IndexError, VectorIndex};
use crate::lexical::{ContentTermSet, Lexicon, Phrase};
use crate::select::{due_select_traced, DueStep, EvidenceSet, MueWeights, ScoredCandidate, Scorer};
use crate::ParamError;

pub use answer::{AnswerAssembler, Extractive, GeneratorError, HandoffEvidence, HandoffRequest, HandoffResponse, HttpGenerator};
pub use bundle::{load_bundle, save_bundle, BundleManifest, BUNDLE_VERSION};
pub use config::{ConfigOverrides, PipelineConfig};
pub use sweep::{SweepRow, SweepStats, SweepTable};
pub use trace::EvidenceRecord;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Config(#[from] ParamError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("index bundle: {0}")]
    Bundle(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Everything derived from the raw query before retrieval.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryAnalysis {
    pub raw: String,
    pub terms: ContentTermSet,
    pub matched_phrases: Vec<Phrase>,
    pub query_vec: EmbeddingVector,
}

/// Result of one query. `answer` is present exactly when the gate passed.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    pub question: String,
    pub weights: MueWeights,
    pub trace: GateTrace,
    pub evidence: Vec<EvidenceRecord>,
    pub exhausted: bool,
    pub answer: Option<String>,
}

/// Intermediate results of every stage, for `explain`.
#[derive(Debug, Clone, PartialEq)]
pub struct Explanation {
    pub analysis: QueryAnalysis,
    pub candidates: Vec<Candidate>,
    pub scored: Vec<ScoredCandidate>,
    pub steps: Vec<DueStep>,
    pub evidence: EvidenceSet,
    pub trace: GateTrace,
}

/// A corpus with its statistics, index and configuration, ready to answer
/// queries. Immutable once built; `&Engine` can be shared across threads.
pub struct Engine {
    corpus: Corpus,
    stats: CorpusStats,
    index: VectorIndex,
    lexicon: Lexicon,
    provider: Box<dyn EmbeddingProvider>,
    config: PipelineConfig,
}

impl Engine {
    /// Embeds the whole corpus with the configured provider.
    pub fn build(corpus: Corpus, config: PipelineConfig) -> Result<Self, PipelineError> {
        config.validate()?;
        let provider = config.provider.build()?;
        let index = VectorIndex::build(&corpus, provider.as_ref())?;
        Self::assemble(corpus, index, provider, config)
    }

    /// Uses a prebuilt index. The index must cover exactly the corpus units
    /// and come from the same provider configuration.
    pub fn from_parts(corpus: Corpus, index: VectorIndex, config: PipelineConfig) -> Result<Self, PipelineError> {
        config.validate()?;
        let provider = config.provider.build()?;
        Self::assemble(corpus, index, provider, config)
    }

    /// Uses a caller-supplied provider, e.g. a custom sentence encoder.
    pub fn with_provider(
        corpus: Corpus,
        provider: Box<dyn EmbeddingProvider>,
        config: PipelineConfig,
    ) -> Result<Self, PipelineError> {
        config.validate()?;
        let index = VectorIndex::build(&corpus, provider.as_ref())?;
        Self::assemble(corpus, index, provider, config)
    }

    /// Loads a bundle written by [`save_bundle`]. The provider recorded in
    /// the bundle replaces the one in `config`.
    pub fn open(dir: &std::path::Path, mut config: PipelineConfig) -> Result<Self, PipelineError> {
        let (manifest, corpus, index) = load_bundle(dir)?;
        config.provider = manifest.provider;
        Self::from_parts(corpus, index, config)
    }

    fn assemble(
        corpus: Corpus,
        index: VectorIndex,
        provider: Box<dyn EmbeddingProvider>,
        config: PipelineConfig,
    ) -> Result<Self, PipelineError> {
        let ids_match = index.len() == corpus.len()
            && index
                .entries()
                .iter()
                .zip(corpus.units())
                .all(|((id, _), u)| *id == u.id());
        if !ids_match {
            return Err(PipelineError::Bundle(format!(
                "index has {} entries for {} corpus units",
                index.len(),
                corpus.len()
            )));
        }
        let lexicon = config.lexicon()?;
        let stats = CorpusStats::build(&corpus, &lexicon.stopwords);
        Ok(Self {
            corpus,
            stats,
            index,
            lexicon,
            provider,
            config,
        })
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn index(&self) -> &VectorIndex {
        &self.index
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn analyze(&self, query: &str) -> Result<QueryAnalysis, EmbedError> {
        Ok(QueryAnalysis {
            raw: query.to_owned(),
            terms: self.lexicon.content_terms(query),
            matched_phrases: self.lexicon.match_phrases(query),
            query_vec: self.provider.embed(query)?,
        })
    }

    /// Runs every stage up to and including the gate with the given weights.
    pub fn explain_with(&self, analysis: QueryAnalysis, weights: MueWeights) -> Result<Explanation, EmbedError> {
        let candidates = self.index.top_candidates(&analysis.query_vec, self.config.cand_k)?;
        let scorer = Scorer {
            corpus: &self.corpus,
            stats: &self.stats,
            lexicon: &self.lexicon,
            weights,
            fuzzy: self.config.fuzzy,
        };
        let scored = scorer.score_candidates(&candidates, &analysis.terms);
        let (evidence, steps) =
            due_select_traced(&scored, |a, b| self.index.pair_sim(a, b), &self.config.due);
        let trace = evaluate_gate(&evidence, &analysis.matched_phrases, &self.corpus, &self.config.gate);
        Ok(Explanation {
            analysis,
            candidates,
            scored,
            steps,
            evidence,
            trace,
        })
    }

    pub fn explain(&self, query: &str) -> Result<Explanation, EmbedError> {
        self.explain_with(self.analyze(query)?, self.config.weights)
    }

    /// Runs the query and, on PASS, assembles an extractive answer.
    pub fn run_query(&self, query: &str) -> Result<QueryOutcome, PipelineError> {
        self.run_query_with(query, &Extractive)
    }

    /// Runs the query; `assembler` is invoked only on PASS and sees only the
    /// selected evidence.
    pub fn run_query_with(
        &self,
        query: &str,
        assembler: &dyn AnswerAssembler,
    ) -> Result<QueryOutcome, PipelineError> {
        let explanation = self.explain(query)?;
        let evidence = self.evidence_records(&explanation.evidence);
        let answer = if explanation.trace.passed() {
            Some(assembler.assemble(query, &evidence)?)
        } else {
            None
        };
        Ok(QueryOutcome {
            question: query.to_owned(),
            weights: self.config.weights,
            trace: explanation.trace,
            evidence,
            exhausted: explanation.evidence.exhausted,
            answer,
        })
    }

    pub fn evidence_records(&self, evidence: &EvidenceSet) -> Vec<EvidenceRecord> {
        evidence
            .selected
            .iter()
            .filter_map(|c| {
                let unit = self.corpus.unit(c.unit_id)?;
                Some(EvidenceRecord::new(unit, c))
            })
            .collect()
    }

    pub fn unit_text(&self, id: UnitId) -> Option<&str> {
        self.corpus.unit(id).map(|u| u.text())
    }
}

/// Gate decision from externally supplied statistics, bypassing retrieval.
pub fn gate_from_statistics(obs: &GateObservation, config: &PipelineConfig) -> GateTrace {
    decide(obs, &config.gate)
}
