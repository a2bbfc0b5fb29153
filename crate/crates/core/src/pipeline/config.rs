use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::embed::ProviderConfig;
use crate::gate::GateConfig;
use crate::lexical::{Lexicon, PhraseList, WordList, DEFAULT_FUZZY_THRESHOLD, DEFAULT_MIN_TERM_LEN};
use crate::select::{DueParams, MueWeights};
use crate::{check_unit_interval, ParamError};

/// Every tunable of a run. Values are fixed for the lifetime of an
/// [`Engine`](super::Engine).
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub weights: MueWeights,
    pub due: DueParams,
    pub gate: GateConfig,
    /// Candidates retrieved before scoring.
    pub cand_k: usize,
    pub provider: ProviderConfig,
    pub fuzzy: bool,
    pub fuzzy_threshold: f64,
    pub min_term_len: usize,
    pub stopwords: Option<PathBuf>,
    pub scaffold: Option<PathBuf>,
    pub phrases: Option<PathBuf>,
    /// JSON field read from structured records.
    pub text_field: String,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            weights: MueWeights::default(),
            due: DueParams::default(),
            gate: GateConfig::default(),
            cand_k: 30,
            provider: ProviderConfig::default(),
            fuzzy: true,
            fuzzy_threshold: DEFAULT_FUZZY_THRESHOLD,
            min_term_len: DEFAULT_MIN_TERM_LEN,
            stopwords: None,
            scaffold: None,
            phrases: None,
            text_field: "text".into(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ParamError> {
        self.due.validate()?;
        self.gate.validate()?;
        check_unit_interval("fuzzy_threshold", self.fuzzy_threshold)?;
        if self.cand_k < self.due.top_k {
            return Err(ParamError::new(
                "cand_k",
                format!("{} is smaller than top_k {}", self.cand_k, self.due.top_k),
            ));
        }
        Ok(())
    }

    /// Reads a flat TOML file and applies it over the defaults.
    pub fn load(path: &Path) -> Result<Self, ParamError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ParamError::new("config", format!("{}: {e}", path.display())))?;
        let mut config = Self::default();
        ConfigOverrides::from_toml(&text)?.apply(&mut config)?;
        Ok(config)
    }

    /// Word lists named by the configuration, bundled ones otherwise.
    pub fn lexicon(&self) -> Result<Lexicon, ParamError> {
        let read_list = |name: &'static str, path: &Path| {
            WordList::load(path).map_err(|e| ParamError::new(name, format!("{}: {e}", path.display())))
        };
        let mut lexicon = Lexicon {
            min_term_len: self.min_term_len,
            fuzzy_threshold: self.fuzzy_threshold,
            ..Lexicon::default()
        };
        if let Some(p) = &self.stopwords {
            lexicon.stopwords = read_list("stopwords", p)?;
        }
        if let Some(p) = &self.scaffold {
            lexicon.scaffold = read_list("scaffold", p)?;
        }
        if let Some(p) = &self.phrases {
            lexicon.phrases = PhraseList::load(p)?;
        }
        Ok(lexicon)
    }
}

/// One optional value per configuration key. Parsed from the config file
/// and from command-line flags; later sources override earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub top_k: Option<usize>,
    pub gamma: Option<f64>,
    pub delta_dup: Option<f64>,
    pub cand_k: Option<usize>,
    pub k_min: Option<usize>,
    pub tau_rel: Option<f64>,
    pub tau_sim: Option<f64>,
    pub mean_rel_min: Option<f64>,
    pub mean_mue_min: Option<f64>,
    pub phrase_anchoring: Option<bool>,
    pub fuzzy: Option<bool>,
    pub fuzzy_threshold: Option<f64>,
    pub min_term_len: Option<usize>,
    pub embedding: Option<String>,
    pub dimension: Option<usize>,
    pub endpoint: Option<String>,
    pub timeout_ms: Option<u64>,
    pub stopwords: Option<PathBuf>,
    pub scaffold: Option<PathBuf>,
    pub phrases: Option<PathBuf>,
    pub text_field: Option<String>,
}

impl ConfigOverrides {
    pub fn from_toml(text: &str) -> Result<Self, ParamError> {
        toml::from_str(text).map_err(|e| ParamError::new("config", e.to_string()))
    }

    pub fn set_weights(&mut self, weights: MueWeights) {
        let [l, m, n] = weights.as_array();
        (self.lambda, self.mu, self.nu) = (Some(l), Some(m), Some(n));
    }

    /// Applies every present key, then validates the result.
    pub fn apply(&self, config: &mut PipelineConfig) -> Result<(), ParamError> {
        if self.lambda.is_some() || self.mu.is_some() || self.nu.is_some() {
            let [l, m, n] = config.weights.as_array();
            config.weights = MueWeights::new(
                self.lambda.unwrap_or(l),
                self.mu.unwrap_or(m),
                self.nu.unwrap_or(n),
            )?;
        }
        macro_rules! set {
            ($($key:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = &self.$key { $target = v.clone(); })*
            };
        }
        set! {
            top_k => config.due.top_k,
            gamma => config.due.gamma,
            delta_dup => config.due.delta_dup,
            cand_k => config.cand_k,
            k_min => config.gate.k_min,
            tau_rel => config.gate.tau_rel,
            tau_sim => config.gate.tau_sim,
            mean_rel_min => config.gate.mean_rel_min,
            mean_mue_min => config.gate.mean_mue_min,
            phrase_anchoring => config.gate.phrase_anchoring,
            fuzzy => config.fuzzy,
            fuzzy_threshold => config.fuzzy_threshold,
            min_term_len => config.min_term_len,
            text_field => config.text_field,
        }
        if let Some(p) = &self.stopwords {
            config.stopwords = Some(p.clone());
        }
        if let Some(p) = &self.scaffold {
            config.scaffold = Some(p.clone());
        }
        if let Some(p) = &self.phrases {
            config.phrases = Some(p.clone());
        }
        self.apply_provider(config)?;
        config.validate()
    }

    fn apply_provider(&self, config: &mut PipelineConfig) -> Result<(), ParamError> {
        let mode = match self.embedding.as_deref() {
            Some(m) => m,
            None => match config.provider {
                ProviderConfig::LocalHash { .. } => "local_hash",
                ProviderConfig::Remote { .. } => "remote",
            },
        };
        config.provider = match (mode, &config.provider) {
            ("local_hash", current) => {
                let dimension = match current {
                    ProviderConfig::LocalHash { dimension } => *dimension,
                    _ => crate::embed::DEFAULT_DIMENSION,
                };
                ProviderConfig::LocalHash {
                    dimension: self.dimension.unwrap_or(dimension),
                }
            }
            ("remote", current) => {
                let (endpoint, timeout_ms) = match current {
                    ProviderConfig::Remote {
                        endpoint,
                        timeout_ms,
                    } => (Some(endpoint.clone()), *timeout_ms),
                    _ => (None, 30_000),
                };
                ProviderConfig::Remote {
                    endpoint: self
                        .endpoint
                        .clone()
                        .or(endpoint)
                        .ok_or_else(|| ParamError::new("endpoint", "required for remote embeddings"))?,
                    timeout_ms: self.timeout_ms.unwrap_or(timeout_ms),
                }
            }
            (other, _) => {
                return Err(ParamError::new(
                    "embedding",
                    format!("unknown mode `{other}` (expected local_hash or remote)"),
                ))
            }
        };
        Ok(())
    }
}
