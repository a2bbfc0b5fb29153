//! On-disk index bundle: a directory holding
//!
//! - `manifest.json`: format tag, version, provider configuration, counts
//! - `units.jsonl`: one evidence unit per line, in unit id order
//! - `vectors.idx`: the binary vector index

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::corpus::{Corpus, EvidenceUnit};
use crate::embed::ProviderConfig;
use crate::index::VectorIndex;

pub const BUNDLE_VERSION: u32 = 1;
const FORMAT: &str = "evgate-bundle";
const MANIFEST: &str = "manifest.json";
const UNITS: &str = "units.jsonl";
const VECTORS: &str = "vectors.idx";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleManifest {
    pub format: String,
    pub version: u32,
    pub provider: ProviderConfig,
    pub units: usize,
    pub dimension: usize,
}

pub fn save_bundle(
    dir: &Path,
    corpus: &Corpus,
    index: &VectorIndex,
    provider: &ProviderConfig,
) -> Result<BundleManifest, PipelineError> {
    fs::create_dir_all(dir)?;
    let manifest = BundleManifest {
        format: FORMAT.into(),
        version: BUNDLE_VERSION,
        provider: provider.clone(),
        units: corpus.len(),
        dimension: index.dimension(),
    };
    let mut units = BufWriter::new(fs::File::create(dir.join(UNITS))?);
    for unit in corpus.units() {
        serde_json::to_writer(&mut units, unit).map_err(bundle_err)?;
        units.write_all(b"\n")?;
    }
    units.flush()?;
    index.save(&dir.join(VECTORS))?;
    let mut json = serde_json::to_string_pretty(&manifest).map_err(bundle_err)?;
    json.push('\n');
    fs::write(dir.join(MANIFEST), json)?;
    Ok(manifest)
}

pub fn load_bundle(dir: &Path) -> Result<(BundleManifest, Corpus, VectorIndex), PipelineError> {
    let manifest: BundleManifest =
        serde_json::from_slice(&fs::read(dir.join(MANIFEST))?).map_err(bundle_err)?;
    if manifest.format != FORMAT {
        return Err(PipelineError::Bundle(format!("unknown format {:?}", manifest.format)));
    }
    if manifest.version != BUNDLE_VERSION {
        return Err(PipelineError::Bundle(format!(
            "bundle version {} (expected {BUNDLE_VERSION})",
            manifest.version
        )));
    }
    let mut units = Vec::with_capacity(manifest.units);
    for (n, line) in BufReader::new(fs::File::open(dir.join(UNITS))?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let unit: EvidenceUnit = serde_json::from_str(&line)
            .map_err(|e| PipelineError::Bundle(format!("{UNITS} line {}: {e}", n + 1)))?;
        units.push(unit);
    }
    let corpus = Corpus::from_units(units)?;
    let index = VectorIndex::load(&dir.join(VECTORS))?;
    if corpus.len() != manifest.units || index.dimension() != manifest.dimension {
        return Err(PipelineError::Bundle(format!(
            "manifest declares {} units of dimension {}, found {} units and dimension {}",
            manifest.units,
            manifest.dimension,
            corpus.len(),
            index.dimension()
        )));
    }
    Ok((manifest, corpus, index))
}

fn bundle_err(e: serde_json::Error) -> PipelineError {
    PipelineError::Bundle(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{Engine, PipelineConfig};

    fn sample() -> Corpus {
        let mut c = Corpus::new();
        c.ingest_document("a", "Habeas corpus protects liberty. Courts review detention.").unwrap();
        c.ingest_records("r", &["A record about \"quoted\" text"]).unwrap();
        c
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = sample();
        let provider = ProviderConfig::default();
        let index = VectorIndex::build(&corpus, provider.build().unwrap().as_ref()).unwrap();
        let saved = save_bundle(dir.path(), &corpus, &index, &provider).unwrap();
        let (manifest, c2, i2) = load_bundle(dir.path()).unwrap();
        assert_eq!(manifest, saved);
        assert_eq!(c2, corpus);
        assert_eq!(i2, index);
    }

    #[test]
    fn engine_opens_bundle() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = sample();
        let provider = ProviderConfig::LocalHash { dimension: 64 };
        let index = VectorIndex::build(&corpus, provider.build().unwrap().as_ref()).unwrap();
        save_bundle(dir.path(), &corpus, &index, &provider).unwrap();
        let engine = Engine::open(dir.path(), PipelineConfig::default()).unwrap();
        assert_eq!(engine.config().provider, provider);
        assert_eq!(engine.index().dimension(), 64);
    }

    #[test]
    fn version_mismatch_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = sample();
        let provider = ProviderConfig::default();
        let index = VectorIndex::build(&corpus, provider.build().unwrap().as_ref()).unwrap();
        save_bundle(dir.path(), &corpus, &index, &provider).unwrap();
        let path = dir.path().join(MANIFEST);
        let text = fs::read_to_string(&path).unwrap().replace("\"version\": 1", "\"version\": 9");
        fs::write(&path, text).unwrap();
        assert!(matches!(load_bundle(dir.path()), Err(PipelineError::Bundle(_))));
    }

    #[test]
    fn corrupt_vectors_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = sample();
        let provider = ProviderConfig::default();
        let index = VectorIndex::build(&corpus, provider.build().unwrap().as_ref()).unwrap();
        save_bundle(dir.path(), &corpus, &index, &provider).unwrap();
        let path = dir.path().join(VECTORS);
        let mut bytes = fs::read(&path).unwrap();
        bytes[30] ^= 0xff;
        fs::write(&path, bytes).unwrap();
        assert!(matches!(load_bundle(dir.path()), Err(PipelineError::Index(_))));
    }
}
