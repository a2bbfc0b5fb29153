//! Evidence units and the immutable corpus that holds them.
//!
//! A unit is one sentence of a plain-text document or one record of a
//! structured source. Text is stored in Unicode NFC with surrounding
//! whitespace trimmed and is never modified afterwards.

mod segment;

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::LazyLock;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

pub use segment::{segment_sentences, Sentence, SentenceSegmenter};

/// Position of a unit in ingestion order, starting at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitId(pub u64);

impl UnitId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for UnitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    Sentence,
    Record,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceUnit {
    id: UnitId,
    doc_id: String,
    ordinal: usize,
    kind: UnitKind,
    text: String,
}

impl EvidenceUnit {
    pub fn id(&self) -> UnitId {
        self.id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    /// Zero-based position within the source document.
    pub fn ordinal(&self) -> usize {
        self.ordinal
    }

    pub fn kind(&self) -> UnitKind {
        self.kind
    }

    /// Citation tag in the form `[doc_id:ordinal]`.
    pub fn citation(&self) -> String {
        format!("[{}:{}]", self.doc_id, self.ordinal)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("document `{0}` was already ingested")]
    DuplicateDocument(String),
    #[error("record {index} of `{doc_id}` is empty")]
    EmptyRecord { doc_id: String, index: usize },
    #[error("line {line} of `{doc_id}`: {reason}")]
    InvalidRecord {
        doc_id: String,
        line: usize,
        reason: String,
    },
    #[error("inconsistent corpus: {0}")]
    Inconsistent(String),
    #[error("cannot derive a document id from {0}")]
    BadPath(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

static DEFAULT_SEGMENTER: LazyLock<SentenceSegmenter> = LazyLock::new(SentenceSegmenter::default);

/// Ordered, append-only collection of evidence units.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    units: Vec<EvidenceUnit>,
    doc_index: IndexMap<String, Vec<UnitId>>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a corpus from previously serialized units, checking that
    /// ids are dense and `(doc_id, ordinal)` pairs are consistent.
    pub fn from_units(units: Vec<EvidenceUnit>) -> Result<Self, CorpusError> {
        let mut corpus = Self::new();
        for (i, unit) in units.into_iter().enumerate() {
            if unit.id.index() != i {
                return Err(CorpusError::Inconsistent(format!(
                    "unit at position {i} has id {}",
                    unit.id
                )));
            }
            if unit.text.trim().is_empty() {
                return Err(CorpusError::Inconsistent(format!("unit {i} has empty text")));
            }
            let ids = corpus.doc_index.entry(unit.doc_id.clone()).or_default();
            if ids.len() != unit.ordinal {
                return Err(CorpusError::Inconsistent(format!(
                    "unit {i} of `{}` has ordinal {}, expected {}",
                    unit.doc_id,
                    unit.ordinal,
                    ids.len()
                )));
            }
            ids.push(unit.id);
            corpus.units.push(unit);
        }
        Ok(corpus)
    }

    pub fn units(&self) -> &[EvidenceUnit] {
        &self.units
    }

    pub fn unit(&self, id: UnitId) -> Option<&EvidenceUnit> {
        self.units.get(id.index())
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Document ids in ingestion order.
    pub fn documents(&self) -> impl Iterator<Item = &str> {
        self.doc_index.keys().map(String::as_str)
    }

    pub fn document_units(&self, doc_id: &str) -> Option<&[UnitId]> {
        self.doc_index.get(doc_id).map(Vec::as_slice)
    }

    /// Splits `document_text` into sentence units using the bundled
    /// abbreviation list.
    pub fn ingest_document(
        &mut self,
        doc_id: &str,
        document_text: &str,
    ) -> Result<&[EvidenceUnit], CorpusError> {
        self.ingest_document_with(doc_id, document_text, &DEFAULT_SEGMENTER)
    }

    pub fn ingest_document_with(
        &mut self,
        doc_id: &str,
        document_text: &str,
        segmenter: &SentenceSegmenter,
    ) -> Result<&[EvidenceUnit], CorpusError> {
        self.check_new(doc_id)?;
        let normalized: String = document_text.nfc().collect();
        let sentences: Vec<String> = segmenter
            .segment(&normalized)
            .into_iter()
            .map(|s| s.text.to_owned())
            .collect();
        Ok(self.push_units(doc_id, UnitKind::Sentence, sentences))
    }

    /// Adds one unit per record; records are not segmented.
    pub fn ingest_records<S: AsRef<str>>(
        &mut self,
        doc_id: &str,
        records: &[S],
    ) -> Result<&[EvidenceUnit], CorpusError> {
        self.check_new(doc_id)?;
        let mut texts = Vec::with_capacity(records.len());
        for (index, record) in records.iter().enumerate() {
            let normalized: String = record.as_ref().nfc().collect();
            let trimmed = normalized.trim();
            if trimmed.is_empty() {
                return Err(CorpusError::EmptyRecord {
                    doc_id: doc_id.to_owned(),
                    index,
                });
            }
            texts.push(trimmed.to_owned());
        }
        Ok(self.push_units(doc_id, UnitKind::Record, texts))
    }

    /// Ingests a plain-text file; the document id is the file stem.
    pub fn ingest_text_file(&mut self, path: &Path) -> Result<&[EvidenceUnit], CorpusError> {
        let doc_id = file_stem(path)?;
        let text = fs::read_to_string(path)?;
        self.ingest_document(&doc_id, &text)
    }

    /// Ingests a JSON-Lines file, taking each line's `field` as one record.
    /// Blank lines are skipped.
    pub fn ingest_jsonl_file(
        &mut self,
        path: &Path,
        field: &str,
    ) -> Result<&[EvidenceUnit], CorpusError> {
        let doc_id = file_stem(path)?;
        let content = fs::read_to_string(path)?;
        let mut records = Vec::new();
        for (i, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let invalid = |reason: String| CorpusError::InvalidRecord {
                doc_id: doc_id.clone(),
                line: i + 1,
                reason,
            };
            let value: serde_json::Value =
                serde_json::from_str(line).map_err(|e| invalid(e.to_string()))?;
            let text = value
                .get(field)
                .and_then(serde_json::Value::as_str)
                .ok_or_else(|| invalid(format!("missing string field `{field}`")))?;
            records.push(text.to_owned());
        }
        self.ingest_records(&doc_id, &records)
    }

    fn check_new(&self, doc_id: &str) -> Result<(), CorpusError> {
        if self.doc_index.contains_key(doc_id) {
            Err(CorpusError::DuplicateDocument(doc_id.to_owned()))
        } else {
            Ok(())
        }
    }

    fn push_units(&mut self, doc_id: &str, kind: UnitKind, texts: Vec<String>) -> &[EvidenceUnit] {
        let first = self.units.len();
        let mut ids = Vec::with_capacity(texts.len());
        for (ordinal, text) in texts.into_iter().enumerate() {
            let id = UnitId(self.units.len() as u64);
            ids.push(id);
            self.units.push(EvidenceUnit {
                id,
                doc_id: doc_id.to_owned(),
                ordinal,
                kind,
                text,
            });
        }
        self.doc_index.insert(doc_id.to_owned(), ids);
        &self.units[first..]
    }
}

fn file_stem(path: &Path) -> Result<String, CorpusError> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_owned)
        .ok_or_else(|| CorpusError::BadPath(path.display().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ingest_document_assigns_ordinals() {
        let mut c = Corpus::new();
        let units = c.ingest_document("d1", "A is B. C is D.").unwrap();
        assert_eq!(units.len(), 2);
        assert_eq!(units[0].ordinal(), 0);
        assert_eq!(units[1].ordinal(), 1);
        assert_eq!(units[1].text(), "C is D.");
        assert!(units.iter().all(|u| u.kind() == UnitKind::Sentence));
    }

    #[test]
    fn whitespace_document_yields_nothing() {
        let mut c = Corpus::new();
        assert!(c.ingest_document("d2", "   ").unwrap().is_empty());
        assert_eq!(c.document_units("d2"), Some(&[][..]));
    }

    #[test]
    fn duplicate_document_rejected() {
        let mut c = Corpus::new();
        c.ingest_document("d1", "X.").unwrap();
        assert!(matches!(
            c.ingest_document("d1", "Y."),
            Err(CorpusError::DuplicateDocument(d)) if d == "d1"
        ));
        assert!(matches!(
            c.ingest_records("d1", &["z"]),
            Err(CorpusError::DuplicateDocument(_))
        ));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn records_are_not_segmented() {
        let mut c = Corpus::new();
        let units = c.ingest_records("t1", &["row A. Still row A.", "row B"]).unwrap();
        assert_eq!(units.len(), 2);
        assert_eq!(units[0].text(), "row A. Still row A.");
        assert!(units.iter().all(|u| u.kind() == UnitKind::Record));
        assert!(c.ingest_records::<&str>("t2", &[]).unwrap().is_empty());
    }

    #[test]
    fn empty_record_reports_index() {
        let mut c = Corpus::new();
        let err = c.ingest_records("t2", &["ok", ""]).unwrap_err();
        assert!(matches!(err, CorpusError::EmptyRecord { index: 1, .. }));
        // failed ingestion leaves no trace
        assert!(c.is_empty());
        assert!(c.document_units("t2").is_none());
    }

    #[test]
    fn unit_ids_follow_global_ingestion_order() {
        let mut c = Corpus::new();
        c.ingest_document("a", "One. Two.").unwrap();
        c.ingest_records("b", &["three"]).unwrap();
        let ids: Vec<u64> = c.units().iter().map(|u| u.id().0).collect();
        assert_eq!(ids, [0, 1, 2]);
        assert_eq!(c.document_units("b"), Some(&[UnitId(2)][..]));
        assert_eq!(c.documents().collect::<Vec<_>>(), ["a", "b"]);
    }

    #[test]
    fn text_is_nfc_normalized() {
        let mut c = Corpus::new();
        // "e" + combining acute accent
        let units = c.ingest_document("n", "Caf\u{0065}\u{0301} rules.").unwrap();
        assert_eq!(units[0].text(), "Caf\u{00e9} rules.");
    }

    #[test]
    fn from_units_round_trip_and_validation() {
        let mut c = Corpus::new();
        c.ingest_document("a", "One. Two.").unwrap();
        c.ingest_records("b", &["three"]).unwrap();
        let rebuilt = Corpus::from_units(c.units().to_vec()).unwrap();
        assert_eq!(rebuilt, c);

        let mut units = c.units().to_vec();
        units.swap(0, 1);
        assert!(matches!(Corpus::from_units(units), Err(CorpusError::Inconsistent(_))));
    }

    #[test]
    fn jsonl_records_use_configured_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.jsonl");
        fs::write(&path, "{\"body\": \"row A\"}\n\n{\"body\": \"row B\", \"x\": 1}\n").unwrap();
        let mut c = Corpus::new();
        let units = c.ingest_jsonl_file(&path, "body").unwrap();
        assert_eq!(units.len(), 2);
        assert_eq!(units[1].doc_id(), "table");

        let mut c = Corpus::new();
        let err = c.ingest_jsonl_file(&path, "text").unwrap_err();
        assert!(matches!(err, CorpusError::InvalidRecord { line: 1, .. }));
    }
}
