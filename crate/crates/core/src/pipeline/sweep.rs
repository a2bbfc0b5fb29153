//! Weight sensitivity sweep: every question under every weight triple.

use std::fmt::Write as _;

use serde::Serialize;

use super::trace::{fixed_weights, Fixed, GateJson};
use super::Engine;
use crate::gate::GateTrace;
use crate::select::MueWeights;

/// One (question, weights) cell. `result` holds the gate trace, or the
/// error that prevented the query from running.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub question: String,
    pub weights: MueWeights,
    pub result: Result<GateTrace, String>,
}

/// Per weight triple totals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStats {
    pub weights: MueWeights,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

pub const TSV_HEADER: &str = "question\tweights\tretrieval_pct\tn\tmean_rel\tmean_mue\tmax_sim\tmax_rel\tanchor_ok\tphrase_ok\tgate\treasons\terror";

impl SweepTable {
    /// Rows are question-major, in input order. The query is embedded once
    /// per question; an embedding failure marks all of that question's rows.
    pub fn run(engine: &Engine, questions: &[String], grid: &[MueWeights]) -> Self {
        let mut rows = Vec::with_capacity(questions.len() * grid.len());
        for question in questions {
            let analysis = engine.analyze(question);
            for &weights in grid {
                let result = match &analysis {
                    Ok(a) => engine
                        .explain_with(a.clone(), weights)
                        .map(|x| x.trace)
                        .map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                };
                rows.push(SweepRow {
                    question: question.clone(),
                    weights,
                    result,
                });
            }
        }
        Self { rows }
    }

    pub fn stats(&self) -> Vec<SweepStats> {
        let mut out: Vec<SweepStats> = Vec::new();
        for row in &self.rows {
            let pos = match out.iter().position(|s| s.weights == row.weights) {
                Some(p) => p,
                None => {
                    out.push(SweepStats {
                        weights: row.weights,
                        passed: 0,
                        failed: 0,
                        errors: 0,
                    });
                    out.len() - 1
                }
            };
            let s = &mut out[pos];
            match &row.result {
                Ok(t) if t.passed() => s.passed += 1,
                Ok(_) => s.failed += 1,
                Err(_) => s.errors += 1,
            }
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(TSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let [l, m, n] = row.weights.as_array();
            let _ = write!(out, "{}\t{l:.2},{m:.2},{n:.2}\t", clean(&row.question));
            match &row.result {
                Ok(t) => {
                    let reasons: Vec<&str> = t.reasons.iter().map(|r| r.as_str()).collect();
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{}\t{}\t{}\t{}\t",
                        t.retrieval_pct(),
                        t.n,
                        t.mean_rel,
                        t.mean_mue,
                        t.max_sim,
                        t.max_rel,
                        u8::from(t.anchor_ok),
                        u8::from(t.phrase_ok),
                        t.decision.as_str(),
                        reasons.join(","),
                    );
                }
                Err(e) => {
                    let _ = writeln!(out, "\t\t\t\t\t\t\t\tERROR\t\t{}", clean(e));
                }
            }
        }
        out
    }

    /// A JSON array, one object per row.
    pub fn to_json(&self) -> String {
        let rows: Vec<RowJson> = self
            .rows
            .iter()
            .map(|row| RowJson {
                question: &row.question,
                weights: fixed_weights(&row.weights),
                gate: row.result.as_ref().ok().map(GateJson::from),
                error: row.result.as_ref().err().map(String::as_str),
            })
            .collect();
        let mut json = serde_json::to_string_pretty(&rows).expect("sweep values are finite");
        json.push('\n');
        json
    }
}

#[derive(Serialize)]
struct RowJson<'a> {
    question: &'a str,
    weights: [Fixed; 3],
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    gate: Option<GateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;
    use crate::embed::{EmbedError, EmbeddingProvider, EmbeddingVector, HashingEmbedder};
    use crate::pipeline::PipelineConfig;

    fn engine() -> Engine {
        let mut c = Corpus::new();
        c.ingest_document("a", "Habeas corpus protects liberty. Habeas corpus reviews detention.")
            .unwrap();
        Engine::build(c, PipelineConfig::default()).unwrap()
    }

    #[test]
    fn one_question_one_triple() {
        let e = engine();
        let q = vec!["What is habeas corpus?".to_owned()];
        let table = SweepTable::run(&e, &q, &[MueWeights::default()]);
        assert_eq!(table.rows.len(), 1);
        let trace = table.rows[0].result.as_ref().unwrap();
        assert_eq!(trace, &e.explain(&q[0]).unwrap().trace);
        let tsv = table.to_tsv();
        let line = tsv.lines().nth(1).unwrap();
        assert!(line.starts_with("What is habeas corpus?\t0.50,0.30,0.20\t"));
        assert_eq!(line.split('\t').count(), TSV_HEADER.split('\t').count());
    }

    #[test]
    fn weights_change_only_scores() {
        let e = engine();
        let q = vec!["What is habeas corpus?".to_owned(), "Who reviews detention?".to_owned()];
        let grid = [MueWeights::default(), MueWeights::new(0.34, 0.33, 0.33).unwrap()];
        let table = SweepTable::run(&e, &q, &grid);
        assert_eq!(table.rows.len(), 4);
        assert_eq!(table.rows[1].weights, grid[1]);
        let stats = table.stats();
        assert_eq!(stats.len(), 2);
        assert_eq!(stats.iter().map(|s| s.passed + s.failed).sum::<usize>(), 4);
        assert_eq!(table.to_json(), SweepTable::run(&e, &q, &grid).to_json());
    }

    struct Flaky(HashingEmbedder);

    impl EmbeddingProvider for Flaky {
        fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbedError> {
            if text.contains("offline") {
                Err(EmbedError::RemoteUnavailable("connection refused".into()))
            } else {
                self.0.embed(text)
            }
        }
    }

    #[test]
    fn embedding_errors_become_row_markers() {
        let mut c = Corpus::new();
        c.ingest_records("r", &["Habeas corpus protects liberty."]).unwrap();
        let e = Engine::with_provider(
            c,
            Box::new(Flaky(HashingEmbedder::new(256).unwrap())),
            PipelineConfig::default(),
        )
        .unwrap();
        let q = vec!["offline question".to_owned(), "What is habeas corpus?".to_owned()];
        let table = SweepTable::run(&e, &q, &[MueWeights::default()]);
        assert!(table.rows[0].result.is_err());
        assert!(table.rows[1].result.is_ok());
        assert_eq!(table.stats()[0].errors, 1);
        let tsv = table.to_tsv();
        assert!(tsv.lines().nth(1).unwrap().contains("\tERROR\t"));
        let json: serde_json::Value = serde_json::from_str(&table.to_json()).unwrap();
        assert!(json[0]["error"].is_string());
        assert!(json[0].get("gate").is_none());
        assert!(json[1]["gate"].is_string());
    }
}
