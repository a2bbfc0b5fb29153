//! Corpus document-frequency statistics and Conceptual Importance.
//!
//! For a term `t` seen in `df(t)` of `N` units, `idf(t) = ln(N / df(t))`.
//! A unit's importance is the mean of `idf(t) / idf_max` over its distinct
//! non-stopword terms, so it lies in `[0, 1]` and does not grow when a term
//! repeats. Terms absent from the statistics count as maximally
//! distinctive.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::corpus::Corpus;
use crate::lexical::{tokenize, WordList};

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    n_units: usize,
    df: BTreeMap<String, usize>,
    idf_max: f64,
    stopwords: WordList,
}

impl CorpusStats {
    pub fn build(corpus: &Corpus, stopwords: &WordList) -> Self {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for unit in corpus.units() {
            for term in distinct_terms(unit.text(), stopwords) {
                *df.entry(term).or_default() += 1;
            }
        }
        let n_units = corpus.len();
        let idf_max = df
            .values()
            .map(|&d| raw_idf(n_units, d))
            .fold(0.0, f64::max);
        Self {
            n_units,
            df,
            idf_max,
            stopwords: stopwords.clone(),
        }
    }

    pub fn n_units(&self) -> usize {
        self.n_units
    }

    pub fn idf_max(&self) -> f64 {
        self.idf_max
    }

    pub fn df(&self, term: &str) -> Option<usize> {
        self.df.get(term).copied()
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.df(term).map(|d| raw_idf(self.n_units, d))
    }

    pub fn vocabulary_len(&self) -> usize {
        self.df.len()
    }

    /// Conceptual importance of a unit's text, in `[0, 1]`.
    pub fn ci(&self, unit_text: &str) -> f64 {
        if self.idf_max <= 0.0 {
            return 0.0;
        }
        let terms = distinct_terms(unit_text, &self.stopwords);
        if terms.is_empty() {
            return 0.0;
        }
        let total: f64 = terms
            .iter()
            .map(|t| match self.idf(t) {
                Some(idf) => (idf / self.idf_max).min(1.0),
                None => 1.0,
            })
            .sum();
        total / terms.len() as f64
    }

    /// `term<TAB>df<TAB>idf` rows sorted by term, with a header line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("term\tdf\tidf\n");
        for (term, &d) in &self.df {
            let _ = writeln!(out, "{term}\t{d}\t{:.6}", raw_idf(self.n_units, d));
        }
        out
    }
}

fn raw_idf(n_units: usize, df: usize) -> f64 {
    (n_units as f64 / df as f64).ln()
}

fn distinct_terms(text: &str, stopwords: &WordList) -> BTreeSet<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| !stopwords.contains(t))
        .collect()
}
