//! Tokenization, query content terms, lexical relevance and high-risk
//! phrase matching.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io;
use std::path::Path;
use std::sync::LazyLock;

use crate::ParamError;

const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");
const BUNDLED_SCAFFOLD: &str = include_str!("../data/scaffold.txt");
const BUNDLED_PHRASES: &str = include_str!("../data/phrases.txt");

pub const DEFAULT_MIN_TERM_LEN: usize = 3;
pub const DEFAULT_FUZZY_THRESHOLD: f64 = 0.85;

/// Maximal runs of alphanumeric characters, lowercased, in source order.
pub fn tokenize(text: &str) -> Vec<String> {
    // Lowercase first: a few characters lowercase to sequences containing
    // combining marks, which must act as separators too.
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

/// A fixed list of lowercase words, loaded from a one-entry-per-line file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordList(HashSet<String>);

impl WordList {
    pub fn parse(list: &str) -> Self {
        Self(list_entries(list).collect())
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    pub fn bundled_stopwords() -> &'static WordList {
        static STOPWORDS: LazyLock<WordList> = LazyLock::new(|| WordList::parse(BUNDLED_STOPWORDS));
        &STOPWORDS
    }

    pub fn bundled_scaffold() -> WordList {
        Self::parse(BUNDLED_SCAFFOLD)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn list_entries(list: &str) -> impl Iterator<Item = String> + '_ {
    list.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
}

/// A multi-word phrase stored as its token sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Phrase {
    text: String,
    tokens: Vec<String>,
}

impl Phrase {
    pub fn new(text: &str) -> Result<Self, ParamError> {
        let tokens = tokenize(text);
        if tokens.len() < 2 {
            return Err(ParamError::new(
                "phrases",
                format!("phrase `{text}` has fewer than two tokens"),
            ));
        }
        Ok(Self {
            text: tokens.join(" "),
            tokens,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhraseList(Vec<Phrase>);

impl PhraseList {
    pub fn parse(list: &str) -> Result<Self, ParamError> {
        list_entries(list)
            .map(|l| Phrase::new(&l))
            .collect::<Result<_, _>>()
            .map(Self)
    }

    pub fn load(path: &Path) -> Result<Self, ParamError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ParamError::new("phrases", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_PHRASES).expect("bundled phrase list is well-formed")
    }

    pub fn phrases(&self) -> &[Phrase] {
        &self.0
    }

    /// Phrases whose token sequence occurs contiguously in `query`, in list
    /// order.
    pub fn match_phrases(&self, query: &str) -> Vec<Phrase> {
        let tokens = tokenize(query);
        self.0
            .iter()
            .filter(|p| contains_sequence(&tokens, &p.tokens))
            .cloned()
            .collect()
    }
}

fn contains_sequence(haystack: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Case-insensitive token-sequence containment of `phrase` in `text`.
pub fn unit_contains_phrase(text: &str, phrase: &Phrase) -> bool {
    contains_sequence(&tokenize(text), &phrase.tokens)
}

/// The content-bearing terms of a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentTermSet {
    terms: BTreeSet<String>,
    source_query: String,
}

impl ContentTermSet {
    pub fn terms(&self) -> &BTreeSet<String> {
        &self.terms
    }

    pub fn source_query(&self) -> &str {
        &self.source_query
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms joined with single spaces, in sorted order.
    pub fn joined(&self) -> String {
        self.terms.iter().map(String::as_str).collect::<Vec<_>>().join(" ")
    }
}

/// 1 − Levenshtein(a, b) / max(|a|, |b|), over characters.
pub fn edit_similarity(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - strsim::levenshtein(a, b) as f64 / longest as f64
}

/// Word lists and thresholds for the lexical signals.
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub stopwords: WordList,
    pub scaffold: WordList,
    pub phrases: PhraseList,
    pub min_term_len: usize,
    pub fuzzy_threshold: f64,
}

impl Default for Lexicon {
    fn default() -> Self {
        Self {
            stopwords: WordList::bundled_stopwords().clone(),
            scaffold: WordList::bundled_scaffold(),
            phrases: PhraseList::bundled(),
            min_term_len: DEFAULT_MIN_TERM_LEN,
            fuzzy_threshold: DEFAULT_FUZZY_THRESHOLD,
        }
    }
}

impl Lexicon {
    /// Query tokens minus stopwords, scaffold words and short tokens.
    pub fn content_terms(&self, query: &str) -> ContentTermSet {
        let terms = tokenize(query)
            .into_iter()
            .filter(|t| {
                t.chars().count() >= self.min_term_len
                    && !self.stopwords.contains(t)
                    && !self.scaffold.contains(t)
            })
            .collect();
        ContentTermSet {
            terms,
            source_query: query.to_owned(),
        }
    }

    /// Fraction of `terms` covered by the tokens of `unit_text`.
    ///
    /// A term is covered by an exact token match or, with `fuzzy` set, by
    /// any token whose [`edit_similarity`] reaches the fuzzy threshold.
    /// An empty term set has relevance 0.
    pub fn rel(&self, unit_text: &str, terms: &ContentTermSet, fuzzy: bool) -> f64 {
        if terms.is_empty() {
            return 0.0;
        }
        let tokens: BTreeSet<String> = tokenize(unit_text).into_iter().collect();
        let covered = terms
            .terms
            .iter()
            .filter(|term| {
                tokens.contains(*term)
                    || (fuzzy
                        && tokens
                            .iter()
                            .any(|tok| edit_similarity(term, tok) >= self.fuzzy_threshold))
            })
            .count();
        covered as f64 / terms.len() as f64
    }

    pub fn match_phrases(&self, query: &str) -> Vec<Phrase> {
        self.phrases.match_phrases(query)
    }
}
