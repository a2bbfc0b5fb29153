//! Rule-based sentence boundary detection.
//!
//! A boundary follows a run of terminators (`.`, `!`, `?`) and any closing
//! quotes or brackets, when the next non-whitespace character is uppercase
//! or the text ends. A period that completes a listed abbreviation never
//! ends a sentence.

use std::collections::HashSet;

const BUNDLED_ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

const TERMINATORS: [char; 3] = ['.', '!', '?'];
const CLOSERS: [char; 7] = ['"', '\'', '\u{201d}', '\u{2019}', ')', ']', '}'];
const OPENERS: [char; 6] = ['"', '\'', '\u{201c}', '\u{2018}', '(', '['];

/// One sentence: a trimmed slice of the input plus its byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sentence<'a> {
    pub start: usize,
    pub text: &'a str,
}

impl Sentence<'_> {
    pub fn end(&self) -> usize {
        self.start + self.text.len()
    }
}

#[derive(Debug, Clone)]
pub struct SentenceSegmenter {
    abbreviations: HashSet<String>,
}

impl Default for SentenceSegmenter {
    fn default() -> Self {
        Self::from_list(BUNDLED_ABBREVIATIONS)
    }
}

impl SentenceSegmenter {
    /// Builds a segmenter from a list file: one abbreviation per line,
    /// `#` comments ignored, matched case-insensitively.
    pub fn from_list(list: &str) -> Self {
        let abbreviations = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Self { abbreviations }
    }

    pub fn segment<'a>(&self, text: &'a str) -> Vec<Sentence<'a>> {
        let mut out = Vec::new();
        let mut start = match next_non_ws(text, 0) {
            Some(i) => i,
            None => return out,
        };
        let first = start;
        let mut chars = text.char_indices().skip_while(|&(i, _)| i < first).peekable();

        while let Some((i, c)) = chars.next() {
            if !TERMINATORS.contains(&c) {
                continue;
            }
            let mut end = i + c.len_utf8();
            let mut only_periods = c == '.';
            while let Some(&(j, d)) = chars.peek() {
                if TERMINATORS.contains(&d) {
                    only_periods &= d == '.';
                } else if !CLOSERS.contains(&d) {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }

            let rest = &text[end..];
            if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
                continue;
            }
            let next = next_non_ws(text, end);
            if let Some(k) = next {
                if !text[k..].starts_with(char::is_uppercase) {
                    continue;
                }
            }
            if only_periods && c == '.' && self.is_abbreviation(&text[start..i + 1]) {
                continue;
            }

            out.push(Sentence {
                start,
                text: &text[start..end],
            });
            match next {
                Some(k) => {
                    start = k;
                    while chars.peek().is_some_and(|&(j, _)| j < k) {
                        chars.next();
                    }
                }
                None => return out,
            }
        }

        let tail = text[start..].trim_end();
        if !tail.is_empty() {
            out.push(Sentence { start, text: tail });
        }
        out
    }

    /// `upto` ends with the candidate period.
    fn is_abbreviation(&self, upto: &str) -> bool {
        let word = upto
            .rsplit(char::is_whitespace)
            .next()
            .unwrap_or(upto)
            .trim_start_matches(OPENERS);
        self.abbreviations.contains(&word.to_lowercase())
    }
}

fn next_non_ws(text: &str, from: usize) -> Option<usize> {
    text[from..]
        .char_indices()
        .find(|(_, c)| !c.is_whitespace())
        .map(|(i, _)| from + i)
}

/// Segments with the bundled abbreviation list.
pub fn segment_sentences(text: &str) -> Vec<Sentence<'_>> {
    SentenceSegmenter::default().segment(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(input: &str) -> Vec<&str> {
        segment_sentences(input).iter().map(|s| s.text).collect()
    }

    #[test]
    fn splits_on_period_before_uppercase() {
        assert_eq!(texts("Rights exist. Laws bind."), ["Rights exist.", "Laws bind."]);
    }

    #[test]
    fn empty_and_blank_inputs() {
        assert!(texts("").is_empty());
        assert!(texts(" \n\t ").is_empty());
    }

    #[test]
    fn abbreviation_does_not_split() {
        assert_eq!(
            texts("The U.S. Constitution protects rights."),
            ["The U.S. Constitution protects rights."]
        );
        assert_eq!(texts("Mr. Jones (Dr. Lee) spoke."), ["Mr. Jones (Dr. Lee) spoke."]);
    }

    #[test]
    fn ellipsis_and_mixed_terminators() {
        assert_eq!(texts("Really?! Yes... Fine."), ["Really?!", "Yes...", "Fine."]);
    }

    #[test]
    fn offsets_point_into_source() {
        let src = "  One. \n Two!";
        for s in segment_sentences(src) {
            assert_eq!(&src[s.start..s.end()], s.text);
        }
    }

    #[test]
    fn custom_list_overrides_bundled() {
        let seg = SentenceSegmenter::from_list("# none\nfoo.\n");
        let got: Vec<_> = seg.segment("See foo. Bar. U.S. Law.").iter().map(|s| s.text).collect();
        assert_eq!(got, ["See foo. Bar.", "U.S.", "Law."]);
    }

    proptest! {
        #[test]
        fn gaps_are_whitespace_and_spans_reconstruct(src in "[A-Za-z .!?\"\n]{0,80}") {
            let spans = segment_sentences(&src);
            let mut rebuilt = String::new();
            let mut pos = 0;
            for s in &spans {
                prop_assert!(s.start >= pos);
                let gap = &src[pos..s.start];
                prop_assert!(gap.chars().all(char::is_whitespace));
                rebuilt.push_str(gap);
                rebuilt.push_str(s.text);
                prop_assert_eq!(s.text.trim(), s.text);
                prop_assert!(!s.text.is_empty());
                pos = s.end();
            }
            prop_assert!(src[pos..].chars().all(char::is_whitespace));
            rebuilt.push_str(&src[pos..]);
            prop_assert_eq!(rebuilt, src);
        }
    }
}
