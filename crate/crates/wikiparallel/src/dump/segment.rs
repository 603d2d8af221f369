//! Rule-based sentence segmentation.
//!
//! Splits on `.`/`?`/`!` followed by whitespace and an uppercase letter or
//! digit. A period does not split after a known abbreviation or a
//! single-letter initial. Abbreviation lists ship per language as plain
//! token-per-line files and can be replaced at run time.

use std::collections::HashSet;
use std::io::BufRead;

use crate::lang::LangCode;

use super::{ArticleText, Sentence};

/// Sentences shorter than this (in chars, after trimming) are dropped.
const MIN_SENTENCE_CHARS: usize = 3;

/// Lowercased tokens that suppress a sentence split after a period.
#[derive(Debug, Clone, Default)]
pub struct AbbreviationList {
    tokens: HashSet<String>,
}

impl AbbreviationList {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The list shipped with the crate for `language`; empty for languages
    /// without one.
    pub fn builtin(language: &LangCode) -> Self {
        let data = match language.as_str() {
            "en" => include_str!("../../data/abbreviations/en.txt"),
            "es" => include_str!("../../data/abbreviations/es.txt"),
            "ca" => include_str!("../../data/abbreviations/ca.txt"),
            _ => "",
        };
        Self::parse(data)
    }

    /// One token per line; blank lines ignored; tokens matched
    /// case-insensitively.
    pub fn parse(data: &str) -> Self {
        AbbreviationList {
            tokens: data
                .lines()
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(str::to_lowercase)
                .collect(),
        }
    }

    pub fn from_reader<R: BufRead>(mut reader: R) -> std::io::Result<Self> {
        let mut data = String::new();
        reader.read_to_string(&mut data)?;
        Ok(Self::parse(&data))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.tokens.contains(&token.to_lowercase())
    }
}

/// Splits an article into sentences, assigning contiguous indices from 0.
pub fn segment_sentences(article: &ArticleText, abbreviations: &AbbreviationList) -> Vec<Sentence> {
    split_sentences(&article.plain_text, abbreviations)
        .into_iter()
        .enumerate()
        .map(|(index, text)| Sentence {
            article: article.key.clone(),
            index: index as u32,
            text,
        })
        .collect()
}

/// Splits plain text (one paragraph per line) into sentence strings.
pub fn split_sentences(text: &str, abbreviations: &AbbreviationList) -> Vec<String> {
    let mut sentences = Vec::new();
    for line in text.lines() {
        split_line(line, abbreviations, &mut sentences);
    }
    sentences
}

fn split_line(line: &str, abbreviations: &AbbreviationList, out: &mut Vec<String>) {
    let chars: Vec<char> = line.split_whitespace().collect::<Vec<_>>().join(" ").chars().collect();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        if !is_terminal(chars[i]) {
            i += 1;
            continue;
        }
        // include the whole terminal run in this sentence
        let run_start = i;
        while i < chars.len() && is_terminal(chars[i]) {
            i += 1;
        }
        let after_space = i < chars.len() && chars[i] == ' ';
        let next_upper = after_space
            && chars
                .get(i + 1)
                .is_some_and(|c| c.is_uppercase() || c.is_ascii_digit());
        if !next_upper {
            continue;
        }
        let run_len = i - run_start;
        if run_len == 1 && chars[run_start] == '.' && suppressed(&chars[..run_start], abbreviations)
        {
            continue;
        }
        push_sentence(&chars[start..i], out);
        i += 1; // skip the boundary space
        start = i;
    }
    if start < chars.len() {
        push_sentence(&chars[start..], out);
    }
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Whether the token ending right before a period blocks the split: a known
/// abbreviation or a single-letter initial.
fn suppressed(before: &[char], abbreviations: &AbbreviationList) -> bool {
    let word_start = before
        .iter()
        .rposition(|c| *c == ' ')
        .map(|p| p + 1)
        .unwrap_or(0);
    let mut token: &[char] = &before[word_start..];
    while let Some(first) = token.first() {
        if first.is_alphanumeric() {
            break;
        }
        token = &token[1..];
    }
    if token.is_empty() {
        return false;
    }
    if token.len() == 1 && token[0].is_alphabetic() {
        return true; // initials: "J. Smith"
    }
    let token: String = token.iter().collect();
    abbreviations.contains(&token)
}

fn push_sentence(chars: &[char], out: &mut Vec<String>) {
    let text: String = chars.iter().collect();
    let text = text.trim();
    if text.chars().count() >= MIN_SENTENCE_CHARS {
        out.push(text.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::ArticleKey;

    fn en() -> AbbreviationList {
        AbbreviationList::builtin(&LangCode::new("en").unwrap())
    }

    #[test]
    fn splits_on_terminal_punctuation() {
        assert_eq!(
            split_sentences("First sentence. Second? Third!", &en()),
            ["First sentence.", "Second?", "Third!"]
        );
    }

    #[test]
    fn abbreviation_suppresses_split() {
        assert_eq!(
            split_sentences("Dr. Smith arrived in 2015.", &en()),
            ["Dr. Smith arrived in 2015."]
        );
        assert_eq!(
            split_sentences("Born in the U.S. She moved later.", &en()),
            ["Born in the U.S. She moved later."]
        );
    }

    #[test]
    fn initials_suppress_split() {
        assert_eq!(
            split_sentences("Written by J. K. Rowling. Published later.", &en()),
            ["Written by J. K. Rowling.", "Published later."]
        );
    }

    #[test]
    fn empty_input_gives_no_sentences() {
        assert_eq!(split_sentences("", &en()), Vec::<String>::new());
    }

    #[test]
    fn split_requires_upper_or_digit() {
        assert_eq!(
            split_sentences("He waited. then nothing happened.", &en()),
            ["He waited. then nothing happened."]
        );
        assert_eq!(
            split_sentences("It ended in 1999. 2000 began.", &en()),
            ["It ended in 1999.", "2000 began."]
        );
    }

    #[test]
    fn short_fragments_dropped() {
        // "I?" is 2 chars and goes; "Ok." is exactly 3 and stays
        assert_eq!(split_sentences("I? This one stays.", &en()), ["This one stays."]);
        assert_eq!(
            split_sentences("Ok. This one stays.", &en()),
            ["Ok.", "This one stays."]
        );
    }

    #[test]
    fn paragraph_breaks_are_boundaries() {
        assert_eq!(
            split_sentences("One sentence\nanother line", &en()),
            ["One sentence", "another line"]
        );
    }

    #[test]
    fn concatenation_reproduces_text() {
        let text = "First sentence here. Second one follows! Third asks? Yes indeed.";
        let parts = split_sentences(text, &en());
        assert_eq!(parts.join(" "), text);
    }

    #[test]
    fn indices_are_contiguous() {
        let article = ArticleText {
            key: ArticleKey::new(LangCode::new("en").unwrap(), "T"),
            wpid: 1,
            plain_text: "One here. Two there. Three everywhere.".into(),
        };
        let sentences = segment_sentences(&article, &en());
        let indices: Vec<u32> = sentences.iter().map(|s| s.index).collect();
        assert_eq!(indices, [0, 1, 2]);
        assert!(sentences.iter().all(|s| !s.text.contains('\n')));
    }

    #[test]
    fn custom_list_overrides() {
        let list = AbbreviationList::parse("zzz\n");
        assert_eq!(
            split_sentences("Ask zzz. Then answer.", &list),
            ["Ask zzz. Then answer."]
        );
        assert_eq!(
            split_sentences("Ask zzz. Then answer.", &AbbreviationList::empty()),
            ["Ask zzz.", "Then answer."]
        );
    }
}
