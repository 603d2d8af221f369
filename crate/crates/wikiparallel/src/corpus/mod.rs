//! The document-level corpus: records, the XML wire format, statistics.
//!
//! Output is one XML file per language. Documents of one biography share a
//! docid (the pivot-language title) across files, and seg id `i` in one
//! language is the translation candidate of seg id `i` in every other.

mod stats;
mod xml;

pub use stats::{compute_stats, render_stats_report, CorpusStats, GenderStats};
pub use xml::{read_corpus_xml, write_corpus_xml};

use crate::gender::GenderLabel;
use crate::lang::LangCode;

/// One sentence of a document; ids are 1-based and contiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub id: u32,
    pub text: String,
}

/// One document: a biography in one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentRecord {
    /// Pivot-language title; identical across the per-language versions of
    /// one biography.
    pub docid: String,
    /// The Wikipedia page id of this language's article.
    pub wpid: u64,
    pub language: LangCode,
    /// Optional occupation category, `C1`..`C9`.
    pub topic: Option<String>,
    pub gender: GenderLabel,
    /// Language-local article title.
    pub title: String,
    pub segments: Vec<Segment>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("invalid document {docid:?}: {message}")]
    Validation { docid: String, message: String },
    #[error("corpus parse error at byte {offset}: {message}")]
    Parse { offset: u64, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub(crate) fn is_valid_topic(topic: &str) -> bool {
    let mut chars = topic.chars();
    chars.next() == Some('C')
        && matches!(chars.next(), Some('1'..='9'))
        && chars.next().is_none()
}

impl DocumentRecord {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let fail = |message: String| {
            Err(CorpusError::Validation {
                docid: self.docid.clone(),
                message,
            })
        };
        if self.docid.trim().is_empty() {
            return fail("docid is empty".into());
        }
        if self.docid.trim() != self.docid {
            return fail("docid has surrounding whitespace".into());
        }
        if self.title.trim().is_empty() {
            return fail("title is empty".into());
        }
        if self.title.trim() != self.title {
            return fail("title has surrounding whitespace".into());
        }
        if let Some(topic) = &self.topic {
            if !is_valid_topic(topic) {
                return fail(format!("topic {topic:?} is not one of C1..C9"));
            }
        }
        for (i, segment) in self.segments.iter().enumerate() {
            let expected = i as u32 + 1;
            if segment.id != expected {
                return fail(format!(
                    "segment ids must be contiguous from 1: found {} at position {}",
                    segment.id, expected
                ));
            }
        }
        Ok(())
    }
}
