//! Post-mining cleanup: the length-ratio filter and exact-duplicate removal.
//!
//! Aligned sentences that genuinely translate each other have similar
//! lengths; a tuple where one member runs much longer usually carries
//! content the others lack, so it is dropped. The bound is exclusive by
//! default (a member exactly 20% longer survives); `drop_at_bound` flips
//! that.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::lang::SentenceRef;
use crate::mining::AlignedTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthUnit {
    Characters,
    Tokens,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CleaningConfig {
    /// Maximum allowed relative length excess, e.g. 0.20 for "20% longer".
    pub max_length_ratio: f64,
    pub length_unit: LengthUnit,
    /// Drop tuples sitting exactly on the bound instead of keeping them.
    pub drop_at_bound: bool,
}

impl Default for CleaningConfig {
    fn default() -> Self {
        CleaningConfig {
            max_length_ratio: 0.20,
            length_unit: LengthUnit::Characters,
            drop_at_bound: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CleaningError {
    #[error("max_length_ratio must be in (0, 10), got {0}")]
    BadRatio(f64),
    #[error("length filter needs at least 2 texts, got {0}")]
    TooFewTexts(usize),
}

impl CleaningConfig {
    pub fn validate(&self) -> Result<(), CleaningError> {
        if !(self.max_length_ratio > 0.0 && self.max_length_ratio < 10.0) {
            return Err(CleaningError::BadRatio(self.max_length_ratio));
        }
        Ok(())
    }
}

/// Why a tuple was rejected; goes to the audit log.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    LengthRatio,
    EmptyMember,
}

impl RejectReason {
    pub fn code(&self) -> &'static str {
        match self {
            RejectReason::LengthRatio => "length-ratio",
            RejectReason::EmptyMember => "empty-member",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterDecision {
    Keep,
    Drop(RejectReason),
}

impl FilterDecision {
    pub fn is_keep(&self) -> bool {
        matches!(self, FilterDecision::Keep)
    }
}

fn measure(text: &str, unit: LengthUnit) -> usize {
    let trimmed = text.trim();
    match unit {
        LengthUnit::Characters => trimmed.chars().count(),
        LengthUnit::Tokens => trimmed.split_whitespace().count(),
    }
}

/// Keep/drop decision for one tuple's texts.
///
/// Drop when the longest member exceeds the shortest by more than
/// `max_length_ratio` (at least, with `drop_at_bound`); any empty member is
/// its own reject reason. The comparison is done as
/// `(max - min) / min vs ratio`, which is exact at the bound for integer
/// lengths.
pub fn length_ratio_filter(
    texts: &[&str],
    config: &CleaningConfig,
) -> Result<FilterDecision, CleaningError> {
    config.validate()?;
    if texts.len() < 2 {
        return Err(CleaningError::TooFewTexts(texts.len()));
    }
    let lengths: Vec<usize> = texts.iter().map(|t| measure(t, config.length_unit)).collect();
    if lengths.iter().any(|&l| l == 0) {
        return Ok(FilterDecision::Drop(RejectReason::EmptyMember));
    }
    let max = *lengths.iter().max().expect("non-empty");
    let min = *lengths.iter().min().expect("non-empty");
    let excess = (max - min) as f64 / min as f64;
    let over = if config.drop_at_bound {
        excess >= config.max_length_ratio
    } else {
        excess > config.max_length_ratio
    };
    if over {
        Ok(FilterDecision::Drop(RejectReason::LengthRatio))
    } else {
        Ok(FilterDecision::Keep)
    }
}

/// Drops tuples whose full multilingual text content already appeared;
/// first occurrence wins, order otherwise preserved. `text_of` resolves a
/// sentence reference to its text.
pub fn dedupe_tuples<'a, F>(tuples: Vec<AlignedTuple>, text_of: F) -> Vec<AlignedTuple>
where
    F: Fn(&SentenceRef) -> &'a str,
{
    let mut seen: HashSet<Vec<&str>> = HashSet::new();
    let mut out = Vec::with_capacity(tuples.len());
    for tuple in tuples {
        let mut content: Vec<&str> = Vec::with_capacity(tuple.per_language.len() + 1);
        content.push(text_of(&tuple.pivot));
        for (target, _) in tuple.per_language.values() {
            content.push(text_of(target));
        }
        if seen.insert(content) {
            out.push(tuple);
        }
    }
    out
}

/// One audit-log line for a rejected tuple: reason code, then each member as
/// `language:title#index`, tab-separated.
pub fn audit_line(reason: RejectReason, members: &[&SentenceRef]) -> String {
    let mut line = String::from(reason.code());
    for member in members {
        line.push('\t');
        line.push_str(&member.to_string());
    }
    line
}
