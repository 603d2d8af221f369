//! Language codes and the reference types that identify articles and
//! sentences throughout the pipeline.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A Wikipedia edition language code (`en`, `es`, `ca`, ...).
///
/// Codes are lowercase ASCII, starting with a letter, optionally with
/// hyphenated subtags (`zh-min-nan`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LangCode(String);

impl LangCode {
    pub fn new(code: &str) -> Result<Self, InvalidLangCode> {
        if Self::is_valid(code) {
            Ok(LangCode(code.to_string()))
        } else {
            Err(InvalidLangCode(code.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Whether `code` has the shape of an interlanguage link prefix.
    pub fn is_valid(code: &str) -> bool {
        if code.is_empty() || code.len() > 16 {
            return false;
        }
        let mut chars = code.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return false,
        }
        let mut prev_hyphen = false;
        for c in chars {
            match c {
                'a'..='z' | '0'..='9' => prev_hyphen = false,
                '-' if !prev_hyphen => prev_hyphen = true,
                _ => return false,
            }
        }
        !code.ends_with('-')
    }
}

impl fmt::Display for LangCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for LangCode {
    type Error = InvalidLangCode;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        LangCode::new(&value)
    }
}

impl From<LangCode> for String {
    fn from(value: LangCode) -> String {
        value.0
    }
}

impl std::str::FromStr for LangCode {
    type Err = InvalidLangCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LangCode::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid language code: {0:?}")]
pub struct InvalidLangCode(pub String);

/// Identifies one article: a language edition plus its normalized title.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArticleKey {
    pub language: LangCode,
    pub title: String,
}

impl ArticleKey {
    pub fn new(language: LangCode, title: impl Into<String>) -> Self {
        ArticleKey {
            language,
            title: title.into(),
        }
    }
}

impl fmt::Display for ArticleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.language, self.title)
    }
}

/// Identifies one sentence: an article plus the sentence's 0-based position.
///
/// The derived ordering (language, title, index) is the tie-break order used
/// by every ranking step in the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SentenceRef {
    pub article: ArticleKey,
    pub index: u32,
}

impl SentenceRef {
    pub fn new(article: ArticleKey, index: u32) -> Self {
        SentenceRef { article, index }
    }

    /// Key under which this sentence is stored in vector files:
    /// `language<TAB>title<TAB>index`.
    pub fn storage_key(&self) -> String {
        format!(
            "{}\t{}\t{}",
            self.article.language, self.article.title, self.index
        )
    }

    /// Inverse of [`storage_key`](Self::storage_key).
    pub fn from_storage_key(key: &str) -> Option<Self> {
        let mut parts = key.splitn(3, '\t');
        let lang = LangCode::new(parts.next()?).ok()?;
        let title = parts.next()?;
        let index: u32 = parts.next()?.parse().ok()?;
        Some(SentenceRef::new(ArticleKey::new(lang, title), index))
    }
}

impl fmt::Display for SentenceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.article, self.index)
    }
}
