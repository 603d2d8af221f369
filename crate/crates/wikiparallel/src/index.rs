//! Multilingual title index: link pivot-language articles to their
//! counterparts through interlanguage links, then keep only the entries
//! retrievable in every configured language.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::dump::{ArticleText, RawPage};
use crate::lang::{ArticleKey, LangCode};

/// Pivot titles mapped to their per-language counterparts. Only entries whose
/// interlanguage links cover every target language are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TitleMapping {
    pub pivot: LangCode,
    /// pivot title -> (target language -> foreign title)
    pub entries: BTreeMap<String, BTreeMap<LangCode, String>>,
    /// Pivot pages examined.
    pub pages_seen: usize,
    /// Pages whose language differed from the pivot (skipped).
    pub pages_off_language: usize,
}

impl TitleMapping {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One biography retrievable in every configured language: per-language
/// `(title, wpid)` including the pivot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteEntry {
    pub articles: BTreeMap<LangCode, (String, u64)>,
}

/// The subset of a [`TitleMapping`] with an article in every language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteEntrySet {
    pub pivot: LangCode,
    pub entries: BTreeMap<String, CompleteEntry>,
}

impl CompleteEntrySet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Builds the title mapping from pivot pages' interlanguage links.
///
/// An entry appears iff the page's links cover all `target_languages`;
/// entries carry exactly the pairs for those languages. Pages with
/// incomplete links are silently excluded (they show up in the summary
/// counts only).
pub fn resolve_interlanguage(
    pivot: &LangCode,
    pivot_pages: &[RawPage],
    target_languages: &[LangCode],
) -> TitleMapping {
    let mut entries = BTreeMap::new();
    let mut pages_off_language = 0;
    for page in pivot_pages {
        if page.language != *pivot {
            pages_off_language += 1;
            continue;
        }
        let mut links: BTreeMap<LangCode, String> = BTreeMap::new();
        for (lang, title) in &page.langlinks {
            if lang != pivot
                && target_languages.contains(lang)
                && !links.contains_key(lang)
            {
                links.insert(lang.clone(), title.clone());
            }
        }
        if links.len() == target_languages.len() {
            entries.entry(page.title.clone()).or_insert(links);
        }
    }
    TitleMapping {
        pivot: pivot.clone(),
        entries,
        pages_seen: pivot_pages.len(),
        pages_off_language,
    }
}

/// Keeps the mapping entries for which an article was retrieved in every
/// language (pivot included), attaching each article's wpid.
///
/// Deterministic and order-independent in `retrieved`; on duplicate keys the
/// first article wins.
pub fn select_complete_entries(
    mapping: &TitleMapping,
    retrieved: &[ArticleText],
) -> CompleteEntrySet {
    let mut by_key: HashMap<&ArticleKey, &ArticleText> = HashMap::new();
    for article in retrieved {
        by_key.entry(&article.key).or_insert(article);
    }
    let mut entries = BTreeMap::new();
    'entry: for (pivot_title, links) in &mapping.entries {
        let mut articles = BTreeMap::new();
        let pivot_key = ArticleKey::new(mapping.pivot.clone(), pivot_title.clone());
        match by_key.get(&pivot_key) {
            Some(article) => {
                articles.insert(mapping.pivot.clone(), (pivot_title.clone(), article.wpid));
            }
            None => continue,
        }
        for (lang, title) in links {
            let key = ArticleKey::new(lang.clone(), title.clone());
            match by_key.get(&key) {
                Some(article) => {
                    articles.insert(lang.clone(), (title.clone(), article.wpid));
                }
                None => continue 'entry,
            }
        }
        entries.insert(pivot_title.clone(), CompleteEntry { articles });
    }
    CompleteEntrySet {
        pivot: mapping.pivot.clone(),
        entries,
    }
}

/// Line-oriented text report of the linking and selection funnel.
pub fn render_summary(
    mapping: &TitleMapping,
    retrieved_per_language: &BTreeMap<LangCode, usize>,
    complete: &CompleteEntrySet,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pivot language: {}", mapping.pivot);
    let _ = writeln!(out, "pivot pages examined: {}", mapping.pages_seen);
    if mapping.pages_off_language > 0 {
        let _ = writeln!(
            out,
            "pivot pages skipped (wrong language): {}",
            mapping.pages_off_language
        );
    }
    let _ = writeln!(
        out,
        "entries linked in all target languages: {}",
        mapping.len()
    );
    for (lang, count) in retrieved_per_language {
        let _ = writeln!(out, "articles retrieved [{lang}]: {count}");
    }
    let _ = writeln!(
        out,
        "complete entries (article in every language): {}",
        complete.len()
    );
    out
}
