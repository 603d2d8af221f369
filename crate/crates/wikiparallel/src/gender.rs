//! Gender classification by pronoun counting, and corpus balancing.
//!
//! An article's gender is the one whose pronouns occur strictly more often;
//! no pronouns or a tie means no assignment. Balancing removes seeded-random
//! majority-gender content until female and male counts agree: whole
//! biographies in document mode, individual aligned segments in sentence
//! mode (the default, which equalizes sentence counts while document counts
//! stay skewed).

use std::collections::{BTreeMap, HashSet};
use std::io::BufRead;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::DocumentRecord;
use crate::dump::ArticleText;
use crate::lang::LangCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenderLabel {
    Female,
    Male,
    /// No pronominal mentions, or an exact tie.
    Unknown,
}

impl GenderLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            GenderLabel::Female => "Female",
            GenderLabel::Male => "Male",
            GenderLabel::Unknown => "Unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "Female" => Some(GenderLabel::Female),
            "Male" => Some(GenderLabel::Male),
            "Unknown" => Some(GenderLabel::Unknown),
            _ => None,
        }
    }
}

impl std::fmt::Display for GenderLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("pronoun lexicon for {language}: feminine and masculine sets must be disjoint ({token:?} is in both)")]
    Overlap { language: LangCode, token: String },
    #[error("pronoun lexicon for {language}: {side} set is empty")]
    EmptySide {
        language: LangCode,
        side: &'static str,
    },
    #[error("bad lexicon line {line_no}: {line:?} (expected language<TAB>F|M<TAB>token)")]
    BadLine { line_no: usize, line: String },
    #[error("no lexicon for language {0}")]
    MissingLanguage(LangCode),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Gendered pronouns for one language, lowercased.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounLexicon {
    pub language: LangCode,
    feminine: HashSet<String>,
    masculine: HashSet<String>,
}

impl PronounLexicon {
    pub fn new(
        language: LangCode,
        feminine: impl IntoIterator<Item = String>,
        masculine: impl IntoIterator<Item = String>,
    ) -> Result<Self, LexiconError> {
        let feminine: HashSet<String> = feminine.into_iter().map(|t| t.to_lowercase()).collect();
        let masculine: HashSet<String> = masculine.into_iter().map(|t| t.to_lowercase()).collect();
        if feminine.is_empty() {
            return Err(LexiconError::EmptySide {
                language,
                side: "feminine",
            });
        }
        if masculine.is_empty() {
            return Err(LexiconError::EmptySide {
                language,
                side: "masculine",
            });
        }
        if let Some(token) = feminine.intersection(&masculine).next() {
            return Err(LexiconError::Overlap {
                language,
                token: token.clone(),
            });
        }
        Ok(PronounLexicon {
            language,
            feminine,
            masculine,
        })
    }

    /// The lexicons shipped with the crate (en, es, ca).
    pub fn builtin() -> BTreeMap<LangCode, PronounLexicon> {
        Self::parse(include_str!("../data/pronouns.tsv")).expect("builtin lexicon data")
    }

    /// Parses `language<TAB>F|M<TAB>token` lines into per-language lexicons.
    pub fn parse(data: &str) -> Result<BTreeMap<LangCode, PronounLexicon>, LexiconError> {
        let mut feminine: BTreeMap<LangCode, Vec<String>> = BTreeMap::new();
        let mut masculine: BTreeMap<LangCode, Vec<String>> = BTreeMap::new();
        for (line_no, raw) in data.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let bad = || LexiconError::BadLine {
                line_no: line_no + 1,
                line: raw.to_string(),
            };
            let language = parts
                .next()
                .and_then(|c| LangCode::new(c.trim()).ok())
                .ok_or_else(bad)?;
            let side = parts.next().map(str::trim).ok_or_else(bad)?;
            let token = parts.next().map(str::trim).ok_or_else(bad)?;
            if token.is_empty() || parts.next().is_some() {
                return Err(bad());
            }
            match side {
                "F" => feminine.entry(language).or_default().push(token.to_string()),
                "M" => masculine.entry(language).or_default().push(token.to_string()),
                _ => return Err(bad()),
            }
        }
        let languages: HashSet<LangCode> =
            feminine.keys().chain(masculine.keys()).cloned().collect();
        let mut out = BTreeMap::new();
        for language in languages {
            let lexicon = PronounLexicon::new(
                language.clone(),
                feminine.remove(&language).unwrap_or_default(),
                masculine.remove(&language).unwrap_or_default(),
            )?;
            out.insert(language, lexicon);
        }
        Ok(out)
    }

    pub fn from_reader<R: BufRead>(
        mut reader: R,
    ) -> Result<BTreeMap<LangCode, PronounLexicon>, LexiconError> {
        let mut data = String::new();
        reader.read_to_string(&mut data)?;
        Self::parse(&data)
    }
}

/// Classifies an article by comparing gendered pronoun counts; the lexicon's
/// language should match the article's.
pub fn classify_gender(article: &ArticleText, lexicon: &PronounLexicon) -> GenderLabel {
    debug_assert_eq!(article.key.language, lexicon.language);
    let mut feminine = 0u64;
    let mut masculine = 0u64;
    for token in article
        .plain_text
        .split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty())
    {
        let token = token.to_lowercase();
        if lexicon.feminine.contains(&token) {
            feminine += 1;
        } else if lexicon.masculine.contains(&token) {
            masculine += 1;
        }
    }
    match feminine.cmp(&masculine) {
        std::cmp::Ordering::Greater => GenderLabel::Female,
        std::cmp::Ordering::Less => GenderLabel::Male,
        std::cmp::Ordering::Equal => GenderLabel::Unknown,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalanceMode {
    SentenceLevel,
    DocumentLevel,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BalanceConfig {
    pub mode: BalanceMode,
    pub seed: u64,
}

impl Default for BalanceConfig {
    fn default() -> Self {
        BalanceConfig {
            mode: BalanceMode::SentenceLevel,
            seed: 0,
        }
    }
}

/// Balances female against male content.
///
/// Documents sharing a docid (the per-language versions of one biography)
/// are treated as one unit: sentence mode removes the same seg ids from
/// every language and renumbers, document mode drops whole units. Unknown-
/// gender documents pass through untouched and never count toward balance.
pub fn balance_corpus(
    documents: Vec<DocumentRecord>,
    config: &BalanceConfig,
) -> Vec<DocumentRecord> {
    match config.mode {
        BalanceMode::Off => documents,
        BalanceMode::SentenceLevel => balance_sentences(documents, config.seed),
        BalanceMode::DocumentLevel => balance_documents(documents, config.seed),
    }
}

/// Biographies grouped by docid, in first-appearance order.
fn group_order(documents: &[DocumentRecord]) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    for doc in documents {
        if seen.insert(doc.docid.clone()) {
            order.push(doc.docid.clone());
        }
    }
    order
}

fn group_gender(documents: &[DocumentRecord], docid: &str) -> GenderLabel {
    documents
        .iter()
        .find(|d| d.docid == docid)
        .map(|d| d.gender)
        .unwrap_or(GenderLabel::Unknown)
}

/// Distinct seg ids of a biography (identical across languages for valid
/// corpora; the union keeps the pass total even if they diverge).
fn group_seg_ids(documents: &[DocumentRecord], docid: &str) -> Vec<u32> {
    let mut ids: Vec<u32> = documents
        .iter()
        .filter(|d| d.docid == docid)
        .flat_map(|d| d.segments.iter().map(|s| s.id))
        .collect::<std::collections::BTreeSet<u32>>()
        .into_iter()
        .collect();
    ids.sort_unstable();
    ids
}

fn balance_sentences(documents: Vec<DocumentRecord>, seed: u64) -> Vec<DocumentRecord> {
    let order = group_order(&documents);
    let mut female_total = 0usize;
    let mut male_total = 0usize;
    let mut majority_pool: Vec<(String, u32)> = Vec::new(); // (docid, seg id)
    let mut genders: BTreeMap<String, GenderLabel> = BTreeMap::new();
    for docid in &order {
        let gender = group_gender(&documents, docid);
        genders.insert(docid.clone(), gender);
        let count = group_seg_ids(&documents, docid).len();
        match gender {
            GenderLabel::Female => female_total += count,
            GenderLabel::Male => male_total += count,
            GenderLabel::Unknown => {}
        }
    }
    if female_total == male_total {
        return documents;
    }
    let majority = if male_total > female_total {
        GenderLabel::Male
    } else {
        GenderLabel::Female
    };
    for docid in &order {
        if genders[docid] == majority {
            for seg_id in group_seg_ids(&documents, docid) {
                majority_pool.push((docid.clone(), seg_id));
            }
        }
    }
    let remove_count = male_total.abs_diff(female_total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let removed: HashSet<(String, u32)> =
        rand::seq::index::sample(&mut rng, majority_pool.len(), remove_count)
            .into_iter()
            .map(|i| majority_pool[i].clone())
            .collect();

    documents
        .into_iter()
        .filter_map(|mut doc| {
            if genders.get(&doc.docid) != Some(&majority) {
                return Some(doc);
            }
            doc.segments
                .retain(|seg| !removed.contains(&(doc.docid.clone(), seg.id)));
            if doc.segments.is_empty() {
                return None;
            }
            for (i, seg) in doc.segments.iter_mut().enumerate() {
                seg.id = i as u32 + 1;
            }
            Some(doc)
        })
        .collect()
}

fn balance_documents(documents: Vec<DocumentRecord>, seed: u64) -> Vec<DocumentRecord> {
    let order = group_order(&documents);
    let mut female: Vec<&String> = Vec::new();
    let mut male: Vec<&String> = Vec::new();
    for docid in &order {
        match group_gender(&documents, docid) {
            GenderLabel::Female => female.push(docid),
            GenderLabel::Male => male.push(docid),
            GenderLabel::Unknown => {}
        }
    }
    if female.len() == male.len() {
        return documents;
    }
    let majority = if male.len() > female.len() {
        &male
    } else {
        &female
    };
    let remove_count = male.len().abs_diff(female.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let removed: HashSet<String> = rand::seq::index::sample(&mut rng, majority.len(), remove_count)
        .into_iter()
        .map(|i| majority[i].clone())
        .collect();
    documents
        .into_iter()
        .filter(|doc| !removed.contains(&doc.docid))
        .collect()
}
