//! End-to-end orchestration: dump ingestion through corpus files.
//!
//! `run_pipeline` wires the stages together: stream per-language dumps,
//! resolve interlanguage links, keep complete biographies, segment, embed,
//! mine pairs per document and non-pivot language, intersect into tuples,
//! clean, classify gender, balance, and write one XML file per language plus
//! the reports. Identical config and seed give byte-identical outputs.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cleaning::{self, CleaningConfig, CleaningError, FilterDecision};
use crate::corpus::{
    compute_stats, render_stats_report, write_corpus_xml, CorpusError, DocumentRecord, Segment,
};
use crate::dump::{
    load_title_list, segment_sentences, stream_pages, strip_wikitext, AbbreviationList,
    ArticleText, DumpError, PageSelector, RawPage, Sentence,
};
use crate::embed::{embed_batch, EmbedError, EmbeddingProviderSpec, SentenceVector};
use crate::gender::{
    balance_corpus, classify_gender, BalanceConfig, GenderLabel, LexiconError, PronounLexicon,
};
use crate::index::{render_summary, resolve_interlanguage, select_complete_entries};
use crate::lang::{ArticleKey, LangCode, SentenceRef};
use crate::mining::{intersect_multiway, mine_pairs, CandidatePair, MiningConfig, MiningError};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("dump-ingest[{language}]: {source}")]
    Dump {
        language: LangCode,
        source: DumpError,
    },
    #[error("embedding: {0}")]
    Embedding(#[from] EmbedError),
    #[error("mining: {0}")]
    Mining(#[from] MiningError),
    #[error("cleaning: {0}")]
    Cleaning(#[from] CleaningError),
    #[error("gender-balance: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("corpus-output: {0}")]
    Corpus(#[from] CorpusError),
    #[error("{stage}: i/o error at {path:?}: {source}")]
    Io {
        stage: &'static str,
        path: PathBuf,
        source: std::io::Error,
    },
}

impl PipelineError {
    /// Configuration/validation problems exit with status 1; runtime
    /// failures with 2.
    pub fn is_validation(&self) -> bool {
        matches!(self, PipelineError::Config(_))
    }
}

fn io_err<'p>(
    stage: &'static str,
    path: &'p Path,
) -> impl FnOnce(std::io::Error) -> PipelineError + 'p {
    move |source| PipelineError::Io {
        stage,
        path: path.to_path_buf(),
        source,
    }
}

/// Which pages to pull from the pivot dump.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Selection {
    /// One title per line, UTF-8.
    pub title_list: Option<PathBuf>,
    pub category: Option<String>,
    /// Take every main-namespace page instead.
    pub all: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// Pivot language first.
    pub languages: Vec<LangCode>,
    /// Dump path per language.
    pub dumps: BTreeMap<LangCode, PathBuf>,
    #[serde(default)]
    pub selection: Selection,
    pub embedding: EmbeddingProviderSpec,
    #[serde(default)]
    pub mining: MiningConfig,
    #[serde(default)]
    pub cleaning: CleaningConfig,
    #[serde(default)]
    pub balance: BalanceConfig,
    pub output_dir: PathBuf,
    /// Optional `docid<TAB>topic` annotations (topics are never inferred).
    #[serde(default)]
    pub topics_file: Option<PathBuf>,
    /// Optional mined-pair audit dump (TSV), relative to the output dir
    /// unless absolute.
    #[serde(default)]
    pub pairs_dump: Option<PathBuf>,
    /// Replacement pronoun lexicon file (`language<TAB>F|M<TAB>token`).
    #[serde(default)]
    pub pronoun_lexicons: Option<PathBuf>,
    /// Replacement abbreviation list per language (one token per line).
    #[serde(default)]
    pub abbreviations: BTreeMap<LangCode, PathBuf>,
}

impl PipelineConfig {
    pub fn pivot(&self) -> &LangCode {
        &self.languages[0]
    }

    pub fn target_languages(&self) -> &[LangCode] {
        &self.languages[1..]
    }

    pub fn from_toml_str(data: &str) -> Result<Self, PipelineError> {
        toml::from_str(data).map_err(|e| PipelineError::Config(e.to_string()))
    }

    pub fn from_toml_file(path: &Path) -> Result<Self, PipelineError> {
        let data = fs::read_to_string(path).map_err(io_err("config", path))?;
        Self::from_toml_str(&data)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let fail = |message: String| Err(PipelineError::Config(message));
        if self.languages.len() < 2 {
            return fail(format!(
                "need at least 2 languages (pivot first), got {}",
                self.languages.len()
            ));
        }
        for (i, lang) in self.languages.iter().enumerate() {
            if self.languages[i + 1..].contains(lang) {
                return fail(format!("language {lang} listed more than once"));
            }
        }
        for lang in &self.languages {
            if !self.dumps.contains_key(lang) {
                return fail(format!("no dump path configured for language {lang}"));
            }
        }
        let has_filter = self.selection.title_list.is_some() || self.selection.category.is_some();
        if self.selection.all && has_filter {
            return fail("selection.all excludes title_list/category".into());
        }
        if !self.selection.all && !has_filter {
            return fail("give selection.title_list and/or selection.category, or set selection.all".into());
        }
        self.embedding
            .validate()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        self.mining
            .validate()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        self.cleaning
            .validate()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        Ok(())
    }
}

/// What a finished run produced.
#[derive(Debug)]
pub struct PipelineReport {
    pub corpus_files: BTreeMap<LangCode, PathBuf>,
    pub stats_path: PathBuf,
    pub summary_path: PathBuf,
    pub rejected_log_path: PathBuf,
    pub pairs_dump_path: Option<PathBuf>,
    /// The rendered statistics table, as written to `stats_path`.
    pub stats_report: String,
    /// The rendered funnel summary, as written to `summary_path`.
    pub summary: String,
    pub tuples_mined: usize,
    pub tuples_kept: usize,
    pub documents_per_language: usize,
    pub segments_per_language: usize,
}

/// Sentences and vectors of one article, aligned by position.
struct ArticleSentences {
    sentences: Vec<Sentence>,
    vectors: Vec<SentenceVector>,
}

pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    config.validate()?;
    let pivot = config.pivot().clone();

    // --- dump ingestion: pivot ---
    let pivot_selector = build_pivot_selector(config)?;
    let pivot_pages = ingest_language(config, &pivot, pivot_selector)?;

    // --- interlanguage resolution ---
    let mapping = resolve_interlanguage(&pivot, &pivot_pages, config.target_languages());

    // --- dump ingestion: targets, selected by mapped titles ---
    let mut all_pages: BTreeMap<LangCode, Vec<RawPage>> = BTreeMap::new();
    for language in config.target_languages() {
        let titles: Vec<&String> = mapping
            .entries
            .values()
            .filter_map(|links| links.get(language))
            .collect();
        if titles.is_empty() {
            all_pages.insert(language.clone(), Vec::new());
            continue;
        }
        let selector = PageSelector::from_titles(titles);
        all_pages.insert(language.clone(), ingest_language(config, language, selector)?);
    }
    all_pages.insert(pivot.clone(), pivot_pages);

    // --- wikitext stripping ---
    let mut articles: HashMap<ArticleKey, ArticleText> = HashMap::new();
    let mut strip_warnings: BTreeMap<LangCode, usize> = BTreeMap::new();
    let mut retrieved_counts: BTreeMap<LangCode, usize> = BTreeMap::new();
    for (language, pages) in &all_pages {
        let stripped: Vec<_> = pages.par_iter().map(strip_wikitext).collect();
        let mut warnings = 0;
        for result in stripped {
            warnings += result.warnings.len();
            articles.insert(result.article.key.clone(), result.article);
        }
        strip_warnings.insert(language.clone(), warnings);
        retrieved_counts.insert(language.clone(), pages.len());
    }

    // --- completeness selection ---
    let article_list: Vec<ArticleText> = {
        let mut list: Vec<&ArticleText> = articles.values().collect();
        list.sort_by(|a, b| a.key.cmp(&b.key));
        list.into_iter().cloned().collect()
    };
    let complete = select_complete_entries(&mapping, &article_list);
    let mut summary = render_summary(&mapping, &retrieved_counts, &complete);
    for (language, count) in &strip_warnings {
        if *count > 0 {
            let _ = writeln!(summary, "wikitext strip warnings [{language}]: {count}");
        }
    }

    // --- segmentation ---
    let abbreviations = load_abbreviations(config)?;
    let mut sentences_by_article: BTreeMap<ArticleKey, Vec<Sentence>> = BTreeMap::new();
    for entry in complete.entries.values() {
        for (language, (title, _wpid)) in &entry.articles {
            let key = ArticleKey::new(language.clone(), title.clone());
            let article = articles.get(&key).expect("complete entry was retrieved");
            let abbrevs = abbreviations
                .get(language)
                .expect("abbreviation list per configured language");
            sentences_by_article.insert(key, segment_sentences(article, abbrevs));
        }
    }

    // --- embedding ---
    let flat: Vec<Sentence> = sentences_by_article
        .values()
        .flat_map(|s| s.iter().cloned())
        .collect();
    let mut corpus_vectors: BTreeMap<ArticleKey, ArticleSentences> = BTreeMap::new();
    if !flat.is_empty() {
        let vectors = embed_batch(&config.embedding, &flat)?;
        let mut cursor = 0usize;
        for (key, sentences) in sentences_by_article {
            let take = sentences.len();
            let slice = vectors[cursor..cursor + take].to_vec();
            cursor += take;
            corpus_vectors.insert(
                key,
                ArticleSentences {
                    sentences,
                    vectors: slice,
                },
            );
        }
    }

    // --- mining: per document and non-pivot language, then intersection ---
    let pairs_by_language = mine_all(config, &complete, &corpus_vectors)?;
    let tuples = intersect_multiway(&pairs_by_language);
    let tuples_mined = tuples.len();

    // --- cleaning ---
    let text_of: HashMap<SentenceRef, &str> = corpus_vectors
        .iter()
        .flat_map(|(key, article)| {
            article.sentences.iter().map(move |s| {
                (
                    SentenceRef::new(key.clone(), s.index),
                    s.text.as_str(),
                )
            })
        })
        .collect();
    let mut kept = Vec::new();
    let mut rejected_lines = Vec::new();
    for tuple in tuples {
        let mut refs: Vec<&SentenceRef> = vec![&tuple.pivot];
        refs.extend(tuple.per_language.values().map(|(r, _)| r));
        let texts: Vec<&str> = refs.iter().map(|r| text_of[*r]).collect();
        match cleaning::length_ratio_filter(&texts, &config.cleaning)? {
            FilterDecision::Keep => kept.push(tuple),
            FilterDecision::Drop(reason) => {
                rejected_lines.push(cleaning::audit_line(reason, &refs));
            }
        }
    }
    let kept = cleaning::dedupe_tuples(kept, |r| text_of[r]);
    let tuples_kept = kept.len();

    // --- gender classification on the pivot articles ---
    let lexicons = load_lexicons(config)?;
    let pivot_lexicon = lexicons
        .get(&pivot)
        .ok_or_else(|| LexiconError::MissingLanguage(pivot.clone()))?;
    let topics = load_topics(config)?;

    // --- document assembly ---
    let documents = assemble_documents(
        config,
        &complete,
        &kept,
        &text_of,
        &articles,
        pivot_lexicon,
        &topics,
    );

    // --- balancing ---
    let documents = balance_corpus(documents, &config.balance);

    // --- stats + output ---
    let stats: Vec<_> = config
        .languages
        .iter()
        .map(|language| compute_stats(&documents, language))
        .collect();
    let stats_report = render_stats_report(&stats);

    let docids: std::collections::BTreeSet<&String> =
        documents.iter().map(|d| &d.docid).collect();
    let documents_per_language = docids.len();
    let segments_per_language = documents
        .iter()
        .filter(|d| d.language == pivot)
        .map(|d| d.segments.len())
        .sum();

    let outputs = write_outputs(
        config,
        &documents,
        &stats_report,
        &summary,
        &rejected_lines,
        &pairs_by_language,
    )?;

    Ok(PipelineReport {
        corpus_files: outputs.corpus_files,
        stats_path: outputs.stats_path,
        summary_path: outputs.summary_path,
        rejected_log_path: outputs.rejected_log_path,
        pairs_dump_path: outputs.pairs_dump_path,
        stats_report,
        summary,
        tuples_mined,
        tuples_kept,
        documents_per_language,
        segments_per_language,
    })
}

fn build_pivot_selector(config: &PipelineConfig) -> Result<PageSelector, PipelineError> {
    if config.selection.all {
        return Ok(PageSelector::all());
    }
    let titles = match &config.selection.title_list {
        Some(path) => {
            let file = fs::File::open(path).map_err(io_err("dump-ingest", path))?;
            Some(load_title_list(BufReader::new(file)).map_err(io_err("dump-ingest", path))?)
        }
        None => None,
    };
    Ok(match (titles, &config.selection.category) {
        (Some(titles), Some(category)) => PageSelector::from_titles_and_category(titles, category),
        (Some(titles), None) => PageSelector::from_titles(titles),
        (None, Some(category)) => PageSelector::from_category(category),
        (None, None) => unreachable!("validated"),
    })
}

fn ingest_language(
    config: &PipelineConfig,
    language: &LangCode,
    selector: PageSelector,
) -> Result<Vec<RawPage>, PipelineError> {
    let path = &config.dumps[language];
    let file = fs::File::open(path).map_err(io_err("dump-ingest", path))?;
    let stream = stream_pages(file, selector, language.clone()).map_err(|source| {
        PipelineError::Dump {
            language: language.clone(),
            source,
        }
    })?;
    stream
        .collect::<Result<Vec<_>, _>>()
        .map_err(|source| PipelineError::Dump {
            language: language.clone(),
            source,
        })
}

fn load_abbreviations(
    config: &PipelineConfig,
) -> Result<BTreeMap<LangCode, AbbreviationList>, PipelineError> {
    let mut out = BTreeMap::new();
    for language in &config.languages {
        let list = match config.abbreviations.get(language) {
            Some(path) => {
                let file = fs::File::open(path).map_err(io_err("dump-ingest", path))?;
                AbbreviationList::from_reader(BufReader::new(file))
                    .map_err(io_err("dump-ingest", path))?
            }
            None => AbbreviationList::builtin(language),
        };
        out.insert(language.clone(), list);
    }
    Ok(out)
}

fn load_lexicons(
    config: &PipelineConfig,
) -> Result<BTreeMap<LangCode, PronounLexicon>, PipelineError> {
    let mut lexicons = PronounLexicon::builtin();
    if let Some(path) = &config.pronoun_lexicons {
        let file = fs::File::open(path).map_err(io_err("gender-balance", path))?;
        // languages present in the file replace the builtin ones
        for (language, lexicon) in PronounLexicon::from_reader(BufReader::new(file))? {
            lexicons.insert(language, lexicon);
        }
    }
    Ok(lexicons)
}

fn load_topics(config: &PipelineConfig) -> Result<BTreeMap<String, String>, PipelineError> {
    let Some(path) = &config.topics_file else {
        return Ok(BTreeMap::new());
    };
    let data = fs::read_to_string(path).map_err(io_err("corpus-output", path))?;
    let mut topics = BTreeMap::new();
    for (line_no, raw) in data.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((docid, topic)) = line.split_once('\t') else {
            return Err(PipelineError::Config(format!(
                "topics file {path:?} line {}: expected docid<TAB>topic, got {raw:?}",
                line_no + 1
            )));
        };
        let topic = topic.trim();
        if !crate::corpus::is_valid_topic(topic) {
            return Err(PipelineError::Config(format!(
                "topics file {path:?} line {}: topic {topic:?} is not one of C1..C9",
                line_no + 1
            )));
        }
        topics.insert(docid.trim().to_string(), topic.to_string());
    }
    Ok(topics)
}

fn mine_all(
    config: &PipelineConfig,
    complete: &crate::index::CompleteEntrySet,
    corpus_vectors: &BTreeMap<ArticleKey, ArticleSentences>,
) -> Result<BTreeMap<LangCode, Vec<CandidatePair>>, PipelineError> {
    let pivot = config.pivot();
    let mut pairs_by_language: BTreeMap<LangCode, Vec<CandidatePair>> = BTreeMap::new();
    for language in config.target_languages() {
        pairs_by_language.insert(language.clone(), Vec::new());
    }
    if config.mining.document_scope {
        // each biography mines independently; collect preserves entry order
        let entries: Vec<_> = complete.entries.values().collect();
        for language in config.target_languages() {
            let mined: Vec<Result<Vec<CandidatePair>, MiningError>> = entries
                .par_iter()
                .map(|entry| {
                    let source = entry_vectors(entry, pivot, corpus_vectors);
                    let target = entry_vectors(entry, language, corpus_vectors);
                    match (source, target) {
                        (Some(source), Some(target))
                            if !source.is_empty() && !target.is_empty() =>
                        {
                            mine_pairs(source, target, &config.mining)
                        }
                        _ => Ok(Vec::new()),
                    }
                })
                .collect();
            let out = pairs_by_language.get_mut(language).expect("initialized");
            for result in mined {
                out.extend(result?);
            }
        }
    } else {
        let mut pivot_vectors: Vec<SentenceVector> = Vec::new();
        let mut per_language: BTreeMap<&LangCode, Vec<SentenceVector>> = BTreeMap::new();
        for (key, article) in corpus_vectors {
            if key.language == *pivot {
                pivot_vectors.extend(article.vectors.iter().cloned());
            } else if let Some((language, _)) = config
                .target_languages()
                .iter()
                .find(|l| **l == key.language)
                .map(|l| (l, ()))
            {
                per_language
                    .entry(language)
                    .or_default()
                    .extend(article.vectors.iter().cloned());
            }
        }
        for language in config.target_languages() {
            let target = per_language.remove(language).unwrap_or_default();
            if pivot_vectors.is_empty() || target.is_empty() {
                continue;
            }
            let pairs = mine_pairs(&pivot_vectors, &target, &config.mining)?;
            pairs_by_language.insert(language.clone(), pairs);
        }
    }
    Ok(pairs_by_language)
}

fn entry_vectors<'a>(
    entry: &crate::index::CompleteEntry,
    language: &LangCode,
    corpus_vectors: &'a BTreeMap<ArticleKey, ArticleSentences>,
) -> Option<&'a [SentenceVector]> {
    let (title, _) = entry.articles.get(language)?;
    let key = ArticleKey::new(language.clone(), title.clone());
    corpus_vectors.get(&key).map(|a| a.vectors.as_slice())
}

fn assemble_documents(
    config: &PipelineConfig,
    complete: &crate::index::CompleteEntrySet,
    tuples: &[crate::mining::AlignedTuple],
    text_of: &HashMap<SentenceRef, &str>,
    articles: &HashMap<ArticleKey, ArticleText>,
    pivot_lexicon: &PronounLexicon,
    topics: &BTreeMap<String, String>,
) -> Vec<DocumentRecord> {
    let pivot = config.pivot();
    // group tuples by pivot article, ordered by docid then sentence position
    let mut by_docid: BTreeMap<&String, Vec<&crate::mining::AlignedTuple>> = BTreeMap::new();
    let title_to_docid: HashMap<&String, &String> = complete
        .entries
        .iter()
        .map(|(docid, entry)| {
            let (pivot_title, _) = &entry.articles[pivot];
            (pivot_title, docid)
        })
        .collect();
    for tuple in tuples {
        if let Some(docid) = title_to_docid.get(&tuple.pivot.article.title) {
            by_docid.entry(docid).or_default().push(tuple);
        }
    }
    let mut documents = Vec::new();
    for (docid, mut doc_tuples) in by_docid {
        doc_tuples.sort_by_key(|t| t.pivot.index);
        let entry = &complete.entries[docid];
        let (pivot_title, _) = &entry.articles[pivot];
        let pivot_key = ArticleKey::new(pivot.clone(), pivot_title.clone());
        let gender = articles
            .get(&pivot_key)
            .map(|a| classify_gender(a, pivot_lexicon))
            .unwrap_or(GenderLabel::Unknown);
        let topic = topics.get(docid).cloned();
        for language in &config.languages {
            let (title, wpid) = &entry.articles[language];
            let segments: Vec<Segment> = doc_tuples
                .iter()
                .enumerate()
                .map(|(i, tuple)| {
                    let sref = if language == pivot {
                        &tuple.pivot
                    } else {
                        &tuple.per_language[language].0
                    };
                    Segment {
                        id: i as u32 + 1,
                        text: text_of[sref].to_string(),
                    }
                })
                .collect();
            documents.push(DocumentRecord {
                docid: (*docid).clone(),
                wpid: *wpid,
                language: language.clone(),
                topic: topic.clone(),
                gender,
                title: title.clone(),
                segments,
            });
        }
    }
    documents
}

struct Outputs {
    corpus_files: BTreeMap<LangCode, PathBuf>,
    stats_path: PathBuf,
    summary_path: PathBuf,
    rejected_log_path: PathBuf,
    pairs_dump_path: Option<PathBuf>,
}

/// Writes everything under the output directory, removing whatever was
/// created if any write fails.
fn write_outputs(
    config: &PipelineConfig,
    documents: &[DocumentRecord],
    stats_report: &str,
    summary: &str,
    rejected_lines: &[String],
    pairs_by_language: &BTreeMap<LangCode, Vec<CandidatePair>>,
) -> Result<Outputs, PipelineError> {
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(io_err("corpus-output", dir))?;
    let mut created: Vec<PathBuf> = Vec::new();
    let result = (|| -> Result<Outputs, PipelineError> {
        let mut corpus_files = BTreeMap::new();
        for language in &config.languages {
            let per_language: Vec<DocumentRecord> = documents
                .iter()
                .filter(|d| d.language == *language)
                .cloned()
                .collect();
            let path = dir.join(format!("corpus.{language}.xml"));
            let file = fs::File::create(&path).map_err(io_err("corpus-output", &path))?;
            created.push(path.clone());
            write_corpus_xml(&per_language, language, std::io::BufWriter::new(file))?;
            corpus_files.insert(language.clone(), path);
        }
        let stats_path = dir.join("stats.txt");
        fs::write(&stats_path, stats_report).map_err(io_err("corpus-output", &stats_path))?;
        created.push(stats_path.clone());
        let summary_path = dir.join("summary.txt");
        fs::write(&summary_path, summary).map_err(io_err("corpus-output", &summary_path))?;
        created.push(summary_path.clone());
        let rejected_log_path = dir.join("rejected.log");
        let mut log = String::new();
        for line in rejected_lines {
            log.push_str(line);
            log.push('\n');
        }
        fs::write(&rejected_log_path, log).map_err(io_err("corpus-output", &rejected_log_path))?;
        created.push(rejected_log_path.clone());
        let pairs_dump_path = match &config.pairs_dump {
            Some(path) => {
                let path = if path.is_absolute() {
                    path.clone()
                } else {
                    dir.join(path)
                };
                let mut dump = String::new();
                for (language, pairs) in pairs_by_language {
                    let _ = language; // refs carry the language already
                    for pair in pairs {
                        let _ = writeln!(
                            dump,
                            "{:.6}\t{:.6}\t{}\t{}",
                            pair.margin, pair.cosine, pair.source, pair.target
                        );
                    }
                }
                fs::write(&path, dump).map_err(io_err("mining", &path))?;
                created.push(path.clone());
                Some(path)
            }
            None => None,
        };
        Ok(Outputs {
            corpus_files,
            stats_path,
            summary_path,
            rejected_log_path,
            pairs_dump_path,
        })
    })();
    if result.is_err() {
        for path in created {
            let _ = fs::remove_file(path);
        }
    }
    result
}
