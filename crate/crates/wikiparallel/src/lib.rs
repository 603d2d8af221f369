//! Mine document-aware, N-way parallel sentence corpora from Wikipedia XML
//! dumps.
//!
//! The pipeline streams per-language dumps, links equivalent articles through
//! interlanguage links, keeps the biographies available in every configured
//! language, embeds their sentences, mines translation pairs by the margin
//! criterion with a pivot language, intersects the pairs into N-way tuples,
//! filters asymmetric tuples by length ratio, classifies each biography's
//! gender from pronoun counts, optionally balances the corpus by gender, and
//! writes one document-level XML file per language plus a statistics report.
//!
//! Every stage is exposed on its own; `examples/` has one runnable program
//! per capability, and the `wikiparallel` binary drives the whole pipeline
//! from a TOML config.

pub mod cleaning;
pub mod corpus;
pub mod dump;
pub mod embed;
pub mod gender;
pub mod index;
pub mod lang;
pub mod mining;
pub mod pipeline;
mod xmlscan;

pub use cleaning::{dedupe_tuples, length_ratio_filter, CleaningConfig, LengthUnit};
pub use corpus::{
    compute_stats, read_corpus_xml, render_stats_report, write_corpus_xml, CorpusStats,
    DocumentRecord, Segment,
};
pub use dump::{
    normalize_title, segment_sentences, stream_pages, strip_wikitext, AbbreviationList,
    ArticleText, PageSelector, RawPage, Sentence,
};
pub use embed::{builtin_fallback_embed, embed_batch, EmbeddingProviderSpec, SentenceVector};
pub use gender::{balance_corpus, classify_gender, BalanceConfig, BalanceMode, GenderLabel, PronounLexicon};
pub use index::{resolve_interlanguage, select_complete_entries, CompleteEntrySet, TitleMapping};
pub use lang::{ArticleKey, LangCode, SentenceRef};
pub use mining::{
    intersect_multiway, margin_score, mine_pairs, nearest_neighbors, AlignedTuple, CandidatePair,
    MiningConfig, NeighborSet, RetrievalStrategy,
};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineError, PipelineReport};
