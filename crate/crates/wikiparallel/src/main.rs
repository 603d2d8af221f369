//! Thin command-line front end over the library pipeline.
//!
//! Exit codes: 0 success, 1 validation failure, 2 runtime error.

use std::collections::BTreeMap;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wikiparallel::corpus::{read_corpus_xml, DocumentRecord};
use wikiparallel::gender::{BalanceConfig, BalanceMode};
use wikiparallel::pipeline::{run_pipeline, PipelineConfig, PipelineError, Selection};
use wikiparallel::{
    compute_stats, render_stats_report, write_corpus_xml, CleaningConfig, EmbeddingProviderSpec,
    LangCode, LengthUnit, MiningConfig, RetrievalStrategy,
};

#[derive(Parser)]
#[command(name = "wikiparallel", version, about = "Mine document-aware parallel corpora from Wikipedia dumps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: dumps in, per-language corpus XML out.
    Extract(ExtractArgs),
    /// Print the statistics table for existing corpus XML files.
    Stats {
        /// Corpus XML files (one per language).
        files: Vec<PathBuf>,
    },
    /// Check corpus files: parse, re-write, re-read, verify invariants and
    /// cross-language consistency.
    Validate {
        /// Corpus XML files (one per language).
        files: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct ExtractArgs {
    /// TOML pipeline configuration; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Languages, pivot first (comma separated, e.g. en,es,ca).
    #[arg(long, value_delimiter = ',')]
    languages: Vec<LangCode>,
    /// Dump path per language, as lang=path (repeatable).
    #[arg(long = "dump", value_name = "LANG=PATH")]
    dumps: Vec<String>,
    /// Title list file: one title per line.
    #[arg(long)]
    title_list: Option<PathBuf>,
    /// Category to select, e.g. "Living people".
    #[arg(long)]
    category: Option<String>,
    /// Select every main-namespace page.
    #[arg(long)]
    select_all: bool,
    /// Embedding provider kind: builtin-fallback, precomputed-file,
    /// external-service.
    #[arg(long)]
    embedding_kind: Option<String>,
    /// Embedding dimension.
    #[arg(long)]
    embedding_dimension: Option<usize>,
    /// Vector file path or service URL.
    #[arg(long)]
    embedding_location: Option<String>,
    /// Neighborhood size for the margin criterion.
    #[arg(long)]
    k: Option<usize>,
    /// Margin threshold for accepting a pair.
    #[arg(long)]
    margin_threshold: Option<f64>,
    /// Retrieval strategy: max, forward, backward, intersection.
    #[arg(long)]
    strategy: Option<String>,
    /// Mine across the whole language corpus instead of per document.
    #[arg(long)]
    no_document_scope: bool,
    /// Maximum relative length excess before a tuple is dropped.
    #[arg(long)]
    max_length_ratio: Option<f64>,
    /// Length unit: characters or tokens.
    #[arg(long)]
    length_unit: Option<String>,
    /// Drop tuples sitting exactly on the length bound.
    #[arg(long)]
    drop_at_bound: bool,
    /// Balance mode: sentence-level, document-level, off.
    #[arg(long)]
    balance_mode: Option<String>,
    /// Disable gender balancing (same as --balance-mode off).
    #[arg(long)]
    no_balance: bool,
    /// Seed for balancing removals.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// docid<TAB>topic annotation file.
    #[arg(long)]
    topics: Option<PathBuf>,
    /// Where to write the mined-pair TSV dump.
    #[arg(long)]
    pairs_dump: Option<PathBuf>,
    /// Replacement pronoun lexicon file.
    #[arg(long)]
    pronoun_lexicons: Option<PathBuf>,
    /// Replacement abbreviation list per language, as lang=path (repeatable).
    #[arg(long = "abbreviations", value_name = "LANG=PATH")]
    abbreviations: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Extract(args) => match build_config(args) {
            Ok(config) => match run_pipeline(&config) {
                Ok(report) => {
                    print!("{}", report.summary);
                    println!(
                        "tuples mined: {} / kept after cleaning: {}",
                        report.tuples_mined, report.tuples_kept
                    );
                    println!(
                        "documents per language: {} / segments per language: {}",
                        report.documents_per_language, report.segments_per_language
                    );
                    println!();
                    print!("{}", report.stats_report);
                    for (language, path) in &report.corpus_files {
                        println!("wrote [{language}] {}", path.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            },
            Err(e) => fail(e),
        },
        Command::Stats { files } => match load_documents(&files) {
            Ok(per_file) => {
                let mut stats = Vec::new();
                for (_, docs) in &per_file {
                    let Some(language) = docs.first().map(|d| d.language.clone()) else {
                        continue;
                    };
                    stats.push(compute_stats(docs, &language));
                }
                print!("{}", render_stats_report(&stats));
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Validate { files } => validate(&files),
    }
}

fn fail(e: PipelineError) -> ExitCode {
    eprintln!("error: {e}");
    if e.is_validation() {
        ExitCode::from(1)
    } else {
        ExitCode::from(2)
    }
}

fn load_documents(files: &[PathBuf]) -> Result<Vec<(PathBuf, Vec<DocumentRecord>)>, ExitCode> {
    let mut out = Vec::new();
    for path in files {
        let file = match std::fs::File::open(path) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: cannot open {}: {e}", path.display());
                return Err(ExitCode::from(2));
            }
        };
        match read_corpus_xml(BufReader::new(file)) {
            Ok(docs) => out.push((path.clone(), docs)),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return Err(ExitCode::from(1));
            }
        }
    }
    Ok(out)
}

/// Round-trip each file and check the cross-language invariants.
fn validate(files: &[PathBuf]) -> ExitCode {
    if files.is_empty() {
        eprintln!("error: no files given");
        return ExitCode::from(1);
    }
    let per_file = match load_documents(files) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let mut failures = 0usize;
    for (path, docs) in &per_file {
        let Some(language) = docs.first().map(|d| d.language.clone()) else {
            println!("{}: empty", path.display());
            continue;
        };
        let mut bytes = Vec::new();
        match write_corpus_xml(docs, &language, &mut bytes) {
            Ok(_) => match read_corpus_xml(std::io::Cursor::new(&bytes)) {
                Ok(back) if back == *docs => {
                    println!("{}: ok ({} documents)", path.display(), docs.len());
                }
                Ok(_) => {
                    eprintln!("{}: round-trip mismatch", path.display());
                    failures += 1;
                }
                Err(e) => {
                    eprintln!("{}: re-read failed: {e}", path.display());
                    failures += 1;
                }
            },
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                failures += 1;
            }
        }
    }
    // cross-language: every docid in every file with identical seg id sets
    if per_file.len() > 1 {
        let mut seg_ids: BTreeMap<&str, Vec<(&PathBuf, Vec<u32>)>> = BTreeMap::new();
        for (path, docs) in &per_file {
            for doc in docs {
                seg_ids
                    .entry(doc.docid.as_str())
                    .or_default()
                    .push((path, doc.segments.iter().map(|s| s.id).collect()));
            }
        }
        for (docid, versions) in &seg_ids {
            if versions.len() != per_file.len() {
                eprintln!(
                    "cross-language: docid {docid:?} appears in {} of {} files",
                    versions.len(),
                    per_file.len()
                );
                failures += 1;
                continue;
            }
            if !versions.windows(2).all(|w| w[0].1 == w[1].1) {
                eprintln!("cross-language: docid {docid:?} has differing seg id sets");
                failures += 1;
            }
        }
    }
    if failures == 0 {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        eprintln!("{failures} check(s) failed");
        ExitCode::from(1)
    }
}

fn parse_lang_path_pairs(
    pairs: &[String],
    what: &str,
) -> Result<BTreeMap<LangCode, PathBuf>, PipelineError> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let Some((lang, path)) = pair.split_once('=') else {
            return Err(PipelineError::Config(format!(
                "{what} must be LANG=PATH, got {pair:?}"
            )));
        };
        let lang = LangCode::new(lang.trim())
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        out.insert(lang, PathBuf::from(path.trim()));
    }
    Ok(out)
}

fn build_config(args: ExtractArgs) -> Result<PipelineConfig, PipelineError> {
    let mut config = match &args.config {
        Some(path) => PipelineConfig::from_toml_file(path)?,
        None => {
            // a minimal skeleton the flags below must fill in
            if args.languages.len() < 2 {
                return Err(PipelineError::Config(
                    "without --config, give --languages with at least 2 entries".into(),
                ));
            }
            PipelineConfig {
                languages: args.languages.clone(),
                dumps: BTreeMap::new(),
                selection: Selection::default(),
                embedding: EmbeddingProviderSpec::builtin_fallback(
                    args.embedding_dimension.unwrap_or(256),
                ),
                mining: MiningConfig::default(),
                cleaning: CleaningConfig::default(),
                balance: BalanceConfig::default(),
                output_dir: PathBuf::from("corpus-out"),
                topics_file: None,
                pairs_dump: None,
                pronoun_lexicons: None,
                abbreviations: BTreeMap::new(),
            }
        }
    };
    if args.config.is_some() && !args.languages.is_empty() {
        config.languages = args.languages;
    }
    for (lang, path) in parse_lang_path_pairs(&args.dumps, "--dump")? {
        config.dumps.insert(lang, path);
    }
    if let Some(path) = args.title_list {
        config.selection.title_list = Some(path);
        config.selection.all = false;
    }
    if let Some(category) = args.category {
        config.selection.category = Some(category);
        config.selection.all = false;
    }
    if args.select_all {
        config.selection = Selection {
            title_list: None,
            category: None,
            all: true,
        };
    }
    if let Some(kind) = args.embedding_kind {
        config.embedding.kind = match kind.as_str() {
            "builtin-fallback" => wikiparallel::embed::ProviderKind::BuiltinFallback,
            "precomputed-file" => wikiparallel::embed::ProviderKind::PrecomputedFile,
            "external-service" => wikiparallel::embed::ProviderKind::ExternalService,
            other => {
                return Err(PipelineError::Config(format!(
                    "unknown embedding kind {other:?}"
                )))
            }
        };
    }
    if let Some(dimension) = args.embedding_dimension {
        config.embedding.dimension = dimension;
    }
    if let Some(location) = args.embedding_location {
        config.embedding.location = Some(location);
    }
    if let Some(k) = args.k {
        config.mining.k = k;
    }
    if let Some(threshold) = args.margin_threshold {
        config.mining.margin_threshold = threshold;
    }
    if let Some(strategy) = args.strategy {
        config.mining.strategy = match strategy.as_str() {
            "max" => RetrievalStrategy::Max,
            "forward" => RetrievalStrategy::Forward,
            "backward" => RetrievalStrategy::Backward,
            "intersection" => RetrievalStrategy::Intersection,
            other => {
                return Err(PipelineError::Config(format!(
                    "unknown strategy {other:?}"
                )))
            }
        };
    }
    if args.no_document_scope {
        config.mining.document_scope = false;
    }
    if let Some(ratio) = args.max_length_ratio {
        config.cleaning.max_length_ratio = ratio;
    }
    if let Some(unit) = args.length_unit {
        config.cleaning.length_unit = match unit.as_str() {
            "characters" => LengthUnit::Characters,
            "tokens" => LengthUnit::Tokens,
            other => {
                return Err(PipelineError::Config(format!(
                    "unknown length unit {other:?}"
                )))
            }
        };
    }
    if args.drop_at_bound {
        config.cleaning.drop_at_bound = true;
    }
    if let Some(mode) = args.balance_mode {
        config.balance.mode = match mode.as_str() {
            "sentence-level" => BalanceMode::SentenceLevel,
            "document-level" => BalanceMode::DocumentLevel,
            "off" => BalanceMode::Off,
            other => {
                return Err(PipelineError::Config(format!(
                    "unknown balance mode {other:?}"
                )))
            }
        };
    }
    if args.no_balance {
        config.balance.mode = BalanceMode::Off;
    }
    if let Some(seed) = args.seed {
        config.balance.seed = seed;
    }
    if let Some(dir) = args.output_dir {
        config.output_dir = dir;
    }
    if let Some(path) = args.topics {
        config.topics_file = Some(path);
    }
    if let Some(path) = args.pairs_dump {
        config.pairs_dump = Some(path);
    }
    if let Some(path) = args.pronoun_lexicons {
        config.pronoun_lexicons = Some(path);
    }
    for (lang, path) in parse_lang_path_pairs(&args.abbreviations, "--abbreviations")? {
        config.abbreviations.insert(lang, path);
    }
    Ok(config)
}
