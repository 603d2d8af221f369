//! The whole pipeline on a bundled two-language fixture: dumps in, one
//! document-level XML file per language out.
//! Run with `cargo run --example full_pipeline`.

use std::collections::BTreeMap;

use wikiparallel::gender::{BalanceConfig, BalanceMode};
use wikiparallel::pipeline::{PipelineConfig, Selection};
use wikiparallel::{run_pipeline, CleaningConfig, EmbeddingProviderSpec, LangCode, MiningConfig};

fn page(title: &str, id: u64, text: &str) -> String {
    format!(
        "<page><title>{title}</title><ns>0</ns><id>{id}</id>\
         <revision><id>{rev}</id><text>{text}</text></revision></page>",
        rev = id + 1000
    )
}

fn dump(language: &str, pages: &[String]) -> String {
    format!(
        "<mediawiki xml:lang=\"{language}\"><siteinfo><sitename>Demo</sitename></siteinfo>{}</mediawiki>",
        pages.join("")
    )
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;

    // two biographies; the "translations" are surface-perturbed duplicates
    // so the builtin fallback embedder can align them
    let en_dump = dump(
        "en",
        &[
            page(
                "Maria Solano",
                101,
                "'''Maria Solano''' is a writer. She founded a literary magazine on the coast. \
                 Her poems won the national critics award in 1998. \
                 [[Category:Living people]] [[es:María Solano]]",
            ),
            page(
                "Jon Etxeberria",
                102,
                "'''Jon Etxeberria''' is an athlete. He scored the winning goal in the provincial final. \
                 His autobiography describes the old arena. \
                 [[Category:Living people]] [[es:Jon Etxeberria]]",
            ),
        ],
    );
    let es_dump = dump(
        "es",
        &[
            page(
                "María Solano",
                201,
                "'''María Solano''' is a writer es. She funded a literaria magazine on the coast es. \
                 Her poemas won the nacional critics award in 1998 es. \
                 [[Category:Living people]] [[en:Maria Solano]]",
            ),
            page(
                "Jon Etxeberria",
                202,
                "'''Jon Etxeberria''' is an athlete es. He scored the winning gol in the provincial final es. \
                 His autobiografia describes the old arena es. \
                 [[Category:Living people]] [[en:Jon Etxeberria]]",
            ),
        ],
    );
    std::fs::write(dir.path().join("en.xml"), en_dump)?;
    std::fs::write(dir.path().join("es.xml"), es_dump)?;

    let mut dumps = BTreeMap::new();
    dumps.insert(LangCode::new("en")?, dir.path().join("en.xml"));
    dumps.insert(LangCode::new("es")?, dir.path().join("es.xml"));
    let config = PipelineConfig {
        languages: vec![LangCode::new("en")?, LangCode::new("es")?],
        dumps,
        selection: Selection {
            title_list: None,
            category: Some("Living people".into()),
            all: false,
        },
        embedding: EmbeddingProviderSpec::builtin_fallback(256),
        mining: MiningConfig::default(),
        cleaning: CleaningConfig::default(),
        balance: BalanceConfig {
            mode: BalanceMode::SentenceLevel,
            seed: 7,
        },
        output_dir: dir.path().join("out"),
        topics_file: None,
        pairs_dump: Some("pairs.tsv".into()),
        pronoun_lexicons: None,
        abbreviations: BTreeMap::new(),
    };

    let report = run_pipeline(&config)?;
    println!("== summary ==\n{}", report.summary);
    println!("tuples mined {}, kept after cleaning {}", report.tuples_mined, report.tuples_kept);
    println!("\n== statistics ==\n{}", report.stats_report);
    for (language, path) in &report.corpus_files {
        println!("== {} ==", path.display());
        print!("{}", std::fs::read_to_string(path)?);
        let _ = language;
    }
    println!(
        "== mined pairs ({}) ==",
        report.pairs_dump_path.as_ref().unwrap().display()
    );
    print!(
        "{}",
        std::fs::read_to_string(report.pairs_dump_path.unwrap())?
    );
    Ok(())
}
