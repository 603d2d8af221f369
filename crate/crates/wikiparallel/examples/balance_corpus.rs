//! Balance a corpus by gender: seeded removal of majority-gender segments
//! (sentence mode) or whole biographies (document mode).
//! Run with `cargo run --example balance_corpus`.

use wikiparallel::corpus::{DocumentRecord, Segment};
use wikiparallel::{balance_corpus, BalanceConfig, BalanceMode, GenderLabel, LangCode};

fn doc(docid: &str, gender: GenderLabel, segments: u32) -> DocumentRecord {
    DocumentRecord {
        docid: docid.to_string(),
        wpid: 1,
        language: LangCode::new("en").unwrap(),
        topic: None,
        gender,
        title: docid.to_string(),
        segments: (1..=segments)
            .map(|id| Segment {
                id,
                text: format!("{docid} sentence {id}"),
            })
            .collect(),
    }
}

fn describe(docs: &[DocumentRecord], label: &str) {
    let count = |g: GenderLabel| -> (usize, usize) {
        let docs_of: Vec<&DocumentRecord> = docs.iter().filter(|d| d.gender == g).collect();
        (docs_of.len(), docs_of.iter().map(|d| d.segments.len()).sum())
    };
    let (fd, fs) = count(GenderLabel::Female);
    let (md, ms) = count(GenderLabel::Male);
    let (ud, us) = count(GenderLabel::Unknown);
    println!("{label}: F {fd} docs/{fs} segs, M {md} docs/{ms} segs, U {ud} docs/{us} segs");
}

fn main() {
    let corpus = vec![
        doc("Maria", GenderLabel::Female, 6),
        doc("Irene", GenderLabel::Female, 4),
        doc("Jon", GenderLabel::Male, 9),
        doc("Peio", GenderLabel::Male, 8),
        doc("Ander", GenderLabel::Male, 5),
        doc("Aran", GenderLabel::Unknown, 3),
    ];
    describe(&corpus, "input          ");

    let sentence_mode = balance_corpus(
        corpus.clone(),
        &BalanceConfig {
            mode: BalanceMode::SentenceLevel,
            seed: 42,
        },
    );
    describe(&sentence_mode, "sentence-level ");

    let document_mode = balance_corpus(
        corpus.clone(),
        &BalanceConfig {
            mode: BalanceMode::DocumentLevel,
            seed: 42,
        },
    );
    describe(&document_mode, "document-level ");

    println!("\nsame seed removes the same segments; a different seed removes");
    println!("different ones but always the same number:");
    for seed in [1u64, 2] {
        let balanced = balance_corpus(
            corpus.clone(),
            &BalanceConfig {
                mode: BalanceMode::SentenceLevel,
                seed,
            },
        );
        let jon: Vec<u32> = balanced
            .iter()
            .find(|d| d.docid == "Jon")
            .map(|d| d.segments.iter().map(|s| s.id).collect())
            .unwrap_or_default();
        describe(&balanced, &format!("seed {seed}         "));
        println!("  Jon keeps seg ids {jon:?} (renumbered)");
    }
    println!("\nunknown-gender documents pass through untouched");
}
