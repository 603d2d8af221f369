//! Lift pairwise alignments into N-way tuples through the pivot language.
//! Run with `cargo run --example multiway_intersection`.

use std::collections::BTreeMap;

use wikiparallel::mining::CandidatePair;
use wikiparallel::{intersect_multiway, ArticleKey, LangCode, SentenceRef};

fn sref(language: &LangCode, index: u32) -> SentenceRef {
    SentenceRef::new(ArticleKey::new(language.clone(), "Doc"), index)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let en = LangCode::new("en")?;
    let es = LangCode::new("es")?;
    let ca = LangCode::new("ca")?;

    // pivot sentences 0..5; Spanish aligned 0,1,2,4; Catalan aligned 0,2,3
    let pair = |target: &LangCode, i: u32, margin: f64| CandidatePair {
        source: sref(&en, i),
        target: sref(target, i),
        margin,
        cosine: 0.9,
    };
    let mut pairwise = BTreeMap::new();
    pairwise.insert(
        es.clone(),
        vec![pair(&es, 0, 1.8), pair(&es, 1, 1.5), pair(&es, 2, 1.4), pair(&es, 4, 1.2)],
    );
    pairwise.insert(
        ca.clone(),
        vec![pair(&ca, 0, 1.7), pair(&ca, 2, 1.3), pair(&ca, 3, 1.6)],
    );

    println!("es aligned pivots: 0 1 2 4");
    println!("ca aligned pivots: 0 2 3");
    println!("\ntuples (pivot must align in every language):");
    for tuple in intersect_multiway(&pairwise) {
        print!("  pivot {}", tuple.pivot);
        for (language, (target, margin)) in &tuple.per_language {
            print!("  [{language}] {target} (margin {margin:.2})");
        }
        println!();
    }
    Ok(())
}
