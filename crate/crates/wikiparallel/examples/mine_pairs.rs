//! Margin-based pair mining on a small planted bilingual corpus.
//! Run with `cargo run --example mine_pairs`.

use wikiparallel::embed::SentenceVector;
use wikiparallel::{
    builtin_fallback_embed, mine_pairs, nearest_neighbors, ArticleKey, LangCode, MiningConfig,
    SentenceRef,
};

fn corpus(language: &LangCode, texts: &[&str]) -> Vec<SentenceVector> {
    texts
        .iter()
        .enumerate()
        .map(|(i, text)| SentenceVector {
            sentence: SentenceRef::new(ArticleKey::new(language.clone(), "Doc"), i as u32),
            values: builtin_fallback_embed(text, 256).unwrap(),
        })
        .collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let en = LangCode::new("en")?;
    let es = LangCode::new("es")?;
    // three translation pairs (surface-perturbed duplicates) and one
    // unaligned sentence per side
    let source = corpus(
        &en,
        &[
            "She teaches classics at the university of Bayonne.",
            "The magazine covered coastal poetry and essays.",
            "Her novel appeared in nineteen ninety four.",
            "Municipal road budgets are managed by the county.",
        ],
    );
    let target = corpus(
        &es,
        &[
            "She teaches classicas at the universidad of Bayonne es.",
            "The magazina covered coastal poesia and essays es.",
            "Her novela appeared in nineteen ninety four es.",
            "Harbor lighthouse inspections happen each spring es.",
        ],
    );

    let nn = nearest_neighbors(&source[0], &target, 2)?;
    println!("2 nearest neighbors of {}:", nn.query);
    for (neighbor, similarity) in &nn.neighbors {
        println!("  {neighbor}  cos={similarity:.4}");
    }

    let config = MiningConfig::default();
    println!(
        "\nmining with k={}, threshold={}, strategy={:?}:",
        config.k, config.margin_threshold, config.strategy
    );
    for pair in mine_pairs(&source, &target, &config)? {
        println!(
            "  {} <-> {}  margin={:.4} cos={:.4}",
            pair.source, pair.target, pair.margin, pair.cosine
        );
    }
    println!("(the unaligned sentences on both sides stay unmatched)");
    Ok(())
}
