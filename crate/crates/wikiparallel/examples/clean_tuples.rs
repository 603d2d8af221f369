//! Drop mined tuples with asymmetric content (length ratio) and exact
//! duplicates. Run with `cargo run --example clean_tuples`.

use wikiparallel::cleaning::{audit_line, FilterDecision, RejectReason};
use wikiparallel::{length_ratio_filter, ArticleKey, CleaningConfig, LangCode, SentenceRef};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = CleaningConfig::default();
    println!(
        "max_length_ratio={}, unit={:?}, drop_at_bound={}\n",
        config.max_length_ratio, config.length_unit, config.drop_at_bound
    );

    let cases: [(&str, Vec<&str>); 4] = [
        (
            "one member carries extra content",
            vec![
                "Mahrez married his English girlfriend Rita Johal in 2015.",
                "Mahrez se casó con su novia inglesa en 2015 y tuvieron una hija ese mismo año.",
            ],
        ),
        (
            "comparable lengths",
            vec![
                "She was honored by the Ministry of Culture in 2008.",
                "Fue honrada por el Ministerio de Cultura en 2008 es.",
            ],
        ),
        ("empty member", vec!["Some text here.", "   "]),
        (
            "exactly on the 1.2x bound stays",
            vec![
                "aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa", // 50 chars
                "bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb", // 60 chars
            ],
        ),
    ];
    let en = SentenceRef::new(ArticleKey::new(LangCode::new("en")?, "Doc"), 0);
    let es = SentenceRef::new(ArticleKey::new(LangCode::new("es")?, "Doc"), 0);
    for (label, texts) in &cases {
        let decision = length_ratio_filter(texts, &config)?;
        println!("{label}:");
        for t in texts {
            println!("    {t:?}");
        }
        match decision {
            FilterDecision::Keep => println!("  -> keep\n"),
            FilterDecision::Drop(reason) => {
                println!("  -> drop ({})", reason.code());
                println!("  audit: {}\n", audit_line(reason, &[&en, &es]));
            }
        }
    }

    println!("a reject reason of its own exists for empty members:");
    println!("  {:?}", RejectReason::EmptyMember.code());
    Ok(())
}
