//! Classify a biography's gender by counting gendered pronouns.
//! Run with `cargo run --example classify_gender`.

use wikiparallel::dump::ArticleText;
use wikiparallel::{classify_gender, ArticleKey, LangCode, PronounLexicon};

fn article(language: &LangCode, text: &str) -> ArticleText {
    ArticleText {
        key: ArticleKey::new(language.clone(), "Demo"),
        wpid: 1,
        plain_text: text.to_string(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lexicons = PronounLexicon::builtin();
    let en = LangCode::new("en")?;
    let es = LangCode::new("es")?;

    let samples = [
        (
            &en,
            "She teaches classics at the University of Bayonne; she was co-founder of the literary magazine and a new newspaper.",
        ),
        (&en, "He played for the harbor club and his team won twice."),
        (&en, "The lighthouse was rebuilt twice after winter storms."),
        (&en, "She met him at the award ceremony."),
        (&es, "Él escribió tres novelas en Cádiz y él fundó una revista."),
    ];
    for (language, text) in samples {
        let lexicon = &lexicons[language];
        let label = classify_gender(&article(language, text), lexicon);
        println!("[{language}] {label:<8} {text}");
    }
    println!("\n(no pronouns, or a tie, leaves the gender unassigned)");
    Ok(())
}
