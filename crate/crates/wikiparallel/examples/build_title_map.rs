//! Link pivot articles to their counterparts through interlanguage links and
//! keep only the biographies retrievable in every language.
//! Run with `cargo run --example build_title_map`.

use std::collections::BTreeMap;

use wikiparallel::dump::{ArticleText, RawPage};
use wikiparallel::index::render_summary;
use wikiparallel::{resolve_interlanguage, select_complete_entries, ArticleKey, LangCode};

fn page(title: &str, wpid: u64, langlinks: &[(&str, &str)]) -> RawPage {
    RawPage {
        title: title.to_string(),
        wpid,
        language: LangCode::new("en").unwrap(),
        wikitext: String::new(),
        categories: vec!["Living people".into()],
        langlinks: langlinks
            .iter()
            .map(|(l, t)| (LangCode::new(l).unwrap(), t.to_string()))
            .collect(),
    }
}

fn article(language: &str, title: &str, wpid: u64) -> ArticleText {
    ArticleText {
        key: ArticleKey::new(LangCode::new(language).unwrap(), title),
        wpid,
        plain_text: "Body text.".into(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pivot = LangCode::new("en")?;
    let targets = [LangCode::new("es")?, LangCode::new("ca")?];
    let pages = vec![
        page("Aurelia Arkotxa", 51690640, &[("es", "Aurelia Arkotxa"), ("ca", "Aurelia Arkotxa")]),
        page("Catriona Gray", 51838666, &[("es", "Catriona Gray"), ("ca", "Catriona Gray")]),
        page("Only Spanish", 77, &[("es", "Solo español")]),
    ];
    let mapping = resolve_interlanguage(&pivot, &pages, &targets);
    println!("linked entries (need links in all of es, ca):");
    for (title, links) in &mapping.entries {
        println!("  {title} -> {links:?}");
    }

    // pretend retrieval failed for the Catalan "Catriona Gray"
    let retrieved = vec![
        article("en", "Aurelia Arkotxa", 51690640),
        article("es", "Aurelia Arkotxa", 7789214),
        article("ca", "Aurelia Arkotxa", 555),
        article("en", "Catriona Gray", 51838666),
        article("es", "Catriona Gray", 8411924),
    ];
    let complete = select_complete_entries(&mapping, &retrieved);
    println!("\ncomplete entries (article present in every language):");
    for (docid, entry) in &complete.entries {
        println!("  {docid}:");
        for (language, (title, wpid)) in &entry.articles {
            println!("    [{language}] {title} (wpid {wpid})");
        }
    }

    let mut counts = BTreeMap::new();
    for a in &retrieved {
        *counts.entry(a.key.language.clone()).or_insert(0usize) += 1;
    }
    println!("\n== summary report ==\n{}", render_summary(&mapping, &counts, &complete));
    Ok(())
}
