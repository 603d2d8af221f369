//! Stream pages out of a MediaWiki XML export, selecting by title set or
//! category. Run with `cargo run --example stream_dump`.

use wikiparallel::{stream_pages, LangCode, PageSelector};

fn page(title: &str, id: u64, ns: u32, text: &str) -> String {
    format!(
        "<page><title>{title}</title><ns>{ns}</ns><id>{id}</id>\
         <revision><id>{rev}</id><text>{text}</text></revision></page>",
        rev = id + 1000
    )
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dump = format!(
        "<mediawiki xml:lang=\"en\"><siteinfo><sitename>Demo</sitename></siteinfo>{}{}{}{}{}</mediawiki>",
        page(
            "Aurelia Arkotxa",
            51690640,
            0,
            "She teaches classics. [[Category:Living people]] [[es:Aurelia Arkotxa]] [[ca:Aurelia Arkotxa]]"
        ),
        page("Bayonne", 144, 0, "A city in France. [[es:Bayona]]"),
        page("Talk:Bayonne", 145, 1, "Discussion page, skipped."),
        page("Old title", 146, 0, "#REDIRECT [[Bayonne]]"),
        page(
            "Catriona Gray",
            51838666,
            0,
            "She was crowned in 2018. [[Category:Living people]] [[es:Catriona Gray]]"
        ),
    );
    let language = LangCode::new("en")?;

    println!("== select by title set {{Aurelia Arkotxa, Bayonne}} ==");
    let selector = PageSelector::from_titles(["Aurelia Arkotxa", "Bayonne"]);
    for result in stream_pages(std::io::Cursor::new(dump.clone()), selector, language.clone())? {
        let page = result?;
        println!(
            "  {} (wpid {}) categories={:?} langlinks={:?}",
            page.title, page.wpid, page.categories, page.langlinks
        );
    }

    println!("== select by category \"Living people\" ==");
    let selector = PageSelector::from_category("Living people");
    for result in stream_pages(std::io::Cursor::new(dump), selector, language)? {
        let page = result?;
        println!("  {} (wpid {})", page.title, page.wpid);
    }
    println!("(talk pages and redirects never appear)");
    Ok(())
}
