//! Reduce raw wikitext to plain paragraphs.
//! Run with `cargo run --example strip_wikitext`.

use wikiparallel::dump::strip_text;

fn main() {
    let wikitext = r#"'''Aurelia Arkotxa''' (born 1953) is a [[Basque language|Basque]] writer.{{Infobox writer|name=Aurelia Arkotxa|birth_year=1953}}

== Career ==
She teaches classics at the [[University of Bayonne]].<ref name="bio">Faculty register 2001.</ref> She was co-founder of a literary magazine ''Septentrio''.

{| class="wikitable"
|-
! Year !! Work
|-
| 2001 || Septentrio
|}

* Essay collections
* [https://example.org/interviews Collected interviews]

Unbalanced {{cite web|title=lost reference

[[Category:Living people]]
[[Category:Basque writers]]
[[es:Aurelia Arkotxa]]
[[ca:Aurelia Arkotxa]]"#;

    let (plain, warnings) = strip_text(wikitext);
    println!("== plain text ==\n{plain}\n");
    println!("== warnings ==");
    for warning in &warnings {
        println!("  {warning}");
    }
    if warnings.is_empty() {
        println!("  (none)");
    }
}
