//! Split plain article text into sentences, with abbreviation handling.
//! Run with `cargo run --example segment_sentences`.

use wikiparallel::dump::{split_sentences, AbbreviationList};
use wikiparallel::LangCode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let en = AbbreviationList::builtin(&LangCode::new("en")?);
    let text = "Dr. Smith arrived in the U.S. in 2015. She lectured at St. Mary's college! \
                Was the visit long? It lasted three months.";
    println!("input: {text}\n");
    for (i, sentence) in split_sentences(text, &en).iter().enumerate() {
        println!("  [{i}] {sentence}");
    }

    println!("\nwithout the abbreviation list the same text oversplits:");
    for (i, sentence) in split_sentences(text, &AbbreviationList::empty()).iter().enumerate() {
        println!("  [{i}] {sentence}");
    }

    println!("\ncustom lists are one lowercase token per line:");
    let custom = AbbreviationList::parse("approx\nca\n");
    let text = "It weighs approx. 40 kg. Nobody checked.";
    for (i, sentence) in split_sentences(text, &custom).iter().enumerate() {
        println!("  [{i}] {sentence}");
    }
    Ok(())
}
