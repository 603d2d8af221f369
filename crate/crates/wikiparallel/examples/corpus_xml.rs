//! Write and re-read the document-level corpus XML, and print statistics.
//! Run with `cargo run --example corpus_xml`.

use wikiparallel::corpus::{DocumentRecord, Segment};
use wikiparallel::{
    compute_stats, read_corpus_xml, render_stats_report, write_corpus_xml, GenderLabel, LangCode,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let en = LangCode::new("en")?;
    let documents = vec![
        DocumentRecord {
            docid: "Aurelia Arkotxa".into(),
            wpid: 51690640,
            language: en.clone(),
            topic: Some("C6".into()),
            gender: GenderLabel::Female,
            title: "Aurelia Arkotxa".into(),
            segments: vec![Segment {
                id: 1,
                text: "She teaches classics at the University of Bayonne; she was co-founder of the literary magazine and a new newspaper.".into(),
            }],
        },
        DocumentRecord {
            docid: "Catriona Gray".into(),
            wpid: 51838666,
            language: en.clone(),
            topic: Some("C2".into()),
            gender: GenderLabel::Female,
            title: "Catriona Gray".into(),
            segments: vec![
                Segment { id: 1, text: "In addition, she obtained a certificate in outdoor recreation and a black belt in Choi Kwang-Do martial arts.".into() },
                Segment { id: 2, text: "Catriona Elisa Magnayon Gray (born 6 January 1994) is a Filipino-Australian model, singer, and beauty pageant titleholder who was crowned Miss Universe 2018.".into() },
            ],
        },
    ];

    let mut bytes = Vec::new();
    let written = write_corpus_xml(&documents, &en, &mut bytes)?;
    println!("== corpus.en.xml ({written} bytes) ==");
    print!("{}", String::from_utf8_lossy(&bytes));

    let back = read_corpus_xml(std::io::Cursor::new(&bytes))?;
    println!("\nround trip structurally identical: {}", back == documents);

    let stats = compute_stats(&documents, &en);
    println!("\n== statistics ==");
    print!("{}", render_stats_report(&[stats]));
    Ok(())
}
