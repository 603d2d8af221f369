//! The external encoder service contract, end to end against a stub server.
//!
//! Request: POST text/plain, first line the language code, then one sentence
//! per line. Response: a binary vector file with one record per sentence in
//! request order. Any real encoder wraps into this in a few lines.
//!
//! Run with `cargo run --example embedding_service`.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;

use wikiparallel::dump::Sentence;
use wikiparallel::embed::write_vector_file;
use wikiparallel::{embed_batch, ArticleKey, EmbeddingProviderSpec, LangCode};

/// A tiny one-request encoder service; answers each sentence with a vector
/// derived from its byte length (a stand-in for a real model).
fn spawn_stub_encoder(dimension: usize) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || {
        let (stream, _) = listener.accept().unwrap();
        let mut reader = BufReader::new(stream);
        let mut line = String::new();
        let mut content_length = 0usize;
        loop {
            line.clear();
            reader.read_line(&mut line).unwrap();
            if line.trim().is_empty() {
                break;
            }
            if let Some(rest) = line.trim().to_ascii_lowercase().strip_prefix("content-length:") {
                content_length = rest.trim().parse().unwrap();
            }
        }
        let mut body = vec![0u8; content_length];
        reader.read_exact(&mut body).unwrap();
        let body = String::from_utf8(body).unwrap();
        let mut lines = body.lines();
        let language = lines.next().unwrap_or_default();
        println!("  [stub] embedding request for language {language:?}");
        let records: Vec<(String, Vec<f32>)> = lines
            .map(|sentence| {
                let mut values = vec![0.0f32; dimension];
                values[0] = sentence.len() as f32;
                values[1] = 1.0;
                (String::new(), values)
            })
            .collect();
        let mut payload = Vec::new();
        write_vector_file(&mut payload, dimension, &records).unwrap();
        let mut stream = reader.into_inner();
        let head = format!(
            "HTTP/1.1 200 OK\r\ncontent-type: application/octet-stream\r\ncontent-length: {}\r\nconnection: close\r\n\r\n",
            payload.len()
        );
        stream.write_all(head.as_bytes()).unwrap();
        stream.write_all(&payload).unwrap();
    });
    format!("http://{addr}/embed")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dimension = 8;
    let url = spawn_stub_encoder(dimension);
    println!("stub encoder at {url}");

    let es = LangCode::new("es")?;
    let sentences: Vec<Sentence> = [
        "Enseña cultura clásica en la facultad de Bayona.",
        "Fue cofundadora de una revista literaria.",
    ]
    .iter()
    .enumerate()
    .map(|(i, text)| Sentence {
        article: ArticleKey::new(es.clone(), "Aurelia Arkotxa"),
        index: i as u32,
        text: text.to_string(),
    })
    .collect();

    let spec = EmbeddingProviderSpec::external_service(&url, dimension);
    let vectors = embed_batch(&spec, &sentences)?;
    for v in &vectors {
        println!(
            "  {} -> norm {:.6}, first coords {:?}",
            v.sentence,
            v.norm(),
            &v.values[..2]
        );
    }
    println!("vectors are renormalized to unit length whatever the service returns");
    Ok(())
}
