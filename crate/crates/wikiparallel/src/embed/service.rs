//! Client for an external encoder service.
//!
//! Request: HTTP POST, plain text UTF-8; first line the language code, then
//! one sentence per line. Response: a vector file (see [`super::file`]) whose
//! records are in request order; keys are informational and may be empty.
//! Any encoder can be wrapped this way with a few lines of glue.

use std::io::Cursor;

use crate::lang::LangCode;

use super::file::read_vector_file;
use super::EmbedError;

/// Embeds `texts` through the service at `url`, returning raw (not yet
/// renormalized) vectors in input order.
pub fn service_embed_batch(
    url: &str,
    language: &LangCode,
    texts: &[&str],
    dimension: usize,
) -> Result<Vec<Vec<f32>>, EmbedError> {
    let mut body = String::with_capacity(texts.iter().map(|t| t.len() + 1).sum::<usize>() + 8);
    body.push_str(language.as_str());
    body.push('\n');
    for text in texts {
        if text.contains('\n') {
            return Err(EmbedError::DegenerateInput(format!(
                "sentence contains a line break: {text:?}"
            )));
        }
        body.push_str(text);
        body.push('\n');
    }
    let mut response = ureq::post(url)
        .header("content-type", "text/plain; charset=utf-8")
        .send(body.as_bytes())
        .map_err(|e| EmbedError::Provider(format!("POST {url} failed: {e}")))?;
    let bytes = response
        .body_mut()
        .read_to_vec()
        .map_err(|e| EmbedError::Provider(format!("reading response from {url} failed: {e}")))?;
    let (got_dimension, records) = read_vector_file(Cursor::new(bytes))?;
    if got_dimension != dimension {
        return Err(EmbedError::DimensionMismatch {
            expected: dimension,
            actual: got_dimension,
        });
    }
    if records.len() != texts.len() {
        return Err(EmbedError::Provider(format!(
            "service returned {} vectors for {} sentences",
            records.len(),
            texts.len()
        )));
    }
    Ok(records.into_iter().map(|(_, values)| values).collect())
}
