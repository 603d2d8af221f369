//! Deterministic offline embedding: hashed bag of character n-grams.
//!
//! Not a semantic encoder; it measures surface similarity. That is exactly
//! what hermetic tests and fixtures need: identical text maps to identical
//! vectors, near-identical text to nearby vectors.

use std::hash::Hasher;

use fnv::FnvHasher;

use super::EmbedError;

/// Fixed hash seed so vectors are stable across runs and platforms.
const HASH_SEED: u64 = 0x5745_4201_57ab_c01d;

const NGRAM_SIZES: std::ops::RangeInclusive<usize> = 2..=4;

/// Embeds `text` as an L2-normalized hashed bag of character 2-/3-/4-grams
/// of the lowercased text.
///
/// Texts that are empty (or too short to contain a bigram) after trimming
/// are degenerate inputs.
pub fn builtin_fallback_embed(text: &str, dimension: usize) -> Result<Vec<f64>, EmbedError> {
    if dimension < 2 {
        return Err(EmbedError::BadSpec(format!(
            "dimension must be at least 2, got {dimension}"
        )));
    }
    let lower = text.trim().to_lowercase();
    if lower.is_empty() {
        return Err(EmbedError::DegenerateInput(
            "empty text after trimming".into(),
        ));
    }
    // char boundaries once, n-gram slices for free
    let mut bounds: Vec<usize> = lower.char_indices().map(|(i, _)| i).collect();
    bounds.push(lower.len());
    let n_chars = bounds.len() - 1;

    let mut values = vec![0.0f64; dimension];
    for n in NGRAM_SIZES {
        if n_chars < n {
            break;
        }
        for start in 0..=(n_chars - n) {
            let gram = &lower[bounds[start]..bounds[start + n]];
            let mut hasher = FnvHasher::with_key(HASH_SEED);
            hasher.write(gram.as_bytes());
            let coord = (hasher.finish() % dimension as u64) as usize;
            values[coord] += 1.0;
        }
    }

    let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm <= f64::EPSILON {
        return Err(EmbedError::DegenerateInput(
            "text too short to form character n-grams".into(),
        ));
    }
    for v in &mut values {
        *v /= norm;
    }
    Ok(values)
}
