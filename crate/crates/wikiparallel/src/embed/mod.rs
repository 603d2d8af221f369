//! Sentence embeddings behind a pluggable provider contract.
//!
//! The neural encoder itself stays outside this crate: vectors come from a
//! precomputed file, an external encoder service, or the builtin
//! character-n-gram fallback (deterministic, offline, good enough for tests
//! and fixtures). Whatever the provider returns is renormalized to unit
//! length, so cosine similarity downstream is a plain dot product.

mod fallback;
mod file;
mod service;

pub use fallback::builtin_fallback_embed;
pub use file::{
    read_sidecar, read_vector_file, write_sidecar, write_vector_file, SeekableVectorFile,
    VectorFileWriter, VECTOR_FILE_VERSION,
};
pub use service::service_embed_batch;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dump::Sentence;
use crate::lang::SentenceRef;

/// A unit-norm sentence vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceVector {
    pub sentence: SentenceRef,
    pub values: Vec<f64>,
}

impl SentenceVector {
    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Dot product; equals cosine similarity for unit-norm vectors.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProviderKind {
    PrecomputedFile,
    ExternalService,
    BuiltinFallback,
}

/// Where vectors come from and at what dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingProviderSpec {
    pub kind: ProviderKind,
    pub dimension: usize,
    /// File path for `precomputed-file`, URL for `external-service`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

impl EmbeddingProviderSpec {
    pub fn builtin_fallback(dimension: usize) -> Self {
        EmbeddingProviderSpec {
            kind: ProviderKind::BuiltinFallback,
            dimension,
            location: None,
        }
    }

    pub fn precomputed_file(location: impl Into<String>, dimension: usize) -> Self {
        EmbeddingProviderSpec {
            kind: ProviderKind::PrecomputedFile,
            dimension,
            location: Some(location.into()),
        }
    }

    pub fn external_service(url: impl Into<String>, dimension: usize) -> Self {
        EmbeddingProviderSpec {
            kind: ProviderKind::ExternalService,
            dimension,
            location: Some(url.into()),
        }
    }

    pub fn validate(&self) -> Result<(), EmbedError> {
        if self.dimension < 2 {
            return Err(EmbedError::BadSpec(format!(
                "dimension must be at least 2, got {}",
                self.dimension
            )));
        }
        match self.kind {
            ProviderKind::BuiltinFallback => Ok(()),
            ProviderKind::PrecomputedFile | ProviderKind::ExternalService => {
                if self.location.is_none() {
                    Err(EmbedError::BadSpec(format!(
                        "{:?} provider needs a location",
                        self.kind
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("invalid provider spec: {0}")]
    BadSpec(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("embedding provider unavailable: {0}")]
    Provider(String),
    #[error("no vector for sentence {0}")]
    Lookup(SentenceRef),
    #[error("vector dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("bad vector file: {0}")]
    Format(String),
    #[error("provider returned a zero vector for {0:?}")]
    ZeroVector(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Embeds sentences through the given provider, one unit-norm vector per
/// sentence, order-aligned with the input.
pub fn embed_batch(
    spec: &EmbeddingProviderSpec,
    sentences: &[Sentence],
) -> Result<Vec<SentenceVector>, EmbedError> {
    spec.validate()?;
    if sentences.is_empty() {
        return Err(EmbedError::DegenerateInput("no sentences given".into()));
    }
    match spec.kind {
        ProviderKind::BuiltinFallback => sentences
            .iter()
            .map(|s| {
                let values = builtin_fallback_embed(&s.text, spec.dimension)?;
                Ok(SentenceVector {
                    sentence: SentenceRef::new(s.article.clone(), s.index),
                    values,
                })
            })
            .collect(),
        ProviderKind::PrecomputedFile => {
            let path = spec.location.as_deref().expect("validated");
            let file = std::fs::File::open(path).map_err(|e| {
                EmbedError::Provider(format!("cannot open vector file {path:?}: {e}"))
            })?;
            let (dimension, records) = read_vector_file(std::io::BufReader::new(file))?;
            if dimension != spec.dimension {
                return Err(EmbedError::DimensionMismatch {
                    expected: spec.dimension,
                    actual: dimension,
                });
            }
            let by_key: HashMap<String, Vec<f64>> = records
                .into_iter()
                .map(|(key, values)| (key, values.into_iter().map(f64::from).collect()))
                .collect();
            sentences
                .iter()
                .map(|s| {
                    let sref = SentenceRef::new(s.article.clone(), s.index);
                    let mut values = by_key
                        .get(&sref.storage_key())
                        .cloned()
                        .ok_or_else(|| EmbedError::Lookup(sref.clone()))?;
                    renormalize(&mut values, &sref.storage_key())?;
                    Ok(SentenceVector {
                        sentence: sref,
                        values,
                    })
                })
                .collect()
        }
        ProviderKind::ExternalService => {
            let url = spec.location.as_deref().expect("validated");
            // one request per language: the wire format carries a single code
            let mut slots: Vec<Option<SentenceVector>> = vec![None; sentences.len()];
            let mut by_language: Vec<(&crate::lang::LangCode, Vec<usize>)> = Vec::new();
            for (i, s) in sentences.iter().enumerate() {
                match by_language.iter_mut().find(|(l, _)| **l == s.article.language) {
                    Some((_, idxs)) => idxs.push(i),
                    None => by_language.push((&s.article.language, vec![i])),
                }
            }
            for (language, idxs) in by_language {
                let texts: Vec<&str> = idxs.iter().map(|&i| sentences[i].text.as_str()).collect();
                let vectors = service_embed_batch(url, language, &texts, spec.dimension)?;
                for (slot, values) in idxs.into_iter().zip(vectors) {
                    let mut values: Vec<f64> = values.into_iter().map(f64::from).collect();
                    let s = &sentences[slot];
                    let sref = SentenceRef::new(s.article.clone(), s.index);
                    renormalize(&mut values, &sref.storage_key())?;
                    slots[slot] = Some(SentenceVector {
                        sentence: sref,
                        values,
                    });
                }
            }
            Ok(slots.into_iter().map(|v| v.expect("all slots filled")).collect())
        }
    }
}

/// Scales `values` to unit Euclidean norm.
pub(crate) fn renormalize(values: &mut [f64], what: &str) -> Result<(), EmbedError> {
    let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm <= f64::EPSILON {
        return Err(EmbedError::ZeroVector(what.to_string()));
    }
    for v in values {
        *v /= norm;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{ArticleKey, LangCode};

    fn sentence(text: &str, index: u32) -> Sentence {
        Sentence {
            article: ArticleKey::new(LangCode::new("en").unwrap(), "T"),
            index,
            text: text.to_string(),
        }
    }

    #[test]
    fn builtin_batch_is_deterministic_and_unit_norm() {
        let spec = EmbeddingProviderSpec::builtin_fallback(64);
        let sentences = vec![sentence("The cat sat on the mat.", 0), sentence("Another one.", 1)];
        let a = embed_batch(&spec, &sentences).unwrap();
        let b = embed_batch(&spec, &sentences).unwrap();
        assert_eq!(a, b);
        for v in &a {
            assert!((v.norm() - 1.0).abs() < 1e-6, "norm {}", v.norm());
        }
    }

    #[test]
    fn precomputed_file_round_trip() {
        let spec_dim = 8;
        let sentences = vec![sentence("alpha beta", 0), sentence("gamma delta", 1), sentence("epsilon zeta", 2)];
        let records: Vec<(String, Vec<f32>)> = sentences
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let sref = SentenceRef::new(s.article.clone(), s.index);
                let mut values = vec![0.0f32; spec_dim];
                values[i] = 2.0; // deliberately unnormalized
                (sref.storage_key(), values)
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vectors.bin");
        let mut sink = std::io::BufWriter::new(std::fs::File::create(&path).unwrap());
        write_vector_file(&mut sink, spec_dim, &records).unwrap();
        drop(sink);

        let spec = EmbeddingProviderSpec::precomputed_file(path.to_str().unwrap(), spec_dim);
        let vectors = embed_batch(&spec, &sentences).unwrap();
        for (i, v) in vectors.iter().enumerate() {
            assert!((v.values[i] - 1.0).abs() < 1e-6, "renormalized to unit");
            assert!((v.norm() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn missing_sentence_names_the_reference() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vectors.bin");
        let mut sink = std::io::BufWriter::new(std::fs::File::create(&path).unwrap());
        write_vector_file(&mut sink, 4, &[("bogus".to_string(), vec![1.0, 0.0, 0.0, 0.0])])
            .unwrap();
        drop(sink);
        let spec = EmbeddingProviderSpec::precomputed_file(path.to_str().unwrap(), 4);
        let err = embed_batch(&spec, &[sentence("hello world", 0)]).unwrap_err();
        match err {
            EmbedError::Lookup(sref) => assert_eq!(sref.index, 0),
            other => panic!("expected lookup error, got {other}"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(EmbeddingProviderSpec::builtin_fallback(1).validate().is_err());
        assert!(EmbeddingProviderSpec {
            kind: ProviderKind::PrecomputedFile,
            dimension: 8,
            location: None,
        }
        .validate()
        .is_err());
    }
}
