//! Margin-based parallel sentence extraction.
//!
//! A candidate pair is scored by the ratio of its cosine similarity to the
//! average similarity of each side's k nearest neighbors in the other
//! language, which penalizes sentences that are close to everything. Mining
//! is exact brute force over unit vectors (cosine = dot product); neighbor
//! search is blocked per query and parallelized across queries, with every
//! tie broken by ascending sentence reference so output is reproducible.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{dot, SentenceVector};
use crate::lang::{LangCode, SentenceRef};

/// Neighbor similarities below this sum are treated as pathological.
const DEGENERATE_DENOMINATOR: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum MiningError {
    #[error("vector dimension mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error("empty corpus: {side}")]
    EmptyCorpus { side: &'static str },
    #[error("k must be at least 1")]
    InvalidK,
    #[error("degenerate neighborhood: similarity sum {sum:.3e} (pathological embeddings?)")]
    DegenerateNeighborhood { sum: f64 },
}

/// The k nearest neighbors of one query in the other language, descending
/// similarity, ties by ascending sentence reference.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSet {
    pub query: SentenceRef,
    pub neighbors: Vec<(SentenceRef, f64)>,
}

impl NeighborSet {
    pub fn similarity_sum(&self) -> f64 {
        self.neighbors.iter().map(|(_, s)| s).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RetrievalStrategy {
    /// Union of forward and backward best candidates, matched one-to-one by
    /// descending margin.
    Max,
    /// Each source sentence proposes its best target.
    Forward,
    /// Each target sentence proposes its best source.
    Backward,
    /// Only pairs proposed in both directions.
    Intersection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MiningConfig {
    pub k: usize,
    pub margin_threshold: f64,
    pub strategy: RetrievalStrategy,
    /// Mine within one article's sentences at a time (the pipeline's
    /// default) instead of across the whole language corpus.
    pub document_scope: bool,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            k: 4,
            margin_threshold: 1.04,
            strategy: RetrievalStrategy::Max,
            document_scope: true,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<(), MiningError> {
        if self.k == 0 {
            return Err(MiningError::InvalidK);
        }
        Ok(())
    }
}

/// One mined sentence pair with its scores.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePair {
    pub source: SentenceRef,
    pub target: SentenceRef,
    pub margin: f64,
    pub cosine: f64,
}

/// One pivot sentence aligned into every non-pivot language.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedTuple {
    pub pivot: SentenceRef,
    pub per_language: BTreeMap<LangCode, (SentenceRef, f64)>,
}

fn check_dims(corpus: &[SentenceVector]) -> Result<usize, MiningError> {
    let dim = corpus[0].values.len();
    for v in corpus {
        if v.values.len() != dim {
            return Err(MiningError::ShapeMismatch {
                left: dim,
                right: v.values.len(),
            });
        }
    }
    Ok(dim)
}

/// Top-k indices of `corpus` by similarity to `query`, descending, ties by
/// ascending sentence reference.
fn top_k_indices(
    query: &[f64],
    corpus: &[SentenceVector],
    k: usize,
) -> Vec<(usize, f64)> {
    let mut scored: Vec<(usize, f64)> = corpus
        .iter()
        .enumerate()
        .map(|(j, v)| (j, dot(query, &v.values)))
        .collect();
    let better = |a: &(usize, f64), b: &(usize, f64)| {
        b.1.total_cmp(&a.1)
            .then_with(|| corpus[a.0].sentence.cmp(&corpus[b.0].sentence))
    };
    let k = k.min(scored.len());
    if k < scored.len() {
        scored.select_nth_unstable_by(k - 1, better);
        scored.truncate(k);
    }
    scored.sort_unstable_by(better);
    scored
}

/// Exact brute-force k-nearest-neighbor retrieval.
pub fn nearest_neighbors(
    query: &SentenceVector,
    corpus: &[SentenceVector],
    k: usize,
) -> Result<NeighborSet, MiningError> {
    if corpus.is_empty() {
        return Err(MiningError::EmptyCorpus { side: "corpus" });
    }
    if k == 0 {
        return Err(MiningError::InvalidK);
    }
    let dim = check_dims(corpus)?;
    if query.values.len() != dim {
        return Err(MiningError::ShapeMismatch {
            left: query.values.len(),
            right: dim,
        });
    }
    let neighbors = top_k_indices(&query.values, corpus, k)
        .into_iter()
        .map(|(j, sim)| (corpus[j].sentence.clone(), sim))
        .collect();
    Ok(NeighborSet {
        query: query.sentence.clone(),
        neighbors,
    })
}

/// The margin of a candidate pair: cosine over the average similarity of both
/// sides' k-nearest neighborhoods.
///
/// `nn_x` must be computed over y's language and `nn_y` over x's language,
/// both with the same `k`.
pub fn margin_score(
    x: &SentenceVector,
    y: &SentenceVector,
    nn_x: &NeighborSet,
    nn_y: &NeighborSet,
    k: usize,
) -> Result<f64, MiningError> {
    if k == 0 {
        return Err(MiningError::InvalidK);
    }
    if x.values.len() != y.values.len() {
        return Err(MiningError::ShapeMismatch {
            left: x.values.len(),
            right: y.values.len(),
        });
    }
    let cosine = dot(&x.values, &y.values);
    let denominator =
        nn_x.similarity_sum() / (2.0 * k as f64) + nn_y.similarity_sum() / (2.0 * k as f64);
    if denominator <= DEGENERATE_DENOMINATOR {
        return Err(MiningError::DegenerateNeighborhood { sum: denominator });
    }
    Ok(cosine / denominator)
}

/// All queries' top-k over `corpus`, computed in parallel; output order
/// follows the query order, so results do not depend on the worker count.
fn knn_all(
    queries: &[SentenceVector],
    corpus: &[SentenceVector],
    k: usize,
) -> Vec<Vec<(usize, f64)>> {
    queries
        .par_iter()
        .map(|q| top_k_indices(&q.values, corpus, k))
        .collect()
}

/// Mines sentence pairs between two monolingual vector lists.
///
/// Candidates come from each side's k nearest neighbors scored by margin;
/// the configured strategy picks which proposals count; pairs below the
/// margin threshold are dropped; survivors are matched one-to-one by
/// descending margin. Output is sorted by descending margin, ties by source
/// then target reference.
pub fn mine_pairs(
    source: &[SentenceVector],
    target: &[SentenceVector],
    config: &MiningConfig,
) -> Result<Vec<CandidatePair>, MiningError> {
    config.validate()?;
    if source.is_empty() {
        return Err(MiningError::EmptyCorpus { side: "source" });
    }
    if target.is_empty() {
        return Err(MiningError::EmptyCorpus { side: "target" });
    }
    let source_dim = check_dims(source)?;
    let target_dim = check_dims(target)?;
    if source_dim != target_dim {
        return Err(MiningError::ShapeMismatch {
            left: source_dim,
            right: target_dim,
        });
    }
    let k = config.k.min(source.len()).min(target.len());

    let forward_nn = knn_all(source, target, k);
    let backward_nn = knn_all(target, source, k);
    let source_avg: Vec<f64> = forward_nn
        .iter()
        .map(|nn| nn.iter().map(|(_, s)| s).sum::<f64>() / (2.0 * k as f64))
        .collect();
    let target_avg: Vec<f64> = backward_nn
        .iter()
        .map(|nn| nn.iter().map(|(_, s)| s).sum::<f64>() / (2.0 * k as f64))
        .collect();

    let margin_of = |i: usize, j: usize, cosine: f64| -> Result<f64, MiningError> {
        let denominator = source_avg[i] + target_avg[j];
        if denominator <= DEGENERATE_DENOMINATOR {
            return Err(MiningError::DegenerateNeighborhood { sum: denominator });
        }
        Ok(cosine / denominator)
    };

    // best candidate per source sentence
    let mut forward: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(source.len());
    for (i, nn) in forward_nn.iter().enumerate() {
        let mut best: Option<(usize, f64, f64)> = None;
        for &(j, cosine) in nn {
            let margin = margin_of(i, j, cosine)?;
            let replace = match &best {
                None => true,
                Some((bj, bm, _)) => {
                    margin > *bm
                        || (margin == *bm && target[j].sentence < target[*bj].sentence)
                }
            };
            if replace {
                best = Some((j, margin, cosine));
            }
        }
        if let Some((j, margin, cosine)) = best {
            forward.push((i, j, margin, cosine));
        }
    }
    // best candidate per target sentence
    let mut backward: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(target.len());
    for (j, nn) in backward_nn.iter().enumerate() {
        let mut best: Option<(usize, f64, f64)> = None;
        for &(i, cosine) in nn {
            let margin = margin_of(i, j, cosine)?;
            let replace = match &best {
                None => true,
                Some((bi, bm, _)) => {
                    margin > *bm
                        || (margin == *bm && source[i].sentence < source[*bi].sentence)
                }
            };
            if replace {
                best = Some((i, margin, cosine));
            }
        }
        if let Some((i, margin, cosine)) = best {
            backward.push((i, j, margin, cosine));
        }
    }

    let mut candidates: Vec<(usize, usize, f64, f64)> = match config.strategy {
        RetrievalStrategy::Forward => forward,
        RetrievalStrategy::Backward => backward,
        RetrievalStrategy::Max => {
            let mut seen: HashSet<(usize, usize)> = HashSet::new();
            let mut union = Vec::with_capacity(forward.len() + backward.len());
            for cand in forward.into_iter().chain(backward) {
                if seen.insert((cand.0, cand.1)) {
                    union.push(cand);
                }
            }
            union
        }
        RetrievalStrategy::Intersection => {
            let backward_set: HashSet<(usize, usize)> =
                backward.iter().map(|c| (c.0, c.1)).collect();
            forward
                .into_iter()
                .filter(|c| backward_set.contains(&(c.0, c.1)))
                .collect()
        }
    };

    candidates.retain(|&(_, _, margin, _)| margin >= config.margin_threshold);
    candidates.sort_unstable_by(|a, b| {
        b.2.total_cmp(&a.2)
            .then_with(|| source[a.0].sentence.cmp(&source[b.0].sentence))
            .then_with(|| target[a.1].sentence.cmp(&target[b.1].sentence))
    });

    let mut used_sources: HashSet<usize> = HashSet::new();
    let mut used_targets: HashSet<usize> = HashSet::new();
    let mut pairs = Vec::new();
    for (i, j, margin, cosine) in candidates {
        if used_sources.contains(&i) || used_targets.contains(&j) {
            continue;
        }
        used_sources.insert(i);
        used_targets.insert(j);
        pairs.push(CandidatePair {
            source: source[i].sentence.clone(),
            target: target[j].sentence.clone(),
            margin,
            cosine,
        });
    }
    Ok(pairs)
}

/// Intersects per-language pair lists on the pivot sentence: a tuple comes
/// out for a pivot sentence iff every language aligned it. Output is ordered
/// by pivot reference.
///
/// `pairwise` maps each non-pivot language to the pairs mined for
/// pivot-to-that-language; `source` refs must all be pivot sentences.
pub fn intersect_multiway(
    pairwise: &BTreeMap<LangCode, Vec<CandidatePair>>,
) -> Vec<AlignedTuple> {
    if pairwise.is_empty() {
        return Vec::new();
    }
    let mut per_language: Vec<(&LangCode, BTreeMap<&SentenceRef, &CandidatePair>)> = Vec::new();
    for (language, pairs) in pairwise {
        let mut by_pivot: BTreeMap<&SentenceRef, &CandidatePair> = BTreeMap::new();
        for pair in pairs {
            // one-to-one inputs have unique sources; if not, the higher
            // margin wins, ties to the smaller target reference
            by_pivot
                .entry(&pair.source)
                .and_modify(|existing| {
                    if pair.margin > existing.margin
                        || (pair.margin == existing.margin && pair.target < existing.target)
                    {
                        *existing = pair;
                    }
                })
                .or_insert(pair);
        }
        per_language.push((language, by_pivot));
    }
    let (_, first) = &per_language[0];
    let mut tuples = Vec::new();
    'pivot: for (&pivot, _) in first.iter() {
        let mut per_lang_out = BTreeMap::new();
        for (language, by_pivot) in &per_language {
            match by_pivot.get(pivot) {
                Some(pair) => {
                    per_lang_out
                        .insert((*language).clone(), (pair.target.clone(), pair.margin));
                }
                None => continue 'pivot,
            }
        }
        tuples.push(AlignedTuple {
            pivot: pivot.clone(),
            per_language: per_lang_out,
        });
    }
    tuples
}
