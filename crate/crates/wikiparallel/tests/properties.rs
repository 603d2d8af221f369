//! Property tests for the stage invariants.

mod common;

use std::collections::{BTreeMap, HashSet};

use proptest::prelude::*;

use common::lang;
use wikiparallel::cleaning::{length_ratio_filter, CleaningConfig, LengthUnit};
use wikiparallel::corpus::{read_corpus_xml, write_corpus_xml, DocumentRecord, Segment};
use wikiparallel::dump::{split_sentences, strip_text, AbbreviationList};
use wikiparallel::embed::{
    builtin_fallback_embed, dot, embed_batch, EmbeddingProviderSpec, SentenceVector,
};
use wikiparallel::gender::{balance_corpus, BalanceConfig, BalanceMode, GenderLabel};
use wikiparallel::mining::{mine_pairs, MiningConfig};
use wikiparallel::{ArticleKey, SentenceRef};

// ── strategies ─────────────────────────────────────────────────────────

fn arb_sentence_text() -> impl Strategy<Value = String> {
    proptest::collection::vec("[a-z]{2,8}", 3..12).prop_map(|words| words.join(" "))
}

fn arb_wikitext() -> impl Strategy<Value = String> {
    let unit = prop_oneof![
        "[a-zA-Z0-9 ,.]{1,30}",
        Just("'''bold'''".to_string()),
        Just("''italic''".to_string()),
        Just("[[Target|label]]".to_string()),
        Just("[[plain link]]".to_string()),
        Just("{{tmpl|a={{inner}}|b=c}}".to_string()),
        Just("<ref name=\"x\">cite</ref>".to_string()),
        Just("\n== Heading ==\n".to_string()),
        Just("\n{| class=\"t\"\n| cell\n|}\n".to_string()),
        Just("[[Category:People]]".to_string()),
        Just("[[es:Título]]".to_string()),
        Just("[[File:Img.jpg|thumb|A [[pic]]]]".to_string()),
        Just("{{unbalanced".to_string()),
        Just("\n\n".to_string()),
    ];
    proptest::collection::vec(unit, 0..12).prop_map(|parts| parts.concat())
}

fn vector_corpus(
    texts: Vec<String>,
    language: &str,
    dimension: usize,
) -> Vec<SentenceVector> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| SentenceVector {
            sentence: SentenceRef::new(ArticleKey::new(lang(language), "D"), i as u32),
            values: builtin_fallback_embed(t, dimension).unwrap(),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // ── dump ───────────────────────────────────────────────────────────

    #[test]
    fn strip_text_is_idempotent_and_token_free(src in arb_wikitext()) {
        let (once, _) = strip_text(&src);
        let (twice, _) = strip_text(&once);
        prop_assert_eq!(&once, &twice);
        for token in ["[[", "]]", "{{", "}}", "'''"] {
            prop_assert!(!once.contains(token), "{} survived in {:?}", token, once);
        }
    }

    #[test]
    fn no_unsplit_boundary_survives_segmentation(
        tokens in proptest::collection::vec(
            prop_oneof![
                "[a-z]{2,7}",
                "[A-Z][a-z]{2,7}",
                Just("Dr.".to_string()),
                Just("U.S.".to_string()),
                Just("J.".to_string()),
                Just("station.".to_string()),
                Just("Done!".to_string()),
                Just("Why?".to_string()),
            ],
            1..25,
        ),
    ) {
        let abbreviations = AbbreviationList::builtin(&lang("en"));
        let text = tokens.join(" ");
        for sentence in split_sentences(&text, &abbreviations) {
            // inside one sentence, a terminal char before " <Upper>" may only
            // come from a suppressed split: a lone period after a known
            // abbreviation or single-letter initial
            let chars: Vec<char> = sentence.chars().collect();
            for i in 0..chars.len() {
                if !matches!(chars[i], '.' | '!' | '?') {
                    continue;
                }
                let followed = chars.get(i + 1) == Some(&' ')
                    && chars.get(i + 2).is_some_and(|c| c.is_uppercase());
                if !followed {
                    continue;
                }
                prop_assert_eq!(chars[i], '.', "non-period boundary survived: {}", sentence);
                prop_assert!(
                    i == 0 || !matches!(chars[i - 1], '.' | '!' | '?'),
                    "terminal run survived: {}", sentence
                );
                let start = chars[..i]
                    .iter()
                    .rposition(|c| *c == ' ')
                    .map(|p| p + 1)
                    .unwrap_or(0);
                let token: String = chars[start..i]
                    .iter()
                    .skip_while(|c| !c.is_alphanumeric())
                    .collect();
                let suppressed = (token.chars().count() == 1
                    && token.chars().next().unwrap().is_alphabetic())
                    || abbreviations.contains(&token);
                prop_assert!(suppressed, "unsuppressed boundary in {:?} ({:?})", sentence, token);
            }
        }
    }

    // ── mining ─────────────────────────────────────────────────────────

    #[test]
    fn mined_pairs_are_one_to_one_and_sorted(
        texts in proptest::collection::vec(arb_sentence_text(), 2..14),
        threshold in 0.0f64..1.5,
    ) {
        let source = vector_corpus(texts.clone(), "en", 64);
        let target = vector_corpus(texts, "es", 64);
        let config = MiningConfig { margin_threshold: threshold, ..MiningConfig::default() };
        let pairs = mine_pairs(&source, &target, &config).unwrap();
        let mut sources = HashSet::new();
        let mut targets = HashSet::new();
        for p in &pairs {
            prop_assert!(sources.insert(p.source.clone()), "duplicate source");
            prop_assert!(targets.insert(p.target.clone()), "duplicate target");
            prop_assert!(p.margin >= threshold);
        }
        for w in pairs.windows(2) {
            prop_assert!(w[0].margin >= w[1].margin, "sorted by descending margin");
        }
    }

    #[test]
    fn raising_threshold_never_adds_pairs(
        texts in proptest::collection::vec(arb_sentence_text(), 2..12),
        low in 0.0f64..1.0,
        bump in 0.0f64..0.5,
    ) {
        let source = vector_corpus(texts.clone(), "en", 64);
        let target = vector_corpus(texts, "es", 64);
        let mine = |threshold: f64| {
            let config = MiningConfig { margin_threshold: threshold, ..MiningConfig::default() };
            mine_pairs(&source, &target, &config).unwrap()
        };
        let at_low = mine(low);
        let at_high = mine(low + bump);
        let low_set: HashSet<(SentenceRef, SentenceRef)> =
            at_low.iter().map(|p| (p.source.clone(), p.target.clone())).collect();
        prop_assert!(at_high.len() <= at_low.len());
        for p in &at_high {
            prop_assert!(low_set.contains(&(p.source.clone(), p.target.clone())));
        }
    }

    #[test]
    fn mining_is_scale_invariant(
        texts in proptest::collection::vec(arb_sentence_text(), 2..10),
        scale in 0.01f64..100.0,
    ) {
        // scaling raw vectors before normalization renormalizes to the same
        // unit vectors, so mined output is unchanged
        let base = vector_corpus(texts.clone(), "en", 64);
        let target = vector_corpus(texts, "es", 64);
        let scaled: Vec<SentenceVector> = base
            .iter()
            .map(|v| {
                let raw: Vec<f64> = v.values.iter().map(|x| x * scale).collect();
                let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
                SentenceVector {
                    sentence: v.sentence.clone(),
                    values: raw.iter().map(|x| x / norm).collect(),
                }
            })
            .collect();
        let config = MiningConfig { margin_threshold: 0.0, ..MiningConfig::default() };
        let a = mine_pairs(&base, &target, &config).unwrap();
        let b = mine_pairs(&scaled, &target, &config).unwrap();
        // renormalization is not bit-exact under scaling, so compare the
        // mined pair sets and their margins, not the output order
        let key = |pairs: &[wikiparallel::CandidatePair]| -> BTreeMap<(SentenceRef, SentenceRef), f64> {
            pairs.iter().map(|p| ((p.source.clone(), p.target.clone()), p.margin)).collect()
        };
        let (a, b) = (key(&a), key(&b));
        prop_assert_eq!(
            a.keys().collect::<Vec<_>>(),
            b.keys().collect::<Vec<_>>()
        );
        for (pair, margin) in &a {
            prop_assert!((margin - b[pair]).abs() < 1e-9);
        }
    }

    // ── embeddings ─────────────────────────────────────────────────────

    #[test]
    fn fallback_vectors_are_unit_norm_and_cosine_is_dot(
        a in arb_sentence_text(),
        b in arb_sentence_text(),
    ) {
        let va = builtin_fallback_embed(&a, 128).unwrap();
        let vb = builtin_fallback_embed(&b, 128).unwrap();
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm(&va) - 1.0).abs() < 1e-9);
        prop_assert!((norm(&vb) - 1.0).abs() < 1e-9);
        // unit norm: cosine(a, b) equals the plain dot product
        let cos = dot(&va, &vb) / (norm(&va) * norm(&vb));
        prop_assert!((cos - dot(&va, &vb)).abs() < 1e-9);
    }

    // ── cleaning ───────────────────────────────────────────────────────

    #[test]
    fn filter_is_symmetric_and_monotone(
        lens in proptest::collection::vec(1usize..300, 2..5),
        ratio in 0.05f64..2.0,
        extra in 0.01f64..1.0,
    ) {
        let texts: Vec<String> = lens.iter().map(|n| "a".repeat(*n)).collect();
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let config = CleaningConfig {
            max_length_ratio: ratio,
            length_unit: LengthUnit::Characters,
            drop_at_bound: false,
        };
        let decision = length_ratio_filter(&refs, &config).unwrap();
        // symmetry: any rotation decides the same
        let mut rotated = refs.clone();
        rotated.rotate_left(1);
        prop_assert_eq!(decision, length_ratio_filter(&rotated, &config).unwrap());
        // monotonicity: kept at ratio r stays kept at any r' > r
        if decision.is_keep() {
            let looser = CleaningConfig { max_length_ratio: ratio + extra, ..config };
            prop_assert!(length_ratio_filter(&refs, &looser).unwrap().is_keep());
        }
    }

    // ── balancing ──────────────────────────────────────────────────────

    #[test]
    fn balancing_equalizes_and_only_removes_majority(
        seg_counts in proptest::collection::vec((0u8..3, 1u32..30), 1..12),
        seed in any::<u64>(),
    ) {
        let docs: Vec<DocumentRecord> = seg_counts
            .iter()
            .enumerate()
            .map(|(i, (g, count))| DocumentRecord {
                docid: format!("D{i}"),
                wpid: i as u64,
                language: lang("en"),
                topic: None,
                gender: match g { 0 => GenderLabel::Female, 1 => GenderLabel::Male, _ => GenderLabel::Unknown },
                title: format!("D{i}"),
                segments: (1..=*count).map(|id| Segment { id, text: format!("D{i} s{id}") }).collect(),
            })
            .collect();
        let totals = |docs: &[DocumentRecord], g: GenderLabel| -> u64 {
            docs.iter().filter(|d| d.gender == g).map(|d| d.segments.len() as u64).sum()
        };
        let before_f = totals(&docs, GenderLabel::Female);
        let before_m = totals(&docs, GenderLabel::Male);
        let balanced = balance_corpus(docs.clone(), &BalanceConfig { mode: BalanceMode::SentenceLevel, seed });
        let after_f = totals(&balanced, GenderLabel::Female);
        let after_m = totals(&balanced, GenderLabel::Male);
        prop_assert!(after_f.abs_diff(after_m) <= 1);
        prop_assert_eq!(after_f.min(after_m), before_f.min(before_m), "minority untouched");
        // no text altered, nothing invented
        for d in &balanced {
            let original = docs.iter().find(|o| o.docid == d.docid).unwrap();
            let original_texts: HashSet<&str> =
                original.segments.iter().map(|s| s.text.as_str()).collect();
            for s in &d.segments {
                prop_assert!(original_texts.contains(s.text.as_str()));
            }
        }
    }

    // ── corpus format ──────────────────────────────────────────────────

    #[test]
    fn corpus_xml_round_trips(
        titles in proptest::collection::btree_set("[A-Za-z][A-Za-z0-9 &<>\"']{0,20}", 0..6),
        seg_count in 1u32..5,
        gender_pick in 0u8..3,
        topic_pick in proptest::option::of(1u8..10),
    ) {
        let en = lang("en");
        let docs: Vec<DocumentRecord> = titles
            .iter()
            .filter(|t| !t.trim().is_empty())
            .map(|t| DocumentRecord {
                docid: t.trim().to_string(),
                wpid: 42,
                language: en.clone(),
                topic: topic_pick.map(|n| format!("C{n}")),
                gender: match gender_pick {
                    0 => GenderLabel::Female,
                    1 => GenderLabel::Male,
                    _ => GenderLabel::Unknown,
                },
                title: t.trim().to_string(),
                segments: (1..=seg_count)
                    .map(|id| Segment { id, text: format!("Seg {id} of {t} & <co>.") })
                    .collect(),
            })
            .collect();
        // writer orders by docid; a BTreeSet source is already unique+sorted
        let mut bytes = Vec::new();
        write_corpus_xml(&docs, &en, &mut bytes).unwrap();
        let back = read_corpus_xml(std::io::Cursor::new(&bytes)).unwrap();
        prop_assert_eq!(back, docs);
    }
}

// provider substitutability: identical vectors through two provider kinds
// mine identically
#[test]
fn provider_kind_does_not_affect_mining() {
    let texts = [
        "the committee recorded seasonal rainfall totals",
        "her crew restored the antique harbor crane",
        "provincial archives mention the accordion workshop",
        "the junior squad trained beside the old arena",
    ];
    let en = lang("en");
    let es = lang("es");
    let make = |l: &wikiparallel::LangCode, title: &str| -> Vec<wikiparallel::Sentence> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| wikiparallel::Sentence {
                article: ArticleKey::new(l.clone(), title),
                index: i as u32,
                text: t.to_string(),
            })
            .collect()
    };
    let source_sentences = make(&en, "Doc");
    let target_sentences = make(&es, "Doc");
    let builtin = EmbeddingProviderSpec::builtin_fallback(128);
    let source_builtin = embed_batch(&builtin, &source_sentences).unwrap();
    let target_builtin = embed_batch(&builtin, &target_sentences).unwrap();

    // the same vectors served from a precomputed file
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vectors.bin");
    let records: Vec<(String, Vec<f32>)> = source_builtin
        .iter()
        .chain(&target_builtin)
        .map(|v| {
            let quantized: Vec<f32> = v.values.iter().map(|x| *x as f32).collect();
            (v.sentence.storage_key(), quantized)
        })
        .collect();
    wikiparallel::embed::write_vector_file(
        std::io::BufWriter::new(std::fs::File::create(&path).unwrap()),
        128,
        &records,
    )
    .unwrap();
    let file_spec = EmbeddingProviderSpec::precomputed_file(path.to_str().unwrap(), 128);
    let source_file = embed_batch(&file_spec, &source_sentences).unwrap();
    let target_file = embed_batch(&file_spec, &target_sentences).unwrap();

    let config = MiningConfig {
        margin_threshold: 0.0,
        ..MiningConfig::default()
    };
    let mined_builtin = mine_pairs(&source_builtin, &target_builtin, &config).unwrap();
    let mined_file = mine_pairs(&source_file, &target_file, &config).unwrap();
    // the on-disk format quantizes to f32, so margins may differ in the
    // low bits; the mined alignment must not
    let pairs = |mined: &[wikiparallel::CandidatePair]| -> Vec<(SentenceRef, SentenceRef)> {
        mined.iter().map(|p| (p.source.clone(), p.target.clone())).collect()
    };
    assert_eq!(pairs(&mined_builtin), pairs(&mined_file));
    for (a, b) in mined_builtin.iter().zip(&mined_file) {
        assert!((a.margin - b.margin).abs() < 1e-6);
    }
}

// mined output must not depend on the rayon worker count
#[test]
fn mining_is_identical_across_worker_counts() {
    let texts: Vec<String> = (0..40)
        .map(|i| format!("sentence number {i} mentions topic {} and place {}", i % 7, i % 11))
        .collect();
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let source = vector_corpus(refs.iter().map(|t| t.to_string()).collect(), "en", 128);
    let target = vector_corpus(refs.iter().map(|t| t.to_string()).collect(), "es", 128);
    let config = MiningConfig {
        margin_threshold: 0.0,
        ..MiningConfig::default()
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| mine_pairs(&source, &target, &config).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap()
        .install(|| mine_pairs(&source, &target, &config).unwrap());
    assert_eq!(single, many);
}

// different balance seeds change which segments go, never how many
#[test]
fn seeds_change_selection_not_counts() {
    let docs: Vec<DocumentRecord> = (0..6)
        .map(|i| DocumentRecord {
            docid: format!("M{i}"),
            wpid: i,
            language: lang("en"),
            topic: None,
            gender: if i == 0 {
                GenderLabel::Female
            } else {
                GenderLabel::Male
            },
            title: format!("M{i}"),
            segments: (1..=20)
                .map(|id| Segment {
                    id,
                    text: format!("doc {i} segment {id}"),
                })
                .collect(),
        })
        .collect();
    let totals = |docs: &[DocumentRecord]| -> BTreeMap<GenderLabel, usize> {
        let mut m = BTreeMap::new();
        for d in docs {
            *m.entry(d.gender).or_default() += d.segments.len();
        }
        m
    };
    let mut selections = HashSet::new();
    let mut counts = HashSet::new();
    for seed in 0..8u64 {
        let balanced = balance_corpus(
            docs.clone(),
            &BalanceConfig {
                mode: BalanceMode::SentenceLevel,
                seed,
            },
        );
        counts.insert(
            totals(&balanced)
                .into_iter()
                .collect::<Vec<(GenderLabel, usize)>>(),
        );
        let surviving: Vec<String> = balanced
            .iter()
            .flat_map(|d| d.segments.iter().map(|s| s.text.clone()))
            .collect();
        selections.insert(surviving);
    }
    assert_eq!(counts.len(), 1, "counts identical across seeds");
    assert!(selections.len() > 1, "different seeds remove different segments");
}
