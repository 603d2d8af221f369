//! Corpus statistics per language and gender, and the aligned text report.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::gender::GenderLabel;
use crate::lang::LangCode;

use super::DocumentRecord;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenderStats {
    pub documents: u64,
    pub sentences: u64,
    pub words: u64,
    pub vocabulary: u64,
}

impl GenderStats {
    pub fn avg_sentences_per_doc(&self) -> f64 {
        if self.documents == 0 {
            0.0
        } else {
            self.sentences as f64 / self.documents as f64
        }
    }

    pub fn avg_words_per_doc(&self) -> f64 {
        if self.documents == 0 {
            0.0
        } else {
            self.words as f64 / self.documents as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusStats {
    pub language: LangCode,
    pub per_gender: BTreeMap<GenderLabel, GenderStats>,
}

impl CorpusStats {
    pub fn gender(&self, label: GenderLabel) -> GenderStats {
        self.per_gender.get(&label).cloned().unwrap_or_default()
    }

    pub fn total_sentences(&self) -> u64 {
        self.per_gender.values().map(|g| g.sentences).sum()
    }
}

/// Words are whitespace-delimited tokens with surrounding punctuation
/// stripped; the vocabulary is the set of distinct lowercased words.
fn words_of(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
        .map(|token| token.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|token| !token.is_empty())
}

/// Per-gender document/sentence/word/vocabulary counts for one language.
pub fn compute_stats(documents: &[DocumentRecord], language: &LangCode) -> CorpusStats {
    let mut per_gender: BTreeMap<GenderLabel, GenderStats> = BTreeMap::new();
    per_gender.insert(GenderLabel::Female, GenderStats::default());
    per_gender.insert(GenderLabel::Male, GenderStats::default());
    let mut vocabularies: BTreeMap<GenderLabel, HashSet<String>> = BTreeMap::new();
    for doc in documents.iter().filter(|d| d.language == *language) {
        let stats = per_gender.entry(doc.gender).or_default();
        stats.documents += 1;
        stats.sentences += doc.segments.len() as u64;
        let vocabulary = vocabularies.entry(doc.gender).or_default();
        for segment in &doc.segments {
            for word in words_of(&segment.text) {
                stats.words += 1;
                vocabulary.insert(word.to_lowercase());
            }
        }
    }
    for (gender, vocabulary) in vocabularies {
        per_gender
            .entry(gender)
            .or_default()
            .vocabulary = vocabulary.len() as u64;
    }
    CorpusStats {
        language: language.clone(),
        per_gender,
    }
}

/// Renders an aligned text table: one column group per language, F/M
/// subcolumns (plus Unknown when present anywhere).
pub fn render_stats_report(stats: &[CorpusStats]) -> String {
    let has_unknown = stats.iter().any(|s| {
        s.per_gender
            .get(&GenderLabel::Unknown)
            .is_some_and(|g| g.documents > 0)
    });
    let mut genders = vec![GenderLabel::Female, GenderLabel::Male];
    if has_unknown {
        genders.push(GenderLabel::Unknown);
    }

    let labels = [
        "Documents",
        "Sentences",
        "Average sent/doc",
        "Words",
        "Average words/doc",
        "Vocabulary",
    ];
    let cell = |g: &GenderStats, row: usize| -> String {
        match row {
            0 => g.documents.to_string(),
            1 => g.sentences.to_string(),
            2 => format!("{:.1}", g.avg_sentences_per_doc()),
            3 => g.words.to_string(),
            4 => format!("{:.1}", g.avg_words_per_doc()),
            _ => g.vocabulary.to_string(),
        }
    };

    let label_width = labels.iter().map(|l| l.len()).max().unwrap_or(0);
    let mut column_width = 6usize;
    for s in stats {
        for gender in &genders {
            let g = s.gender(*gender);
            for row in 0..labels.len() {
                column_width = column_width.max(cell(&g, row).len() + 2);
            }
        }
        column_width = column_width.max(s.language.as_str().len() + 2);
    }

    let mut out = String::new();
    // language header row: the code sits over its first gender column
    let _ = write!(out, "{:label_width$}", "");
    for s in stats {
        let group = column_width * genders.len();
        let _ = write!(out, "{:>w$}", s.language.as_str(), w = s.language.as_str().len().max(column_width));
        let _ = write!(out, "{:pad$}", "", pad = group - s.language.as_str().len().max(column_width));
    }
    out.push('\n');
    let _ = write!(out, "{:label_width$}", "");
    for _ in stats {
        for gender in &genders {
            let letter = match gender {
                GenderLabel::Female => "F",
                GenderLabel::Male => "M",
                GenderLabel::Unknown => "U",
            };
            let _ = write!(out, "{letter:>column_width$}");
        }
    }
    out.push('\n');
    for (row, label) in labels.iter().enumerate() {
        let _ = write!(out, "{label:<label_width$}");
        for s in stats {
            for gender in &genders {
                let value = cell(&s.gender(*gender), row);
                let _ = write!(out, "{value:>column_width$}");
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Segment;

    fn lang(code: &str) -> LangCode {
        LangCode::new(code).unwrap()
    }

    fn doc(docid: &str, l: &str, gender: GenderLabel, seg_texts: &[&str]) -> DocumentRecord {
        DocumentRecord {
            docid: docid.into(),
            wpid: 1,
            language: lang(l),
            topic: None,
            gender,
            title: docid.into(),
            segments: seg_texts
                .iter()
                .enumerate()
                .map(|(i, t)| Segment {
                    id: i as u32 + 1,
                    text: t.to_string(),
                })
                .collect(),
        }
    }

    #[test]
    fn counts_documents_sentences_and_averages() {
        let docs = vec![
            doc("F1", "en", GenderLabel::Female, &["a b c.", "d e.", "f."]),
            doc("F2", "en", GenderLabel::Female, &["g h.", "i j.", "k l.", "m n o p."]),
            doc("M1", "en", GenderLabel::Male, &["q r s.", "t u."]),
        ];
        let stats = compute_stats(&docs, &lang("en"));
        let f = stats.gender(GenderLabel::Female);
        let m = stats.gender(GenderLabel::Male);
        assert_eq!(f.documents, 2);
        assert_eq!(f.sentences, 7);
        assert!((f.avg_sentences_per_doc() - 3.5).abs() < 1e-9);
        assert_eq!(m.documents, 1);
        assert_eq!(m.sentences, 2);
        assert!((m.avg_sentences_per_doc() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn empty_corpus_is_all_zeros() {
        let stats = compute_stats(&[], &lang("en"));
        let f = stats.gender(GenderLabel::Female);
        assert_eq!(f.documents, 0);
        assert_eq!(f.sentences, 0);
        assert_eq!(f.words, 0);
        assert_eq!(f.vocabulary, 0);
        assert_eq!(f.avg_sentences_per_doc(), 0.0);
    }

    #[test]
    fn words_strip_punctuation_and_vocabulary_lowercases() {
        let docs = vec![doc(
            "D",
            "en",
            GenderLabel::Female,
            &["The cat, the CAT!", "A cat?"],
        )];
        let stats = compute_stats(&docs, &lang("en"));
        let f = stats.gender(GenderLabel::Female);
        assert_eq!(f.words, 6);
        // {the, cat, a}
        assert_eq!(f.vocabulary, 3);
        assert!(f.vocabulary <= f.words);
    }

    #[test]
    fn sentence_balanced_corpus_with_more_male_docs_has_higher_female_average() {
        // equal sentence totals spread over more male documents force the
        // female per-document average above the male one
        let mut docs = Vec::new();
        for i in 0..4 {
            docs.push(doc(&format!("F{i}"), "en", GenderLabel::Female, &["a.", "b.", "c."]));
        }
        for i in 0..6 {
            docs.push(doc(&format!("M{i}"), "en", GenderLabel::Male, &["d.", "e."]));
        }
        let stats = compute_stats(&docs, &lang("en"));
        let f = stats.gender(GenderLabel::Female);
        let m = stats.gender(GenderLabel::Male);
        assert_eq!(f.sentences, m.sentences);
        assert!(f.documents < m.documents);
        assert!(f.avg_sentences_per_doc() > m.avg_sentences_per_doc());
    }

    #[test]
    fn filters_by_language() {
        let docs = vec![
            doc("D", "en", GenderLabel::Male, &["one two."]),
            doc("D", "es", GenderLabel::Male, &["uno dos."]),
        ];
        let stats = compute_stats(&docs, &lang("es"));
        assert_eq!(stats.gender(GenderLabel::Male).documents, 1);
        assert_eq!(stats.gender(GenderLabel::Male).words, 2);
    }

    #[test]
    fn report_layout_mirrors_row_labels() {
        let docs = vec![
            doc("F1", "en", GenderLabel::Female, &["a b.", "c d."]),
            doc("M1", "en", GenderLabel::Male, &["e f g."]),
        ];
        let stats = vec![compute_stats(&docs, &lang("en"))];
        let report = render_stats_report(&stats);
        for label in [
            "Documents",
            "Sentences",
            "Average sent/doc",
            "Words",
            "Average words/doc",
            "Vocabulary",
        ] {
            assert!(report.contains(label), "missing row {label}");
        }
        assert!(report.contains('F') && report.contains('M'));
        let lines: Vec<&str> = report.lines().collect();
        assert_eq!(lines.len(), 8, "2 header rows + 6 data rows");
    }
}
