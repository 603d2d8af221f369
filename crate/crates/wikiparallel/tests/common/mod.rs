//! Shared fixtures: synthetic dumps, planted corpora, repeated-page streams.

#![allow(dead_code)]

use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wikiparallel::embed::SentenceVector;
use wikiparallel::gender::BalanceMode;
use wikiparallel::pipeline::{PipelineConfig, Selection};
use wikiparallel::{
    builtin_fallback_embed, ArticleKey, BalanceConfig, CleaningConfig, EmbeddingProviderSpec,
    LangCode, MiningConfig, SentenceRef,
};

pub fn lang(code: &str) -> LangCode {
    LangCode::new(code).unwrap()
}

pub fn page_xml(title: &str, id: u64, ns: u32, text: &str) -> String {
    format!(
        "  <page>\n    <title>{title}</title>\n    <ns>{ns}</ns>\n    <id>{id}</id>\n    \
         <revision>\n      <id>{rev}</id>\n      <text bytes=\"{len}\" xml:space=\"preserve\">{text}</text>\n    </revision>\n  </page>\n",
        rev = id + 100_000,
        len = text.len()
    )
}

pub fn dump_xml(language: &str, pages: &[String]) -> String {
    format!(
        "<mediawiki xmlns=\"http://www.mediawiki.org/xml/export-0.11/\" xml:lang=\"{language}\">\n  <siteinfo>\n    <sitename>Fixture</sitename>\n    <dbname>{language}wiki</dbname>\n  </siteinfo>\n{}</mediawiki>\n",
        pages.join("")
    )
}

/// One biography of the three-language fixture.
pub struct FixtureBio {
    pub docid: &'static str,
    pub titles: [&'static str; 3], // en, es, ca
    pub wpids: [u64; 3],
    /// Parallel sentences: (en, es, ca); `None` in a slot means that language
    /// lacks the translation.
    pub rows: Vec<(&'static str, Option<&'static str>, Option<&'static str>)>,
    /// Unaligned pivot-only sentences appended to the English article.
    pub extra_en: Vec<&'static str>,
}

pub fn fixture_bios() -> Vec<FixtureBio> {
    vec![
        FixtureBio {
            docid: "Maria Solano",
            titles: ["Maria Solano", "María Solano", "Maria Solano"],
            wpids: [101, 201, 301],
            rows: vec![
                (
                    "Maria Solano studied philology at the coastal University of Bayonne.",
                    Some("Maria Solano estudied philologia at the coastal Universitat of Bayonne es."),
                    Some("Maria Solano estudia philologia at the coastal Universitat of Bayonne ca."),
                ),
                (
                    "She founded a literary magazine devoted to short maritime fiction.",
                    Some("She fundied a literaria magazine devoted to short maritime fiction es."),
                    Some("She fundava a literaria magazine devoted to short maritime fiction ca."),
                ),
                (
                    "Her early poems won the national critics award in 1998.",
                    Some("Her early poemas won the nacional critics award in 1998 es."),
                    Some("Her early poemes won the nacional critics award in 1998 ca."),
                ),
                // the Spanish member runs far longer: the cleaning stage drops this row
                (
                    "She later taught translation seminars at two universities.",
                    Some("She later taught translation seminars at two universities and she also organized an annual workshop for young rural poets es."),
                    Some("She later taught translation seminars at two universities ca."),
                ),
                (
                    "She retired to the mountains to write essays about rivers.",
                    Some("She retired to the montanas to write essays about rivers es."),
                    Some("She retired to the muntanyes to write essays about rivers ca."),
                ),
            ],
            extra_en: vec!["Archive records about municipal road budgets mention unrelated committees."],
        },
        FixtureBio {
            docid: "Jon Etxeberria",
            titles: ["Jon Etxeberria", "Jon Etxeberria", "Jon Etxeberría"],
            wpids: [102, 202, 302],
            rows: vec![
                (
                    "Jon Etxeberria played handball for the harbor club since 1990.",
                    Some("Jon Etxeberria played handbol for the harbor club since 1990 es."),
                    Some("Jon Etxeberria played handbol for the harbor club since 1990 ca."),
                ),
                (
                    "He scored the winning goal in the provincial final against Tolosa.",
                    Some("He scored the winning gol in the provincial final against Tolosa es."),
                    Some("He scored the winning gol in the provincial final against Tolosa ca."),
                ),
                (
                    "His autobiography describes the locker rooms of the old arena.",
                    Some("His autobiografia describes the locker rooms of the old arena es."),
                    Some("His autobiografia describes the locker rooms of the old arena ca."),
                ),
                // missing Spanish translation: the intersection drops this row
                (
                    "He coached a junior squad after retiring from competition.",
                    None,
                    Some("He coached a junior squad after retiring from competition ca."),
                ),
            ],
            extra_en: vec!["Regional statute paragraphs regulate stadium concession stands in detail."],
        },
        FixtureBio {
            docid: "Aran Ibarra",
            titles: ["Aran Ibarra", "Aran Ibarra", "Aran Ibarra"],
            wpids: [103, 203, 303],
            rows: vec![
                (
                    "The Ibarra workshop restores antique accordions for touring musicians.",
                    Some("The Ibarra workshop restaura antique accordions for touring musicians es."),
                    Some("The Ibarra workshop restaura antique accordions for touring musicians ca."),
                ),
                (
                    "Catalogues from 2004 list forty restored instruments with photographs.",
                    Some("Catalogos from 2004 list forty restored instruments with photographs es."),
                    Some("Catalegs from 2004 list forty restored instruments with photographs ca."),
                ),
            ],
            extra_en: vec![],
        },
    ]
}

fn article_wikitext(
    bio: &FixtureBio,
    language_index: usize,
    langlinks: &[(&str, &str)],
) -> String {
    let mut body = String::new();
    body.push_str(&format!(
        "'''{}''' {{{{Infobox person|name={}}}}} is covered here.\n\n== Life ==\n",
        bio.titles[language_index], bio.titles[language_index]
    ));
    for row in &bio.rows {
        let sentence = match language_index {
            0 => Some(row.0),
            1 => row.1,
            _ => row.2,
        };
        if let Some(s) = sentence {
            body.push_str(s);
            body.push(' ');
        }
    }
    if language_index == 0 {
        for extra in &bio.extra_en {
            body.push_str(extra);
            body.push(' ');
        }
    }
    body.push_str("\n\n[[Category:Living people]]\n");
    for (code, title) in langlinks {
        body.push_str(&format!("[[{code}:{title}]]\n"));
    }
    body
}

/// Writes the three dumps (`en` plain, `es` gzipped, `ca` plain), a title
/// list, and returns a ready config with balancing off.
pub fn write_three_language_fixture(dir: &Path) -> PipelineConfig {
    use flate2::write::GzEncoder;
    use std::io::Write as _;

    let bios = fixture_bios();
    let mut en_pages = Vec::new();
    let mut es_pages = Vec::new();
    let mut ca_pages = Vec::new();
    for bio in &bios {
        en_pages.push(page_xml(
            bio.titles[0],
            bio.wpids[0],
            0,
            &article_wikitext(bio, 0, &[("es", bio.titles[1]), ("ca", bio.titles[2])]),
        ));
        es_pages.push(page_xml(
            bio.titles[1],
            bio.wpids[1],
            0,
            &article_wikitext(bio, 1, &[("en", bio.titles[0]), ("ca", bio.titles[2])]),
        ));
        ca_pages.push(page_xml(
            bio.titles[2],
            bio.wpids[2],
            0,
            &article_wikitext(bio, 2, &[("en", bio.titles[0]), ("es", bio.titles[1])]),
        ));
    }
    // linked only to Spanish: completeness selection must exclude it
    en_pages.push(page_xml(
        "Missing Person",
        104,
        0,
        "Missing Person writes about harbors. [[Category:Living people]] [[es:Missing Person]]",
    ));
    es_pages.push(page_xml(
        "Missing Person",
        204,
        0,
        "Missing Person writes about harbors es. [[Category:Living people]] [[en:Missing Person]]",
    ));
    // a talk page and a redirect that must be skipped
    en_pages.push(page_xml("Talk chatter", 900, 1, "Not an article."));
    en_pages.push(page_xml("Old Name", 901, 0, "#REDIRECT [[Maria Solano]]"));

    std::fs::write(dir.join("en.xml"), dump_xml("en", &en_pages)).unwrap();
    let mut encoder = GzEncoder::new(
        std::fs::File::create(dir.join("es.xml.gz")).unwrap(),
        flate2::Compression::fast(),
    );
    encoder
        .write_all(dump_xml("es", &es_pages).as_bytes())
        .unwrap();
    encoder.finish().unwrap();
    std::fs::write(dir.join("ca.xml"), dump_xml("ca", &ca_pages)).unwrap();

    let mut titles: Vec<&str> = bios.iter().map(|b| b.titles[0]).collect();
    titles.push("Missing Person");
    titles.push("No Such Page");
    std::fs::write(dir.join("titles.txt"), titles.join("\n")).unwrap();

    let mut dumps = std::collections::BTreeMap::new();
    dumps.insert(lang("en"), dir.join("en.xml"));
    dumps.insert(lang("es"), dir.join("es.xml.gz"));
    dumps.insert(lang("ca"), dir.join("ca.xml"));
    PipelineConfig {
        languages: vec![lang("en"), lang("es"), lang("ca")],
        dumps,
        selection: Selection {
            title_list: Some(dir.join("titles.txt")),
            category: None,
            all: false,
        },
        embedding: EmbeddingProviderSpec::builtin_fallback(256),
        mining: MiningConfig::default(),
        cleaning: CleaningConfig::default(),
        balance: BalanceConfig {
            mode: BalanceMode::Off,
            seed: 11,
        },
        output_dir: dir.join("out"),
        topics_file: None,
        pairs_dump: None,
        pronoun_lexicons: None,
        abbreviations: std::collections::BTreeMap::new(),
    }
}

/// Pseudo-words for the planted-alignment corpus.
fn vocabulary(rng: &mut ChaCha8Rng, size: usize) -> Vec<String> {
    let letters = "abcdefghijklmnopqrstuvwxyz".as_bytes();
    (0..size)
        .map(|_| {
            let len = rng.random_range(4..9);
            (0..len)
                .map(|_| letters[rng.random_range(0..letters.len())] as char)
                .collect()
        })
        .collect()
}

fn make_sentence(rng: &mut ChaCha8Rng, vocab: &[String], words: usize) -> Vec<String> {
    (0..words)
        .map(|_| vocab[rng.random_range(0..vocab.len())].clone())
        .collect()
}

fn perturb(rng: &mut ChaCha8Rng, vocab: &[String], words: &[String], edits: usize) -> Vec<String> {
    let mut out = words.to_vec();
    for _ in 0..edits {
        let at = rng.random_range(0..out.len());
        out[at] = vocab[rng.random_range(0..vocab.len())].clone();
    }
    out
}

fn to_vector(text: &str, l: &LangCode, title: &str, index: u32, dimension: usize) -> SentenceVector {
    SentenceVector {
        sentence: SentenceRef::new(ArticleKey::new(l.clone(), title), index),
        values: builtin_fallback_embed(text, dimension).unwrap(),
    }
}

/// A synthetic bilingual corpus: `pairs` planted translation pairs (light
/// perturbations) plus `distractors` per side (heavy perturbations of
/// disjoint planted sentences). Planted pair `i` sits at index `i` on both
/// sides; distractors follow.
pub fn planted_corpus(
    pairs: usize,
    distractors: usize,
    dimension: usize,
    seed: u64,
) -> (Vec<SentenceVector>, Vec<SentenceVector>) {
    assert!(distractors * 2 <= pairs, "need disjoint planted picks per side");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = vocabulary(&mut rng, 600);
    let mut source_texts: Vec<String> = Vec::new();
    let mut target_texts: Vec<String> = Vec::new();
    let mut source_words: Vec<Vec<String>> = Vec::new();
    let mut target_words: Vec<Vec<String>> = Vec::new();
    for _ in 0..pairs {
        let words = make_sentence(&mut rng, &vocab, 10);
        let translated = perturb(&mut rng, &vocab, &words, 1);
        source_texts.push(words.join(" "));
        target_texts.push(translated.join(" "));
        source_words.push(words);
        target_words.push(translated);
    }
    for i in 0..distractors {
        let heavy = perturb(&mut rng, &vocab, &source_words[i], 4);
        source_texts.push(heavy.join(" "));
    }
    for i in 0..distractors {
        let heavy = perturb(&mut rng, &vocab, &target_words[pairs - 1 - i], 4);
        target_texts.push(heavy.join(" "));
    }
    let en = lang("en");
    let es = lang("es");
    let source = source_texts
        .iter()
        .enumerate()
        .map(|(i, t)| to_vector(t, &en, "S", i as u32, dimension))
        .collect();
    let target = target_texts
        .iter()
        .enumerate()
        .map(|(i, t)| to_vector(t, &es, "T", i as u32, dimension))
        .collect();
    (source, target)
}

/// Shuffle helper for label-invariance checks.
pub fn shuffle_tokens(text: &str, seed: u64) -> String {
    let mut tokens: Vec<&str> = text.split_whitespace().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    tokens.shuffle(&mut rng);
    tokens.join(" ")
}

/// An unbounded reader that serves a dump header, `repeats` copies of one
/// page, and the closing tag, without ever materializing the whole stream.
pub struct RepeatedDump {
    head: Vec<u8>,
    page: Vec<u8>,
    tail: Vec<u8>,
    repeats: u64,
    phase: Phase,
    served: u64,
    offset: usize,
}

enum Phase {
    Head,
    Pages,
    Tail,
    Done,
}

impl RepeatedDump {
    pub fn new(page_wikitext_bytes: usize, repeats: u64) -> Self {
        let sentence = "The archive committee recorded seasonal rainfall at the harbor station. ";
        let mut body = String::with_capacity(page_wikitext_bytes + sentence.len());
        while body.len() < page_wikitext_bytes {
            body.push_str(sentence);
        }
        body.push_str("[[Category:Living people]] [[es:Registro]]");
        let page = page_xml("Rainfall Register", 7, 0, &body).into_bytes();
        let head =
            "<mediawiki xml:lang=\"en\">\n  <siteinfo><sitename>Big</sitename></siteinfo>\n"
                .as_bytes()
                .to_vec();
        let tail = "</mediawiki>\n".as_bytes().to_vec();
        RepeatedDump {
            head,
            page,
            tail,
            repeats,
            phase: Phase::Head,
            served: 0,
            offset: 0,
        }
    }

    /// Size of one serialized page element.
    pub fn page_bytes(&self) -> usize {
        self.page.len()
    }

    /// Total bytes this reader will serve.
    pub fn total_bytes(&self) -> u64 {
        self.head.len() as u64 + self.page.len() as u64 * self.repeats + self.tail.len() as u64
    }
}

impl Read for RepeatedDump {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        loop {
            let (chunk, next): (&[u8], _) = match self.phase {
                Phase::Head => (&self.head, Phase::Pages),
                Phase::Pages => (&self.page, Phase::Pages),
                Phase::Tail => (&self.tail, Phase::Done),
                Phase::Done => return Ok(0),
            };
            if self.offset < chunk.len() {
                let n = (chunk.len() - self.offset).min(buf.len());
                buf[..n].copy_from_slice(&chunk[self.offset..self.offset + n]);
                self.offset += n;
                return Ok(n);
            }
            self.offset = 0;
            match self.phase {
                Phase::Pages => {
                    self.served += 1;
                    if self.served >= self.repeats {
                        self.phase = Phase::Tail;
                    }
                }
                _ => self.phase = next,
            }
        }
    }
}
