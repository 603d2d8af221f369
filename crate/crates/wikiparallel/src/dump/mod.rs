//! MediaWiki XML dump ingestion: stream pages, strip wikitext, segment
//! sentences.
//!
//! `stream_pages` holds one page in memory at a time regardless of dump size.
//! Plain and gzip-compressed dumps are detected by magic bytes; bzip2/xz/zstd
//! are recognized and reported as unsupported so the caller can decompress
//! externally.

mod segment;
mod wikitext;

pub use segment::{segment_sentences, split_sentences, AbbreviationList};
pub use wikitext::{extract_link_metadata, strip_text, strip_wikitext, LinkMetadata, StripResult, StripWarning};

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read};

use flate2::bufread::MultiGzDecoder;

use crate::lang::{ArticleKey, LangCode};
use crate::xmlscan::{XmlEvent, XmlError, XmlScanner};

/// One page as it appears in the dump, before any markup processing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPage {
    /// Normalized title (trimmed, space runs collapsed, first letter upper).
    pub title: String,
    /// The page's numeric Wikipedia id.
    pub wpid: u64,
    pub language: LangCode,
    pub wikitext: String,
    /// Normalized category names, deduplicated, in order of appearance.
    pub categories: Vec<String>,
    /// Interlanguage links `(language, normalized foreign title)`,
    /// deduplicated, in order of appearance.
    pub langlinks: Vec<(LangCode, String)>,
}

/// An article body after wikitext stripping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArticleText {
    pub key: ArticleKey,
    pub wpid: u64,
    /// Plain text: paragraphs separated by blank lines, words by single
    /// spaces.
    pub plain_text: String,
}

/// One sentence of a stripped article.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub article: ArticleKey,
    /// 0-based position among the article's kept sentences.
    pub index: u32,
    pub text: String,
}

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error("i/o error reading dump: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Xml(#[from] XmlError),
    #[error("dump stream truncated at byte {offset}: {open} element(s) still open")]
    Truncated { offset: u64, open: usize },
    #[error("malformed page at byte {offset}: {message}")]
    MalformedPage { offset: u64, message: String },
    #[error("unsupported compression codec: {codec} (supported: plain, gzip)")]
    UnsupportedCompression { codec: &'static str },
    #[error("page selector is empty: give titles, a category, or select all pages")]
    EmptySelector,
}

/// Normalizes a title the way MediaWiki does for matching purposes: trim
/// surrounding whitespace, collapse runs of spaces/underscores to one space,
/// uppercase the first letter.
pub fn normalize_title(title: &str) -> String {
    let mut out = String::with_capacity(title.len());
    let mut pending_space = false;
    for c in title.trim().chars() {
        if c == ' ' || c == '_' || c.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        if out.is_empty() {
            out.extend(c.to_uppercase());
        } else {
            out.push(c);
        }
    }
    out
}

/// Which pages `stream_pages` yields.
#[derive(Debug, Clone)]
pub enum PageSelector {
    /// Every main-namespace, non-redirect page.
    All,
    /// Pages whose normalized title is in `titles`, or whose category list
    /// contains `category`. A page matching either dimension is selected.
    Filter {
        titles: Option<HashSet<String>>,
        category: Option<String>,
    },
}

impl PageSelector {
    pub fn all() -> Self {
        PageSelector::All
    }

    pub fn from_titles<I, S>(titles: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        PageSelector::Filter {
            titles: Some(
                titles
                    .into_iter()
                    .map(|t| normalize_title(t.as_ref()))
                    .filter(|t| !t.is_empty())
                    .collect(),
            ),
            category: None,
        }
    }

    pub fn from_category(category: &str) -> Self {
        PageSelector::Filter {
            titles: None,
            category: Some(normalize_title(category)),
        }
    }

    pub fn from_titles_and_category<I, S>(titles: I, category: &str) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut sel = Self::from_titles(titles);
        if let PageSelector::Filter { category: c, .. } = &mut sel {
            *c = Some(normalize_title(category));
        }
        sel
    }

    fn validate(&self) -> Result<(), DumpError> {
        match self {
            PageSelector::All => Ok(()),
            PageSelector::Filter { titles, category } => {
                if titles.is_none() && category.is_none() {
                    Err(DumpError::EmptySelector)
                } else {
                    Ok(())
                }
            }
        }
    }

    fn matches(&self, title: &str, categories: &[String]) -> bool {
        match self {
            PageSelector::All => true,
            PageSelector::Filter { titles, category } => {
                let by_title = titles.as_ref().is_some_and(|set| set.contains(title));
                let by_category = category
                    .as_ref()
                    .is_some_and(|c| categories.iter().any(|pc| pc == c));
                by_title || by_category
            }
        }
    }
}

/// Reads a title list: one title per line, UTF-8, blank lines skipped.
pub fn load_title_list<R: BufRead>(reader: R) -> std::io::Result<Vec<String>> {
    let mut titles = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let trimmed = line.trim();
        if !trimmed.is_empty() {
            titles.push(trimmed.to_string());
        }
    }
    Ok(titles)
}

fn detect_compression(magic: &[u8]) -> Result<Option<&'static str>, DumpError> {
    if magic.starts_with(&[0x1f, 0x8b]) {
        return Ok(Some("gzip"));
    }
    if magic.starts_with(b"BZh") {
        return Err(DumpError::UnsupportedCompression { codec: "bzip2" });
    }
    if magic.starts_with(&[0xfd, 0x37, 0x7a, 0x58, 0x5a, 0x00]) {
        return Err(DumpError::UnsupportedCompression { codec: "xz" });
    }
    if magic.starts_with(&[0x28, 0xb5, 0x2f, 0xfd]) {
        return Err(DumpError::UnsupportedCompression { codec: "zstd" });
    }
    Ok(None)
}

/// Streams the selected pages out of a MediaWiki XML export.
///
/// Non-main-namespace pages and redirects are skipped. Memory use is bounded
/// by the largest single page, never the whole dump.
pub fn stream_pages<R: Read + Send + 'static>(
    dump_source: R,
    selector: PageSelector,
    language: LangCode,
) -> Result<PageStream, DumpError> {
    selector.validate()?;
    let mut buffered = BufReader::with_capacity(64 * 1024, dump_source);
    let magic = buffered.fill_buf()?;
    let reader: Box<dyn BufRead + Send> = match detect_compression(magic)? {
        Some("gzip") => Box::new(BufReader::with_capacity(
            64 * 1024,
            MultiGzDecoder::new(buffered),
        )),
        _ => Box::new(buffered),
    };
    Ok(PageStream {
        scanner: XmlScanner::new(reader),
        selector,
        language,
        stack: Vec::new(),
        page: None,
        done: false,
        pages_scanned: 0,
    })
}

#[derive(Default)]
struct PartialPage {
    title: String,
    ns: String,
    id: String,
    text: String,
    redirect: bool,
    saw_id: bool,
}

/// Iterator over selected pages; see [`stream_pages`].
pub struct PageStream {
    scanner: XmlScanner<Box<dyn BufRead + Send>>,
    selector: PageSelector,
    language: LangCode,
    stack: Vec<String>,
    page: Option<PartialPage>,
    done: bool,
    pages_scanned: u64,
}

impl PageStream {
    /// Pages examined so far, including skipped and unselected ones.
    pub fn pages_scanned(&self) -> u64 {
        self.pages_scanned
    }

    fn page_depth(&self) -> Option<usize> {
        self.stack.iter().position(|n| n == "page")
    }

    fn finish_page(&mut self, page: PartialPage) -> Result<Option<RawPage>, DumpError> {
        self.pages_scanned += 1;
        if page.ns.trim() != "0" && !page.ns.trim().is_empty() {
            return Ok(None);
        }
        if page.redirect || is_redirect_wikitext(&page.text) {
            return Ok(None);
        }
        let title = normalize_title(&page.title);
        if title.is_empty() {
            return Ok(None);
        }
        if !page.saw_id {
            return Err(DumpError::MalformedPage {
                offset: self.scanner.offset(),
                message: format!("page {:?} has no id element", page.title),
            });
        }
        let wpid: u64 = page.id.trim().parse().map_err(|_| DumpError::MalformedPage {
            offset: self.scanner.offset(),
            message: format!("page {:?} has unparsable id {:?}", page.title, page.id),
        })?;
        let meta = extract_link_metadata(&page.text);
        if !self.selector.matches(&title, &meta.categories) {
            return Ok(None);
        }
        Ok(Some(RawPage {
            title,
            wpid,
            language: self.language.clone(),
            wikitext: page.text,
            categories: meta.categories,
            langlinks: meta.langlinks,
        }))
    }
}

fn is_redirect_wikitext(text: &str) -> bool {
    let head = text.trim_start();
    let mut chars = head.chars();
    if chars.next() != Some('#') {
        return false;
    }
    head[1..]
        .chars()
        .take(8)
        .collect::<String>()
        .eq_ignore_ascii_case("redirect")
}

impl Iterator for PageStream {
    type Item = Result<RawPage, DumpError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            let event = match self.scanner.next_event() {
                Ok(ev) => ev,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            };
            match event {
                XmlEvent::Eof => {
                    self.done = true;
                    if self.stack.is_empty() {
                        return None;
                    }
                    return Some(Err(DumpError::Truncated {
                        offset: self.scanner.offset(),
                        open: self.stack.len(),
                    }));
                }
                XmlEvent::StartTag {
                    name,
                    attrs,
                    self_closing,
                } => {
                    let in_page = self.page.is_some();
                    if name == "page" && !in_page {
                        self.page = Some(PartialPage::default());
                        if self_closing {
                            // degenerate <page/>: nothing to emit
                            self.page = None;
                            continue;
                        }
                    } else if in_page && name == "redirect" {
                        if let Some(p) = self.page.as_mut() {
                            p.redirect = true;
                        }
                        let _ = attrs;
                    }
                    if !self_closing {
                        self.stack.push(name);
                    }
                }
                XmlEvent::EndTag { name } => {
                    match self.stack.pop() {
                        Some(open) if open == name => {}
                        Some(open) => {
                            self.done = true;
                            return Some(Err(DumpError::MalformedPage {
                                offset: self.scanner.offset(),
                                message: format!(
                                    "mismatched end tag </{name}> (expected </{open}>)"
                                ),
                            }));
                        }
                        None => {
                            self.done = true;
                            return Some(Err(DumpError::MalformedPage {
                                offset: self.scanner.offset(),
                                message: format!("unexpected end tag </{name}>"),
                            }));
                        }
                    }
                    if name == "page" && self.page.is_some() {
                        let page = self.page.take().expect("page state");
                        match self.finish_page(page) {
                            Ok(Some(raw)) => return Some(Ok(raw)),
                            Ok(None) => {}
                            Err(e) => {
                                self.done = true;
                                return Some(Err(e));
                            }
                        }
                    }
                }
                XmlEvent::Text(text) => {
                    let Some(page_at) = self.page_depth() else {
                        continue;
                    };
                    let Some(partial) = self.page.as_mut() else {
                        continue;
                    };
                    let rel: Vec<&str> = self.stack[page_at + 1..]
                        .iter()
                        .map(|s| s.as_str())
                        .collect();
                    match rel.as_slice() {
                        ["title"] => partial.title.push_str(&text),
                        ["ns"] => partial.ns.push_str(&text),
                        ["id"] => {
                            // The first id directly under <page> is the page id;
                            // revision and contributor ids sit deeper.
                            if !partial.saw_id {
                                partial.id.push_str(&text);
                            }
                        }
                        ["revision", "text"] => partial.text.push_str(&text),
                        _ => {}
                    }
                    if rel.as_slice() == ["id"] {
                        partial.saw_id = true;
                    }
                }
            }
        }
    }
}
