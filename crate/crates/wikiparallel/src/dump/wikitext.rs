//! Rule-based wikitext stripping.
//!
//! Lossy by design: templates, tables, references, HTML tags, file links,
//! category links and headings are removed; internal links reduce to their
//! labels. No template expansion, no redirect following.

use crate::lang::LangCode;

use super::{normalize_title, ArticleText, RawPage};
use crate::lang::ArticleKey;

/// Tags whose entire content is dropped along with the tags.
const DROP_CONTENT_TAGS: &[&str] = &[
    "ref",
    "references",
    "gallery",
    "timeline",
    "math",
    "source",
    "syntaxhighlight",
    "score",
    "imagemap",
];

/// Namespace prefixes (lowercased) that mark category links.
const CATEGORY_PREFIXES: &[&str] = &["category", "categoría", "categoria", "kategorie", "catégorie"];

/// Namespace prefixes (lowercased) that mark file/image links.
const FILE_PREFIXES: &[&str] = &[
    "file", "image", "media", "archivo", "imagen", "fitxer", "imatge", "fichier", "datei",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StripWarning {
    /// `{{` without a matching `}}`; everything from the opener was dropped.
    UnbalancedTemplate { offset: usize },
    /// `{|` without a matching `|}`; everything from the opener was dropped.
    UnbalancedTable { offset: usize },
}

impl std::fmt::Display for StripWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StripWarning::UnbalancedTemplate { offset } => {
                write!(f, "unbalanced template braces at byte {offset}; stripped to end")
            }
            StripWarning::UnbalancedTable { offset } => {
                write!(f, "unbalanced table markup at byte {offset}; stripped to end")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StripResult {
    pub article: ArticleText,
    pub warnings: Vec<StripWarning>,
}

/// Categories and interlanguage links found in a page's wikitext.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkMetadata {
    pub categories: Vec<String>,
    pub langlinks: Vec<(LangCode, String)>,
}

/// Strips a page's wikitext down to plain paragraphs.
pub fn strip_wikitext(page: &RawPage) -> StripResult {
    let (plain_text, warnings) = strip_text(&page.wikitext);
    StripResult {
        article: ArticleText {
            key: ArticleKey::new(page.language.clone(), page.title.clone()),
            wpid: page.wpid,
            plain_text,
        },
        warnings,
    }
}

/// Core text transformation; see module docs for the rule set.
///
/// Output paragraphs are separated by blank lines, words by single spaces.
/// Idempotent: stripping already-stripped text is the identity.
pub fn strip_text(wikitext: &str) -> (String, Vec<StripWarning>) {
    let mut warnings = Vec::new();
    let text = remove_comments(wikitext);
    let text = remove_tags(&text);
    let text = remove_templates(&text, &mut warnings);
    let text = remove_tables(&text, &mut warnings);
    let text = process_links(&text);
    let text = remove_quotes(&text);
    let text = assemble_paragraphs(&text);
    (text, warnings)
}

fn remove_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(start) = rest.find("<!--") {
        out.push_str(&rest[..start]);
        match rest[start + 4..].find("-->") {
            Some(end) => rest = &rest[start + 4 + end + 3..],
            None => return out, // unterminated comment swallows the rest
        }
    }
    out.push_str(rest);
    out
}

/// Longest plausible tag; `<` runs without a `>` nearby stay literal text.
const MAX_TAG_LEN: usize = 256;

fn remove_tags(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'<' {
            let next = memchr::memchr(b'<', &bytes[i..])
                .map(|p| i + p)
                .unwrap_or(bytes.len());
            out.push_str(&text[i..next]);
            i = next;
            continue;
        }
        match parse_tag(text, i) {
            Some(tag) => {
                if !tag.closing && DROP_CONTENT_TAGS.contains(&tag.name.as_str()) && !tag.self_closing {
                    // Drop up to and including the matching close tag; to the
                    // end when it never closes.
                    match find_close_tag(text, tag.end, &tag.name) {
                        Some(after) => i = after,
                        None => break,
                    }
                } else {
                    i = tag.end; // tag markup removed, content kept
                }
            }
            None => {
                out.push('<');
                i += 1;
            }
        }
    }
    out
}

struct Tag {
    name: String,
    closing: bool,
    self_closing: bool,
    /// Byte index just past the `>`.
    end: usize,
}

fn parse_tag(text: &str, at: usize) -> Option<Tag> {
    let bytes = text.as_bytes();
    let mut j = at + 1;
    let closing = bytes.get(j) == Some(&b'/');
    if closing {
        j += 1;
    }
    if !bytes.get(j)?.is_ascii_alphabetic() {
        return None;
    }
    let name_start = j;
    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'-') {
        j += 1;
    }
    let name = text[name_start..j].to_ascii_lowercase();
    let limit = (at + MAX_TAG_LEN).min(bytes.len());
    let close = memchr::memchr(b'>', &bytes[j..limit])? + j;
    let self_closing = close > at && bytes[close - 1] == b'/';
    Some(Tag {
        name,
        closing,
        self_closing,
        end: close + 1,
    })
}

fn find_close_tag(text: &str, from: usize, name: &str) -> Option<usize> {
    let lower = text.to_ascii_lowercase();
    let needle = format!("</{name}");
    let mut search_from = from;
    loop {
        let pos = lower[search_from..].find(&needle)? + search_from;
        let after_name = pos + needle.len();
        // require '>' (possibly after whitespace) so </reference> does not
        // close <ref>
        let rest = &text.as_bytes()[after_name..];
        let mut k = 0;
        while k < rest.len() && rest[k].is_ascii_whitespace() {
            k += 1;
        }
        if rest.get(k) == Some(&b'>') {
            return Some(after_name + k + 1);
        }
        search_from = pos + 1;
    }
}

fn remove_templates(text: &str, warnings: &mut Vec<StripWarning>) -> String {
    remove_braced(text, "{{", "}}", warnings, |offset| {
        StripWarning::UnbalancedTemplate { offset }
    })
}

fn remove_tables(text: &str, warnings: &mut Vec<StripWarning>) -> String {
    remove_braced(text, "{|", "|}", warnings, |offset| {
        StripWarning::UnbalancedTable { offset }
    })
}

fn remove_braced(
    text: &str,
    open: &str,
    close: &str,
    warnings: &mut Vec<StripWarning>,
    warn: impl Fn(usize) -> StripWarning,
) -> String {
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while let Some(start) = text[i..].find(open).map(|p| i + p) {
        out.push_str(&text[i..start]);
        let mut depth = 1;
        let mut j = start + open.len();
        while depth > 0 {
            let next_open = text[j..].find(open).map(|p| j + p);
            let next_close = text[j..].find(close).map(|p| j + p);
            match (next_open, next_close) {
                (Some(o), Some(c)) if o < c => {
                    depth += 1;
                    j = o + open.len();
                }
                (_, Some(c)) => {
                    depth -= 1;
                    j = c + close.len();
                }
                (_, None) => {
                    warnings.push(warn(start));
                    return out;
                }
            }
        }
        i = j;
    }
    out.push_str(&text[i..]);
    out
}

fn process_links(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while let Some(start) = text[i..].find("[[").map(|p| i + p) {
        out.push_str(&text[i..start]);
        match find_link_end(text, start) {
            Some(end) => {
                let inner = &text[start + 2..end];
                if let Some(replacement) = render_internal_link(inner) {
                    out.push_str(&replacement);
                }
                i = end + 2;
            }
            None => {
                // no closing ']]': drop the opener token, keep the text
                i = start + 2;
            }
        }
    }
    // external links in the remainder and the prefix handled uniformly below
    out.push_str(&text[i..]);
    process_external_links(&out)
}

/// Finds the `]]` closing the `[[` at `start`, honoring nested links.
fn find_link_end(text: &str, start: usize) -> Option<usize> {
    let mut depth = 1;
    let mut j = start + 2;
    while depth > 0 {
        let next_open = text[j..].find("[[").map(|p| j + p);
        let next_close = text[j..].find("]]").map(|p| j + p);
        match (next_open, next_close) {
            (Some(o), Some(c)) if o < c => {
                depth += 1;
                j = o + 2;
            }
            (_, Some(c)) => {
                depth -= 1;
                if depth == 0 {
                    return Some(c);
                }
                j = c + 2;
            }
            (_, None) => return None,
        }
    }
    None
}

/// What an internal link contributes to the plain text, or `None` when the
/// link is metadata (category, file, interlanguage).
fn render_internal_link(inner: &str) -> Option<String> {
    let inline = inner.starts_with(':');
    let body = if inline { &inner[1..] } else { inner };
    let target_end = body.find('|').unwrap_or(body.len());
    let target = &body[..target_end];
    if let Some(colon) = target.find(':') {
        let prefix = target[..colon].trim().to_lowercase();
        if !inline {
            if CATEGORY_PREFIXES.contains(&prefix.as_str()) {
                return None;
            }
            if FILE_PREFIXES.contains(&prefix.as_str()) {
                return None;
            }
            if LangCode::is_valid(&prefix) {
                return None; // interlanguage link: metadata, not body text
            }
        } else if FILE_PREFIXES.contains(&prefix.as_str()) {
            return None;
        }
    }
    let label = match body.rfind('|') {
        Some(pipe) if pipe + 1 < body.len() => &body[pipe + 1..],
        Some(_) => target, // trailing pipe: fall back to the target
        None => target,
    };
    Some(label.to_string())
}

fn process_external_links(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'[' {
            let next = memchr::memchr(b'[', &bytes[i..])
                .map(|p| i + p)
                .unwrap_or(bytes.len());
            out.push_str(&text[i..next]);
            i = next;
            continue;
        }
        let rest = &text[i + 1..];
        let is_url = rest.starts_with("http://")
            || rest.starts_with("https://")
            || rest.starts_with("ftp://")
            || rest.starts_with("//");
        if !is_url {
            out.push('[');
            i += 1;
            continue;
        }
        match rest.find(']') {
            Some(close) => {
                let link = &rest[..close];
                if let Some(space) = link.find(char::is_whitespace) {
                    out.push_str(link[space..].trim_start());
                }
                i += 1 + close + 1;
            }
            None => {
                out.push('[');
                i += 1;
            }
        }
    }
    out
}

/// Removes bold/italic apostrophe runs (2 or more in a row).
fn remove_quotes(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\'' && chars.peek() == Some(&'\'') {
            while chars.peek() == Some(&'\'') {
                chars.next();
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Drops headings, list markers and magic words, then rebuilds paragraphs:
/// blank-line-separated input blocks become single lines of single-spaced
/// text.
fn assemble_paragraphs(text: &str) -> String {
    let mut paragraphs: Vec<String> = Vec::new();
    let mut current = String::new();
    for raw_line in text.lines() {
        let line = raw_line.trim();
        if line.is_empty() || is_heading(line) {
            flush_paragraph(&mut paragraphs, &mut current);
            continue;
        }
        let line = line.trim_start_matches(['*', '#', ':', ';']).trim_start();
        for word in line.split_whitespace() {
            if is_magic_word(word) {
                continue;
            }
            if !current.is_empty() {
                current.push(' ');
            }
            current.push_str(word);
        }
    }
    flush_paragraph(&mut paragraphs, &mut current);
    paragraphs.join("\n\n")
}

fn flush_paragraph(paragraphs: &mut Vec<String>, current: &mut String) {
    if !current.is_empty() {
        paragraphs.push(std::mem::take(current));
    }
}

fn is_heading(line: &str) -> bool {
    line.len() >= 2 && line.starts_with('=') && line.ends_with('=')
}

fn is_magic_word(word: &str) -> bool {
    word.len() > 4
        && word.starts_with("__")
        && word.ends_with("__")
        && word[2..word.len() - 2]
            .chars()
            .all(|c| c.is_ascii_uppercase())
}

/// Scans raw wikitext for category links and interlanguage links without
/// altering the text. Comments are ignored. Results are normalized and
/// deduplicated, preserving first-occurrence order.
pub fn extract_link_metadata(wikitext: &str) -> LinkMetadata {
    let text = remove_comments(wikitext);
    let mut meta = LinkMetadata::default();
    let mut seen_categories = std::collections::HashSet::new();
    let mut seen_langlinks = std::collections::HashSet::new();
    let mut i = 0;
    while let Some(start) = text[i..].find("[[").map(|p| i + p) {
        let Some(end) = find_link_end(&text, start) else {
            break;
        };
        let inner = &text[start + 2..end];
        i = end + 2;
        if inner.starts_with(':') {
            continue; // inline link, not metadata
        }
        let target_end = inner.find('|').unwrap_or(inner.len());
        let target = &inner[..target_end];
        let Some(colon) = target.find(':') else {
            continue;
        };
        let prefix = target[..colon].trim().to_lowercase();
        let name = &target[colon + 1..];
        if CATEGORY_PREFIXES.contains(&prefix.as_str()) {
            let normalized = normalize_title(name);
            if !normalized.is_empty() && seen_categories.insert(normalized.clone()) {
                meta.categories.push(normalized);
            }
        } else if !FILE_PREFIXES.contains(&prefix.as_str()) && LangCode::is_valid(&prefix) {
            let code = LangCode::new(&prefix).expect("validated");
            let normalized = normalize_title(name);
            if !normalized.is_empty() && seen_langlinks.insert((code.clone(), normalized.clone()))
            {
                meta.langlinks.push((code, normalized));
            }
        }
    }
    meta
}
