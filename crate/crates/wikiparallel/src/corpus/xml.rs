//! The document-level XML mark-up.
//!
//! ```text
//! <doc docid="Aurelia Arkotxa" wpid="51690640" language="en" topic="C6" gender="Female">
//! <title>Aurelia Arkotxa</title>
//! <seg id="1">She teaches classics at the University of Bayonne; ...</seg>
//! </doc>
//! ```
//!
//! Attribute order is fixed (docid, wpid, language, topic, gender); topic is
//! omitted when absent; documents are ordered by docid; files carry one doc
//! element after another with no wrapper root.

use std::io::{BufRead, Write};

use crate::gender::GenderLabel;
use crate::lang::LangCode;
use crate::xmlscan::{XmlEvent, XmlScanner};

use super::{is_valid_topic, CorpusError, DocumentRecord, Segment};

fn escape_attr(value: &str, out: &mut String) {
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            // keep escaped so attribute-value normalization cannot fold them
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            other => out.push(other),
        }
    }
}

fn escape_text(value: &str, out: &mut String) {
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            other => out.push(other),
        }
    }
}

/// Writes one language's corpus file; returns the byte count.
///
/// Every document is validated (and must carry `language`) before any byte
/// is written.
pub fn write_corpus_xml<W: Write>(
    documents: &[DocumentRecord],
    language: &LangCode,
    mut sink: W,
) -> Result<u64, CorpusError> {
    let mut seen = std::collections::HashSet::new();
    for doc in documents {
        doc.validate()?;
        if doc.language != *language {
            return Err(CorpusError::Validation {
                docid: doc.docid.clone(),
                message: format!(
                    "document language {} does not match file language {language}",
                    doc.language
                ),
            });
        }
        if !seen.insert(&doc.docid) {
            return Err(CorpusError::Validation {
                docid: doc.docid.clone(),
                message: "duplicate docid in one corpus file".into(),
            });
        }
    }
    let mut ordered: Vec<&DocumentRecord> = documents.iter().collect();
    ordered.sort_by(|a, b| a.docid.cmp(&b.docid));

    let mut out = String::new();
    for doc in ordered {
        out.push_str("<doc docid=\"");
        escape_attr(&doc.docid, &mut out);
        out.push_str("\" wpid=\"");
        out.push_str(&doc.wpid.to_string());
        out.push_str("\" language=\"");
        escape_attr(doc.language.as_str(), &mut out);
        if let Some(topic) = &doc.topic {
            out.push_str("\" topic=\"");
            escape_attr(topic, &mut out);
        }
        out.push_str("\" gender=\"");
        out.push_str(doc.gender.as_str());
        out.push_str("\">\n<title>");
        escape_text(&doc.title, &mut out);
        out.push_str("</title>\n");
        for segment in &doc.segments {
            out.push_str("<seg id=\"");
            out.push_str(&segment.id.to_string());
            out.push_str("\">");
            escape_text(&segment.text, &mut out);
            out.push_str("</seg>\n");
        }
        out.push_str("</doc>\n");
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(out.len() as u64)
}

/// Reads a corpus file back into records (file order).
///
/// Inverse of [`write_corpus_xml`] on its output. Tolerates a missing topic
/// attribute and unknown attributes; docid and title are trimmed on read.
pub fn read_corpus_xml<R: BufRead>(source: R) -> Result<Vec<DocumentRecord>, CorpusError> {
    let mut scanner = XmlScanner::new(source);
    let mut documents = Vec::new();
    loop {
        let offset = scanner.offset();
        match next(&mut scanner)? {
            XmlEvent::Eof => break,
            XmlEvent::Text(text) if text.trim().is_empty() => continue,
            XmlEvent::Text(text) => {
                return parse_err(offset, format!("stray text outside documents: {:?}", snippet(&text)));
            }
            XmlEvent::StartTag { name, attrs, self_closing } if name == "doc" => {
                if self_closing {
                    return parse_err(offset, "empty doc element".into());
                }
                documents.push(read_doc(&mut scanner, attrs, offset)?);
            }
            XmlEvent::StartTag { name, .. } => {
                return parse_err(offset, format!("unexpected element <{name}>"));
            }
            XmlEvent::EndTag { name } => {
                return parse_err(offset, format!("unexpected end tag </{name}>"));
            }
        }
    }
    Ok(documents)
}

fn next<R: BufRead>(scanner: &mut XmlScanner<R>) -> Result<XmlEvent, CorpusError> {
    scanner.next_event().map_err(|e| CorpusError::Parse {
        offset: e.offset,
        message: e.message,
    })
}

fn parse_err<T>(offset: u64, message: String) -> Result<T, CorpusError> {
    Err(CorpusError::Parse { offset, message })
}

fn snippet(text: &str) -> String {
    text.trim().chars().take(40).collect()
}

fn attr<'a>(attrs: &'a [(String, String)], name: &str) -> Option<&'a str> {
    attrs
        .iter()
        .find(|(k, _)| k == name)
        .map(|(_, v)| v.as_str())
}

fn require_attr<'a>(
    attrs: &'a [(String, String)],
    name: &str,
    offset: u64,
) -> Result<&'a str, CorpusError> {
    attr(attrs, name)
        .ok_or_else(|| CorpusError::Parse {
            offset,
            message: format!("doc element is missing the mandatory {name:?} attribute"),
        })
}

fn read_doc<R: BufRead>(
    scanner: &mut XmlScanner<R>,
    attrs: Vec<(String, String)>,
    doc_offset: u64,
) -> Result<DocumentRecord, CorpusError> {
    let docid = require_attr(&attrs, "docid", doc_offset)?.trim().to_string();
    let wpid: u64 = require_attr(&attrs, "wpid", doc_offset)?
        .trim()
        .parse()
        .map_err(|_| CorpusError::Parse {
            offset: doc_offset,
            message: format!("wpid {:?} is not a non-negative integer", attr(&attrs, "wpid").unwrap_or_default()),
        })?;
    let language = LangCode::new(require_attr(&attrs, "language", doc_offset)?.trim())
        .map_err(|e| CorpusError::Parse {
            offset: doc_offset,
            message: e.to_string(),
        })?;
    let topic = match attr(&attrs, "topic") {
        Some(raw) => {
            let topic = raw.trim().to_string();
            if !is_valid_topic(&topic) {
                return parse_err(doc_offset, format!("topic {topic:?} is not one of C1..C9"));
            }
            Some(topic)
        }
        None => None,
    };
    let gender_raw = require_attr(&attrs, "gender", doc_offset)?.trim();
    let gender = GenderLabel::parse(gender_raw).ok_or_else(|| CorpusError::Parse {
        offset: doc_offset,
        message: format!("gender {gender_raw:?} is not Female/Male/Unknown"),
    })?;

    let mut title: Option<String> = None;
    let mut segments: Vec<Segment> = Vec::new();
    loop {
        let offset = scanner.offset();
        match next(scanner)? {
            XmlEvent::Eof => {
                return parse_err(offset, format!("document {docid:?} is not closed"));
            }
            XmlEvent::Text(text) if text.trim().is_empty() => continue,
            XmlEvent::Text(text) => {
                return parse_err(offset, format!("stray text inside doc: {:?}", snippet(&text)));
            }
            XmlEvent::EndTag { name } if name == "doc" => break,
            XmlEvent::StartTag { name, self_closing, .. } if name == "title" => {
                if self_closing {
                    return parse_err(offset, "empty title element".into());
                }
                title = Some(read_element_text(scanner, "title")?.trim().to_string());
            }
            XmlEvent::StartTag { name, attrs, self_closing } if name == "seg" => {
                let id: u32 = require_attr(&attrs, "id", offset)?
                    .trim()
                    .parse()
                    .map_err(|_| CorpusError::Parse {
                        offset,
                        message: format!(
                            "seg id {:?} is not a positive integer",
                            attr(&attrs, "id").unwrap_or_default()
                        ),
                    })?;
                let text = if self_closing {
                    String::new()
                } else {
                    read_element_text(scanner, "seg")?
                };
                segments.push(Segment { id, text });
            }
            XmlEvent::StartTag { name, .. } => {
                return parse_err(offset, format!("unexpected element <{name}> inside doc"));
            }
            XmlEvent::EndTag { name } => {
                return parse_err(offset, format!("unexpected end tag </{name}> inside doc"));
            }
        }
    }
    let title = title.ok_or_else(|| CorpusError::Parse {
        offset: doc_offset,
        message: format!("document {docid:?} has no title element"),
    })?;
    let record = DocumentRecord {
        docid,
        wpid,
        language,
        topic,
        gender,
        title,
        segments,
    };
    record.validate()?;
    Ok(record)
}

/// Collects text until the matching end tag (CDATA and character data mix).
fn read_element_text<R: BufRead>(
    scanner: &mut XmlScanner<R>,
    element: &str,
) -> Result<String, CorpusError> {
    let mut text = String::new();
    loop {
        let offset = scanner.offset();
        match next(scanner)? {
            XmlEvent::Text(part) => text.push_str(&part),
            XmlEvent::EndTag { name } if name == element => return Ok(text),
            XmlEvent::Eof => {
                return parse_err(offset, format!("<{element}> is not closed"));
            }
            other => {
                return parse_err(offset, format!("unexpected markup inside <{element}>: {other:?}"));
            }
        }
    }
}
