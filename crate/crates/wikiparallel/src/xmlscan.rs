//! Minimal streaming XML pull scanner.
//!
//! Reads one event at a time from a `BufRead`, never buffering more than the
//! current event, so memory stays bounded by the largest single element text.
//! Supports exactly what MediaWiki export files and the document-level corpus
//! format need: start/end/self-closing tags with quoted attributes, character
//! data with the predefined and numeric entities, comments, CDATA sections,
//! processing instructions and DOCTYPE declarations (both skipped).

use std::io::BufRead;

use memchr::memchr;

#[derive(Debug, Clone, PartialEq)]
pub enum XmlEvent {
    StartTag {
        name: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    },
    EndTag {
        name: String,
    },
    Text(String),
    Eof,
}

#[derive(Debug, thiserror::Error)]
#[error("malformed XML at byte {offset}: {message}")]
pub struct XmlError {
    pub offset: u64,
    pub message: String,
}

pub struct XmlScanner<R: BufRead> {
    reader: R,
    offset: u64,
    started: bool,
}

impl<R: BufRead> XmlScanner<R> {
    pub fn new(reader: R) -> Self {
        XmlScanner {
            reader,
            offset: 0,
            started: false,
        }
    }

    /// Bytes consumed from the underlying reader so far.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, XmlError> {
        Err(XmlError {
            offset: self.offset,
            message: message.into(),
        })
    }

    fn fill(&mut self) -> Result<&[u8], XmlError> {
        match self.reader.fill_buf() {
            Ok(buf) => Ok(buf),
            Err(e) => Err(XmlError {
                offset: self.offset,
                message: format!("read error: {e}"),
            }),
        }
    }

    fn consume(&mut self, n: usize) {
        self.reader.consume(n);
        self.offset += n as u64;
    }

    fn next_byte(&mut self) -> Result<Option<u8>, XmlError> {
        let buf = self.fill()?;
        if buf.is_empty() {
            return Ok(None);
        }
        let b = buf[0];
        self.consume(1);
        Ok(Some(b))
    }

    fn peek_byte(&mut self) -> Result<Option<u8>, XmlError> {
        let buf = self.fill()?;
        Ok(buf.first().copied())
    }

    /// Reads until `needle` is consumed; returns bytes before it.
    fn read_until_seq(&mut self, needle: &[u8]) -> Result<Vec<u8>, XmlError> {
        let mut out = Vec::new();
        loop {
            if out.len() >= needle.len() {
                if let Some(pos) = find_seq(&out, needle) {
                    out.truncate(pos);
                    return Ok(out);
                }
            }
            match self.next_byte()? {
                Some(b) => {
                    out.push(b);
                    if out.ends_with(needle) {
                        out.truncate(out.len() - needle.len());
                        return Ok(out);
                    }
                }
                None => return self.err("unexpected end of input inside markup"),
            }
        }
    }

    pub fn next_event(&mut self) -> Result<XmlEvent, XmlError> {
        if !self.started {
            self.started = true;
            // UTF-8 BOM
            let buf = self.fill()?;
            if buf.starts_with(&[0xEF, 0xBB, 0xBF]) {
                self.consume(3);
            }
        }
        // Character data up to the next '<'.
        let mut raw: Vec<u8> = Vec::new();
        loop {
            let buf = self.fill()?;
            if buf.is_empty() {
                if raw.is_empty() {
                    return Ok(XmlEvent::Eof);
                }
                let text = self.decode_text(&raw)?;
                return Ok(XmlEvent::Text(text));
            }
            match memchr(b'<', buf) {
                Some(0) if raw.is_empty() => break,
                Some(pos) => {
                    raw.extend_from_slice(&buf[..pos]);
                    self.consume(pos);
                    let text = self.decode_text(&raw)?;
                    return Ok(XmlEvent::Text(text));
                }
                None => {
                    let len = buf.len();
                    raw.extend_from_slice(buf);
                    self.consume(len);
                }
            }
        }
        // At a '<'.
        self.consume(1);
        match self.peek_byte()? {
            None => self.err("unexpected end of input after '<'"),
            Some(b'!') => {
                self.consume(1);
                self.scan_bang()
            }
            Some(b'?') => {
                self.consume(1);
                self.read_until_seq(b"?>")?;
                self.next_event()
            }
            Some(b'/') => {
                self.consume(1);
                let inner = self.read_until_seq(b">")?;
                let name = std::str::from_utf8(&inner)
                    .map_err(|_| XmlError {
                        offset: self.offset,
                        message: "end tag name is not UTF-8".into(),
                    })?
                    .trim()
                    .to_string();
                if name.is_empty() {
                    return self.err("empty end tag");
                }
                Ok(XmlEvent::EndTag { name })
            }
            Some(_) => self.scan_start_tag(),
        }
    }

    /// `<!` already consumed: comment, CDATA or DOCTYPE.
    fn scan_bang(&mut self) -> Result<XmlEvent, XmlError> {
        let buf = self.fill()?;
        if buf.starts_with(b"--") {
            self.consume(2);
            self.read_until_seq(b"-->")?;
            return self.next_event();
        }
        if buf.starts_with(b"[CDATA[") {
            self.consume(7);
            let raw = self.read_until_seq(b"]]>")?;
            let text = String::from_utf8(raw).map_err(|_| XmlError {
                offset: self.offset,
                message: "CDATA section is not UTF-8".into(),
            })?;
            return Ok(XmlEvent::Text(text));
        }
        // DOCTYPE or other declaration: skip to '>', honoring [ ... ] subsets.
        let mut depth = 0usize;
        loop {
            match self.next_byte()? {
                Some(b'[') => depth += 1,
                Some(b']') => depth = depth.saturating_sub(1),
                Some(b'>') if depth == 0 => return self.next_event(),
                Some(_) => {}
                None => return self.err("unexpected end of input in declaration"),
            }
        }
    }

    fn scan_start_tag(&mut self) -> Result<XmlEvent, XmlError> {
        let name = self.scan_name()?;
        if name.is_empty() {
            return self.err("empty tag name");
        }
        let mut attrs = Vec::new();
        loop {
            self.skip_whitespace()?;
            match self.peek_byte()? {
                None => return self.err("unexpected end of input inside tag"),
                Some(b'>') => {
                    self.consume(1);
                    return Ok(XmlEvent::StartTag {
                        name,
                        attrs,
                        self_closing: false,
                    });
                }
                Some(b'/') => {
                    self.consume(1);
                    match self.next_byte()? {
                        Some(b'>') => {
                            return Ok(XmlEvent::StartTag {
                                name,
                                attrs,
                                self_closing: true,
                            })
                        }
                        _ => return self.err("expected '>' after '/'"),
                    }
                }
                Some(_) => {
                    let attr_name = self.scan_name()?;
                    if attr_name.is_empty() {
                        return self.err("expected attribute name");
                    }
                    self.skip_whitespace()?;
                    match self.next_byte()? {
                        Some(b'=') => {}
                        _ => return self.err(format!("attribute {attr_name:?} missing '='")),
                    }
                    self.skip_whitespace()?;
                    let quote = match self.next_byte()? {
                        Some(q @ (b'"' | b'\'')) => q,
                        _ => return self.err(format!("attribute {attr_name:?} value not quoted")),
                    };
                    let raw = self.read_until_byte(quote)?;
                    let value = self.decode_attr(&raw)?;
                    attrs.push((attr_name, value));
                }
            }
        }
    }

    fn read_until_byte(&mut self, stop: u8) -> Result<Vec<u8>, XmlError> {
        let mut out = Vec::new();
        loop {
            let buf = self.fill()?;
            if buf.is_empty() {
                return self.err("unexpected end of input inside attribute value");
            }
            match memchr(stop, buf) {
                Some(pos) => {
                    out.extend_from_slice(&buf[..pos]);
                    self.consume(pos + 1);
                    return Ok(out);
                }
                None => {
                    let len = buf.len();
                    out.extend_from_slice(buf);
                    self.consume(len);
                }
            }
        }
    }

    fn scan_name(&mut self) -> Result<String, XmlError> {
        let mut out = Vec::new();
        loop {
            match self.peek_byte()? {
                Some(b)
                    if !b.is_ascii_whitespace() && !matches!(b, b'>' | b'/' | b'=' | b'<') =>
                {
                    out.push(b);
                    self.consume(1);
                }
                _ => break,
            }
        }
        String::from_utf8(out).map_err(|_| XmlError {
            offset: self.offset,
            message: "tag or attribute name is not UTF-8".into(),
        })
    }

    fn skip_whitespace(&mut self) -> Result<(), XmlError> {
        while let Some(b) = self.peek_byte()? {
            if b.is_ascii_whitespace() {
                self.consume(1);
            } else {
                break;
            }
        }
        Ok(())
    }

    fn decode_text(&self, raw: &[u8]) -> Result<String, XmlError> {
        let s = std::str::from_utf8(raw).map_err(|_| XmlError {
            offset: self.offset,
            message: "character data is not UTF-8".into(),
        })?;
        if !s.contains('&') {
            return Ok(s.to_string());
        }
        unescape(s, false).map_err(|message| XmlError {
            offset: self.offset,
            message,
        })
    }

    fn decode_attr(&self, raw: &[u8]) -> Result<String, XmlError> {
        let s = std::str::from_utf8(raw).map_err(|_| XmlError {
            offset: self.offset,
            message: "attribute value is not UTF-8".into(),
        })?;
        unescape(s, true).map_err(|message| XmlError {
            offset: self.offset,
            message,
        })
    }
}

fn find_seq(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    haystack
        .windows(needle.len())
        .position(|w| w == needle)
}

/// Expands the five predefined entities and numeric character references.
/// In attribute mode, literal tab/newline/CR normalize to spaces (character
/// references do not, which is what keeps escaped whitespace round-trippable).
fn unescape(s: &str, attr: bool) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find('&') {
        let head = &rest[..pos];
        if attr {
            push_attr_normalized(&mut out, head);
        } else {
            out.push_str(head);
        }
        rest = &rest[pos + 1..];
        let end = rest
            .char_indices()
            .take(32)
            .find(|(_, c)| *c == ';')
            .map(|(i, _)| i)
            .ok_or_else(|| "unterminated entity reference".to_string())?;
        let entity = &rest[..end];
        rest = &rest[end + 1..];
        match entity {
            "amp" => out.push('&'),
            "lt" => out.push('<'),
            "gt" => out.push('>'),
            "quot" => out.push('"'),
            "apos" => out.push('\''),
            _ if entity.starts_with("#x") || entity.starts_with("#X") => {
                let code = u32::from_str_radix(&entity[2..], 16)
                    .map_err(|_| format!("bad character reference &{entity};"))?;
                out.push(
                    char::from_u32(code)
                        .ok_or_else(|| format!("bad character reference &{entity};"))?,
                );
            }
            _ if entity.starts_with('#') => {
                let code: u32 = entity[1..]
                    .parse()
                    .map_err(|_| format!("bad character reference &{entity};"))?;
                out.push(
                    char::from_u32(code)
                        .ok_or_else(|| format!("bad character reference &{entity};"))?,
                );
            }
            _ => return Err(format!("unknown entity &{entity};")),
        }
    }
    if attr {
        push_attr_normalized(&mut out, rest);
    } else {
        out.push_str(rest);
    }
    Ok(out)
}

fn push_attr_normalized(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '\t' | '\n' | '\r' => out.push(' '),
            other => out.push(other),
        }
    }
}
