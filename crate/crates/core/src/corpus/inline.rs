use std::collections::HashSet;

use thiserror::Error;

use super::schema::{is_label, split_label};
use super::tokenize::{assemble, for_each_chunk, sentence_breaks, split_chunk, RawToken};
use super::{AnnotatedSpan, Corpus, Document, TagSchema};

/// Inline-format errors. Offsets are character offsets into the parsed text.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("tag `{tag}` at offset {offset} is never closed or was never opened")]
    UnbalancedTag { tag: String, offset: usize },
    #[error("label `{label}` at offset {offset} is not declared in the schema")]
    UnknownLabel { label: String, offset: usize },
    #[error("tag `{tag}` at offset {offset} opens inside another tag")]
    NestedTag { tag: String, offset: usize },
    #[error("tag `{tag}` at offset {offset} encloses no token")]
    EmptyTag { tag: String, offset: usize },
    #[error("line {line}: text before the first `#doc` header")]
    MissingDocHeader { line: usize },
    #[error("line {line}: `#doc` header without a document id")]
    EmptyDocId { line: usize },
    #[error("line {line}: duplicate document id `{doc_id}`")]
    DuplicateDocId { doc_id: String, line: usize },
}

impl ParseError {
    fn shifted(self, by: usize) -> Self {
        match self {
            ParseError::UnbalancedTag { tag, offset } => ParseError::UnbalancedTag { tag, offset: offset + by },
            ParseError::UnknownLabel { label, offset } => ParseError::UnknownLabel { label, offset: offset + by },
            ParseError::NestedTag { tag, offset } => ParseError::NestedTag { tag, offset: offset + by },
            ParseError::EmptyTag { tag, offset } => ParseError::EmptyTag { tag, offset: offset + by },
            other => other,
        }
    }
}

enum Tag<'a> {
    Open(&'a str),
    Close(&'a str),
}

fn as_tag(chunk: &str) -> Option<Tag<'_>> {
    let inner = chunk.strip_prefix('<')?.strip_suffix('>')?;
    let (closing, label) = match inner.strip_prefix('/') {
        Some(rest) => (true, rest),
        None => (false, inner),
    };
    let (main, sub) = split_label(label);
    let well_formed = is_label(main) && sub.is_none_or(is_label);
    if !well_formed {
        return None;
    }
    Some(if closing { Tag::Close(label) } else { Tag::Open(label) })
}

/// Parses the body of one document (no `#doc` header) in the inline format.
///
/// Untagged text is tokenized exactly as [`super::tokenize`] does; a
/// sentence boundary is never placed inside an open tag.
///
/// ```
/// use metonymy::corpus::{parse_inline, TagSchema};
///
/// let schema = TagSchema::builtin();
/// let doc = parse_inline("d1", "<gsp.loc> France </gsp.loc> est belle .", &schema).unwrap();
/// let span = &doc.sentences[0].spans[0];
/// assert_eq!(span.label(), "gsp.loc");
/// assert_eq!((span.first_token, span.last_token), (0, 0));
/// ```
pub fn parse_inline(doc_id: &str, raw: &str, schema: &TagSchema) -> Result<Document, ParseError> {
    let mut tokens: Vec<RawToken> = Vec::new();
    // (global first token, global last token, label)
    let mut spans: Vec<(usize, usize, String)> = Vec::new();
    let mut open: Option<(String, usize, usize)> = None;
    let mut pending_space = false;
    let mut pending_newline = false;
    let mut error: Option<ParseError> = None;

    for_each_chunk(raw, |chunk, offset, space, newline| {
        if error.is_some() {
            return;
        }
        let space = space || pending_space;
        let newline = newline || pending_newline;
        match as_tag(chunk) {
            Some(Tag::Open(label)) => {
                pending_space = space;
                pending_newline = newline;
                if open.is_some() {
                    error = Some(ParseError::NestedTag { tag: chunk.to_string(), offset });
                    return;
                }
                let (main, sub) = split_label(label);
                if !schema.accepts(main, sub) {
                    error = Some(ParseError::UnknownLabel { label: label.to_string(), offset });
                    return;
                }
                open = Some((label.to_string(), tokens.len(), offset));
            }
            Some(Tag::Close(label)) => {
                pending_space = space;
                pending_newline = newline;
                match open.take() {
                    Some((open_label, first, open_offset)) if open_label == label => {
                        if tokens.len() == first {
                            error = Some(ParseError::EmptyTag {
                                tag: format!("<{open_label}>"),
                                offset: open_offset,
                            });
                            return;
                        }
                        spans.push((first, tokens.len() - 1, open_label));
                    }
                    _ => {
                        error = Some(ParseError::UnbalancedTag { tag: chunk.to_string(), offset });
                    }
                }
            }
            None => {
                pending_space = false;
                pending_newline = false;
                split_chunk(chunk, offset, space, newline, &mut tokens);
            }
        }
    });
    if let Some(err) = error {
        return Err(err);
    }
    if let Some((label, _, offset)) = open {
        return Err(ParseError::UnbalancedTag { tag: format!("<{label}>"), offset });
    }

    let breaks: Vec<usize> = sentence_breaks(&tokens)
        .into_iter()
        .filter(|&b| !spans.iter().any(|&(first, last, _)| first <= b && b < last))
        .collect();
    // sentence start offsets, to make span indices sentence-local
    let mut starts = vec![0];
    starts.extend(breaks.iter().map(|b| b + 1));
    let mut sentences = assemble(tokens, &breaks);
    for (first, last, label) in spans {
        let idx = starts.partition_point(|&s| s <= first) - 1;
        let base = starts[idx];
        let (main, sub) = split_label(&label);
        sentences[idx]
            .spans
            .push(AnnotatedSpan::new(first - base, last - base, main, sub));
    }
    Ok(Document::new(doc_id, sentences))
}

/// Serializes a document: one sentence per line, tokens joined by single
/// spaces, tags re-inserted around their tokens.
pub fn serialize_inline(doc: &Document) -> String {
    let mut lines = Vec::with_capacity(doc.sentences.len());
    for sentence in &doc.sentences {
        let mut spans: Vec<&AnnotatedSpan> = sentence.spans.iter().collect();
        spans.sort();
        let mut parts: Vec<String> = Vec::with_capacity(sentence.tokens.len() + 2 * spans.len());
        let mut next_span = spans.iter().peekable();
        let mut open: Option<&AnnotatedSpan> = None;
        for (i, token) in sentence.tokens.iter().enumerate() {
            if let Some(span) = next_span.next_if(|s| s.first_token == i) {
                parts.push(format!("<{}>", span.label()));
                open = Some(span);
            }
            parts.push(token.surface.clone());
            if let Some(span) = open.filter(|s| s.last_token == i) {
                parts.push(format!("</{}>", span.label()));
                open = None;
            }
        }
        lines.push(parts.join(" "));
    }
    lines.join("\n")
}

/// Parses a corpus file: documents introduced by `#doc <doc_id> [<uri>]`
/// lines. Blank lines and lines starting with `##` are ignored.
pub fn parse_corpus(text: &str, schema: &TagSchema) -> Result<Corpus, ParseError> {
    struct Pending {
        doc_id: String,
        uri: Option<String>,
        body: String,
        body_offset: usize,
    }
    fn finish(p: Pending, schema: &TagSchema) -> Result<Document, ParseError> {
        let mut doc = parse_inline(&p.doc_id, &p.body, schema).map_err(|e| e.shifted(p.body_offset))?;
        doc.source_uri = p.uri;
        Ok(doc)
    }

    let mut documents = Vec::new();
    let mut seen = HashSet::new();
    let mut pending: Option<Pending> = None;
    let mut offset = 0;
    for (idx, line) in text.split('\n').enumerate() {
        let line_len = line.chars().count() + 1;
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("#doc") {
            if !(rest.is_empty() || rest.starts_with(char::is_whitespace)) {
                return Err(ParseError::MissingDocHeader { line: idx + 1 });
            }
            if let Some(p) = pending.take() {
                documents.push(finish(p, schema)?);
            }
            let mut fields = rest.split_whitespace();
            let doc_id = fields.next().ok_or(ParseError::EmptyDocId { line: idx + 1 })?;
            if !seen.insert(doc_id.to_string()) {
                return Err(ParseError::DuplicateDocId { doc_id: doc_id.to_string(), line: idx + 1 });
            }
            pending = Some(Pending {
                doc_id: doc_id.to_string(),
                uri: fields.next().map(str::to_string),
                body: String::new(),
                body_offset: offset + line_len,
            });
        } else if trimmed.starts_with("##") || trimmed.is_empty() {
            if let Some(p) = pending.as_mut() {
                // keep offsets aligned while still acting as a line break
                p.body.push_str(&" ".repeat(line_len - 1));
                p.body.push('\n');
            }
        } else {
            match pending.as_mut() {
                Some(p) => {
                    p.body.push_str(line);
                    p.body.push('\n');
                }
                None => return Err(ParseError::MissingDocHeader { line: idx + 1 }),
            }
        }
        offset += line_len;
    }
    if let Some(p) = pending {
        documents.push(finish(p, schema)?);
    }
    Ok(Corpus::new(documents, schema.clone()))
}

/// Serializes a corpus in the format read by [`parse_corpus`].
pub fn serialize_corpus(corpus: &Corpus) -> String {
    let mut out = String::new();
    for doc in &corpus.documents {
        out.push_str("#doc ");
        out.push_str(&doc.doc_id);
        if let Some(uri) = &doc.source_uri {
            out.push(' ');
            out.push_str(uri);
        }
        out.push('\n');
        let body = serialize_inline(doc);
        if !body.is_empty() {
            out.push_str(&body);
            out.push('\n');
        }
    }
    out
}
