use std::collections::HashSet;
use std::fmt;

use super::{AnnotatedSpan, Corpus, Document, TagSchema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    EmptyDocId,
    DuplicateDocId,
    BadTokenOffsets,
    UnorderedTokens,
    BadTokenIndex,
    InvertedSpan,
    SpanOutOfRange,
    OverlappingSpans,
    UnknownMainType,
    UnknownSubtype,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One broken invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub doc_id: String,
    pub sentence: Option<usize>,
    pub span: Option<AnnotatedSpan>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.doc_id, self.kind)?;
        if let Some(s) = self.sentence {
            write!(f, " in sentence {s}")?;
        }
        if let Some(span) = &self.span {
            write!(f, " at {span}")?;
        }
        Ok(())
    }
}

/// Checks every token, span and schema invariant of `doc`. An empty result
/// means the document is well formed.
pub fn validate_document(doc: &Document, schema: &TagSchema) -> Vec<Violation> {
    let mut out = Vec::new();
    let violation = |kind, sentence: Option<usize>, span: Option<&AnnotatedSpan>| Violation {
        kind,
        doc_id: doc.doc_id.clone(),
        sentence,
        span: span.cloned(),
    };
    if doc.doc_id.trim().is_empty() {
        out.push(violation(ViolationKind::EmptyDocId, None, None));
    }
    for (si, sentence) in doc.sentences.iter().enumerate() {
        for (ti, token) in sentence.tokens.iter().enumerate() {
            if token.char_start >= token.char_end {
                out.push(violation(ViolationKind::BadTokenOffsets, Some(si), None));
            }
            if token.sent_index != ti {
                out.push(violation(ViolationKind::BadTokenIndex, Some(si), None));
            }
            if ti > 0 && sentence.tokens[ti - 1].char_end > token.char_start {
                out.push(violation(ViolationKind::UnorderedTokens, Some(si), None));
            }
        }
        let n = sentence.tokens.len();
        let mut in_range: Vec<&AnnotatedSpan> = Vec::new();
        for span in &sentence.spans {
            if span.first_token > span.last_token {
                out.push(violation(ViolationKind::InvertedSpan, Some(si), Some(span)));
                continue;
            }
            if span.last_token >= n {
                out.push(violation(ViolationKind::SpanOutOfRange, Some(si), Some(span)));
                continue;
            }
            if !schema.has_main(&span.main_type) {
                out.push(violation(ViolationKind::UnknownMainType, Some(si), Some(span)));
            } else if let Some(sub) = &span.sub_type {
                if !schema.has_subtype(&span.main_type, sub) {
                    out.push(violation(ViolationKind::UnknownSubtype, Some(si), Some(span)));
                }
            }
            in_range.push(span);
        }
        in_range.sort();
        let mut reach: Option<usize> = None;
        for span in in_range {
            if reach.is_some_and(|r| span.first_token <= r) {
                out.push(violation(ViolationKind::OverlappingSpans, Some(si), Some(span)));
            }
            reach = Some(reach.map_or(span.last_token, |r| r.max(span.last_token)));
        }
    }
    out
}

/// Validates every document and checks doc-id uniqueness across the corpus.
pub fn validate_corpus(corpus: &Corpus) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for doc in &corpus.documents {
        if !seen.insert(doc.doc_id.as_str()) {
            out.push(Violation {
                kind: ViolationKind::DuplicateDocId,
                doc_id: doc.doc_id.clone(),
                sentence: None,
                span: None,
            });
        }
        out.extend(validate_document(doc, &corpus.schema));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_inline;

    fn doc(text: &str) -> Document {
        parse_inline("d", text, &TagSchema::builtin()).unwrap()
    }

    #[test]
    fn well_formed_is_clean() {
        let d = doc("<gsp.loc> France </gsp.loc> est belle .");
        assert!(validate_document(&d, &TagSchema::builtin()).is_empty());
    }

    #[test]
    fn undeclared_subtype() {
        let mut d = doc("<pers> Paul </pers> parle .");
        d.sentences[0].spans[0].sub_type = Some("org".into());
        let v = validate_document(&d, &TagSchema::builtin());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::UnknownSubtype);
        assert_eq!(v[0].sentence, Some(0));
        assert_eq!(v[0].doc_id, "d");
    }

    #[test]
    fn overlapping_spans() {
        let mut d = doc("<pers> Paul Dupont </pers> parle .");
        d.sentences[0].spans.push(AnnotatedSpan::new(1, 2, "org", None));
        let v = validate_document(&d, &TagSchema::builtin());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::OverlappingSpans);
    }

    #[test]
    fn range_and_order_errors() {
        let mut d = doc("Paul parle .");
        d.sentences[0].spans.push(AnnotatedSpan::new(2, 1, "pers", None));
        d.sentences[0].spans.push(AnnotatedSpan::new(1, 7, "pers", None));
        d.sentences[0].spans.push(AnnotatedSpan::new(0, 0, "nope", None));
        d.sentences[0].tokens[1].char_start = 0;
        let kinds: Vec<_> = validate_document(&d, &TagSchema::builtin()).into_iter().map(|v| v.kind).collect();
        assert_eq!(
            kinds,
            [
                ViolationKind::UnorderedTokens,
                ViolationKind::InvertedSpan,
                ViolationKind::SpanOutOfRange,
                ViolationKind::UnknownMainType
            ]
        );
    }

    #[test]
    fn duplicate_ids_in_corpus() {
        let corpus = Corpus::new(vec![doc("a ."), doc("b .")], TagSchema::builtin());
        let v = validate_corpus(&corpus);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::DuplicateDocId);
    }
}
