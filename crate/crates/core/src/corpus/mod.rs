//! Corpus data model: tokens, annotated spans, sentences and documents, plus
//! the inline annotation format used by corpus files.
//!
//! A corpus file holds one or more documents, each introduced by a
//! `#doc <doc_id>` line. Entity slots are marked with whitespace-separated
//! tags carrying a main type and an optional subtype:
//!
//! ```text
//! #doc d1
//! <gsp.loc> France </gsp.loc> est belle .
//! ```

mod inline;
mod schema;
mod split;
mod tokenize;
mod validate;

pub use inline::{parse_corpus, parse_inline, serialize_corpus, serialize_inline, ParseError};
pub use schema::{split_label, MergeDecl, SchemaError, TagSchema};
pub use split::{split_corpus, SplitError};
pub(crate) use tokenize::is_split_punct;
pub use tokenize::tokenize;
pub use validate::{validate_corpus, validate_document, Violation, ViolationKind};

use std::fmt;

/// A token with its character offsets in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    /// Character (not byte) offset of the first character.
    pub char_start: usize,
    /// Exclusive character offset.
    pub char_end: usize,
    /// Position within the sentence.
    pub sent_index: usize,
}

/// A flat entity slot over an inclusive, sentence-local token range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnotatedSpan {
    pub first_token: usize,
    pub last_token: usize,
    pub main_type: String,
    pub sub_type: Option<String>,
}

impl AnnotatedSpan {
    pub fn new(first_token: usize, last_token: usize, main_type: &str, sub_type: Option<&str>) -> Self {
        Self {
            first_token,
            last_token,
            main_type: main_type.to_string(),
            sub_type: sub_type.map(str::to_string),
        }
    }

    /// Dotted label, `main` or `main.sub`.
    pub fn label(&self) -> String {
        match &self.sub_type {
            Some(sub) => format!("{}.{}", self.main_type, sub),
            None => self.main_type.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.last_token + 1 - self.first_token
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, token: usize) -> bool {
        self.first_token <= token && token <= self.last_token
    }

    pub fn overlaps(&self, other: &AnnotatedSpan) -> bool {
        self.first_token <= other.last_token && other.first_token <= self.last_token
    }
}

impl fmt::Display for AnnotatedSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}..{}]", self.label(), self.first_token, self.last_token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub spans: Vec<AnnotatedSpan>,
}

impl Sentence {
    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    /// Space-joined surfaces of the tokens covered by `span`.
    pub fn span_text(&self, span: &AnnotatedSpan) -> String {
        self.tokens[span.first_token..=span.last_token]
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub sentences: Vec<Sentence>,
    pub source_uri: Option<String>,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, sentences: Vec<Sentence>) -> Self {
        Self {
            doc_id: doc_id.into(),
            sentences,
            source_uri: None,
        }
    }

    /// Iterates `(sentence index, span)` over every slot of the document.
    pub fn spans(&self) -> impl Iterator<Item = (usize, &AnnotatedSpan)> {
        self.sentences
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.spans.iter().map(move |span| (i, span)))
    }

    pub fn span_count(&self) -> usize {
        self.sentences.iter().map(|s| s.spans.len()).sum()
    }

    /// Copy of the document with every span removed.
    pub fn without_spans(&self) -> Document {
        let mut doc = self.clone();
        for sentence in &mut doc.sentences {
            sentence.spans.clear();
        }
        doc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub schema: TagSchema,
}

impl Corpus {
    pub fn new(documents: Vec<Document>, schema: TagSchema) -> Self {
        Self { documents, schema }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn get(&self, doc_id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.doc_id == doc_id)
    }
}
