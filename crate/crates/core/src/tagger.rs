//! End-to-end tagging: entity recognition, subtype resolution and
//! focalisation bundles.
//!
//! Recognition is deliberately plain. Gazetteer names become spans of their
//! category, and a title trigger followed by one to three proper nouns
//! becomes a `pers` span. Each span whose main type has subtypes is then
//! resolved by the first rule whose conjunction is active in its window;
//! when none fires the schema default applies. The main type is never
//! changed, only the focalisation.

use std::fmt;

use thiserror::Error;

use crate::chunker::ChunkPattern;
use crate::corpus::{AnnotatedSpan, Document, TagSchema};
use crate::features::{ContextWindow, FeatureError, FeatureExtractor};
use crate::induction::{Rule, RuleBook};
use crate::lexicon::{LexiconSet, Pos, TriggerRole};

/// Most proper nouns taken after a title trigger.
pub const MAX_TITLE_NAME: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TagError {
    #[error("main type `{0}` has no subtypes in the schema")]
    NoSubtypeSchema(String),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// A tagged entity: its surface, type and focalisation.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityBundle {
    pub lexical_unit: String,
    pub sem_type: String,
    pub focalisation: String,
    pub sentence: usize,
    pub span: AnnotatedSpan,
    pub fired_rule: Option<Rule>,
}

impl fmt::Display for EntityBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Entity{{ Lexical_unit={}; Sem{{ Type={}; Focalisation={}; }} }}",
            self.lexical_unit, self.sem_type, self.focalisation
        )
    }
}

/// Entity spans found by the gazetteer and by title triggers. Existing spans
/// of `doc` are ignored.
///
/// ```
/// use metonymy::corpus::{parse_inline, TagSchema};
/// use metonymy::lexicon::LexiconSet;
/// use metonymy::tagger::recognize_entities;
///
/// let doc = parse_inline("d", "Monsieur Dupont parle de la France .", &TagSchema::builtin()).unwrap();
/// let found = recognize_entities(&doc, &LexiconSet::builtin());
/// let labels: Vec<_> = found.spans().map(|(_, s)| s.to_string()).collect();
/// assert_eq!(labels, ["pers[1..1]", "gsp[5..5]"]);
/// ```
pub fn recognize_entities(doc: &Document, lex: &LexiconSet) -> Document {
    let mut out = doc.without_spans();
    for sentence in &mut out.sentences {
        let matches = lex.match_gazetteer(sentence);
        let mut covered = vec![false; sentence.tokens.len()];
        let mut spans = Vec::new();
        for m in matches.iter().filter(|m| !m.is_trigger()) {
            covered[m.first_token..=m.last_token].fill(true);
            spans.push(AnnotatedSpan::new(m.first_token, m.last_token, &m.category, None));
        }
        for m in matches.iter().filter(|m| m.trigger_role == Some(TriggerRole::Title)) {
            let start = m.last_token + 1;
            let end = (start..sentence.tokens.len())
                .take(MAX_TITLE_NAME)
                .take_while(|&i| !covered[i] && lex.chunk_pos(&sentence.tokens[i].surface) == Pos::Propn)
                .last();
            if let Some(end) = end {
                covered[start..=end].fill(true);
                spans.push(AnnotatedSpan::new(start, end, &m.category, None));
            }
        }
        spans.sort();
        sentence.spans = spans;
    }
    out
}

/// Recognition followed by the default subtype everywhere; never reads rules.
pub fn baseline_tag(doc: &Document, lex: &LexiconSet, schema: &TagSchema) -> Document {
    let mut out = recognize_entities(doc, lex);
    retain_schema_types(&mut out, schema);
    for sentence in &mut out.sentences {
        for span in &mut sentence.spans {
            span.sub_type = schema.default_subtype(&span.main_type).map(str::to_string);
        }
    }
    out
}

/// The default subtype for every span that has one, on the existing spans.
pub fn baseline_subtypes(doc: &Document, schema: &TagSchema) -> Document {
    let mut out = doc.clone();
    for sentence in &mut out.sentences {
        for span in &mut sentence.spans {
            span.sub_type = schema.default_subtype(&span.main_type).map(str::to_string);
        }
    }
    out
}

fn retain_schema_types(doc: &mut Document, schema: &TagSchema) {
    for sentence in &mut doc.sentences {
        sentence.spans.retain(|s| schema.has_main(&s.main_type));
    }
}

/// Tags documents with fixed lexicons, schema, patterns, window and rules.
#[derive(Debug, Clone, Copy)]
pub struct Tagger<'a> {
    pub lex: &'a LexiconSet,
    pub schema: &'a TagSchema,
    pub patterns: &'a [ChunkPattern],
    pub window: ContextWindow,
    pub rules: &'a RuleBook,
}

impl<'a> Tagger<'a> {
    pub fn new(
        lex: &'a LexiconSet,
        schema: &'a TagSchema,
        patterns: &'a [ChunkPattern],
        window: ContextWindow,
        rules: &'a RuleBook,
    ) -> Self {
        Self {
            lex,
            schema,
            patterns,
            window,
            rules,
        }
    }

    fn extractor(&self) -> FeatureExtractor<'a> {
        FeatureExtractor::new(self.lex, self.patterns, self.window)
    }

    /// The subtype of `span`, with the rule that chose it. Spans already
    /// present in `doc` count as co-occurring entities.
    pub fn resolve_subtype(&self, doc: &Document, sentence: usize, span: &AnnotatedSpan) -> Result<(String, Option<&'a Rule>), TagError> {
        let main = span.main_type.as_str();
        let default = self
            .schema
            .default_subtype(main)
            .ok_or_else(|| TagError::NoSubtypeSchema(main.to_string()))?;
        let vector = self.extractor().extract(doc, sentence, span)?;
        let fired = self.rules.get(main).and_then(|set| set.first_firing(&vector));
        Ok(match fired {
            Some(rule) => (rule.target.clone(), Some(rule)),
            None => (default.to_string(), None),
        })
    }

    /// Recognises entities in `doc` (ignoring its spans), then resolves them.
    pub fn tag_document(&self, doc: &Document) -> Result<(Document, Vec<EntityBundle>), TagError> {
        let mut found = recognize_entities(doc, self.lex);
        retain_schema_types(&mut found, self.schema);
        self.resolve_document(&found)
    }

    /// Keeps the boundaries and main types of `doc`'s spans and resolves
    /// their subtypes afresh.
    pub fn resolve_document(&self, doc: &Document) -> Result<(Document, Vec<EntityBundle>), TagError> {
        let mut out = doc.clone();
        for sentence in &mut out.sentences {
            for span in &mut sentence.spans {
                span.sub_type = None;
            }
        }
        let mut bundles = Vec::new();
        for si in 0..out.sentences.len() {
            for k in 0..out.sentences[si].spans.len() {
                let span = out.sentences[si].spans[k].clone();
                let (sub, rule) = if self.schema.has_subtypes(&span.main_type) {
                    let (sub, rule) = self.resolve_subtype(doc, si, &span)?;
                    (Some(sub), rule.cloned())
                } else {
                    (None, None)
                };
                let resolved = AnnotatedSpan {
                    sub_type: sub,
                    ..span
                };
                let focalisation = self
                    .schema
                    .focalisation(&resolved.main_type, resolved.sub_type.as_deref())
                    .unwrap_or(&resolved.main_type)
                    .to_string();
                bundles.push(EntityBundle {
                    lexical_unit: out.sentences[si].span_text(&resolved),
                    sem_type: resolved.main_type.clone(),
                    focalisation,
                    sentence: si,
                    span: resolved.clone(),
                    fired_rule: rule,
                });
                out.sentences[si].spans[k] = resolved;
            }
        }
        Ok((out, bundles))
    }
}
