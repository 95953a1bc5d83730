//! Train-and-tag glue over the lower modules.

use thiserror::Error;

use crate::chunker::ChunkPattern;
use crate::corpus::{Corpus, Document};
use crate::features::{ContextWindow, FeatureError, FeatureExtractor};
use crate::induction::{induce_rules, InductionError, InductionParams, RuleBook};
use crate::lexicon::LexiconSet;
use crate::tagger::{EntityBundle, TagError, Tagger};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Induction(#[from] InductionError),
    #[error(transparent)]
    Tag(#[from] TagError),
}

/// Extracts training vectors from `corpus` and induces a rule book.
///
/// ```
/// use metonymy::chunker::default_patterns;
/// use metonymy::corpus::TagSchema;
/// use metonymy::features::ContextWindow;
/// use metonymy::induction::InductionParams;
/// use metonymy::lexicon::LexiconSet;
/// use metonymy::pipeline::train;
/// use metonymy::synth::{generate, GeneratorSpec, TemplateSet};
///
/// let schema = TagSchema::builtin();
/// let spec = GeneratorSpec { seed: 1, n_sentences: 400, ..Default::default() };
/// let corpus = generate(&spec, &TemplateSet::builtin(), &schema).unwrap();
/// let lex = LexiconSet::builtin();
/// let book = train(&corpus, &lex, &default_patterns(), ContextWindow::default(), InductionParams::default()).unwrap();
/// assert!(book.get("gsp").unwrap().targets().contains("org"));
/// ```
pub fn train(
    corpus: &Corpus,
    lex: &LexiconSet,
    patterns: &[ChunkPattern],
    window: ContextWindow,
    params: InductionParams,
) -> Result<RuleBook, PipelineError> {
    let vectors = FeatureExtractor::new(lex, patterns, window).extract_corpus(corpus)?;
    let sets = induce_rules(&vectors, &corpus.schema, params)?;
    Ok(RuleBook::new(params, sets))
}

/// How [`tag_corpus`] finds entities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanSource {
    /// Run entity recognition on the tokens.
    Recognize,
    /// Keep the input spans and main types, resolve subtypes only.
    Keep,
}

/// Tags one document.
pub fn tag_one(tagger: &Tagger<'_>, doc: &Document, source: SpanSource) -> Result<(Document, Vec<EntityBundle>), PipelineError> {
    Ok(match source {
        SpanSource::Recognize => tagger.tag_document(doc)?,
        SpanSource::Keep => tagger.resolve_document(doc)?,
    })
}

/// Tags every document of `corpus` in order.
pub fn tag_corpus(tagger: &Tagger<'_>, corpus: &Corpus, source: SpanSource) -> Result<Corpus, PipelineError> {
    let docs = corpus
        .documents
        .iter()
        .map(|d| tag_one(tagger, d, source).map(|(d, _)| d))
        .collect::<Result<_, _>>()?;
    Ok(Corpus::new(docs, tagger.schema.clone()))
}
