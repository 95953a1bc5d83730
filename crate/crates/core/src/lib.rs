//! Named-entity tagging with metonymic sub-readings.
//!
//! Entities are first recognised with a gazetteer and trigger words. Each
//! entity whose category has sub-readings (a country used as a place, as its
//! people or as its government) is then resolved by rules induced from an
//! annotated corpus: context features that are abnormally frequent for a
//! reading, measured by a hypergeometric tail probability, are combined into
//! conjunctions and selected by a greedy cover.

// Doc comments show tab-separated file formats verbatim.
#![allow(clippy::tabs_in_doc_comments)]

pub mod chunker;
pub mod corpus;
pub mod eval;
pub mod features;
pub mod induction;
pub mod lexicon;
pub mod pipeline;
pub mod resources;
pub mod synth;
pub mod tagger;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    pub mod corpus {}
    #[doc = include_str!("../../../book/src/lexicon.md")]
    pub mod lexicon {}
    #[doc = include_str!("../../../book/src/chunking.md")]
    pub mod chunking {}
    #[doc = include_str!("../../../book/src/features.md")]
    pub mod features {}
    #[doc = include_str!("../../../book/src/induction.md")]
    pub mod induction {}
    #[doc = include_str!("../../../book/src/tagging.md")]
    pub mod tagging {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    pub mod evaluation {}
    #[doc = include_str!("../../../book/src/synthetic.md")]
    pub mod synthetic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
