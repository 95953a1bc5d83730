//! Context features around an entity occurrence.
//!
//! Every feature is computed from the tokens inside the context window
//! (plus the span itself): gazetteer matching and chunking run on the window
//! slice, not on the whole sentence, so a token outside the window can never
//! change the result.
//!
//! Feature kinds and their canonical text (`KIND:payload`):
//!
//! | kind                 | payload                     | fires when                                         |
//! |----------------------|-----------------------------|----------------------------------------------------|
//! | `LEMMA`              | `<lemma>:<left/right>`      | a window token has that lemma (any analysis)       |
//! | `POS`                | `<pos>:<left/right>`        | a window token has that POS (any analysis)         |
//! | `CLUST`              | `<cluster>:<left/right>`    | a window lemma belongs to that cluster             |
//! | `TRIG`               | `<role>:<left/right>`       | a gazetteer trigger word matches in the window     |
//! | `VCLASS_GOV`         | `<verb class>`              | the span's NP is subject of a verb of that class   |
//! | `SUBJ_OF_HUMAN_VERB` | none                        | ... of a verb requiring a human subject            |
//! | `COOC_NE`            | `<main type>`               | another entity slot lies in the window             |
//! | `FINER_LOC_COOC`     | none                        | a smaller place name (e.g. a town) is in the window|
//! | `FEELING_NP`         | none                        | an NP headed by a `feeling` lemma is in the window |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chunker::{chunk_sentence, Chunk, ChunkKind, ChunkPattern};
use crate::corpus::{AnnotatedSpan, Corpus, Document};
use crate::lexicon::{Granularity, LexiconSet, Pos, SubjectRestriction};

/// Cluster label whose NP heads trigger `FEELING_NP`.
pub const FEELING_LABEL: &str = "feeling";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeatureError {
    #[error("span {span} in sentence {sentence} lies outside document `{doc_id}`")]
    SpanOutOfRange {
        doc_id: String,
        sentence: usize,
        span: AnnotatedSpan,
    },
    #[error("window radius must be at least 1")]
    InvalidRadius,
    #[error("malformed feature `{0}`")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureKind {
    Trig,
    Pos,
    Lemma,
    Clust,
    VclassGov,
    SubjOfHumanVerb,
    CoocNe,
    FinerLocCooc,
    FeelingNp,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 9] = [
        FeatureKind::Trig,
        FeatureKind::Pos,
        FeatureKind::Lemma,
        FeatureKind::Clust,
        FeatureKind::VclassGov,
        FeatureKind::SubjOfHumanVerb,
        FeatureKind::CoocNe,
        FeatureKind::FinerLocCooc,
        FeatureKind::FeelingNp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Trig => "TRIG",
            FeatureKind::Pos => "POS",
            FeatureKind::Lemma => "LEMMA",
            FeatureKind::Clust => "CLUST",
            FeatureKind::VclassGov => "VCLASS_GOV",
            FeatureKind::SubjOfHumanVerb => "SUBJ_OF_HUMAN_VERB",
            FeatureKind::CoocNe => "COOC_NE",
            FeatureKind::FinerLocCooc => "FINER_LOC_COOC",
            FeatureKind::FeelingNp => "FEELING_NP",
        }
    }
}

/// One feature: a kind plus a payload. Ordered by kind, then payload.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureId {
    pub kind: FeatureKind,
    pub payload: String,
}

impl FeatureId {
    pub fn new(kind: FeatureKind, payload: impl Into<String>) -> Self {
        Self {
            kind,
            payload: payload.into(),
        }
    }

    pub fn flag(kind: FeatureKind) -> Self {
        Self::new(kind, "")
    }
}

fn escape(payload: &str) -> String {
    let mut out = String::with_capacity(payload.len());
    for c in payload.chars() {
        match c {
            '%' => out.push_str("%25"),
            '&' => out.push_str("%26"),
            '\t' => out.push_str("%09"),
            '\n' => out.push_str("%0A"),
            '\r' => out.push_str("%0D"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(text: &str) -> Option<String> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(at) = rest.find('%') {
        out.push_str(&rest[..at]);
        let code = rest.get(at + 1..at + 3)?;
        out.push(match code {
            "25" => '%',
            "26" => '&',
            "09" => '\t',
            "0A" => '\n',
            "0D" => '\r',
            _ => return None,
        });
        rest = &rest[at + 3..];
    }
    out.push_str(rest);
    Some(out)
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.payload.is_empty() {
            f.write_str(self.kind.as_str())
        } else {
            write!(f, "{}:{}", self.kind.as_str(), escape(&self.payload))
        }
    }
}

impl FromStr for FeatureId {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, payload) = s.split_once(':').unwrap_or((s, ""));
        let kind = FeatureKind::ALL
            .into_iter()
            .find(|k| k.as_str() == kind)
            .ok_or_else(|| FeatureError::Malformed(s.to_string()))?;
        let payload = unescape(payload).ok_or_else(|| FeatureError::Malformed(s.to_string()))?;
        Ok(FeatureId { kind, payload })
    }
}

/// Context window around a span, in tokens on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContextWindow {
    radius: usize,
    pub sentence_bounded: bool,
}

impl ContextWindow {
    pub fn new(radius: usize, sentence_bounded: bool) -> Result<Self, FeatureError> {
        if radius == 0 {
            return Err(FeatureError::InvalidRadius);
        }
        Ok(Self {
            radius,
            sentence_bounded,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }
}

impl Default for ContextWindow {
    fn default() -> Self {
        Self {
            radius: 5,
            sentence_bounded: true,
        }
    }
}

/// The active features of one entity occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureVector {
    pub doc_id: String,
    pub sentence: usize,
    pub span: AnnotatedSpan,
    pub active: BTreeSet<FeatureId>,
    /// Subtype from the annotation, when known.
    pub gold_subtype: Option<String>,
}

impl FeatureVector {
    pub fn main_type(&self) -> &str {
        &self.span.main_type
    }

    pub fn has_all<'a>(&self, features: impl IntoIterator<Item = &'a FeatureId>) -> bool {
        features.into_iter().all(|f| self.active.contains(f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl Side {
    fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// A contiguous piece of one sentence inside the window.
struct Segment {
    sentence: usize,
    lo: usize,
    hi: usize,
}

/// Extracts feature vectors with fixed lexicons, patterns and window.
#[derive(Debug, Clone, Copy)]
pub struct FeatureExtractor<'a> {
    pub lex: &'a LexiconSet,
    pub patterns: &'a [ChunkPattern],
    pub window: ContextWindow,
}

impl<'a> FeatureExtractor<'a> {
    pub fn new(lex: &'a LexiconSet, patterns: &'a [ChunkPattern], window: ContextWindow) -> Self {
        Self { lex, patterns, window }
    }

    fn segments(&self, doc: &Document, sentence: usize, span: &AnnotatedSpan) -> Vec<Segment> {
        let r = self.window.radius;
        let len = doc.sentences[sentence].tokens.len();
        let mut segments = vec![Segment {
            sentence,
            lo: span.first_token.saturating_sub(r),
            hi: (span.last_token + r).min(len - 1),
        }];
        if self.window.sentence_bounded {
            return segments;
        }
        let mut need = r.saturating_sub(span.first_token);
        let mut s = sentence;
        while need > 0 && s > 0 {
            s -= 1;
            let n = doc.sentences[s].tokens.len();
            if n == 0 {
                continue;
            }
            let take = need.min(n);
            segments.insert(0, Segment { sentence: s, lo: n - take, hi: n - 1 });
            need -= take;
        }
        let mut need = (span.last_token + r).saturating_sub(len - 1);
        let mut s = sentence;
        while need > 0 && s + 1 < doc.sentences.len() {
            s += 1;
            let n = doc.sentences[s].tokens.len();
            if n == 0 {
                continue;
            }
            let take = need.min(n);
            segments.push(Segment { sentence: s, lo: 0, hi: take - 1 });
            need -= take;
        }
        segments
    }

    /// Features of `span` in sentence `sentence` of `doc`.
    pub fn extract(&self, doc: &Document, sentence: usize, span: &AnnotatedSpan) -> Result<FeatureVector, FeatureError> {
        let out_of_range = || FeatureError::SpanOutOfRange {
            doc_id: doc.doc_id.clone(),
            sentence,
            span: span.clone(),
        };
        let sent = doc.sentences.get(sentence).ok_or_else(out_of_range)?;
        if span.first_token > span.last_token || span.last_token >= sent.tokens.len() {
            return Err(out_of_range());
        }

        let lex = self.lex;
        let span_tokens: Vec<&str> = sent.tokens[span.first_token..=span.last_token]
            .iter()
            .map(|t| t.surface.as_str())
            .collect();
        let span_granularity = lex
            .gazetteer_entry(&span_tokens)
            .and_then(|e| e.granularity)
            .unwrap_or(Granularity::Country);

        let mut active = BTreeSet::new();
        for seg in self.segments(doc, sentence, span) {
            let tokens = &doc.sentences[seg.sentence].tokens[seg.lo..=seg.hi];
            let surfaces: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
            let analyses: Vec<_> = surfaces.iter().map(|s| lex.lookup_morph(s)).collect();
            let in_span = |local: usize| seg.sentence == sentence && span.contains(seg.lo + local);
            let side_of = |local: usize| {
                if seg.sentence < sentence || (seg.sentence == sentence && seg.lo + local < span.first_token) {
                    Side::Left
                } else {
                    Side::Right
                }
            };

            for (local, entries) in analyses.iter().enumerate() {
                if in_span(local) {
                    continue;
                }
                let side = side_of(local).as_str();
                for entry in entries {
                    active.insert(FeatureId::new(FeatureKind::Lemma, format!("{}:{side}", entry.lemma)));
                    active.insert(FeatureId::new(FeatureKind::Pos, format!("{}:{side}", entry.pos)));
                    for cluster in lex.lookup_cluster(&entry.lemma) {
                        active.insert(FeatureId::new(FeatureKind::Clust, format!("{cluster}:{side}")));
                    }
                }
            }

            for m in lex.match_tokens(&surfaces) {
                if (m.first_token..=m.last_token).any(in_span) {
                    continue;
                }
                let side = side_of(m.first_token).as_str();
                match m.trigger_role {
                    Some(role) => {
                        active.insert(FeatureId::new(FeatureKind::Trig, format!("{role}:{side}")));
                    }
                    None => {
                        let place = m.category == "loc" || m.category == "gsp";
                        if place && m.granularity.is_some_and(|g| g < span_granularity) {
                            active.insert(FeatureId::flag(FeatureKind::FinerLocCooc));
                        }
                    }
                }
            }

            let pos: Vec<Pos> = surfaces.iter().map(|s| lex.chunk_pos(s)).collect();
            let chunks = chunk_sentence(&pos, self.patterns);
            if seg.sentence == sentence {
                self.subject_features(&chunks, &analyses, span.last_token - seg.lo, &mut active);
            }
            for chunk in chunks.iter().filter(|c| c.kind == ChunkKind::Np) {
                if in_span(chunk.head) {
                    continue;
                }
                if analyses[chunk.head].iter().any(|e| lex.in_cluster_label(&e.lemma, FEELING_LABEL)) {
                    active.insert(FeatureId::flag(FeatureKind::FeelingNp));
                }
            }

            for other in &doc.sentences[seg.sentence].spans {
                let same = seg.sentence == sentence && other == span;
                if !same && other.first_token <= seg.hi && seg.lo <= other.last_token {
                    active.insert(FeatureId::new(FeatureKind::CoocNe, other.main_type.clone()));
                }
            }
        }

        Ok(FeatureVector {
            doc_id: doc.doc_id.clone(),
            sentence,
            span: span.clone(),
            active,
            gold_subtype: span.sub_type.clone(),
        })
    }

    /// Verb features when the NP holding the span's last token is directly
    /// followed by a VP. Every verb of that VP counts, so a participle after
    /// an auxiliary contributes its own frame.
    fn subject_features(
        &self,
        chunks: &[Chunk],
        analyses: &[Vec<crate::lexicon::MorphEntry>],
        span_last: usize,
        active: &mut BTreeSet<FeatureId>,
    ) {
        let Some(np_idx) = chunks
            .iter()
            .position(|c| c.kind == ChunkKind::Np && c.contains(span_last))
        else {
            return;
        };
        let Some(vp) = chunks
            .get(np_idx + 1)
            .filter(|vp| vp.kind == ChunkKind::Vp && vp.first_token == chunks[np_idx].last_token + 1)
        else {
            return;
        };
        for token_analyses in &analyses[vp.first_token..=vp.last_token] {
            for entry in token_analyses.iter().filter(|e| e.pos == Pos::Verb) {
                if let Some(frame) = self.lex.lookup_verb_frame(&entry.lemma) {
                    if let Some(class) = &frame.verb_class {
                        active.insert(FeatureId::new(FeatureKind::VclassGov, class.clone()));
                    }
                    if frame.subject_restriction == SubjectRestriction::Human {
                        active.insert(FeatureId::flag(FeatureKind::SubjOfHumanVerb));
                    }
                }
            }
        }
    }

    /// One vector per span whose main type has subtypes in the schema.
    pub fn extract_corpus(&self, corpus: &Corpus) -> Result<Vec<FeatureVector>, FeatureError> {
        let mut out = Vec::new();
        for doc in &corpus.documents {
            for (si, span) in doc.spans() {
                if corpus.schema.has_subtypes(&span.main_type) {
                    out.push(self.extract(doc, si, span)?);
                }
            }
        }
        Ok(out)
    }
}

/// Free-function form of [`FeatureExtractor::extract`].
pub fn extract_features(
    doc: &Document,
    sentence: usize,
    span: &AnnotatedSpan,
    window: ContextWindow,
    lex: &LexiconSet,
    patterns: &[ChunkPattern],
) -> Result<FeatureVector, FeatureError> {
    FeatureExtractor::new(lex, patterns, window).extract(doc, sentence, span)
}

/// Dense indexing of every feature seen, sorted by kind then payload.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    features: Vec<FeatureId>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn index(&self, feature: &FeatureId) -> Option<usize> {
        self.features.binary_search(feature).ok()
    }

    pub fn feature(&self, index: usize) -> Option<&FeatureId> {
        self.features.get(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FeatureId> {
        self.features.iter()
    }
}

pub fn build_vocabulary(vectors: &[FeatureVector]) -> Vocabulary {
    let all: BTreeSet<&FeatureId> = vectors.iter().flat_map(|v| v.active.iter()).collect();
    Vocabulary {
        features: all.into_iter().cloned().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunker::default_patterns;
    use crate::corpus::{parse_inline, TagSchema};
    use proptest::prelude::*;

    fn vector(text: &str) -> FeatureVector {
        let doc = parse_inline("d", text, &TagSchema::builtin()).unwrap();
        let (si, span) = doc
            .spans()
            .find(|(_, s)| s.main_type == "gsp")
            .map(|(i, s)| (i, s.clone()))
            .unwrap();
        let lex = LexiconSet::builtin();
        extract_features(&doc, si, &span, ContextWindow::default(), &lex, &default_patterns()).unwrap()
    }

    fn has(v: &FeatureVector, text: &str) -> bool {
        v.active.contains(&text.parse::<FeatureId>().unwrap())
    }

    #[test]
    fn subject_of_signing_verb() {
        let v = vector("la <gsp.org> France </gsp.org> a signé un accord");
        assert!(has(&v, "VCLASS_GOV:communication"), "{:?}", v.active);
        assert!(has(&v, "SUBJ_OF_HUMAN_VERB"));
        assert!(has(&v, "LEMMA:signer:right"));
        assert!(has(&v, "POS:DET:left"));
        assert_eq!(v.gold_subtype.as_deref(), Some("org"));
    }

    #[test]
    fn locative_trigger() {
        let v = vector("ils se sont retrouvés en <gsp.loc> France </gsp.loc>");
        assert!(has(&v, "TRIG:loc_prep:left"), "{:?}", v.active);
        assert!(!has(&v, "SUBJ_OF_HUMAN_VERB"));
    }

    #[test]
    fn town_with_country() {
        let v = vector("Paris , <gsp.loc> France </gsp.loc>");
        assert!(has(&v, "FINER_LOC_COOC"), "{:?}", v.active);
        let v = vector("Allemagne , <gsp.loc> France </gsp.loc>");
        assert!(!has(&v, "FINER_LOC_COOC"));
    }

    #[test]
    fn feeling_noun_phrase() {
        let v = vector("l'amitié entre la <gsp.pers> France </gsp.pers> et l'Irlande");
        assert!(has(&v, "FEELING_NP"), "{:?}", v.active);
        assert!(has(&v, "CLUST:feeling:left"));
    }

    #[test]
    fn cooccurring_entities() {
        let v = vector("<pers> Chirac </pers> visite la <gsp.loc> France </gsp.loc>");
        assert!(has(&v, "COOC_NE:pers"));
        assert!(!has(&v, "COOC_NE:gsp"));
    }

    #[test]
    fn window_clips_at_radius() {
        let doc = parse_inline("d", "a b c d e f g <gsp> France </gsp>", &TagSchema::builtin()).unwrap();
        let span = doc.sentences[0].spans[0].clone();
        let lex = LexiconSet::builtin();
        let w = ContextWindow::new(2, true).unwrap();
        let v = extract_features(&doc, 0, &span, w, &lex, &default_patterns()).unwrap();
        assert!(has(&v, "LEMMA:g:left") && has(&v, "LEMMA:f:left"));
        assert!(!has(&v, "LEMMA:e:left"));
    }

    #[test]
    fn unbounded_window_crosses_sentences() {
        let doc = parse_inline("d", "il parle.\n<gsp> France </gsp> .", &TagSchema::builtin()).unwrap();
        let span = doc.sentences[1].spans[0].clone();
        let lex = LexiconSet::builtin();
        let bounded = extract_features(&doc, 1, &span, ContextWindow::default(), &lex, &default_patterns()).unwrap();
        assert!(!has(&bounded, "LEMMA:parler:left"));
        let w = ContextWindow::new(5, false).unwrap();
        let open = extract_features(&doc, 1, &span, w, &lex, &default_patterns()).unwrap();
        assert!(has(&open, "LEMMA:parler:left"), "{:?}", open.active);
    }

    #[test]
    fn out_of_range_span() {
        let doc = parse_inline("d", "France .", &TagSchema::builtin()).unwrap();
        let lex = LexiconSet::builtin();
        let bad = AnnotatedSpan::new(0, 5, "gsp", None);
        let err = extract_features(&doc, 0, &bad, ContextWindow::default(), &lex, &default_patterns()).unwrap_err();
        assert!(matches!(err, FeatureError::SpanOutOfRange { .. }));
        let err = extract_features(&doc, 3, &bad, ContextWindow::default(), &lex, &default_patterns()).unwrap_err();
        assert!(matches!(err, FeatureError::SpanOutOfRange { .. }));
    }

    #[test]
    fn zero_radius_rejected() {
        assert_eq!(ContextWindow::new(0, true).unwrap_err(), FeatureError::InvalidRadius);
    }

    #[test]
    fn canonical_text() {
        let f = FeatureId::new(FeatureKind::Trig, "loc_prep:left");
        assert_eq!(f.to_string(), "TRIG:loc_prep:left");
        assert_eq!(FeatureId::flag(FeatureKind::FeelingNp).to_string(), "FEELING_NP");
        let odd = FeatureId::new(FeatureKind::Lemma, "a&b%c:left");
        assert_eq!(odd.to_string(), "LEMMA:a%26b%25c:left");
        assert_eq!(odd.to_string().parse::<FeatureId>().unwrap(), odd);
        assert!("NOPE:x".parse::<FeatureId>().is_err());
        assert!("LEMMA:%zz".parse::<FeatureId>().is_err());
    }

    #[test]
    fn vocabulary() {
        let a = vector("la <gsp.org> France </gsp.org> a signé un accord");
        let b = vector("la <gsp.org> France </gsp.org> a déclaré");
        let vocab = build_vocabulary(&[a.clone(), b.clone()]);
        let shared = "LEMMA:le:left".parse().unwrap();
        assert!(vocab.index(&shared).is_some());
        assert_eq!(vocab.iter().filter(|f| **f == shared).count(), 1);
        assert!(build_vocabulary(&[]).is_empty());
        assert_eq!(vocab, build_vocabulary(&[a, b]));
        let ids: Vec<_> = vocab.iter().cloned().collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        for (i, f) in vocab.iter().enumerate() {
            assert_eq!(vocab.index(f), Some(i));
            assert_eq!(vocab.feature(i), Some(f));
        }
    }

    fn any_kind() -> impl Strategy<Value = FeatureKind> {
        prop::sample::select(FeatureKind::ALL.to_vec())
    }

    proptest! {
        #[test]
        fn feature_text_round_trips(kind in any_kind(), payload in "[a-zé%&:_\t]{1,12}") {
            let f = FeatureId::new(kind, payload);
            prop_assert_eq!(f.to_string().parse::<FeatureId>().unwrap(), f);
        }
    }
}
