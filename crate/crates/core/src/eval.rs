//! Scoring: slot alignment, slot error rate, per-label precision / recall /
//! F-measure, subtype merging and report tables.
//!
//! Slots are paired on exact boundaries. A paired slot with the same main
//! type is correct when the subtypes agree and a type substitution
//! otherwise; a paired slot with a different main type counts as one
//! deletion plus one insertion.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::corpus::{split_label, AnnotatedSpan, Corpus, Document, MergeDecl, TagSchema};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("documents `{reference}` and `{hypothesis}` differ")]
    DocMismatch { reference: String, hypothesis: String },
    #[error("token sequences differ in `{doc_id}` sentence {sentence}")]
    TokenMismatch { doc_id: String, sentence: usize },
    #[error("document `{0}` is missing from the hypothesis")]
    MissingDocument(String),
    #[error("the reference has no slots")]
    EmptyReference,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotStatus {
    Correct,
    TypeSubstitution,
    Deletion,
    Insertion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotMatch {
    pub doc_id: String,
    pub sentence: usize,
    pub reference: Option<AnnotatedSpan>,
    pub hypothesis: Option<AnnotatedSpan>,
    pub status: SlotStatus,
}

/// Pairs the slots of two annotations of the same text.
pub fn align_slots(reference: &Document, hypothesis: &Document) -> Result<Vec<SlotMatch>, EvalError> {
    if reference.doc_id != hypothesis.doc_id {
        return Err(EvalError::DocMismatch {
            reference: reference.doc_id.clone(),
            hypothesis: hypothesis.doc_id.clone(),
        });
    }
    let mismatch = |sentence| EvalError::TokenMismatch {
        doc_id: reference.doc_id.clone(),
        sentence,
    };
    if reference.sentences.len() != hypothesis.sentences.len() {
        return Err(mismatch(reference.sentences.len().min(hypothesis.sentences.len())));
    }
    let mut out = Vec::new();
    for (si, (r, h)) in reference.sentences.iter().zip(&hypothesis.sentences).enumerate() {
        if !r.surfaces().eq(h.surfaces()) {
            return Err(mismatch(si));
        }
        type Pair<'s> = (Option<&'s AnnotatedSpan>, Option<&'s AnnotatedSpan>);
        let mut by_bounds: BTreeMap<(usize, usize), Pair<'_>> = BTreeMap::new();
        for s in &r.spans {
            by_bounds.entry((s.first_token, s.last_token)).or_default().0 = Some(s);
        }
        for s in &h.spans {
            by_bounds.entry((s.first_token, s.last_token)).or_default().1 = Some(s);
        }
        let doc_id = &reference.doc_id;
        let slot = |rs: Option<&AnnotatedSpan>, hs: Option<&AnnotatedSpan>, status| SlotMatch {
            doc_id: doc_id.clone(),
            sentence: si,
            reference: rs.cloned(),
            hypothesis: hs.cloned(),
            status,
        };
        for pair in by_bounds.into_values() {
            match pair {
                (Some(rs), Some(hs)) if rs.main_type == hs.main_type => {
                    let status = if rs.sub_type == hs.sub_type {
                        SlotStatus::Correct
                    } else {
                        SlotStatus::TypeSubstitution
                    };
                    out.push(slot(Some(rs), Some(hs), status));
                }
                (rs, hs) => {
                    if let Some(rs) = rs {
                        out.push(slot(Some(rs), None, SlotStatus::Deletion));
                    }
                    if let Some(hs) = hs {
                        out.push(slot(None, Some(hs), SlotStatus::Insertion));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Aligns every reference document with the hypothesis document of the same id.
pub fn align_corpora(reference: &Corpus, hypothesis: &Corpus) -> Result<Vec<SlotMatch>, EvalError> {
    let mut out = Vec::new();
    for r in &reference.documents {
        let h = hypothesis
            .get(&r.doc_id)
            .ok_or_else(|| EvalError::MissingDocument(r.doc_id.clone()))?;
        out.extend(align_slots(r, h)?);
    }
    Ok(out)
}

/// Tallies of slot statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SlotCounts {
    pub correct: usize,
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
}

impl SlotCounts {
    pub fn of(matches: &[SlotMatch]) -> Self {
        let mut c = SlotCounts::default();
        for m in matches {
            match m.status {
                SlotStatus::Correct => c.correct += 1,
                SlotStatus::TypeSubstitution => c.substitutions += 1,
                SlotStatus::Deletion => c.deletions += 1,
                SlotStatus::Insertion => c.insertions += 1,
            }
        }
        c
    }

    /// Reference slots: every match except insertions.
    pub fn reference_slots(&self) -> usize {
        self.correct + self.substitutions + self.deletions
    }

    pub fn errors(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }
}

/// (deletions + insertions + type substitutions) / reference slots.
pub fn slot_error_rate(matches: &[SlotMatch]) -> Result<f64, EvalError> {
    let c = SlotCounts::of(matches);
    match c.reference_slots() {
        0 => Err(EvalError::EmptyReference),
        n => Ok(c.errors() as f64 / n as f64),
    }
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrfScore {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub ref_count: usize,
    pub hyp_count: usize,
    pub correct: usize,
    /// A denominator was zero, so some figure is a conventional 0.
    pub undefined: bool,
}

fn label_matches(span: &AnnotatedSpan, main: &str, sub: Option<&str>) -> bool {
    span.main_type == main && sub.is_none_or(|s| span.sub_type.as_deref() == Some(s))
}

/// Scores one label. `main.sub` needs the exact reading; a bare `main`
/// matches on the main type alone.
pub fn score_prf(matches: &[SlotMatch], label: &str) -> PrfScore {
    let (main, sub) = split_label(label);
    let mut ref_count = 0;
    let mut hyp_count = 0;
    let mut correct = 0;
    for m in matches {
        let r = m.reference.as_ref().is_some_and(|s| label_matches(s, main, sub));
        let h = m.hypothesis.as_ref().is_some_and(|s| label_matches(s, main, sub));
        ref_count += usize::from(r);
        hyp_count += usize::from(h);
        correct += usize::from(r && h);
    }
    let div = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = div(correct, hyp_count);
    let recall = div(correct, ref_count);
    PrfScore {
        label: label.to_string(),
        precision,
        recall,
        f_measure: f_measure(precision, recall),
        ref_count,
        hyp_count,
        correct,
        undefined: ref_count == 0 || hyp_count == 0,
    }
}

/// Rewrites every merge source of `merge` to its target.
pub fn merge_subtypes(doc: &Document, merge: &MergeDecl) -> Document {
    let mut out = doc.clone();
    for sentence in &mut out.sentences {
        for span in &mut sentence.spans {
            if span.main_type == merge.main_type && span.sub_type.as_ref().is_some_and(|s| merge.sources.contains(s)) {
                span.sub_type = Some(merge.target.clone());
            }
        }
    }
    out
}

/// Applies the schema's merge declared for `label` (e.g. `gsp.hum`).
pub fn merge_corpus(corpus: &Corpus, label: &str) -> Result<Corpus, EvalError> {
    let merge = corpus
        .schema
        .merge_for(label)
        .ok_or_else(|| EvalError::UnknownLabel(label.to_string()))?;
    Ok(Corpus::new(
        corpus.documents.iter().map(|d| merge_subtypes(d, merge)).collect(),
        corpus.schema.clone(),
    ))
}

/// The reference slots with subtypes taken from the hypothesis: from the
/// hypothesis slot with the same boundaries and main type, or the schema
/// default when recognition missed the slot.
pub fn with_gold_spans(reference: &Document, hypothesis: &Document, schema: &TagSchema) -> Document {
    let mut out = reference.clone();
    for (si, sentence) in out.sentences.iter_mut().enumerate() {
        let hyp = hypothesis.sentences.get(si);
        for span in &mut sentence.spans {
            let same = hyp.and_then(|h| {
                h.spans.iter().find(|s| {
                    s.first_token == span.first_token && s.last_token == span.last_token && s.main_type == span.main_type
                })
            });
            span.sub_type = match same {
                Some(s) => s.sub_type.clone(),
                None => schema.default_subtype(&span.main_type).map(str::to_string),
            };
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Score subtype resolution on the reference boundaries.
    pub gold_spans: bool,
    /// Merge label such as `gsp.hum`, applied to both sides.
    pub merge: Option<String>,
}

/// Counts of (reference label, hypothesis label) over paired slots whose
/// main type has subtypes.
pub type Confusion = BTreeMap<(String, String), usize>;

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreBlock {
    pub rows: Vec<PrfScore>,
    pub counts: SlotCounts,
    pub ser: Option<f64>,
    /// Share of reference slots with subtypes whose reading was found.
    pub subtype_accuracy: Option<f64>,
    pub confusion: Confusion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub options: EvalOptions,
    pub system: ScoreBlock,
    pub baseline: Option<ScoreBlock>,
}

fn report_labels(schema: &TagSchema, reference: &Corpus, hypothesis: &Corpus, merge: Option<&MergeDecl>) -> Vec<String> {
    let present = |main: &str| {
        reference
            .documents
            .iter()
            .chain(&hypothesis.documents)
            .any(|d| d.spans().any(|(_, s)| s.main_type == main))
    };
    let mut labels = Vec::new();
    for main in schema.main_types().iter().filter(|m| schema.has_subtypes(m) && present(m)) {
        let merges: Vec<&MergeDecl> = schema.merges().iter().filter(|m| m.main_type == *main).collect();
        for sub in schema.subtypes(main) {
            let active = merge.filter(|m| m.main_type == *main);
            let keep = match active {
                Some(m) => !m.sources.contains(sub),
                None => !merges.iter().any(|m| m.target == *sub),
            };
            if keep {
                labels.push(format!("{main}.{sub}"));
            }
        }
    }
    labels
}

fn score_block(matches: &[SlotMatch], labels: &[String], schema: &TagSchema) -> ScoreBlock {
    let mut confusion = Confusion::new();
    let mut with_sub = 0;
    let mut right = 0;
    for m in matches {
        if let Some(r) = m.reference.as_ref().filter(|r| schema.has_subtypes(&r.main_type)) {
            with_sub += 1;
            if m.status == SlotStatus::Correct {
                right += 1;
            }
            if let Some(h) = &m.hypothesis {
                *confusion.entry((r.label(), h.label())).or_default() += 1;
            }
        }
    }
    ScoreBlock {
        rows: labels.iter().map(|l| score_prf(matches, l)).collect(),
        counts: SlotCounts::of(matches),
        ser: slot_error_rate(matches).ok(),
        subtype_accuracy: (with_sub > 0).then(|| right as f64 / with_sub as f64),
        confusion,
    }
}

/// Scores `hypothesis` (and optionally a baseline) against `reference`.
pub fn evaluation_report(
    reference: &Corpus,
    hypothesis: &Corpus,
    baseline: Option<&Corpus>,
    options: &EvalOptions,
) -> Result<ScoreReport, EvalError> {
    let schema = &reference.schema;
    let merge = options
        .merge
        .as_deref()
        .map(|l| schema.merge_for(l).ok_or_else(|| EvalError::UnknownLabel(l.to_string())))
        .transpose()?;
    let prepare = |c: &Corpus| -> Result<Corpus, EvalError> {
        let mut docs = Vec::with_capacity(reference.documents.len());
        for r in &reference.documents {
            let h = c.get(&r.doc_id).ok_or_else(|| EvalError::MissingDocument(r.doc_id.clone()))?;
            let h = if options.gold_spans {
                align_slots(r, h)?;
                with_gold_spans(r, h, schema)
            } else {
                h.clone()
            };
            docs.push(match merge {
                Some(m) => merge_subtypes(&h, m),
                None => h,
            });
        }
        Ok(Corpus::new(docs, c.schema.clone()))
    };
    let reference = match merge {
        Some(m) => Corpus::new(
            reference.documents.iter().map(|d| merge_subtypes(d, m)).collect(),
            reference.schema.clone(),
        ),
        None => reference.clone(),
    };
    let hyp = prepare(hypothesis)?;
    let labels = report_labels(schema, &reference, &hyp, merge);
    let system = score_block(&align_corpora(&reference, &hyp)?, &labels, schema);
    let baseline = match baseline {
        Some(b) => {
            let b = prepare(b)?;
            Some(score_block(&align_corpora(&reference, &b)?, &labels, schema))
        }
        None => None,
    };
    Ok(ScoreReport {
        options: options.clone(),
        system,
        baseline,
    })
}

fn fmt_ser(ser: Option<f64>) -> String {
    ser.map_or_else(|| "n/a".to_string(), |s| format!("{s:.4}"))
}

impl ScoreBlock {
    pub fn row(&self, label: &str) -> Option<&PrfScore> {
        self.rows.iter().find(|r| r.label == label)
    }

    fn write_table(&self, out: &mut String, title: &str) {
        let width = self.rows.iter().map(|r| r.label.len()).max().unwrap_or(5).max(5);
        let _ = writeln!(out, "{title}");
        let _ = writeln!(out, "{:<width$}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}", "label", "#ref", "#hyp", "P", "R", "F");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>6}  {:>6}  {:>6.4}  {:>6.4}  {:>6.4}{}",
                r.label,
                r.ref_count,
                r.hyp_count,
                r.precision,
                r.recall,
                r.f_measure,
                if r.undefined { "  (undefined)" } else { "" }
            );
        }
        let c = self.counts;
        let _ = writeln!(
            out,
            "SER {}  (correct {}, substitutions {}, deletions {}, insertions {})",
            fmt_ser(self.ser),
            c.correct,
            c.substitutions,
            c.deletions,
            c.insertions
        );
        if let Some(acc) = self.subtype_accuracy {
            let _ = writeln!(out, "subtype accuracy {acc:.4}");
        }
    }

    fn write_tsv(&self, out: &mut String, prefix: &str) {
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{prefix}{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}",
                r.label, r.ref_count, r.hyp_count, r.precision, r.recall, r.f_measure
            );
        }
        let _ = writeln!(out, "{prefix}SER\t{}", fmt_ser(self.ser));
    }

    /// Confusion matrix as text, reference labels down, hypothesis across.
    pub fn confusion_table(&self) -> String {
        let mut rows: Vec<&str> = self.confusion.keys().map(|(r, _)| r.as_str()).collect();
        let mut cols: Vec<&str> = self.confusion.keys().map(|(_, h)| h.as_str()).collect();
        rows.dedup();
        cols.sort();
        cols.dedup();
        let width = rows.iter().chain(&cols).map(|l| l.len()).max().unwrap_or(3).max(8);
        let mut out = format!("{:<width$}", "ref\\hyp");
        for c in &cols {
            let _ = write!(out, "  {c:>width$}");
        }
        out.push('\n');
        for r in rows {
            let _ = write!(out, "{r:<width$}");
            for c in &cols {
                let n = self.confusion.get(&(r.to_string(), c.to_string())).copied().unwrap_or(0);
                let _ = write!(out, "  {n:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

impl ScoreReport {
    /// Tab-separated rows: label, #ref, #hyp, P, R, F, then SER. Baseline
    /// rows are prefixed with `baseline:`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("label\tref\thyp\tprecision\trecall\tf\n");
        self.system.write_tsv(&mut out, "");
        if let Some(b) = &self.baseline {
            b.write_tsv(&mut out, "baseline:");
        }
        out
    }
}

impl fmt::Display for ScoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut mode = vec![if self.options.gold_spans { "gold spans" } else { "end to end" }];
        if let Some(m) = &self.options.merge {
            mode.push(m);
        }
        self.system.write_table(&mut out, &format!("system ({})", mode.join(", ")));
        if let Some(b) = &self.baseline {
            out.push('\n');
            b.write_table(&mut out, "baseline");
        }
        f.write_str(&out)
    }
}
