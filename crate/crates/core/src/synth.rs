//! Synthetic annotated corpora with planted context cues.
//!
//! Every sentence holds one entity slot. Its reading is drawn from the
//! subtype distribution; then, with probability `cue_reliability`, a
//! template of that reading is filled with its characteristic cue, and
//! otherwise a neutral template (shared by all readings) is used. The
//! output is inline annotated text parsed back into a [`Corpus`], so
//! generated data always satisfies the corpus invariants.
//!
//! Template file rows (tab-separated, `#` comments):
//!
//! ```text
//! gsp.org	la {NE} {CUE} un accord .	a signé
//! neutral	retour sur la {NE} .	-
//! name	France	gsp
//! ```

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{parse_inline, split_label, Corpus, ParseError, TagSchema};

/// Reading counts of the reference gsp table: loc, pers, org.
pub const DEFAULT_DISTRIBUTION: [(&str, f64); 3] = [("gsp.loc", 1486.0), ("gsp.pers", 7.0), ("gsp.org", 385.0)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("bad template at line {line}: {reason}")]
    BadTemplate { line: usize, reason: String },
    #[error("bad generator spec: {0}")]
    BadSpec(String),
    #[error("generated text does not parse: {0}")]
    Generated(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub n_sentences: usize,
    /// Label and probability, in the order given; probabilities sum to one.
    pub distribution: Vec<(String, f64)>,
    pub cue_reliability: f64,
    pub sentences_per_doc: usize,
    /// Template file named in a spec file, resolved by the caller.
    pub templates: Option<String>,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            n_sentences: 1000,
            distribution: normalise(DEFAULT_DISTRIBUTION.iter().map(|(l, w)| (l.to_string(), *w)).collect())
                .expect("default weights are positive"),
            cue_reliability: 0.9,
            sentences_per_doc: 20,
            templates: None,
        }
    }
}

/// Scales positive weights to probabilities.
pub fn normalise(weights: Vec<(String, f64)>) -> Result<Vec<(String, f64)>, SynthError> {
    if weights.is_empty() {
        return Err(SynthError::BadSpec("empty distribution".into()));
    }
    if let Some((l, w)) = weights.iter().find(|(_, w)| !w.is_finite() || *w < 0.0) {
        return Err(SynthError::BadSpec(format!("weight {w} for `{l}` is not a non-negative number")));
    }
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return Err(SynthError::BadSpec("distribution weights sum to zero".into()));
    }
    Ok(weights.into_iter().map(|(l, w)| (l, w / total)).collect())
}

impl GeneratorSpec {
    /// Parses `key = value` lines: `seed`, `n_sentences`, `cue_reliability`,
    /// `sentences_per_doc`, `templates` and `distribution`, the latter as
    /// `label:weight` pairs separated by commas. Weights are normalised.
    pub fn parse(text: &str) -> Result<Self, SynthError> {
        let mut spec = GeneratorSpec::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| SynthError::BadSpec(format!("line {}: {reason}", i + 1));
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| bad("expected `key = value`".into()))?;
            let number = |what: &str| bad(format!("bad {what} `{value}`"));
            match key {
                "seed" => spec.seed = value.parse().map_err(|_| number("seed"))?,
                "n_sentences" => spec.n_sentences = value.parse().map_err(|_| number("n_sentences"))?,
                "sentences_per_doc" => spec.sentences_per_doc = value.parse().map_err(|_| number("sentences_per_doc"))?,
                "cue_reliability" => spec.cue_reliability = value.parse().map_err(|_| number("cue_reliability"))?,
                "templates" => spec.templates = Some(value.to_string()),
                "distribution" => {
                    let mut weights = Vec::new();
                    for pair in value.split(',') {
                        let (label, w) = pair
                            .split_once(':')
                            .ok_or_else(|| bad(format!("expected `label:weight`, got `{}`", pair.trim())))?;
                        let w: f64 = w.trim().parse().map_err(|_| bad(format!("bad weight `{}`", w.trim())))?;
                        weights.push((label.trim().to_string(), w));
                    }
                    spec.distribution = normalise(weights)?;
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if !(0.0..=1.0).contains(&self.cue_reliability) {
            return Err(SynthError::BadSpec(format!("cue_reliability {} is not in [0, 1]", self.cue_reliability)));
        }
        if self.sentences_per_doc == 0 {
            return Err(SynthError::BadSpec("sentences_per_doc must be at least 1".into()));
        }
        let sum: f64 = self.distribution.iter().map(|(_, p)| p).sum();
        if (sum - 1.0).abs() > 1e-9 || self.distribution.iter().any(|(_, p)| *p < 0.0) {
            return Err(SynthError::BadSpec(format!("distribution sums to {sum}, not 1")));
        }
        Ok(())
    }
}

/// Parsed template file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TemplateSet {
    /// Label → (template, cue).
    pub by_label: BTreeMap<String, Vec<(String, String)>>,
    pub neutral: Vec<String>,
    /// Main type → surfaces.
    pub names: BTreeMap<String, Vec<String>>,
}

impl TemplateSet {
    pub fn parse(text: &str) -> Result<Self, SynthError> {
        let mut set = TemplateSet::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let bad = |reason: &str| SynthError::BadTemplate {
                line,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let [kind, body, third] = fields[..] else {
                return Err(bad("expected 3 tab-separated columns"));
            };
            if body.is_empty() {
                return Err(bad("empty template"));
            }
            match kind {
                "name" => {
                    if third.is_empty() || third == "-" {
                        return Err(bad("a name row needs its main type in the third column"));
                    }
                    set.names.entry(third.to_string()).or_default().push(body.to_string());
                }
                "neutral" => {
                    if body.matches("{NE}").count() != 1 || body.contains("{CUE}") {
                        return Err(bad("a neutral template needs one {NE} and no {CUE}"));
                    }
                    set.neutral.push(body.to_string());
                }
                label => {
                    if !label.contains('.') {
                        return Err(bad("expected `name`, `neutral` or a dotted label"));
                    }
                    if body.matches("{NE}").count() != 1 || body.matches("{CUE}").count() != 1 {
                        return Err(bad("a template needs exactly one {NE} and one {CUE}"));
                    }
                    if third.is_empty() || third == "-" {
                        return Err(bad("a template needs a cue"));
                    }
                    set.by_label
                        .entry(label.to_string())
                        .or_default()
                        .push((body.to_string(), third.to_string()));
                }
            }
        }
        Ok(set)
    }

    pub fn builtin() -> Self {
        Self::parse(crate::resources::TEMPLATES).expect("bundled templates are valid")
    }

    /// Cue texts of one label.
    pub fn cues(&self, label: &str) -> Vec<&str> {
        self.by_label
            .get(label)
            .map(|ts| ts.iter().map(|(_, c)| c.as_str()).collect())
            .unwrap_or_default()
    }
}

/// Generates `spec.n_sentences` annotated sentences, `spec.sentences_per_doc`
/// per document, deterministically from `spec.seed`.
///
/// ```
/// use metonymy::corpus::TagSchema;
/// use metonymy::synth::{generate, GeneratorSpec, TemplateSet};
///
/// let spec = GeneratorSpec { seed: 7, n_sentences: 40, ..Default::default() };
/// let corpus = generate(&spec, &TemplateSet::builtin(), &TagSchema::builtin()).unwrap();
/// assert_eq!(corpus.len(), 2);
/// assert_eq!(corpus.sentence_count(), 40);
/// ```
pub fn generate(spec: &GeneratorSpec, templates: &TemplateSet, schema: &TagSchema) -> Result<Corpus, SynthError> {
    spec.validate()?;
    let no_template = |reason: String| SynthError::BadTemplate { line: 0, reason };
    for (label, p) in &spec.distribution {
        let (main, sub) = split_label(label);
        if !schema.accepts(main, sub) {
            return Err(no_template(format!("label `{label}` is not in the schema")));
        }
        if *p > 0.0 {
            if spec.cue_reliability > 0.0 && templates.by_label.get(label).is_none_or(Vec::is_empty) {
                return Err(no_template(format!("no template for `{label}`")));
            }
            if templates.names.get(main).is_none_or(Vec::is_empty) {
                return Err(no_template(format!("no name for main type `{main}`")));
            }
        }
    }
    if spec.cue_reliability < 1.0 && templates.neutral.is_empty() {
        return Err(no_template("cues can be withheld but there is no neutral template".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let index = WeightedIndex::new(spec.distribution.iter().map(|(_, p)| *p))
        .map_err(|e| SynthError::BadSpec(e.to_string()))?;
    let width = spec.n_sentences.div_ceil(spec.sentences_per_doc).max(1).to_string().len();
    let mut documents = Vec::new();
    let mut lines = Vec::with_capacity(spec.sentences_per_doc);
    for i in 0..spec.n_sentences {
        let label = &spec.distribution[index.sample(&mut rng)].0;
        let with_cue = rng.gen_bool(spec.cue_reliability);
        let body = if with_cue {
            let (template, cue) = templates.by_label[label].choose(&mut rng).expect("checked non-empty");
            template.replace("{CUE}", cue)
        } else {
            templates.neutral.choose(&mut rng).expect("checked non-empty").clone()
        };
        let (main, _) = split_label(label);
        let name = templates.names[main].choose(&mut rng).expect("checked non-empty");
        lines.push(body.replace("{NE}", &format!("<{label}> {name} </{label}>")));
        if lines.len() == spec.sentences_per_doc || i + 1 == spec.n_sentences {
            let doc_id = format!("synth-{:0width$}", documents.len() + 1);
            documents.push(parse_inline(&doc_id, &lines.join("\n"), schema)?);
            lines.clear();
        }
    }
    Ok(Corpus::new(documents, schema.clone()))
}
