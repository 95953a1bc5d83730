//! Lexical resources: a morphological dictionary, a gazetteer of entity
//! names and trigger words, semantic clusters of lemmas, and verb frames.
//!
//! Every resource is a UTF-8 TSV file (`#` starts a comment line):
//!
//! | file       | columns                                                   |
//! |------------|-----------------------------------------------------------|
//! | morph      | form, lemma, pos, gender or `-`, number or `-`            |
//! | gazetteer  | phrase, category, trigger role or `-`, [granularity or `-`] |
//! | clusters   | cluster id, label, lemma                                  |
//! | verbs      | lemma, subject restriction, verb class or `-`             |
//!
//! A [`LexiconSet`] never changes after it is loaded. Lookups keep lexical
//! ambiguity: every analysis of a form and every cluster of a lemma is
//! returned.

mod gazetteer;
mod pos;

pub use gazetteer::GazetteerMatch;
pub use pos::{Pos, UnknownPos};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::Sentence;
use gazetteer::Gazetteer;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon file not found: {}", .0.display())]
    FileMissing(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: malformed row: {reason}")]
    MalformedRow { file: String, line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gender {
    Masculine,
    Feminine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Number {
    Singular,
    Plural,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorphEntry {
    pub form: String,
    pub lemma: String,
    pub pos: Pos,
    pub gender: Option<Gender>,
    pub number: Option<Number>,
}

impl MorphEntry {
    fn fallback(form: &str) -> Self {
        let pos = if form.chars().all(|c| c.is_ascii_punctuation() || crate::corpus::is_split_punct(c)) {
            Pos::Punc
        } else if form.chars().next().is_some_and(char::is_uppercase) {
            Pos::Propn
        } else {
            Pos::Unk
        };
        MorphEntry {
            form: form.to_string(),
            lemma: form.to_string(),
            pos,
            gender: None,
            number: None,
        }
    }
}

/// Role of a trigger word in the gazetteer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriggerRole {
    Title,
    LocPrep,
    OrgKeyword,
}

impl TriggerRole {
    pub fn as_str(self) -> &'static str {
        match self {
            TriggerRole::Title => "title",
            TriggerRole::LocPrep => "loc_prep",
            TriggerRole::OrgKeyword => "org_keyword",
        }
    }
}

impl fmt::Display for TriggerRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Size class of a place name; ordered from smallest to largest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Granularity {
    Town,
    Region,
    Country,
    Continent,
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "town" => Ok(Granularity::Town),
            "region" => Ok(Granularity::Region),
            "country" => Ok(Granularity::Country),
            "continent" => Ok(Granularity::Continent),
            other => Err(format!("unknown granularity `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GazetteerEntry {
    pub phrase: Vec<String>,
    pub category: String,
    /// `None` for entity names; trigger words carry their role.
    pub trigger_role: Option<TriggerRole>,
    pub granularity: Option<Granularity>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemCluster {
    pub cluster_id: String,
    pub label: String,
    pub members: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubjectRestriction {
    Human,
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbFrame {
    pub lemma: String,
    pub subject_restriction: SubjectRestriction,
    pub verb_class: Option<String>,
}

/// Raw text of the four resource files.
#[derive(Debug, Clone, Copy)]
pub struct LexiconSources<'a> {
    pub morph: &'a str,
    pub gazetteer: &'a str,
    pub clusters: &'a str,
    pub verbs: &'a str,
}

/// The loaded, indexed resources.
#[derive(Debug, Clone)]
pub struct LexiconSet {
    morph: HashMap<String, Vec<MorphEntry>>,
    morph_lower: HashMap<String, Vec<MorphEntry>>,
    gazetteer: Gazetteer,
    clusters: BTreeMap<String, SemCluster>,
    lemma_clusters: HashMap<String, BTreeSet<String>>,
    verbs: HashMap<String, VerbFrame>,
}

fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').map(str::trim).collect()))
        }
    })
}

fn optional(field: &str) -> Option<&str> {
    (field != "-" && !field.is_empty()).then_some(field)
}

impl LexiconSet {
    pub fn from_sources(src: LexiconSources<'_>) -> Result<Self, LexiconError> {
        Self::from_named_sources(src, ["morph", "gazetteer", "clusters", "verbs"])
    }

    /// Like [`LexiconSet::from_sources`], naming each source in errors.
    pub fn from_named_sources(src: LexiconSources<'_>, names: [&str; 4]) -> Result<Self, LexiconError> {
        let mut lex = LexiconSet {
            morph: HashMap::new(),
            morph_lower: HashMap::new(),
            gazetteer: Gazetteer::default(),
            clusters: BTreeMap::new(),
            lemma_clusters: HashMap::new(),
            verbs: HashMap::new(),
        };
        lex.load_morph(src.morph, names[0])?;
        lex.load_gazetteer(src.gazetteer, names[1])?;
        lex.load_clusters(src.clusters, names[2])?;
        lex.load_verbs(src.verbs, names[3])?;
        Ok(lex)
    }

    /// The small bundled French lexicons.
    pub fn builtin() -> Self {
        Self::from_sources(LexiconSources {
            morph: crate::resources::MORPH,
            gazetteer: crate::resources::GAZETTEER,
            clusters: crate::resources::CLUSTERS,
            verbs: crate::resources::VERBS,
        })
        .expect("bundled lexicons are valid")
    }

    fn load_morph(&mut self, text: &str, file: &str) -> Result<(), LexiconError> {
        for (line, f) in rows(text) {
            let bad = |reason: String| LexiconError::MalformedRow { file: file.to_string(), line, reason };
            if f.len() != 5 {
                return Err(bad(format!("expected 5 columns, found {}", f.len())));
            }
            if f[0].is_empty() || f[1].is_empty() {
                return Err(bad("empty form or lemma".into()));
            }
            let pos: Pos = f[2].parse().map_err(|e: UnknownPos| bad(e.to_string()))?;
            let gender = match optional(f[3]) {
                None => None,
                Some("m") => Some(Gender::Masculine),
                Some("f") => Some(Gender::Feminine),
                Some(g) => return Err(bad(format!("unknown gender `{g}`"))),
            };
            let number = match optional(f[4]) {
                None => None,
                Some("s") => Some(Number::Singular),
                Some("p") => Some(Number::Plural),
                Some(n) => return Err(bad(format!("unknown number `{n}`"))),
            };
            let entry = MorphEntry {
                form: f[0].to_string(),
                lemma: f[1].to_string(),
                pos,
                gender,
                number,
            };
            let slot = self.morph.entry(entry.form.clone()).or_default();
            if !slot.contains(&entry) {
                slot.push(entry.clone());
                slot.sort();
                let lower = self.morph_lower.entry(entry.form.to_lowercase()).or_default();
                lower.push(entry);
                lower.sort();
            }
        }
        Ok(())
    }

    fn load_gazetteer(&mut self, text: &str, file: &str) -> Result<(), LexiconError> {
        for (line, f) in rows(text) {
            let bad = |reason: String| LexiconError::MalformedRow { file: file.to_string(), line, reason };
            if !(3..=4).contains(&f.len()) {
                return Err(bad(format!("expected 3 or 4 columns, found {}", f.len())));
            }
            let phrase: Vec<String> = f[0].split_whitespace().map(str::to_string).collect();
            if phrase.is_empty() || f[1].is_empty() {
                return Err(bad("empty phrase or category".into()));
            }
            let trigger_role = match optional(f[2]) {
                None | Some("none") => None,
                Some("title") => Some(TriggerRole::Title),
                Some("loc_prep") => Some(TriggerRole::LocPrep),
                Some("org_keyword") => Some(TriggerRole::OrgKeyword),
                Some(r) => return Err(bad(format!("unknown trigger role `{r}`"))),
            };
            let granularity = match f.get(3).copied().and_then(optional) {
                None => None,
                Some(g) => Some(g.parse().map_err(bad)?),
            };
            self.gazetteer.insert(GazetteerEntry {
                phrase,
                category: f[1].to_string(),
                trigger_role,
                granularity,
            });
        }
        Ok(())
    }

    fn load_clusters(&mut self, text: &str, file: &str) -> Result<(), LexiconError> {
        for (line, f) in rows(text) {
            if f.len() != 3 || f.iter().any(|c| c.is_empty()) {
                return Err(LexiconError::MalformedRow {
                    file: file.to_string(),
                    line,
                    reason: format!("expected 3 non-empty columns, found {}", f.len()),
                });
            }
            let cluster = self.clusters.entry(f[0].to_string()).or_insert_with(|| SemCluster {
                cluster_id: f[0].to_string(),
                label: f[1].to_string(),
                members: BTreeSet::new(),
            });
            if cluster.label != f[1] {
                return Err(LexiconError::MalformedRow {
                    file: file.to_string(),
                    line,
                    reason: format!("cluster `{}` relabelled as `{}`", f[0], f[1]),
                });
            }
            cluster.members.insert(f[2].to_string());
            self.lemma_clusters
                .entry(f[2].to_string())
                .or_default()
                .insert(f[0].to_string());
        }
        Ok(())
    }

    fn load_verbs(&mut self, text: &str, file: &str) -> Result<(), LexiconError> {
        for (line, f) in rows(text) {
            let bad = |reason: String| LexiconError::MalformedRow { file: file.to_string(), line, reason };
            if f.len() != 3 {
                return Err(bad(format!("expected 3 columns, found {}", f.len())));
            }
            if f[0].is_empty() {
                return Err(bad("empty lemma".into()));
            }
            let subject_restriction = match f[1] {
                "human" => SubjectRestriction::Human,
                "any" => SubjectRestriction::Any,
                other => return Err(bad(format!("unknown subject restriction `{other}`"))),
            };
            let frame = VerbFrame {
                lemma: f[0].to_string(),
                subject_restriction,
                verb_class: optional(f[2]).map(str::to_string),
            };
            match self.verbs.get(&frame.lemma) {
                Some(existing) if *existing != frame => {
                    return Err(bad(format!("conflicting frame for `{}`", frame.lemma)));
                }
                Some(_) => {}
                None => {
                    self.verbs.insert(frame.lemma.clone(), frame);
                }
            }
        }
        Ok(())
    }

    /// Every analysis of `form`: verbatim lookup first, then the lowercased
    /// form. Unknown forms get a single guessed analysis: PUNC for
    /// punctuation, PROPN when capitalised, UNK otherwise.
    pub fn lookup_morph(&self, form: &str) -> Vec<MorphEntry> {
        if let Some(entries) = self.morph.get(form) {
            return entries.clone();
        }
        let lower = form.to_lowercase();
        if let Some(entries) = self.morph.get(&lower).or_else(|| self.morph_lower.get(&lower)) {
            return entries.clone();
        }
        vec![MorphEntry::fallback(form)]
    }

    /// Whether `form` (or its lowercase) is in the dictionary.
    pub fn knows_form(&self, form: &str) -> bool {
        self.morph.contains_key(form) || self.morph_lower.contains_key(&form.to_lowercase())
    }

    /// The single analysis used for chunking: the one whose POS ranks first.
    pub fn chunk_pos(&self, form: &str) -> Pos {
        self.lookup_morph(form)
            .iter()
            .map(|e| e.pos)
            .min_by_key(|p| p.priority())
            .unwrap_or(Pos::Unk)
    }

    /// Leftmost-longest gazetteer matches in a sentence.
    pub fn match_gazetteer(&self, sentence: &Sentence) -> Vec<GazetteerMatch> {
        let tokens: Vec<&str> = sentence.surfaces().collect();
        self.gazetteer.scan(&tokens)
    }

    /// Leftmost-longest gazetteer matches over a token slice.
    pub fn match_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<GazetteerMatch> {
        self.gazetteer.scan(tokens)
    }

    /// The primary gazetteer entry for exactly this phrase, if any.
    pub fn gazetteer_entry<S: AsRef<str>>(&self, phrase: &[S]) -> Option<&GazetteerEntry> {
        self.gazetteer.entry_for(phrase)
    }

    pub fn gazetteer_entries(&self) -> &[GazetteerEntry] {
        self.gazetteer.entries()
    }

    pub fn lookup_cluster(&self, lemma: &str) -> BTreeSet<String> {
        self.lemma_clusters.get(lemma).cloned().unwrap_or_default()
    }

    pub fn cluster(&self, cluster_id: &str) -> Option<&SemCluster> {
        self.clusters.get(cluster_id)
    }

    /// Whether `lemma` belongs to any cluster carrying `label`.
    pub fn in_cluster_label(&self, lemma: &str, label: &str) -> bool {
        self.lemma_clusters
            .get(lemma)
            .is_some_and(|ids| ids.iter().any(|id| self.clusters[id].label == label))
    }

    pub fn lookup_verb_frame(&self, lemma: &str) -> Option<&VerbFrame> {
        self.verbs.get(lemma)
    }

    pub fn morph_entry_count(&self) -> usize {
        self.morph.values().map(Vec::len).sum()
    }

    pub fn gazetteer_len(&self) -> usize {
        self.gazetteer.len()
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn verb_count(&self) -> usize {
        self.verbs.len()
    }
}

fn read(path: &Path) -> Result<String, LexiconError> {
    std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            LexiconError::FileMissing(path.to_path_buf())
        } else {
            LexiconError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

/// Loads the four TSV resources from disk.
pub fn load_lexicons(morph: &Path, gazetteer: &Path, clusters: &Path, verbs: &Path) -> Result<LexiconSet, LexiconError> {
    let texts = [read(morph)?, read(gazetteer)?, read(clusters)?, read(verbs)?];
    let names = [morph, gazetteer, clusters, verbs].map(|p| p.display().to_string());
    LexiconSet::from_named_sources(
        LexiconSources {
            morph: &texts[0],
            gazetteer: &texts[1],
            clusters: &texts[2],
            verbs: &texts[3],
        },
        [&names[0], &names[1], &names[2], &names[3]],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;

    const MORPH: &str = "# form\tlemma\tpos\tgender\tnumber\n\
la\tle\tDET\tf\ts\n\
la\tla\tPRON\tf\ts\n\
la\tle\tDET\tf\ts\n\
France\tFrance\tPROPN\tf\ts\n\
signé\tsigner\tVERB\tm\ts\n\
signé\tsigné\tADJ\tm\ts\n";

    const GAZ: &str = "France\tgsp\t-\tcountry\n\
Radio France International\torg\t-\n\
en\tgsp\tloc_prep\n\
Paris\tgsp\t-\ttown\n\
Monsieur\tpers\ttitle\n";

    const CLUSTERS: &str = "communication\tcommunication\tdire\n\
communication\tcommunication\tdéclarer\n\
refusal\trefusal\tdénoncer\n\
communication\tcommunication\tdénoncer\n";

    const VERBS: &str = "dire\thuman\tcommunication\npleuvoir\tany\t-\n";

    fn lex() -> LexiconSet {
        LexiconSet::from_sources(LexiconSources {
            morph: MORPH,
            gazetteer: GAZ,
            clusters: CLUSTERS,
            verbs: VERBS,
        })
        .unwrap()
    }

    #[test]
    fn counts_and_dedup() {
        let l = lex();
        assert_eq!(l.morph_entry_count(), 5);
        assert_eq!(l.gazetteer_len(), 5);
        assert_eq!(l.cluster_count(), 2);
        assert_eq!(l.verb_count(), 2);
    }

    #[test]
    fn malformed_row_reports_line() {
        let err = LexiconSet::from_sources(LexiconSources {
            morph: "la\tle\tDET\tf\ts\n# c\nle\tle\n",
            gazetteer: "",
            clusters: "",
            verbs: "",
        })
        .unwrap_err();
        assert!(matches!(err, LexiconError::MalformedRow { line: 3, .. }), "{err}");
    }

    #[test]
    fn bad_pos_and_role() {
        let src = |m, g| LexiconSources { morph: m, gazetteer: g, clusters: "", verbs: "" };
        assert!(LexiconSet::from_sources(src("la\tle\tXX\t-\t-\n", "")).is_err());
        assert!(LexiconSet::from_sources(src("", "en\tgsp\tfoo\n")).is_err());
        assert!(LexiconSet::from_sources(src("", "en\tgsp\t-\thuge\n")).is_err());
    }

    #[test]
    fn missing_file() {
        let p = Path::new("/nonexistent/morph.tsv");
        let err = load_lexicons(p, p, p, p).unwrap_err();
        assert!(matches!(err, LexiconError::FileMissing(_)));
    }

    #[test]
    fn ambiguous_form_returns_all_analyses() {
        let entries = lex().lookup_morph("la");
        let pos: BTreeSet<Pos> = entries.iter().map(|e| e.pos).collect();
        assert_eq!(pos, [Pos::Det, Pos::Pron].into_iter().collect());
    }

    #[test]
    fn fallback_analyses() {
        let l = lex();
        assert_eq!(l.lookup_morph("Zxqv")[0].pos, Pos::Propn);
        assert_eq!(l.lookup_morph("zxqv")[0].pos, Pos::Unk);
        assert_eq!(l.lookup_morph(",")[0].pos, Pos::Punc);
        assert_eq!(l.lookup_morph("«")[0].pos, Pos::Punc);
    }

    #[test]
    fn lowercase_fallback() {
        let entries = lex().lookup_morph("La");
        assert_eq!(entries.len(), 2);
        assert!(entries.iter().all(|e| e.form == "la"));
    }

    #[test]
    fn known_forms_never_fall_back() {
        let l = lex();
        for form in ["la", "France", "signé"] {
            assert!(l.lookup_morph(form).iter().all(|e| e.lemma != form || e.pos != Pos::Unk));
            assert!(l.knows_form(form));
        }
        assert_eq!(l.chunk_pos("signé"), Pos::Verb);
        assert_eq!(l.chunk_pos("la"), Pos::Det);
    }

    #[test]
    fn longest_match_wins() {
        let s = &tokenize("Radio France International")[0];
        let m = lex().match_gazetteer(s);
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].first_token, m[0].last_token), (0, 2));
        assert_eq!(m[0].category, "org");
    }

    #[test]
    fn trigger_and_name_both_match() {
        let s = &tokenize("en France")[0];
        let m = lex().match_gazetteer(s);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].trigger_role, Some(TriggerRole::LocPrep));
        assert_eq!((m[1].first_token, m[1].category.as_str()), (1, "gsp"));
        assert_eq!(m[1].granularity, Some(Granularity::Country));
    }

    #[test]
    fn capitalised_trigger_matches() {
        let s = &tokenize("En France")[0];
        assert_eq!(lex().match_gazetteer(s).len(), 2);
    }

    #[test]
    fn no_match() {
        let s = &tokenize("il pleut")[0];
        assert!(lex().match_gazetteer(s).is_empty());
    }

    #[test]
    fn clusters() {
        let l = lex();
        assert_eq!(l.lookup_cluster("dire"), ["communication".to_string()].into_iter().collect());
        assert_eq!(l.lookup_cluster("dénoncer").len(), 2);
        assert!(l.lookup_cluster("manger").is_empty());
        assert!(l.in_cluster_label("dire", "communication"));
    }

    #[test]
    fn verb_frames() {
        let l = lex();
        let dire = l.lookup_verb_frame("dire").unwrap();
        assert_eq!(dire.subject_restriction, SubjectRestriction::Human);
        assert_eq!(dire.verb_class.as_deref(), Some("communication"));
        assert_eq!(l.lookup_verb_frame("pleuvoir").unwrap().subject_restriction, SubjectRestriction::Any);
        assert!(l.lookup_verb_frame("manger").is_none());
    }

    #[test]
    fn conflicting_verb_frame() {
        let err = LexiconSet::from_sources(LexiconSources {
            morph: "",
            gazetteer: "",
            clusters: "",
            verbs: "dire\thuman\t-\ndire\tany\t-\n",
        })
        .unwrap_err();
        assert!(matches!(err, LexiconError::MalformedRow { line: 2, .. }));
    }

    #[test]
    fn builtin_loads() {
        let l = LexiconSet::builtin();
        assert!(l.morph_entry_count() > 150);
        let dire = l.lookup_verb_frame("dire").unwrap();
        assert_eq!(dire.subject_restriction, SubjectRestriction::Human);
        assert_eq!(dire.verb_class.as_deref(), Some("communication"));
        assert_eq!(l.lookup_cluster("dire"), ["communication".to_string()].into_iter().collect());
        let la: BTreeSet<Pos> = l.lookup_morph("la").iter().map(|e| e.pos).collect();
        assert!(la.contains(&Pos::Det) && la.contains(&Pos::Pron));
    }
}
