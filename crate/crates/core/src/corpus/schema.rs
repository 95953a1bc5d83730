use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Errors raised while reading a schema file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("main type `{0}` has subtypes but no default subtype")]
    MissingDefault(String),
}

/// A declared merge of several subtypes into one label, e.g. `gsp.pers` and
/// `gsp.org` into `gsp.hum`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeDecl {
    pub main_type: String,
    pub target: String,
    pub sources: BTreeSet<String>,
}

impl MergeDecl {
    pub fn label(&self) -> String {
        format!("{}.{}", self.main_type, self.target)
    }
}

/// The tag inventory: main types, their subtypes (in declaration order), the
/// default subtype for each main type that has subtypes, and the focalisation
/// label attached to each `(main, sub)` reading.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TagSchema {
    main_types: Vec<String>,
    subtypes: BTreeMap<String, Vec<String>>,
    default_subtype: BTreeMap<String, String>,
    focalisation: BTreeMap<(String, String), String>,
    main_focalisation: BTreeMap<String, String>,
    merges: Vec<MergeDecl>,
}

impl TagSchema {
    /// Parses the line-based schema format:
    ///
    /// ```text
    /// main <label> [<focalisation>]
    /// sub <main> <sub> <focalisation>
    /// default <main> <sub>
    /// merge <main> <target> <source>...
    /// ```
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let mut schema = TagSchema::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let bad = |reason: &str| SchemaError::Malformed {
                line,
                reason: reason.to_string(),
            };
            match fields[0] {
                "main" => match fields.len() {
                    2 | 3 => {
                        let label = fields[1];
                        if !is_label(label) {
                            return Err(bad("invalid label"));
                        }
                        if !schema.main_types.iter().any(|m| m == label) {
                            schema.main_types.push(label.to_string());
                        }
                        if let Some(focus) = fields.get(2) {
                            schema
                                .main_focalisation
                                .insert(label.to_string(), focus.to_string());
                        }
                    }
                    _ => return Err(bad("expected `main <label> [<focalisation>]`")),
                },
                "sub" => {
                    if fields.len() != 4 {
                        return Err(bad("expected `sub <main> <sub> <focalisation>`"));
                    }
                    let (main, sub, focus) = (fields[1], fields[2], fields[3]);
                    if !schema.has_main(main) {
                        return Err(bad("subtype declared before its main type"));
                    }
                    if !is_label(sub) {
                        return Err(bad("invalid label"));
                    }
                    let subs = schema.subtypes.entry(main.to_string()).or_default();
                    if !subs.iter().any(|s| s == sub) {
                        subs.push(sub.to_string());
                    }
                    schema
                        .focalisation
                        .insert((main.to_string(), sub.to_string()), focus.to_string());
                }
                "default" => {
                    if fields.len() != 3 {
                        return Err(bad("expected `default <main> <sub>`"));
                    }
                    if !schema.has_subtype(fields[1], fields[2]) {
                        return Err(bad("default subtype is not declared"));
                    }
                    schema
                        .default_subtype
                        .insert(fields[1].to_string(), fields[2].to_string());
                }
                "merge" => {
                    if fields.len() < 4 {
                        return Err(bad("expected `merge <main> <target> <source>...`"));
                    }
                    let main = fields[1];
                    let target = fields[2];
                    let sources: BTreeSet<String> =
                        fields[3..].iter().map(|s| s.to_string()).collect();
                    if !schema.has_subtype(main, target)
                        || sources.iter().any(|s| !schema.has_subtype(main, s))
                    {
                        return Err(bad("merge mentions an undeclared subtype"));
                    }
                    if sources.contains(target) {
                        return Err(bad("merge target cannot also be a source"));
                    }
                    schema.merges.push(MergeDecl {
                        main_type: main.to_string(),
                        target: target.to_string(),
                        sources,
                    });
                }
                other => return Err(bad(&format!("unknown directive `{other}`"))),
            }
        }
        for main in schema.subtypes.keys() {
            if !schema.default_subtype.contains_key(main) {
                return Err(SchemaError::MissingDefault(main.clone()));
            }
        }
        Ok(schema)
    }

    /// The bundled schema: the eight main categories plus the `gsp` family
    /// (`loc`, `pers`, `org`, merged `hum`) and the `org` readings used by the
    /// `ONU` examples.
    pub fn builtin() -> Self {
        Self::parse(crate::resources::SCHEMA).expect("bundled schema is valid")
    }

    pub fn main_types(&self) -> &[String] {
        &self.main_types
    }

    pub fn has_main(&self, main: &str) -> bool {
        self.main_types.iter().any(|m| m == main)
    }

    /// Subtypes of `main` in declaration order; empty when it has none.
    pub fn subtypes(&self, main: &str) -> &[String] {
        self.subtypes.get(main).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_subtypes(&self, main: &str) -> bool {
        !self.subtypes(main).is_empty()
    }

    pub fn has_subtype(&self, main: &str, sub: &str) -> bool {
        self.subtypes(main).iter().any(|s| s == sub)
    }

    pub fn default_subtype(&self, main: &str) -> Option<&str> {
        self.default_subtype.get(main).map(String::as_str)
    }

    /// Focalisation label of a reading. Main types without subtypes use their
    /// optional `main` focalisation, falling back to the label itself.
    pub fn focalisation(&self, main: &str, sub: Option<&str>) -> Option<&str> {
        match sub {
            Some(sub) => self
                .focalisation
                .get(&(main.to_string(), sub.to_string()))
                .map(String::as_str),
            None if self.has_main(main) => Some(
                self.main_focalisation
                    .get(main)
                    .map(String::as_str)
                    .unwrap_or_else(|| {
                        self.main_types
                            .iter()
                            .find(|m| *m == main)
                            .map(String::as_str)
                            .expect("checked above")
                    }),
            ),
            None => None,
        }
    }

    pub fn merges(&self) -> &[MergeDecl] {
        &self.merges
    }

    /// Looks up a merge by its dotted target label (`gsp.hum`).
    pub fn merge_for(&self, label: &str) -> Option<&MergeDecl> {
        let (main, sub) = split_label(label);
        let sub = sub?;
        self.merges
            .iter()
            .find(|m| m.main_type == main && m.target == sub)
    }

    /// Checks a dotted label against the schema.
    pub fn accepts(&self, main: &str, sub: Option<&str>) -> bool {
        self.has_main(main) && sub.is_none_or(|s| self.has_subtype(main, s))
    }
}

impl fmt::Display for TagSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for main in &self.main_types {
            match self.main_focalisation.get(main) {
                Some(focus) => writeln!(f, "main {main} {focus}")?,
                None => writeln!(f, "main {main}")?,
            }
        }
        for (main, subs) in &self.subtypes {
            for sub in subs {
                let focus = &self.focalisation[&(main.clone(), sub.clone())];
                writeln!(f, "sub {main} {sub} {focus}")?;
            }
            writeln!(f, "default {main} {}", self.default_subtype[main])?;
        }
        for merge in &self.merges {
            write!(f, "merge {} {}", merge.main_type, merge.target)?;
            for source in &merge.sources {
                write!(f, " {source}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Splits `main.sub` into its parts.
pub fn split_label(label: &str) -> (&str, Option<&str>) {
    match label.split_once('.') {
        Some((main, sub)) => (main, Some(sub)),
        None => (label, None),
    }
}

pub(crate) fn is_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}
