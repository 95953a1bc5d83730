//! Bundled toy resources, compiled into the library.

pub const SCHEMA: &str = include_str!("../data/schema.txt");
pub const MORPH: &str = include_str!("../data/morph.tsv");
pub const GAZETTEER: &str = include_str!("../data/gazetteer.tsv");
pub const CLUSTERS: &str = include_str!("../data/clusters.tsv");
pub const VERBS: &str = include_str!("../data/verbs.tsv");
pub const PATTERNS: &str = include_str!("../data/patterns.tsv");
pub const TEMPLATES: &str = include_str!("../data/templates.tsv");
