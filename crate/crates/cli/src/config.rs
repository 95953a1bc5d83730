//! `key = value` configuration and the resources it names.
//!
//! Paths are resolved against the directory of the config file. Any
//! resource left unset falls back to the bundled one.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use metonymy::chunker::{default_patterns, parse_patterns, ChunkPattern};
use metonymy::corpus::TagSchema;
use metonymy::features::ContextWindow;
use metonymy::induction::InductionParams;
use metonymy::lexicon::{LexiconSet, LexiconSources};
use metonymy::resources;

use crate::error::CliError;
use crate::io::read_text;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub schema: Option<PathBuf>,
    pub morph: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub clusters: Option<PathBuf>,
    pub verbs: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub radius: usize,
    pub sentence_bounded: bool,
    pub params: InductionParams,
    /// Overrides the seed of synthetic corpus specs.
    pub seed: Option<u64>,
    /// Tagging threads; 0 means one per available core.
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        let window = ContextWindow::default();
        Self {
            schema: None,
            morph: None,
            gazetteer: None,
            clusters: None,
            verbs: None,
            patterns: None,
            rules: None,
            radius: window.radius(),
            sentence_bounded: window.sentence_bounded,
            params: InductionParams::default(),
            seed: None,
            workers: 0,
        }
    }
}

impl Config {
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| CliError::Usage(format!("config line {}: {reason}", i + 1));
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| bad("expected `key = value`".into()))?;
            fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
                value.parse().map_err(|_| format!("bad value `{value}` for `{key}`"))
            }
            let path = || Some(base.join(value));
            match key {
                "schema" => cfg.schema = path(),
                "morph" => cfg.morph = path(),
                "gazetteer" => cfg.gazetteer = path(),
                "clusters" => cfg.clusters = path(),
                "verbs" => cfg.verbs = path(),
                "patterns" => cfg.patterns = path(),
                "rules" => cfg.rules = path(),
                "radius" => cfg.radius = num(key, value).map_err(bad)?,
                "sentence_bounded" => cfg.sentence_bounded = num(key, value).map_err(bad)?,
                "alpha" => cfg.params.alpha = num(key, value).map_err(bad)?,
                "min_support" => cfg.params.min_support = num(key, value).map_err(bad)?,
                "max_order" => cfg.params.max_order = num(key, value).map_err(bad)?,
                "min_dp" => cfg.params.min_dp = num(key, value).map_err(bad)?,
                "seed" => cfg.seed = Some(num(key, value).map_err(bad)?),
                "workers" => cfg.workers = num(key, value).map_err(bad)?,
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        cfg.params.validate().map_err(|e| CliError::Usage(format!("config: {e}")))?;
        cfg.window()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = read_text(p)?;
                Config::parse(&text, p.parent().unwrap_or(Path::new("")))
            }
        }
    }

    pub fn window(&self) -> Result<ContextWindow, CliError> {
        ContextWindow::new(self.radius, self.sentence_bounded).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    /// Settings written into a rules file's `#config` lines.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let name = |p: &Option<PathBuf>| {
            p.as_ref()
                .and_then(|p| p.file_name())
                .map_or_else(|| "builtin".to_string(), |n| n.to_string_lossy().into_owned())
        };
        let mut echo = BTreeMap::from([
            ("schema".to_string(), name(&self.schema)),
            ("morph".to_string(), name(&self.morph)),
            ("gazetteer".to_string(), name(&self.gazetteer)),
            ("clusters".to_string(), name(&self.clusters)),
            ("verbs".to_string(), name(&self.verbs)),
            ("patterns".to_string(), name(&self.patterns)),
            ("radius".to_string(), self.radius.to_string()),
            ("sentence_bounded".to_string(), self.sentence_bounded.to_string()),
        ]);
        if let Some(seed) = self.seed {
            echo.insert("seed".to_string(), seed.to_string());
        }
        echo
    }

    pub fn resources(&self) -> Result<Resources, CliError> {
        let text = |p: &Option<PathBuf>, builtin: &str| -> Result<(String, String), CliError> {
            match p {
                Some(p) => Ok((read_text(p)?, p.display().to_string())),
                None => Ok((builtin.to_string(), "builtin".to_string())),
            }
        };
        let schema = match &self.schema {
            Some(p) => TagSchema::parse(&read_text(p)?).map_err(|e| CliError::invalid_in(p, e))?,
            None => TagSchema::builtin(),
        };
        let patterns = match &self.patterns {
            Some(p) => parse_patterns(&read_text(p)?).map_err(|e| CliError::invalid_in(p, e))?,
            None => default_patterns(),
        };
        let lex = if [&self.morph, &self.gazetteer, &self.clusters, &self.verbs].iter().all(|p| p.is_none()) {
            LexiconSet::builtin()
        } else {
            let (morph, morph_name) = text(&self.morph, resources::MORPH)?;
            let (gazetteer, gazetteer_name) = text(&self.gazetteer, resources::GAZETTEER)?;
            let (clusters, clusters_name) = text(&self.clusters, resources::CLUSTERS)?;
            let (verbs, verbs_name) = text(&self.verbs, resources::VERBS)?;
            LexiconSet::from_named_sources(
                LexiconSources {
                    morph: &morph,
                    gazetteer: &gazetteer,
                    clusters: &clusters,
                    verbs: &verbs,
                },
                [&morph_name, &gazetteer_name, &clusters_name, &verbs_name],
            )
            .map_err(|e| CliError::Invalid(e.to_string()))?
        };
        Ok(Resources {
            schema,
            patterns,
            lex,
            window: self.window()?,
        })
    }
}

pub struct Resources {
    pub schema: TagSchema,
    pub patterns: Vec<ChunkPattern>,
    pub lex: LexiconSet,
    pub window: ContextWindow,
}
