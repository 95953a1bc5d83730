//! Line-based rules file.
//!
//! ```text
//! #rules	alpha=0.05	min_support=3	max_order=2	min_dp=0.6
//! #config	radius=5
//! #ruleset	gsp
//! gsp	LEMMA:signer:right	org	1.2e-9	0.9090909090909091	11
//! ```
//!
//! The header carries the thresholds; `#config` lines echo the settings the
//! rules were trained with; `#ruleset` lines declare a main type, so a set
//! with no rules survives a round trip. Rule columns are main type,
//! `&`-joined features, target subtype, probability level, discriminative
//! power and support. Floats are written in their shortest exact form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{InductionParams, Rule, RuleSet};
use crate::features::FeatureId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RulesFileError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("missing `#rules` header")]
    MissingHeader,
}

/// Everything a rules file holds.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBook {
    pub params: InductionParams,
    /// Training settings echoed for provenance.
    pub config: BTreeMap<String, String>,
    pub sets: Vec<RuleSet>,
}

impl RuleBook {
    pub fn new(params: InductionParams, sets: Vec<RuleSet>) -> Self {
        Self {
            params,
            config: BTreeMap::new(),
            sets,
        }
    }

    pub fn get(&self, main_type: &str) -> Option<&RuleSet> {
        self.sets.iter().find(|s| s.main_type == main_type)
    }

    pub fn rule_count(&self) -> usize {
        self.sets.iter().map(RuleSet::len).sum()
    }

    pub fn serialize(&self) -> String {
        let p = &self.params;
        let mut out = format!(
            "#rules\talpha={:?}\tmin_support={}\tmax_order={}\tmin_dp={:?}\n",
            p.alpha, p.min_support, p.max_order, p.min_dp
        );
        for (k, v) in &self.config {
            let _ = writeln!(out, "#config\t{k}={v}");
        }
        for set in &self.sets {
            let _ = writeln!(out, "#ruleset\t{}", set.main_type);
            for r in &set.rules {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{:?}\t{:?}\t{}",
                    set.main_type,
                    r.conjunction_text(),
                    r.target,
                    r.p_level,
                    r.disc_power,
                    r.support
                );
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, RulesFileError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty());
        let (first, header) = lines.next().ok_or(RulesFileError::MissingHeader)?;
        let params = parse_header(first, header)?;
        let mut book = RuleBook::new(params, Vec::new());

        for (line, raw) in lines {
            let bad = |reason: String| RulesFileError::Malformed { line, reason };
            let fields: Vec<&str> = raw.split('\t').collect();
            match fields[0] {
                "#config" => {
                    let (k, v) = fields
                        .get(1)
                        .and_then(|kv| kv.split_once('='))
                        .filter(|_| fields.len() == 2)
                        .ok_or_else(|| bad("expected `#config<TAB>key=value`".into()))?;
                    book.config.insert(k.to_string(), v.to_string());
                }
                "#ruleset" => {
                    let main = match fields.as_slice() {
                        [_, main] if !main.is_empty() => *main,
                        _ => return Err(bad("expected `#ruleset<TAB>main_type`".into())),
                    };
                    if book.get(main).is_some() {
                        return Err(bad(format!("rule set `{main}` declared twice")));
                    }
                    book.sets.push(RuleSet::new(main, params));
                }
                c if c.starts_with('#') => {}
                _ => {
                    let (main, rule) = parse_rule(&fields).map_err(bad)?;
                    if book.get(main).is_none() {
                        book.sets.push(RuleSet::new(main, params));
                    }
                    let set = book.sets.iter_mut().find(|s| s.main_type == main).expect("inserted above");
                    set.rules.push(rule);
                    set.check_invariants().map_err(bad)?;
                }
            }
        }
        Ok(book)
    }
}

fn parse_header(line: usize, header: &str) -> Result<InductionParams, RulesFileError> {
    let bad = |reason: String| RulesFileError::Malformed { line, reason };
    let mut fields = header.split('\t');
    if fields.next() != Some("#rules") {
        return Err(RulesFileError::MissingHeader);
    }
    let mut values = BTreeMap::new();
    for field in fields {
        let (k, v) = field.split_once('=').ok_or_else(|| bad(format!("bad header field `{field}`")))?;
        values.insert(k, v);
    }
    let field = |key: &str| -> Result<&str, RulesFileError> {
        values.get(key).copied().ok_or_else(|| bad(format!("header lacks `{key}`")))
    };
    fn num<T: std::str::FromStr>(key: &str, v: &str, line: usize) -> Result<T, RulesFileError> {
        v.parse().map_err(|_| RulesFileError::Malformed {
            line,
            reason: format!("bad value `{v}` for `{key}`"),
        })
    }
    let params = InductionParams {
        alpha: num("alpha", field("alpha")?, line)?,
        min_support: num("min_support", field("min_support")?, line)?,
        max_order: num("max_order", field("max_order")?, line)?,
        min_dp: num("min_dp", field("min_dp")?, line)?,
    };
    params.validate().map_err(|e| bad(e.to_string()))?;
    Ok(params)
}

fn parse_rule<'a>(fields: &[&'a str]) -> Result<(&'a str, Rule), String> {
    let [main, conj, target, p, dp, support] = fields else {
        return Err(format!("expected 6 columns, found {}", fields.len()));
    };
    if main.is_empty() || target.is_empty() || conj.is_empty() {
        return Err("empty main type, target or conjunction".into());
    }
    let features = conj
        .split('&')
        .map(|f| f.parse::<FeatureId>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let unit = |name: &str, v: &str| -> Result<f64, String> {
        let x: f64 = v.parse().map_err(|_| format!("bad {name} `{v}`"))?;
        if (0.0..=1.0).contains(&x) {
            Ok(x)
        } else {
            Err(format!("{name} `{v}` is not in [0, 1]"))
        }
    };
    let rule = Rule::new(
        features.iter().cloned(),
        target,
        unit("p_level", p)?,
        unit("disc_power", dp)?,
        support.parse().map_err(|_| format!("bad support `{support}`"))?,
    );
    if rule.features.len() != features.len() {
        return Err("conjunction repeats a feature".into());
    }
    if rule.features != features {
        return Err("conjunction features are not in canonical order".into());
    }
    Ok((main, rule))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn book() -> RuleBook {
        let params = InductionParams::default();
        let mut gsp = RuleSet::new("gsp", params);
        gsp.rules.push(Rule::new(
            ["LEMMA:signer:right".parse().unwrap(), "SUBJ_OF_HUMAN_VERB".parse().unwrap()],
            "org",
            1.0695e-9,
            10.0 / 11.0,
            11,
        ));
        gsp.rules.push(Rule::new(["TRIG:loc_prep:left".parse().unwrap()], "pers", 0.01, 0.6, 5));
        let mut book = RuleBook::new(params, vec![gsp, RuleSet::new("org", params)]);
        book.config.insert("radius".into(), "5".into());
        book
    }

    #[test]
    fn round_trip() {
        let b = book();
        let text = b.serialize();
        assert!(text.starts_with("#rules\talpha=0.05\tmin_support=3\tmax_order=2\tmin_dp=0.6\n"));
        assert!(text.contains("gsp\tLEMMA:signer:right&SUBJ_OF_HUMAN_VERB\torg\t1.0695e-9\t0.9090909090909091\t11\n"));
        let back = RuleBook::parse(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.serialize(), text);
    }

    #[test]
    fn errors() {
        assert_eq!(RuleBook::parse("").unwrap_err(), RulesFileError::MissingHeader);
        assert_eq!(RuleBook::parse("gsp\tA\torg\t0\t1\t3").unwrap_err(), RulesFileError::MissingHeader);
        let header = "#rules\talpha=0.05\tmin_support=3\tmax_order=2\tmin_dp=0.6\n";
        for body in [
            "gsp\tLEMMA:x\torg\t0.1\t0.5",
            "gsp\tNOPE:x\torg\t0.1\t0.5\t3",
            "gsp\tLEMMA:x\torg\t1.5\t0.5\t3",
            "gsp\tLEMMA:x\torg\t0.1\t0.5\tmany",
            "gsp\tLEMMA:y&LEMMA:x\torg\t0.1\t0.5\t3",
            "gsp\tLEMMA:x\torg\t0.1\t0.5\t3\ngsp\tLEMMA:y\torg\t0.1\t0.9\t3",
            "#ruleset\tgsp\n#ruleset\tgsp",
        ] {
            let err = RuleBook::parse(&format!("{header}{body}")).unwrap_err();
            assert!(matches!(err, RulesFileError::Malformed { .. }), "{body}: {err:?}");
        }
        assert!(RuleBook::parse("#rules\talpha=2\tmin_support=3\tmax_order=2\tmin_dp=0.6").is_err());
        assert!(RuleBook::parse("#rules\talpha=0.1").is_err());
    }
}
