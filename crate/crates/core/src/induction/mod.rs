//! Rule induction from annotated feature vectors.
//!
//! For a feature and a reading (subtype), let `f` be the number of vectors of
//! that reading where the feature is active, `t` the number of vectors of the
//! reading, `F` the number of vectors where the feature is active and `T` the
//! number of vectors. The specificity of the feature for the reading is the
//! hypergeometric tail `P(X ≥ f)` when the feature is over-represented
//! (`f/t ≥ F/T`) and `P(X ≤ f)` otherwise, with `X ~ H(T, F, t)`. Small values
//! mark characteristic features.
//!
//! [`induce_rules`] keeps the features that are significantly
//! over-represented for a non-default reading, combines them into
//! conjunctions, and greedily picks the most discriminative conjunctions
//! until every non-default training vector is covered.

mod hypergeom;
mod rulefile;

pub use hypergeom::{hypergeom_tail, HypergeometricDist};
pub use rulefile::{RuleBook, RulesFileError};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::corpus::TagSchema;
use crate::features::{FeatureId, FeatureVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InductionError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("vector for span {span} in `{doc_id}` has no gold subtype")]
    MissingGold { doc_id: String, span: String },
    #[error("the conjunction is never active")]
    ZeroSupport,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Over,
    Under,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Over => "over",
            Direction::Under => "under",
        })
    }
}

/// Contingency counts of one feature against one category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureStats {
    pub feature: FeatureId,
    pub category: String,
    /// Vectors of the category where the feature is active (`f`).
    pub hits: u64,
    /// Vectors of the category (`t`).
    pub category_size: u64,
    /// Vectors where the feature is active (`F`).
    pub feature_total: u64,
    /// All vectors (`T`).
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecificityScore {
    pub feature: FeatureId,
    pub category: String,
    pub direction: Direction,
    pub p_level: f64,
}

/// One row per (feature, category) pair over every feature and every gold
/// category seen, sorted by feature then category.
pub fn count_feature_stats(vectors: &[FeatureVector]) -> Result<Vec<FeatureStats>, InductionError> {
    let mut categories: BTreeMap<&str, u64> = BTreeMap::new();
    let mut features: BTreeMap<&FeatureId, BTreeMap<&str, u64>> = BTreeMap::new();
    for v in vectors {
        let gold = gold_of(v)?;
        *categories.entry(gold).or_default() += 1;
        for f in &v.active {
            *features.entry(f).or_default().entry(gold).or_default() += 1;
        }
    }
    let total = vectors.len() as u64;
    let mut rows = Vec::new();
    for (feature, by_cat) in features {
        let feature_total = by_cat.values().sum();
        for (&category, &category_size) in &categories {
            rows.push(FeatureStats {
                feature: feature.clone(),
                category: category.to_string(),
                hits: by_cat.get(category).copied().unwrap_or(0),
                category_size,
                feature_total,
                total,
            });
        }
    }
    Ok(rows)
}

fn gold_of(v: &FeatureVector) -> Result<&str, InductionError> {
    v.gold_subtype.as_deref().ok_or_else(|| InductionError::MissingGold {
        doc_id: v.doc_id.clone(),
        span: v.span.to_string(),
    })
}

/// Direction and probability level of a feature for a category.
pub fn specificity_score(s: &FeatureStats) -> Result<SpecificityScore, InductionError> {
    let over = s.hits as u128 * s.total as u128 >= s.feature_total as u128 * s.category_size as u128;
    let direction = if over { Direction::Over } else { Direction::Under };
    let p_level = hypergeom_tail(s.hits, s.feature_total, s.category_size, s.total, direction)?;
    Ok(SpecificityScore {
        feature: s.feature.clone(),
        category: s.category.clone(),
        direction,
        p_level,
    })
}

/// Share of the vectors where the whole conjunction is active whose gold
/// subtype is `target`, with the number of such vectors.
pub fn discriminative_power(conjunction: &[FeatureId], target: &str, vectors: &[FeatureVector]) -> Result<(f64, usize), InductionError> {
    let mut support = 0;
    let mut hits = 0;
    for v in vectors.iter().filter(|v| v.has_all(conjunction)) {
        support += 1;
        if v.gold_subtype.as_deref() == Some(target) {
            hits += 1;
        }
    }
    if support == 0 {
        return Err(InductionError::ZeroSupport);
    }
    Ok((ratio(hits, support), support))
}

fn ratio(hits: usize, support: usize) -> f64 {
    hits as f64 / support as f64
}

/// Thresholds of rule induction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InductionParams {
    pub alpha: f64,
    pub min_support: usize,
    pub max_order: usize,
    pub min_dp: f64,
}

impl Default for InductionParams {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            min_support: 3,
            max_order: 2,
            min_dp: 0.6,
        }
    }
}

impl InductionParams {
    pub fn validate(&self) -> Result<(), InductionError> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(InductionError::InvalidParam(format!("alpha={} is not in [0, 1]", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.min_dp) {
            return Err(InductionError::InvalidParam(format!("min_dp={} is not in [0, 1]", self.min_dp)));
        }
        if self.min_support == 0 {
            return Err(InductionError::InvalidParam("min_support must be at least 1".into()));
        }
        if self.max_order == 0 {
            return Err(InductionError::InvalidParam("max_order must be at least 1".into()));
        }
        Ok(())
    }
}

/// A conjunction of features predicting a subtype.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    /// Sorted, without duplicates.
    pub features: Vec<FeatureId>,
    pub target: String,
    pub p_level: f64,
    pub disc_power: f64,
    pub support: usize,
}

impl Rule {
    pub fn new(features: impl IntoIterator<Item = FeatureId>, target: &str, p_level: f64, disc_power: f64, support: usize) -> Self {
        let features: BTreeSet<FeatureId> = features.into_iter().collect();
        Self {
            features: features.into_iter().collect(),
            target: target.to_string(),
            p_level,
            disc_power,
            support,
        }
    }

    /// Features joined by `&`.
    pub fn conjunction_text(&self) -> String {
        conjunction_text(&self.features)
    }

    pub fn fires_on(&self, vector: &FeatureVector) -> bool {
        vector.has_all(&self.features)
    }

    /// The order rules are ranked in: higher discriminative power first,
    /// then lower probability level, then conjunction text, then target.
    pub fn rank_cmp(&self, other: &Rule) -> Ordering {
        rank(self.disc_power, self.p_level, &self.conjunction_text(), &self.target).cmp_with(&rank(
            other.disc_power,
            other.p_level,
            &other.conjunction_text(),
            &other.target,
        ))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} (p={:.3e}, dp={:.4}, support={})",
            self.conjunction_text(),
            self.target,
            self.p_level,
            self.disc_power,
            self.support
        )
    }
}

pub(crate) fn conjunction_text(features: &[FeatureId]) -> String {
    features.iter().map(ToString::to_string).collect::<Vec<_>>().join("&")
}

struct RankKey<'a> {
    dp: f64,
    p: f64,
    text: &'a str,
    target: &'a str,
}

fn rank<'a>(dp: f64, p: f64, text: &'a str, target: &'a str) -> RankKey<'a> {
    RankKey { dp, p, text, target }
}

impl RankKey<'_> {
    fn cmp_with(&self, other: &RankKey<'_>) -> Ordering {
        other
            .dp
            .total_cmp(&self.dp)
            .then(self.p.total_cmp(&other.p))
            .then_with(|| self.text.cmp(other.text))
            .then_with(|| self.target.cmp(other.target))
    }
}

/// Ranked rules for one main type.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    pub main_type: String,
    pub rules: Vec<Rule>,
    pub params: InductionParams,
}

impl RuleSet {
    pub fn new(main_type: &str, params: InductionParams) -> Self {
        Self {
            main_type: main_type.to_string(),
            rules: Vec::new(),
            params,
        }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// The first rule, in rank order, whose conjunction is active.
    pub fn first_firing(&self, vector: &FeatureVector) -> Option<&Rule> {
        self.rules.iter().find(|r| r.fires_on(vector))
    }

    pub fn targets(&self) -> BTreeSet<&str> {
        self.rules.iter().map(|r| r.target.as_str()).collect()
    }

    /// Checks the ranking order and the absence of duplicate rules.
    pub fn check_invariants(&self) -> Result<(), String> {
        for pair in self.rules.windows(2) {
            if pair[0].rank_cmp(&pair[1]) != Ordering::Less {
                return Err(format!("rules out of order: `{}` then `{}`", pair[0], pair[1]));
            }
        }
        let mut seen = BTreeSet::new();
        for r in &self.rules {
            if !seen.insert((r.conjunction_text(), r.target.clone())) {
                return Err(format!("duplicate rule `{r}`"));
            }
        }
        Ok(())
    }
}

/// Bit set over training vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_in_place(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn or_in_place(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn intersects(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

struct Candidate {
    features: Vec<FeatureId>,
    text: String,
    target: String,
    p_level: f64,
    disc_power: f64,
    support: usize,
    cover: Bits,
}

/// Induces one [`RuleSet`] per main type that has subtypes in `schema` and
/// occurs in `vectors`, in schema order.
pub fn induce_rules(vectors: &[FeatureVector], schema: &TagSchema, params: InductionParams) -> Result<Vec<RuleSet>, InductionError> {
    params.validate()?;
    let mut out = Vec::new();
    for main in schema.main_types() {
        if !schema.has_subtypes(main) {
            continue;
        }
        let group: Vec<FeatureVector> = vectors.iter().filter(|v| v.main_type() == main).cloned().collect();
        if group.is_empty() {
            continue;
        }
        out.push(induce_for_main(main, &group, schema, params)?);
    }
    Ok(out)
}

/// Induces the rules of one main type from its vectors.
pub fn induce_for_main(main: &str, vectors: &[FeatureVector], schema: &TagSchema, params: InductionParams) -> Result<RuleSet, InductionError> {
    params.validate()?;
    let mut set = RuleSet::new(main, params);
    if vectors.is_empty() {
        return Ok(set);
    }
    let default = schema.default_subtype(main);
    let n = vectors.len();

    let mut category_bits: BTreeMap<String, Bits> = BTreeMap::new();
    for (i, v) in vectors.iter().enumerate() {
        category_bits.entry(gold_of(v)?.to_string()).or_insert_with(|| Bits::new(n)).set(i);
    }
    let targets: Vec<&String> = category_bits.keys().filter(|c| Some(c.as_str()) != default).collect();
    if targets.is_empty() {
        return Ok(set);
    }

    let mut feature_bits: BTreeMap<&FeatureId, Bits> = BTreeMap::new();
    for (i, v) in vectors.iter().enumerate() {
        for f in &v.active {
            feature_bits.entry(f).or_insert_with(|| Bits::new(n)).set(i);
        }
    }

    // Members: significantly over-represented for some non-default reading.
    let total = n as u64;
    let mut members: Vec<(&FeatureId, &Bits)> = Vec::new();
    for (&feature, bits) in &feature_bits {
        let feature_total = bits.count() as u64;
        let mut keep = false;
        for target in &targets {
            let cat = &category_bits[*target];
            let stats = FeatureStats {
                feature: feature.clone(),
                category: target.to_string(),
                hits: bits.and(cat).count() as u64,
                category_size: cat.count() as u64,
                feature_total,
                total,
            };
            let score = specificity_score(&stats)?;
            if score.direction == Direction::Over && stats.hits > 0 && score.p_level <= params.alpha {
                keep = true;
                break;
            }
        }
        if keep {
            members.push((feature, bits));
        }
    }

    let mut candidates = Vec::new();
    let mut stack: Vec<(usize, Vec<&FeatureId>, Bits)> = Vec::new();
    for (i, (f, bits)) in members.iter().enumerate() {
        stack.push((i, vec![*f], (*bits).clone()));
    }
    while let Some((last, conj, bits)) = stack.pop() {
        let support = bits.count();
        if support < params.min_support {
            continue;
        }
        let features: Vec<FeatureId> = conj.iter().map(|f| (*f).clone()).collect();
        for target in &targets {
            let cat = &category_bits[*target];
            let cover = bits.and(cat);
            let hits = cover.count();
            let stats = FeatureStats {
                feature: features[0].clone(),
                category: target.to_string(),
                hits: hits as u64,
                category_size: cat.count() as u64,
                feature_total: support as u64,
                total,
            };
            let score = specificity_score(&stats)?;
            let disc_power = ratio(hits, support);
            if score.direction == Direction::Over && score.p_level <= params.alpha && disc_power >= params.min_dp && hits > 0 {
                candidates.push(Candidate {
                    text: conjunction_text(&features),
                    features: features.clone(),
                    target: target.to_string(),
                    p_level: score.p_level,
                    disc_power,
                    support,
                    cover,
                });
            }
        }
        if conj.len() < params.max_order {
            for (j, (f, other)) in members.iter().enumerate().skip(last + 1) {
                let mut next = conj.clone();
                next.push(*f);
                stack.push((j, next, bits.and(other)));
            }
        }
    }

    candidates.sort_by(|a, b| {
        rank(a.disc_power, a.p_level, &a.text, &a.target).cmp_with(&rank(b.disc_power, b.p_level, &b.text, &b.target))
    });

    let mut uncovered = Bits::new(n);
    for target in &targets {
        uncovered.or_in_place(&category_bits[*target]);
    }
    // Rank order is fixed and the uncovered set only shrinks, so one pass
    // over the ranked candidates is the greedy cover.
    for c in candidates {
        if uncovered.is_empty() {
            break;
        }
        if c.cover.intersects(&uncovered) {
            uncovered.and_not_in_place(&c.cover);
            set.rules.push(Rule {
                features: c.features,
                target: c.target,
                p_level: c.p_level,
                disc_power: c.disc_power,
                support: c.support,
            });
        }
    }
    Ok(set)
}
