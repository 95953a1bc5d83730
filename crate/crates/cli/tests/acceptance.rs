//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p metonymy-cli --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use metonymy::chunker::default_patterns;
use metonymy::corpus::{parse_corpus, parse_inline, serialize_inline, split_corpus, Corpus, Document, TagSchema};
use metonymy::eval::{align_corpora, evaluation_report, slot_error_rate, EvalOptions, ScoreReport};
use metonymy::features::{extract_features, ContextWindow, FeatureExtractor, FeatureVector};
use metonymy::induction::{
    hypergeom_tail, specificity_score, Direction, FeatureStats, InductionParams, RuleBook,
};
use metonymy::lexicon::LexiconSet;
use metonymy::pipeline::{tag_corpus, train, SpanSource};
use metonymy::synth::{generate, GeneratorSpec, TemplateSet};
use metonymy::tagger::{baseline_subtypes, Tagger};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { name, pass, detail }
}

/// Binomial coefficients up to `max` by Pascal's rule.
fn pascal(max: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let mut row = vec![1.0; n + 1];
        for k in 1..n {
            row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

fn binom_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn hypergeom_exhaustive() -> Outcome {
    const MAX_N: usize = 200;
    let start = Instant::now();
    let c = pascal(MAX_N);
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    let (worst, tuples) = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let c = &c;
                scope.spawn(move || {
                    let mut worst = 0.0f64;
                    let mut tuples = 0u64;
                    for big_n in (0..=MAX_N).filter(|n| n % threads == t) {
                        for big_k in 0..=big_n {
                            for n in 0..=big_n {
                                let lo = (n + big_k).saturating_sub(big_n);
                                let hi = big_k.min(n);
                                let pmf: Vec<f64> = (lo..=hi)
                                    .map(|j| c[big_k][j] * c[big_n - big_k][n - j] / c[big_n][n])
                                    .collect();
                                // below[i] = sum of pmf[..i], above[i] = sum of pmf[i..]
                                let mut below = vec![0.0; pmf.len() + 1];
                                let mut above = vec![0.0; pmf.len() + 1];
                                for i in 0..pmf.len() {
                                    below[i + 1] = below[i] + pmf[i];
                                    above[pmf.len() - 1 - i] = above[pmf.len() - i] + pmf[pmf.len() - 1 - i];
                                }
                                for k in 0..=hi {
                                    let over = above[k.saturating_sub(lo)];
                                    let under = if k < lo { 0.0 } else { below[k - lo + 1] };
                                    let (k64, bk, n64, bn) = (k as u64, big_k as u64, n as u64, big_n as u64);
                                    let got_over = hypergeom_tail(k64, bk, n64, bn, Direction::Over).unwrap();
                                    let got_under = hypergeom_tail(k64, bk, n64, bn, Direction::Under).unwrap();
                                    worst = worst.max((got_over - over).abs()).max((got_under - under).abs());
                                    tuples += 1;
                                }
                            }
                        }
                    }
                    (worst, tuples)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap())
            .fold((0.0f64, 0u64), |(w, n), (w2, n2)| (w.max(w2), n + n2))
    });
    let elapsed = start.elapsed();
    outcome(
        "hypergeometric oracle (N <= 200)",
        worst <= 1e-9 && elapsed < Duration::from_secs(60),
        format!("{tuples} tuples, both tails, max abs error {worst:.2e}, {:.1}s", elapsed.as_secs_f64()),
    )
}

fn specificity_spot_checks() -> Outcome {
    // Over-tail of f=3 hits, t=5 category, F=4 feature, T=20 total.
    let numerator: u128 = (3..=4).map(|j| binom_u128(4, j) * binom_u128(16, 5 - j)).sum();
    let denominator = binom_u128(20, 5);
    let expected = numerator as f64 / denominator as f64;
    let score = specificity_score(&FeatureStats {
        feature: "LEMMA:x".parse().unwrap(),
        category: "org".into(),
        hits: 3,
        category_size: 5,
        feature_total: 4,
        total: 20,
    })
    .unwrap();
    let spot_err = (score.p_level - expected).abs();
    let spot_ok = score.direction == Direction::Over && spot_err <= 1e-9 && numerator == 496 && denominator == 15504;

    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let big_n: u64 = rng.gen_range(1..=5000);
        let big_k = rng.gen_range(0..=big_n);
        let n = rng.gen_range(0..=big_n);
        let hi = big_k.min(n);
        if hi == 0 {
            let over = hypergeom_tail(0, big_k, n, big_n, Direction::Over).unwrap();
            worst = worst.max((over - 1.0).abs());
            continue;
        }
        let k = rng.gen_range(1..=hi);
        let over = hypergeom_tail(k, big_k, n, big_n, Direction::Over).unwrap();
        let under = hypergeom_tail(k - 1, big_k, n, big_n, Direction::Under).unwrap();
        worst = worst.max((over + under - 1.0).abs());
    }
    outcome(
        "specificity spot checks and tail complement",
        spot_ok && worst <= 1e-12,
        format!(
            "P(X>=3) = {:.12} vs {numerator}/{denominator} (err {spot_err:.1e}); complement max error {worst:.1e} over 1000 tuples",
            score.p_level
        ),
    )
}

const WORDS: &[&str] = &[
    "la", "le", "les", "France", "ONU", "a", "signé", "un", "accord", "il", "pleut", "en", "dans", "Paris", "Monsieur", "Dupont",
    "refuse", ",", "et", "amitié", "été", "Nations", "unies", "x", "3", "«", "»", "(", ")",
];

type Spans = Vec<Vec<(usize, usize, String)>>;

fn random_document(rng: &mut ChaCha8Rng, schema: &TagSchema) -> (String, Vec<Vec<String>>, Spans) {
    let mut labels: Vec<String> = Vec::new();
    for main in schema.main_types() {
        labels.push(main.clone());
        for sub in schema.subtypes(main) {
            labels.push(format!("{main}.{sub}"));
        }
    }
    let n_sent = rng.gen_range(1..=6);
    let mut lines = Vec::new();
    let mut all_tokens = Vec::new();
    let mut all_spans = Vec::new();
    for _ in 0..n_sent {
        let len = rng.gen_range(1..=12);
        let mut tokens: Vec<String> = (0..len).map(|_| WORDS.choose(rng).unwrap().to_string()).collect();
        tokens.push([".", "!", "?"].choose(rng).unwrap().to_string());
        let mut spans = Vec::new();
        let mut i = 0;
        while i < len {
            if rng.gen_bool(0.3) {
                let last = (i + rng.gen_range(0..3)).min(len - 1);
                spans.push((i, last, labels.choose(rng).unwrap().clone()));
                i = last + 2;
            } else {
                i += 1;
            }
        }
        let mut parts = Vec::new();
        for (t, tok) in tokens.iter().enumerate() {
            if let Some((_, _, l)) = spans.iter().find(|s| s.0 == t) {
                parts.push(format!("<{l}>"));
            }
            parts.push(tok.clone());
            if let Some((_, _, l)) = spans.iter().find(|s| s.1 == t) {
                parts.push(format!("</{l}>"));
            }
        }
        lines.push(parts.join(" "));
        all_tokens.push(tokens);
        all_spans.push(spans);
    }
    (lines.join("\n"), all_tokens, all_spans)
}

fn round_trips(trained: &RuleBook) -> Outcome {
    let schema = TagSchema::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(95);
    let mut failures = Vec::new();
    for i in 0..100 {
        let id = format!("r{i:03}");
        let (text, tokens, spans) = random_document(&mut rng, &schema);
        let doc = match parse_inline(&id, &text, &schema) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("{id}: {e}"));
                continue;
            }
        };
        let surfaces: Vec<Vec<String>> = doc.sentences.iter().map(|s| s.surfaces().map(str::to_string).collect()).collect();
        let got_spans: Vec<Vec<(usize, usize, String)>> = doc
            .sentences
            .iter()
            .map(|s| s.spans.iter().map(|sp| (sp.first_token, sp.last_token, sp.label())).collect())
            .collect();
        if surfaces != tokens || got_spans != spans {
            failures.push(format!("{id}: parsed structure differs from the generated one"));
            continue;
        }
        let canonical = parse_inline(&id, &serialize_inline(&doc), &schema).unwrap();
        let again = parse_inline(&id, &serialize_inline(&canonical), &schema).unwrap();
        if again != canonical || serialize_inline(&again) != serialize_inline(&doc) {
            failures.push(format!("{id}: parse . serialize is not the identity"));
        }
    }
    let text = trained.serialize();
    let rules_ok = RuleBook::parse(&text).map(|b| b == *trained && b.serialize() == text).unwrap_or(false);
    outcome(
        "round trips (inline format, rules file)",
        failures.is_empty() && rules_ok,
        format!(
            "100 random documents, {} failure(s){}; rules file with {} rule(s) identical after parse: {rules_ok}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            trained.rule_count()
        ),
    )
}

fn run_bin(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_metonymy")).args(args).current_dir(dir).output().unwrap()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("spec.txt"), "seed = 7\nn_sentences = 3000\n").unwrap();
    let steps = [
        vec!["synth", "spec.txt", "-o", "corpus.txt"],
        vec!["train", "corpus.txt", "-o", "a.tsv"],
        vec!["train", "corpus.txt", "-o", "b.tsv"],
    ];
    for step in &steps {
        let out = run_bin(step, dir.path());
        if !out.status.success() {
            return outcome(
                "determinism of train",
                false,
                format!("`{}` failed: {}", step.join(" "), String::from_utf8_lossy(&out.stderr)),
            );
        }
    }
    let a = std::fs::read(dir.path().join("a.tsv")).unwrap();
    let b = std::fs::read(dir.path().join("b.tsv")).unwrap();
    let rules = RuleBook::parse(std::str::from_utf8(&a).unwrap()).map(|b| b.rule_count());
    outcome(
        "determinism of train",
        a == b && rules.is_ok(),
        format!("two `metonymy train` runs: {} bytes each, identical: {}, {:?} rule(s)", a.len(), a == b, rules),
    )
}

struct Experiment {
    train: Corpus,
    book: RuleBook,
    report: ScoreReport,
    merged: Option<ScoreReport>,
}

fn experiment(spec: &GeneratorSpec, merge: Option<&str>) -> Experiment {
    let schema = TagSchema::builtin();
    let lex = LexiconSet::builtin();
    let patterns = default_patterns();
    let corpus = generate(spec, &TemplateSet::builtin(), &schema).unwrap();
    let (train_part, test_part) = split_corpus(&corpus, 0.8, spec.seed).unwrap();
    let book = train(&train_part, &lex, &patterns, ContextWindow::default(), InductionParams::default()).unwrap();
    let tagger = Tagger::new(&lex, &schema, &patterns, ContextWindow::default(), &book);
    let hyp = tag_corpus(&tagger, &test_part, SpanSource::Keep).unwrap();
    let base = Corpus::new(test_part.documents.iter().map(|d| baseline_subtypes(d, &schema)).collect(), schema.clone());
    let report = |merge: Option<&str>| {
        let options = EvalOptions {
            gold_spans: true,
            merge: merge.map(str::to_string),
        };
        evaluation_report(&test_part, &hyp, Some(&base), &options).unwrap()
    };
    Experiment {
        train: train_part,
        book,
        report: report(None),
        merged: merge.map(|m| report(Some(m))),
    }
}

fn replication_a() -> Outcome {
    let start = Instant::now();
    let spec = GeneratorSpec {
        seed: 7,
        n_sentences: 5000,
        cue_reliability: 0.9,
        ..Default::default()
    };
    let e = experiment(&spec, None);
    let system = e.report.system.subtype_accuracy.unwrap();
    let baseline = e.report.baseline.as_ref().unwrap().subtype_accuracy.unwrap();
    let elapsed = start.elapsed();
    outcome(
        "replication A: learnability",
        system - baseline >= 0.15 && elapsed < Duration::from_secs(120),
        format!(
            "gold-span subtype accuracy {:.2}% vs baseline {:.2}% (+{:.2} points) on held-out 20%, {} rule(s), {:.1}s",
            100.0 * system,
            100.0 * baseline,
            100.0 * (system - baseline),
            e.book.rule_count(),
            elapsed.as_secs_f64()
        ),
    )
}

struct Scarcity {
    pers_examples: usize,
    pers_rules: usize,
    recall: f64,
}

fn scarcity_run(seed: u64) -> Scarcity {
    let schema = TagSchema::builtin();
    let lex = LexiconSet::builtin();
    let patterns = default_patterns();
    let spec = GeneratorSpec {
        seed,
        n_sentences: 1878,
        ..Default::default()
    };
    let corpus = generate(&spec, &TemplateSet::builtin(), &schema).unwrap();
    let pers_examples = corpus
        .documents
        .iter()
        .flat_map(|d| d.spans().map(|(_, s)| s.label()).collect::<Vec<_>>())
        .filter(|l| l == "gsp.pers")
        .count();
    let book = train(&corpus, &lex, &patterns, ContextWindow::default(), InductionParams::default()).unwrap();
    let pers_rules = book.get("gsp").map_or(0, |s| s.rules.iter().filter(|r| r.target == "pers").count());
    let tagger = Tagger::new(&lex, &schema, &patterns, ContextWindow::default(), &book);
    let hyp = tag_corpus(&tagger, &corpus, SpanSource::Keep).unwrap();
    let options = EvalOptions {
        gold_spans: true,
        merge: None,
    };
    let report = evaluation_report(&corpus, &hyp, None, &options).unwrap();
    Scarcity {
        pers_examples,
        pers_rules,
        recall: report.system.row("gsp.pers").map_or(0.0, |r| r.recall),
    }
}

fn replication_b() -> Outcome {
    let main = scarcity_run(7);
    let sweep: Vec<Scarcity> = (1..=10).map(scarcity_run).collect();
    let clean = sweep.iter().filter(|s| s.pers_rules == 0).count();
    let worst = sweep.iter().map(|s| s.recall).fold(0.0, f64::max);
    outcome(
        "replication B: scarcity of gsp.pers",
        main.pers_rules == 0 && main.recall <= 0.1,
        format!(
            "seed 7: {} gsp.pers of 1878, {} gsp.pers rule(s), in-sample R={:.2}; seeds 1-10: {clean}/10 without a gsp.pers rule, max R={worst:.2}",
            main.pers_examples, main.pers_rules, main.recall
        ),
    )
}

fn replication_c() -> Outcome {
    let templates = TemplateSet::builtin();
    let pers: BTreeSet<&str> = templates.by_label["gsp.pers"].iter().map(|(t, _)| t.as_str()).collect();
    let org: BTreeSet<&str> = templates.by_label["gsp.org"].iter().map(|(t, _)| t.as_str()).collect();
    let overlap = pers.intersection(&org).count() as f64 / pers.len().max(org.len()) as f64;
    let spec = GeneratorSpec {
        seed: 7,
        n_sentences: 3000,
        distribution: vec![("gsp.loc".into(), 0.6), ("gsp.pers".into(), 0.15), ("gsp.org".into(), 0.25)],
        ..Default::default()
    };
    let e = experiment(&spec, Some("gsp.hum"));
    let f = |r: &ScoreReport, l: &str| r.system.row(l).map_or(0.0, |r| r.f_measure);
    let (fp, fo) = (f(&e.report, "gsp.pers"), f(&e.report, "gsp.org"));
    let fh = f(e.merged.as_ref().unwrap(), "gsp.hum");
    outcome(
        "replication C: merge effect",
        (overlap - 0.7).abs() < 1e-9 && fh > fp.max(fo),
        format!(
            "template overlap {:.0}%, trained on {} sentences: F(gsp.hum)={fh:.4} vs F(gsp.pers)={fp:.4}, F(gsp.org)={fo:.4}",
            100.0 * overlap,
            e.train.sentence_count()
        ),
    )
}

fn ser_units() -> Outcome {
    let schema = TagSchema::builtin();
    let corpus = |t: &str| parse_corpus(t, &schema).unwrap();
    let ser = |r: &Corpus, h: &Corpus| slot_error_rate(&align_corpora(r, h).unwrap()).unwrap();
    let reference = corpus(
        "#doc d\n<gsp.loc> France </gsp.loc> et <gsp.org> Chine </gsp.org> .\n<org> ONU </org> et <pers> Chirac </pers> .\n",
    );
    let identity = ser(&reference, &reference);
    let one_each = ser(
        &reference,
        &corpus("#doc d\n<gsp.loc> France </gsp.loc> et <gsp.pers> Chine </gsp.pers> .\nONU et <pers> Chirac </pers> .\n"),
    );
    let inserted = corpus(
        "#doc d\n<gsp.loc> France </gsp.loc> <loc> et </loc> <gsp.org> Chine </gsp.org> .\n<org> ONU </org> <loc> et </loc> <pers> Chirac </pers> <loc> . </loc>\n",
    );
    let insertion = ser(&reference, &inserted);
    outcome(
        "slot error rate unit cases",
        identity == 0.0 && one_each == 0.5 && insertion == 3.0 / 4.0,
        format!("identity {identity:.4}; 1 deletion + 1 type substitution over 4 {one_each:.4}; 3 insertions over 4 {insertion} (3/4 = {})", 3.0 / 4.0),
    )
}

fn feature_locality() -> Outcome {
    let schema = TagSchema::builtin();
    let lex = LexiconSet::builtin();
    let patterns = default_patterns();
    let spec = GeneratorSpec {
        seed: 500,
        n_sentences: 400,
        distribution: vec![("gsp.loc".into(), 0.5), ("gsp.pers".into(), 0.2), ("gsp.org".into(), 0.3)],
        sentences_per_doc: 8,
        ..Default::default()
    };
    let corpus = generate(&spec, &TemplateSet::builtin(), &schema).unwrap();
    let replacements = [
        "France", "Paris", "en", "Monsieur", "a", "signé", "refuse", "habitants", "de", "la", ",", ".", "ONU", "pleut", "amitié", "Nations",
        "unies", "Jacques", "Chirac", "ministère",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    let mut trials = 0;
    let mut changed = 0;
    while trials < 500 {
        let doc: &Document = corpus.documents.choose(&mut rng).unwrap();
        let spans: Vec<_> = doc.spans().map(|(si, s)| (si, s.clone())).collect();
        let (si, span) = spans.choose(&mut rng).unwrap().clone();
        let window = ContextWindow::new(rng.gen_range(1..=6), rng.gen_bool(0.5)).unwrap();
        // Global token positions inside the window.
        let offsets: Vec<usize> = doc
            .sentences
            .iter()
            .scan(0, |acc, s| {
                let o = *acc;
                *acc += s.tokens.len();
                Some(o)
            })
            .collect();
        let (first, last) = (offsets[si] + span.first_token, offsets[si] + span.last_token);
        let inside = |s: usize, t: usize| {
            let g = offsets[s] + t;
            let near = g + window.radius() >= first && g <= last + window.radius();
            near && (!window.sentence_bounded || s == si)
        };
        let outside: Vec<(usize, usize)> = doc
            .sentences
            .iter()
            .enumerate()
            .flat_map(|(s, sent)| (0..sent.tokens.len()).map(move |t| (s, t)))
            .filter(|&(s, t)| !inside(s, t))
            .collect();
        if outside.is_empty() {
            continue;
        }
        let before = extract_features(doc, si, &span, window, &lex, &patterns).unwrap();
        let mut mutated = doc.clone();
        for _ in 0..rng.gen_range(1..=5) {
            let &(s, t) = outside.choose(&mut rng).unwrap();
            mutated.sentences[s].tokens[t].surface = replacements.choose(&mut rng).unwrap().to_string();
        }
        let after = extract_features(&mutated, si, &span, window, &lex, &patterns).unwrap();
        if before != after {
            changed += 1;
        }
        trials += 1;
    }
    outcome(
        "feature locality",
        changed == 0,
        format!("{trials} randomized mutations outside the window, {changed} changed the extracted features"),
    )
}

fn rule_self_consistency(trained: &[(&str, RuleBook, Vec<FeatureVector>)]) -> Outcome {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for (name, book, vectors) in trained {
        let book = RuleBook::parse(&book.serialize()).unwrap();
        for set in &book.sets {
            let group: Vec<&FeatureVector> = vectors.iter().filter(|v| v.main_type() == set.main_type).collect();
            for rule in &set.rules {
                let active: Vec<&&FeatureVector> = group.iter().filter(|v| rule.features.iter().all(|f| v.active.contains(f))).collect();
                let support = active.len();
                let hits = active.iter().filter(|v| v.gold_subtype.as_deref() == Some(rule.target.as_str())).count();
                let category = group.iter().filter(|v| v.gold_subtype.as_deref() == Some(rule.target.as_str())).count();
                let p = hypergeom_tail(hits as u64, support as u64, category as u64, group.len() as u64, Direction::Over).unwrap();
                let dp = hits as f64 / support as f64;
                checked += 1;
                if support != rule.support || dp != rule.disc_power || p != rule.p_level {
                    mismatches.push(format!(
                        "{name}: {} -> {}: stored ({}, {}, {}) recomputed ({p}, {dp}, {support})",
                        rule.conjunction_text(),
                        rule.target,
                        rule.p_level,
                        rule.disc_power,
                        rule.support
                    ));
                }
            }
        }
    }
    outcome(
        "rule self-consistency",
        mismatches.is_empty() && checked > 0,
        match mismatches.first() {
            None => format!("{checked} rule(s) from {} trained sets reproduced exactly", trained.len()),
            Some(m) => format!("{} mismatch(es) out of {checked}; first: {m}", mismatches.len()),
        },
    )
}

fn trained_books() -> Vec<(&'static str, RuleBook, Vec<FeatureVector>)> {
    let schema = TagSchema::builtin();
    let lex = LexiconSet::builtin();
    let patterns = default_patterns();
    let specs = [
        ("table proportions", GeneratorSpec { seed: 3, n_sentences: 3000, ..Default::default() }),
        (
            "balanced",
            GeneratorSpec {
                seed: 4,
                n_sentences: 3000,
                distribution: vec![("gsp.loc".into(), 0.4), ("gsp.pers".into(), 0.3), ("gsp.org".into(), 0.3)],
                cue_reliability: 0.7,
                ..Default::default()
            },
        ),
    ];
    specs
        .into_iter()
        .map(|(name, spec)| {
            let corpus = generate(&spec, &TemplateSet::builtin(), &schema).unwrap();
            let vectors = FeatureExtractor::new(&lex, &patterns, ContextWindow::default()).extract_corpus(&corpus).unwrap();
            let book = train(&corpus, &lex, &patterns, ContextWindow::default(), InductionParams::default()).unwrap();
            (name, book, vectors)
        })
        .collect()
}

#[test]
fn acceptance() {
    let trained = trained_books();
    let outcomes = vec![
        hypergeom_exhaustive(),
        specificity_spot_checks(),
        round_trips(&trained[1].1),
        determinism(),
        replication_a(),
        replication_b(),
        replication_c(),
        ser_units(),
        feature_locality(),
        rule_self_consistency(&trained),
    ];
    println!();
    for o in &outcomes {
        println!("{} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.pass).map(|o| o.name).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
