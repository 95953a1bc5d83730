use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use metonymy::corpus::{serialize_corpus, validate_corpus, Corpus, Document};
use metonymy::eval::{evaluation_report, EvalOptions};
use metonymy::induction::RuleBook;
use metonymy::pipeline::{tag_one, train, SpanSource};
use metonymy::synth::{generate, GeneratorSpec, TemplateSet};
use metonymy::tagger::{baseline_subtypes, baseline_tag, EntityBundle, Tagger};
use rayon::prelude::*;

use crate::config::{Config, Resources};
use crate::error::CliError;
use crate::io::{emit, read_corpus, read_text, write_atomic};

fn checked(corpus: Corpus, path: &Path) -> Result<Corpus, CliError> {
    let violations = validate_corpus(&corpus);
    match violations.first() {
        None => Ok(corpus),
        Some(v) => Err(CliError::invalid_in(
            path,
            format!("{v} ({} violation(s) in total)", violations.len()),
        )),
    }
}

pub fn run_train(cfg: &Config, corpus: &Path, output: &Path) -> Result<(), CliError> {
    let res = cfg.resources()?;
    let corpus = checked(read_corpus(corpus, &res.schema)?, corpus)?;
    let mut book = train(&corpus, &res.lex, &res.patterns, res.window, cfg.params)?;
    book.config = cfg.echo();
    write_atomic(output, &book.serialize())?;
    eprintln!("{} rule(s) written to {}", book.rule_count(), output.display());
    Ok(())
}

fn load_rules(cfg: &Config, rules: Option<&Path>) -> Result<RuleBook, CliError> {
    let path = rules
        .or(cfg.rules.as_deref())
        .ok_or_else(|| CliError::Usage("no rules file: pass -r <rules> or set `rules` in the config".into()))?;
    RuleBook::parse(&read_text(path)?).map_err(|e| CliError::invalid_in(path, e))
}

fn pool(cfg: &Config) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Failed(e.to_string()))
}

fn render_bundles(tagged: &[(Document, Vec<EntityBundle>)]) -> String {
    let mut out = String::new();
    for (doc, bundles) in tagged {
        for b in bundles {
            let _ = writeln!(out, "{}\t{}\t{}", doc.doc_id, b.sentence, b);
        }
    }
    out
}

pub struct TagArgs<'a> {
    pub input: &'a Path,
    pub rules: Option<&'a Path>,
    pub output: Option<&'a Path>,
    pub bundles: bool,
    pub keep_spans: bool,
}

pub fn run_tag(cfg: &Config, args: TagArgs<'_>) -> Result<(), CliError> {
    let res = cfg.resources()?;
    let book = load_rules(cfg, args.rules)?;
    let input = read_corpus(args.input, &res.schema)?;
    let tagger = Tagger::new(&res.lex, &res.schema, &res.patterns, res.window, &book);
    let source = if args.keep_spans { SpanSource::Keep } else { SpanSource::Recognize };
    let tagged = pool(cfg)?.install(|| {
        input
            .documents
            .par_iter()
            .map(|d| tag_one(&tagger, d, source))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let text = if args.bundles {
        render_bundles(&tagged)
    } else {
        let docs = tagged.into_iter().map(|(d, _)| d).collect();
        serialize_corpus(&Corpus::new(docs, res.schema.clone()))
    };
    emit(args.output, &text)
}

fn baseline_corpus(res: &Resources, input: &Corpus, keep_spans: bool) -> Corpus {
    let docs = input
        .documents
        .iter()
        .map(|d| {
            if keep_spans {
                baseline_subtypes(d, &res.schema)
            } else {
                baseline_tag(d, &res.lex, &res.schema)
            }
        })
        .collect();
    Corpus::new(docs, res.schema.clone())
}

pub fn run_baseline(cfg: &Config, input: &Path, output: Option<&Path>, keep_spans: bool) -> Result<(), CliError> {
    let res = cfg.resources()?;
    let corpus = read_corpus(input, &res.schema)?;
    emit(output, &serialize_corpus(&baseline_corpus(&res, &corpus, keep_spans)))
}

pub struct EvalArgs<'a> {
    pub reference: &'a Path,
    pub hypothesis: &'a Path,
    pub gold_spans: bool,
    pub merge: Option<String>,
    pub baseline: bool,
    pub tsv: bool,
    pub output: Option<&'a Path>,
}

pub fn run_eval(cfg: &Config, args: EvalArgs<'_>) -> Result<(), CliError> {
    let res = cfg.resources()?;
    let reference = checked(read_corpus(args.reference, &res.schema)?, args.reference)?;
    let hypothesis = checked(read_corpus(args.hypothesis, &res.schema)?, args.hypothesis)?;
    if let Some(m) = &args.merge {
        if res.schema.merge_for(m).is_none() {
            return Err(CliError::Usage(format!("the schema declares no merge `{m}`")));
        }
    }
    let baseline = args.baseline.then(|| baseline_corpus(&res, &reference, args.gold_spans));
    let options = EvalOptions {
        gold_spans: args.gold_spans,
        merge: args.merge,
    };
    let report = evaluation_report(&reference, &hypothesis, baseline.as_ref(), &options)?;
    let text = if args.tsv {
        report.to_tsv()
    } else {
        let mut t = report.to_string();
        if !t.ends_with('\n') {
            t.push('\n');
        }
        t
    };
    emit(args.output, &text)
}

pub fn run_synth(cfg: &Config, spec_path: &Path, output: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let res = cfg.resources()?;
    let mut spec = GeneratorSpec::parse(&read_text(spec_path)?).map_err(|e| CliError::invalid_in(spec_path, e))?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    let templates = match &spec.templates {
        Some(t) => {
            let path: PathBuf = spec_path.parent().unwrap_or(Path::new("")).join(t);
            TemplateSet::parse(&read_text(&path)?).map_err(|e| CliError::invalid_in(&path, e))?
        }
        None => TemplateSet::builtin(),
    };
    let corpus = generate(&spec, &templates, &res.schema).map_err(|e| CliError::invalid_in(spec_path, e))?;
    write_atomic(output, &serialize_corpus(&corpus))?;
    eprintln!(
        "{} sentence(s) in {} document(s) written to {}",
        corpus.sentence_count(),
        corpus.len(),
        output.display()
    );
    Ok(())
}

pub fn run_validate(cfg: &Config, input: &Path) -> Result<(), CliError> {
    let res = cfg.resources()?;
    let corpus = read_corpus(input, &res.schema)?;
    let violations = validate_corpus(&corpus);
    if violations.is_empty() {
        println!(
            "ok: {} document(s), {} sentence(s), {} span(s)",
            corpus.len(),
            corpus.sentence_count(),
            corpus.documents.iter().map(Document::span_count).sum::<usize>()
        );
        return Ok(());
    }
    for v in &violations {
        println!("{v}");
    }
    Err(CliError::Invalid(format!("{}: {} violation(s)", input.display(), violations.len())))
}

pub fn inspect(book: &RuleBook) -> String {
    let p = &book.params;
    let mut out = format!(
        "alpha={} min_support={} max_order={} min_dp={}\n",
        p.alpha, p.min_support, p.max_order, p.min_dp
    );
    for (k, v) in &book.config {
        let _ = writeln!(out, "{k}={v}");
    }
    for set in &book.sets {
        let _ = writeln!(out, "\n{} ({} rule(s))", set.main_type, set.len());
        if set.is_empty() {
            continue;
        }
        let _ = writeln!(out, "rank  target      p_level      dp  support  conjunction");
        for (i, r) in set.rules.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:>4}  {:<8} {:>12.3e} {:>7.4} {:>8}  {}",
                i + 1,
                r.target,
                r.p_level,
                r.disc_power,
                r.support,
                r.conjunction_text()
            );
        }
    }
    out
}

pub fn run_inspect(rules: &Path) -> Result<(), CliError> {
    let book = RuleBook::parse(&read_text(rules)?).map_err(|e| CliError::invalid_in(rules, e))?;
    emit(None, &inspect(&book))
}
