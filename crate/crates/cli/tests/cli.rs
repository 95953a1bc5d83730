use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use metonymy::corpus::{parse_corpus, TagSchema};
use metonymy::induction::RuleBook;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metonymy")).args(args).current_dir(dir).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

/// A directory holding a synthetic corpus and rules trained on it.
fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("spec.txt"), "seed = 7\nn_sentences = 600\n").unwrap();
    ok(dir.path(), &["synth", "spec.txt", "-o", "corpus.txt"]);
    ok(dir.path(), &["train", "corpus.txt", "-o", "rules.tsv"]);
    dir
}

#[test]
fn train_writes_a_parseable_rules_file() {
    let dir = workspace();
    let text = fs::read_to_string(dir.path().join("rules.tsv")).unwrap();
    let book = RuleBook::parse(&text).unwrap();
    assert!(book.rule_count() > 0);
    assert_eq!(book.config["radius"], "5");
    let listing = ok(dir.path(), &["inspect-rules", "rules.tsv"]);
    assert!(listing.contains("rank  target"));
    assert!(listing.contains(&book.sets[0].rules[0].conjunction_text()));
}

#[test]
fn config_is_echoed_and_changes_training() {
    let dir = workspace();
    fs::write(dir.path().join("m.conf"), "# stricter\nmin_support = 50\nradius = 3\nseed = 11\n").unwrap();
    ok(dir.path(), &["train", "corpus.txt", "-o", "strict.tsv", "-c", "m.conf"]);
    let strict = RuleBook::parse(&fs::read_to_string(dir.path().join("strict.tsv")).unwrap()).unwrap();
    assert_eq!(strict.params.min_support, 50);
    assert_eq!(strict.config["radius"], "3");
    assert_eq!(strict.config["seed"], "11");
    assert!(strict.sets.iter().flat_map(|s| &s.rules).all(|r| r.support >= 50));
}

#[test]
fn eval_of_a_corpus_against_itself() {
    let dir = workspace();
    let report = ok(dir.path(), &["eval", "corpus.txt", "corpus.txt"]);
    assert!(report.contains("SER 0.0000"), "{report}");
    let tsv = ok(dir.path(), &["eval", "corpus.txt", "corpus.txt", "--tsv", "--merge", "gsp.hum"]);
    assert!(tsv.contains("gsp.hum"), "{tsv}");
}

#[test]
fn train_tag_eval_on_gold_spans() {
    let dir = workspace();
    ok(dir.path(), &["tag", "corpus.txt", "-r", "rules.tsv", "--keep-spans", "-o", "hyp.txt"]);
    ok(dir.path(), &["validate", "hyp.txt"]);
    let report = ok(dir.path(), &["eval", "corpus.txt", "hyp.txt", "--gold-spans", "--baseline"]);
    assert!(report.contains("system (gold spans)") && report.contains("baseline"), "{report}");
    ok(dir.path(), &["baseline", "corpus.txt", "--keep-spans", "-o", "base.txt"]);
    let base = parse_corpus(&fs::read_to_string(dir.path().join("base.txt")).unwrap(), &TagSchema::builtin()).unwrap();
    assert!(base.documents.iter().flat_map(|d| d.spans().map(|(_, s)| s.label()).collect::<Vec<_>>()).all(|l| l == "gsp.loc"));
}

#[test]
fn bundles_use_the_entity_notation() {
    let dir = workspace();
    fs::write(dir.path().join("raw.txt"), "ONU refuse cette décision .\nil pleut à Paris .\n").unwrap();
    let out = ok(dir.path(), &["tag", "raw.txt", "-r", "rules.tsv", "--bundles"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "raw\t0\tEntity{ Lexical_unit=ONU; Sem{ Type=org; Focalisation=diplomatic_org; } }");
    assert_eq!(lines[1], "raw\t1\tEntity{ Lexical_unit=Paris; Sem{ Type=gsp; Focalisation=localisation; } }");
}

#[test]
fn tagging_output_does_not_depend_on_workers() {
    let dir = workspace();
    fs::write(dir.path().join("one.conf"), "workers = 1\n").unwrap();
    fs::write(dir.path().join("four.conf"), "workers = 4\n").unwrap();
    let a = ok(dir.path(), &["tag", "corpus.txt", "-r", "rules.tsv", "-c", "one.conf"]);
    let b = ok(dir.path(), &["tag", "corpus.txt", "-r", "rules.tsv", "-c", "four.conf"]);
    assert_eq!(a, b);
    let ids: Vec<&str> = a.lines().filter_map(|l| l.strip_prefix("#doc ")).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn synth_is_reproducible() {
    let dir = workspace();
    ok(dir.path(), &["synth", "spec.txt", "-o", "again.txt"]);
    assert_eq!(fs::read(dir.path().join("corpus.txt")).unwrap(), fs::read(dir.path().join("again.txt")).unwrap());
    ok(dir.path(), &["synth", "spec.txt", "-o", "other.txt", "--seed", "8"]);
    assert_ne!(fs::read(dir.path().join("corpus.txt")).unwrap(), fs::read(dir.path().join("other.txt")).unwrap());
}

#[test]
fn exit_codes() {
    let dir = workspace();
    let p = dir.path();
    assert_eq!(code(&run(p, &[])), 2);
    assert_eq!(code(&run(p, &["frobnicate"])), 2);
    assert_eq!(code(&run(p, &["train", "corpus.txt"])), 2);
    assert_eq!(code(&run(p, &["tag", "corpus.txt"])), 2);
    assert_eq!(code(&run(p, &["eval", "corpus.txt", "corpus.txt", "--merge", "gsp.nope"])), 2);
    fs::write(p.join("bad.conf"), "alpha = 7\n").unwrap();
    assert_eq!(code(&run(p, &["validate", "corpus.txt", "-c", "bad.conf"])), 2);
    assert_eq!(code(&run(p, &["--help"])), 0);

    fs::write(p.join("bad.txt"), "#doc a\n<gsp.nope> France </gsp.nope> .\n").unwrap();
    assert_eq!(code(&run(p, &["validate", "bad.txt"])), 1);
    assert_eq!(code(&run(p, &["validate", "missing.txt"])), 1);
    fs::write(p.join("broken.tsv"), "#rules\talpha=0.05\n").unwrap();
    assert_eq!(code(&run(p, &["inspect-rules", "broken.tsv"])), 1);
}

#[test]
fn failures_leave_no_output_file() {
    let dir = workspace();
    let p = dir.path();
    fs::write(p.join("bad.txt"), "#doc a\n<gsp.loc> France .\n").unwrap();
    assert_eq!(code(&run(p, &["train", "bad.txt", "-o", "out.tsv"])), 1);
    assert!(!p.join("out.tsv").exists());
    fs::write(p.join("bad_spec.txt"), "cue_reliability = 3\n").unwrap();
    assert_eq!(code(&run(p, &["synth", "bad_spec.txt", "-o", "out.txt"])), 1);
    assert!(!p.join("out.txt").exists());
    let leftovers: Vec<_> = fs::read_dir(p)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}
