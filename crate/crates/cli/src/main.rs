mod commands;
mod config;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{EvalArgs, TagArgs};
use crate::config::Config;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "metonymy", version, about = "Named-entity tagging with metonymic sub-readings")]
struct Cli {
    /// Configuration file (`key = value` lines)
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Induce rules from an annotated corpus
    Train {
        corpus: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Tag documents with induced rules
    Tag {
        input: PathBuf,
        #[arg(short, long)]
        rules: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print one entity bundle per line instead of the tagged corpus
        #[arg(long)]
        bundles: bool,
        /// Keep the input spans and resolve their subtypes only
        #[arg(long)]
        keep_spans: bool,
    },
    /// Score a hypothesis corpus against a reference
    Eval {
        reference: PathBuf,
        hypothesis: PathBuf,
        /// Score subtypes on the reference boundaries
        #[arg(long)]
        gold_spans: bool,
        /// Merge subtypes into a label declared by the schema, e.g. gsp.hum
        #[arg(long)]
        merge: Option<String>,
        /// Also score the default-subtype baseline
        #[arg(long)]
        baseline: bool,
        #[arg(long)]
        tsv: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tag with default subtypes only
    Baseline {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        keep_spans: bool,
    },
    /// Generate a synthetic annotated corpus
    Synth {
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Override the spec's seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a corpus against the schema and format invariants
    Validate { corpus: PathBuf },
    /// List the rules of a rules file in firing order
    InspectRules { rules: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Train { corpus, output } => commands::run_train(&cfg, &corpus, &output),
        Command::Tag {
            input,
            rules,
            output,
            bundles,
            keep_spans,
        } => commands::run_tag(
            &cfg,
            TagArgs {
                input: &input,
                rules: rules.as_deref(),
                output: output.as_deref(),
                bundles,
                keep_spans,
            },
        ),
        Command::Eval {
            reference,
            hypothesis,
            gold_spans,
            merge,
            baseline,
            tsv,
            output,
        } => commands::run_eval(
            &cfg,
            EvalArgs {
                reference: &reference,
                hypothesis: &hypothesis,
                gold_spans,
                merge,
                baseline,
                tsv,
                output: output.as_deref(),
            },
        ),
        Command::Baseline {
            input,
            output,
            keep_spans,
        } => commands::run_baseline(&cfg, &input, output.as_deref(), keep_spans),
        Command::Synth { spec, output, seed } => commands::run_synth(&cfg, &spec, &output, seed.or(cfg.seed)),
        Command::Validate { corpus } => commands::run_validate(&cfg, &corpus),
        Command::InspectRules { rules } => commands::run_inspect(&rules),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
