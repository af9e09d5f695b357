//! Command-line interface: `run`, `sweep`, `subsample`, `stats`,
//! `analyze`, `baseline`.
//!
//! Every config-file key has a same-named flag (`train.max_iter` →
//! `--max-iter`); a flag always beats the file. Errors exit nonzero with
//! one structured message on stderr; exit code 0 means every requested
//! output was written.

use std::path::PathBuf;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigFile, CorpusConfig, Overrides, RunConfig};
use crate::runner::{self, Written};

#[derive(Parser)]
#[command(
    name = "aspect",
    version,
    about = "Classify predicational aspect by composing word embeddings with sentence context"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags mirroring the config file keys; any one of them overrides the
/// file value.
#[derive(Args, Debug, Default, Clone)]
struct CommonFlags {
    /// JSON config file; flags below override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Embedding file path (config: embeddings.path).
    #[arg(long)]
    embeddings_path: Option<PathBuf>,
    /// `word2vec-binary` or `glove-text` (config: embeddings.format).
    #[arg(long)]
    embeddings_format: Option<String>,
    /// Expected embedding dimension (config: embeddings.dim).
    #[arg(long)]
    dim: Option<usize>,
    /// Non-UTF-8 token policy: `reject` or `replace` (config: embeddings.utf8).
    #[arg(long)]
    utf8: Option<String>,
    /// Treebank path (config: corpus.conllu).
    #[arg(long)]
    conllu: Option<PathBuf>,
    /// Instance-index TSV path (config: corpus.index).
    #[arg(long)]
    index: Option<PathBuf>,
    /// Comma-separated labels in priority order (config: corpus.label_set).
    #[arg(long, value_delimiter = ',')]
    label_set: Option<Vec<String>>,
    /// Dataset name for reports (config: corpus.name).
    #[arg(long)]
    name: Option<String>,
    /// Context spec: verb, window:K, dep-head, dep-children, dep-full, sentence.
    #[arg(long)]
    context: Option<String>,
    /// Protocol: loo, kfold:K, doc-cv:K, fixed, verb-holdout.
    #[arg(long)]
    protocol: Option<String>,
    /// Fold count for kfold/doc-cv.
    #[arg(long)]
    k: Option<usize>,
    /// Seed for fold shuffling and subsampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Inverse regularization strength (config: train.c).
    #[arg(long)]
    c: Option<f64>,
    /// Gradient infinity-norm stopping tolerance (config: train.tol).
    #[arg(long)]
    tol: Option<f64>,
    /// Optimizer iteration cap (config: train.max_iter).
    #[arg(long)]
    max_iter: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Composition: sum or average.
    #[arg(long)]
    composition: Option<String>,
    /// Majority-fraction bound for subsampling, in [0.5, 1).
    #[arg(long)]
    max_majority_fraction: Option<f64>,
    /// Worker threads (default: all cores). Never changes numeric results.
    #[arg(long)]
    threads: Option<usize>,
}

impl CommonFlags {
    fn file(&self) -> anyhow::Result<ConfigFile> {
        match &self.config {
            Some(path) => Ok(ConfigFile::load(path)?),
            None => Ok(ConfigFile::default()),
        }
    }

    fn overrides(&self) -> Overrides {
        Overrides {
            embeddings_path: self.embeddings_path.clone(),
            embeddings_format: self.embeddings_format.clone(),
            dim: self.dim,
            utf8: self.utf8.clone(),
            conllu: self.conllu.clone(),
            index: self.index.clone(),
            label_set: self.label_set.clone(),
            name: self.name.clone(),
            context: self.context.clone(),
            protocol: self.protocol.clone(),
            k: self.k,
            seed: self.seed,
            c: self.c,
            tol: self.tol,
            max_iter: self.max_iter,
            out_dir: self.out_dir.clone(),
            composition: self.composition.clone(),
            max_majority_fraction: self.max_majority_fraction,
            threads: self.threads,
        }
    }

    fn run_config(&self) -> anyhow::Result<RunConfig> {
        Ok(RunConfig::resolve(self.file()?, self.overrides())?)
    }

    fn corpus_config(&self) -> anyhow::Result<CorpusConfig> {
        Ok(CorpusConfig::resolve(self.file()?, self.overrides())?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment: load, compose, evaluate, report.
    Run(CommonFlags),
    /// Evaluate a list of context sizes under one protocol.
    Sweep {
        /// Comma-separated window sizes; `verb` and `sentence` are the
        /// pseudo-sizes 0 and unbounded.
        #[arg(long, default_value = "verb,1,2,3,5,10,sentence")]
        sizes: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Reduce per-lemma label skew; emits a new index TSV.
    Subsample(CommonFlags),
    /// Dataset statistics as JSON.
    Stats(CommonFlags),
    /// Post-hoc analyses over a report JSON or prediction-log TSV.
    Analyze {
        /// Report JSON (full analyses) or prediction-log TSV (no per-verb
        /// table).
        #[arg(long)]
        log: PathBuf,
        /// JSON file `{"closed": [...], "open": [...]}` overriding the
        /// default PTB tag partition.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Majority-class baseline closed forms from an index file.
    Baseline(CommonFlags),
}

fn dispatch(cli: Cli) -> anyhow::Result<Written> {
    match cli.command {
        Command::Run(flags) => runner::cmd_run(&flags.run_config()?),
        Command::Sweep { sizes, flags } => {
            let points = runner::parse_sweep_sizes(&sizes)?;
            runner::cmd_sweep(&flags.run_config()?, &points)
        }
        Command::Subsample(flags) => runner::cmd_subsample(&flags.corpus_config()?),
        Command::Stats(flags) => runner::cmd_stats(&flags.corpus_config()?),
        Command::Analyze {
            log,
            partition,
            flags,
        } => {
            let file = flags.file()?;
            let out_dir = flags
                .out_dir
                .clone()
                .or(file.out_dir)
                .unwrap_or_else(|| PathBuf::from("out"));
            runner::cmd_analyze(&log, partition.as_deref(), &out_dir)
        }
        Command::Baseline(flags) => {
            let file = flags.file()?;
            let over = flags.overrides();
            let index = over
                .index
                .or(file.corpus.index)
                .context("missing config key `corpus.index` (set it or pass --index)")?;
            let label_set = over.label_set.or(file.corpus.label_set);
            let out_dir = over.out_dir.or(file.out_dir);
            runner::cmd_baseline(&index, label_set, out_dir.as_deref())
        }
    }
}

/// Entry point: parse, dispatch, report, exit nonzero on any error.
pub fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(written) => {
            println!("{}", written.summary);
            for file in &written.files {
                println!("wrote {}", file.display());
            }
            Ok(())
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}
