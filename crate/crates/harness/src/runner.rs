//! Command implementations: load inputs, run the pipeline, write
//! artifacts.
//!
//! Every command hashes the content of its input files and embeds the
//! combined digest in every file it writes (a JSON field or a `#` comment
//! line), so stale outputs are detectable. No output carries a timestamp:
//! rerunning a command with identical inputs produces byte-identical
//! files. Folds and sweep points evaluate in parallel, but each fold owns
//! its model and results are assembled in deterministic order, so the
//! thread count never changes a single reported number.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use aspect_core::analysis::{
    class_group_accuracy, class_group_accuracy_weighted, per_verb_report, pos_accuracy,
    pos_distribution, GroupAverages, PosAccuracyTable, SweepRow, TagClassPartition,
};
use aspect_core::compose::{compose_batch_with, ComposedInstance};
use aspect_core::context::ContextSpec;
use aspect_core::corpus::{dataset_stats, Dataset, Split};
use aspect_core::embeddings::EmbeddingTable;
use aspect_core::eval::{
    assemble, plan_folds, run_fold, run_protocol, EvalReport, Prediction, Protocol,
};
use aspect_core::model::{majority_baseline, majority_closed_form, TrainConfig};
use aspect_core::resample::subsample_ambiguous_with;

use crate::config::{CorpusConfig, EmbeddingFormat, RunConfig};
use crate::formats::conllu::ConlluSentence;
use crate::formats::{conllu, glove, index, predlog, word2vec};

/// One hashed input file.
#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub role: &'static str,
    pub path: String,
    pub sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Hashes one input file's content.
pub fn hash_file(role: &'static str, path: &Path) -> anyhow::Result<InputRecord> {
    let bytes =
        fs::read(path).with_context(|| format!("cannot read {role} file `{}`", path.display()))?;
    Ok(InputRecord {
        role,
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    })
}

/// Combined digest over all input files, order-independent in spirit but
/// computed over the fixed role order the caller supplies.
pub fn combined_digest(inputs: &[InputRecord]) -> String {
    let mut lines = String::new();
    for rec in inputs {
        lines.push_str(&format!("{}:{}\n", rec.role, rec.sha256));
    }
    sha256_hex(lines.as_bytes())
}

/// Out-of-vocabulary tallies over the composed batch.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct OovSummary {
    /// Instances whose target verb has no vector.
    pub targets_oov: usize,
    /// Context-token occurrences without a vector (duplicates count each
    /// time).
    pub context_occurrences_oov: usize,
    /// Distinct lowercased forms (targets and context words) without a
    /// vector.
    pub distinct_oov_forms: usize,
}

/// Counts out-of-vocabulary targets and context occurrences.
pub fn oov_summary(dataset: &Dataset, composed: &[ComposedInstance]) -> OovSummary {
    let mut targets_oov = 0usize;
    let mut context_occurrences_oov = 0usize;
    let mut forms: BTreeSet<String> = BTreeSet::new();
    for (inst, comp) in dataset.instances.iter().zip(composed) {
        if !comp.target_in_vocabulary {
            targets_oov += 1;
            forms.insert(inst.target_form().to_lowercase());
        }
        for c in &comp.contributors {
            if !c.in_vocabulary {
                context_occurrences_oov += 1;
                forms.insert(c.form.to_lowercase());
            }
        }
    }
    OovSummary {
        targets_oov,
        context_occurrences_oov,
        distinct_oov_forms: forms.len(),
    }
}

/// Loads the embedding table named by the config.
pub fn load_embeddings(cfg: &RunConfig) -> anyhow::Result<EmbeddingTable> {
    let table = match cfg.embeddings_format {
        EmbeddingFormat::Word2vecBinary => {
            word2vec::load_word2vec_binary(&cfg.embeddings_path, cfg.utf8)?
        }
        EmbeddingFormat::GloveText => glove::load_glove_text(&cfg.embeddings_path, cfg.dim)?,
    };
    if let Some(dim) = cfg.dim {
        anyhow::ensure!(
            table.dimension() == dim,
            "embedding file `{}` has dimension {}, config expects {}",
            cfg.embeddings_path.display(),
            table.dimension(),
            dim
        );
    }
    Ok(table)
}

/// Runs all folds of a protocol, optionally on a bounded thread pool.
/// Fold results are assembled in fold order, so the outcome is identical
/// to the sequential [`run_protocol`].
pub fn evaluate(
    dataset: &Dataset,
    composed: &[ComposedInstance],
    protocol: Protocol,
    train: &TrainConfig,
    seed: u64,
    threads: Option<usize>,
) -> anyhow::Result<EvalReport> {
    let folds = plan_folds(dataset, protocol, seed)?;
    let run_all = || {
        folds
            .par_iter()
            .map(|f| run_fold(dataset, composed, f, train))
            .collect::<Result<Vec<_>, _>>()
    };
    let outcomes = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("cannot build thread pool")?
            .install(run_all),
        None => run_all(),
    }?;
    Ok(assemble(protocol, dataset, outcomes)?)
}

fn write_output(path: &Path, content: impl AsRef<[u8]>) -> anyhow::Result<()> {
    fs::write(path, content).with_context(|| format!("cannot write `{}`", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("cannot serialize JSON")?;
    text.push('\n');
    write_output(path, text)
}

/// The report JSON: the evaluation report plus the input digest that
/// produced it.
#[derive(Serialize)]
struct ReportDoc<'a> {
    inputs_digest: &'a str,
    #[serde(flatten)]
    report: &'a EvalReport,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    inputs_digest: &'a str,
    inputs: &'a [InputRecord],
    config: serde_json::Value,
    dataset: DatasetSummary,
    embedding_vocabulary: usize,
    embedding_dropped_duplicates: usize,
    oov: &'a OovSummary,
    degenerate_folds: usize,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct DatasetSummary {
    name: String,
    instances: usize,
    label_counts: BTreeMap<String, usize>,
}

fn summarize(dataset: &Dataset) -> DatasetSummary {
    let mut label_counts: BTreeMap<String, usize> = BTreeMap::new();
    for inst in &dataset.instances {
        *label_counts.entry(inst.label.clone()).or_default() += 1;
    }
    DatasetSummary {
        name: dataset.name.clone(),
        instances: dataset.len(),
        label_counts,
    }
}

/// Artifacts written by a command.
#[derive(Debug, Clone)]
pub struct Written {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// The `run` command: load → compose → evaluate → report, log, manifest.
pub fn cmd_run(cfg: &RunConfig) -> anyhow::Result<Written> {
    let inputs = [
        hash_file("embeddings", &cfg.embeddings_path)?,
        hash_file("conllu", &cfg.conllu)?,
        hash_file("index", &cfg.index)?,
    ];
    let digest = combined_digest(&inputs);

    let table = load_embeddings(cfg)?;
    let dataset = crate::formats::load_dataset(
        &cfg.conllu,
        &cfg.index,
        &cfg.dataset_name,
        cfg.label_set.clone(),
    )?;
    let composed = compose_batch_with(&dataset, cfg.context, &table, cfg.composition);
    let oov = oov_summary(&dataset, &composed);
    let report = evaluate(
        &dataset,
        &composed,
        cfg.protocol,
        &cfg.train,
        cfg.seed,
        cfg.threads,
    )?;

    fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("cannot create `{}`", cfg.out_dir.display()))?;
    let report_path = cfg.out_dir.join("report.json");
    let log_path = cfg.out_dir.join("predictions.tsv");
    let manifest_path = cfg.out_dir.join("manifest.json");

    write_json(
        &report_path,
        &ReportDoc {
            inputs_digest: &digest,
            report: &report,
        },
    )?;
    predlog::write_predlog(
        &report.labels,
        &report.predictions,
        Some(&digest),
        &log_path,
    )?;

    let mut files = vec![report_path, log_path];
    if matches!(cfg.protocol, Protocol::VerbHoldout) {
        let verb_path = cfg.out_dir.join("per_verb.tsv");
        let verbs = per_verb_report(&report.labels, &report.predictions);
        write_output(&verb_path, per_verb_tsv(&report.labels, &verbs, &digest))?;
        files.push(verb_path);
    }

    let outputs: Vec<String> = files
        .iter()
        .map(|p| {
            p.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default()
        })
        .chain(std::iter::once("manifest.json".to_string()))
        .collect();
    write_json(
        &manifest_path,
        &RunManifest {
            inputs_digest: &digest,
            inputs: &inputs,
            config: cfg.echo(),
            dataset: summarize(&dataset),
            embedding_vocabulary: table.len(),
            embedding_dropped_duplicates: table.dropped_duplicates(),
            oov: &oov,
            degenerate_folds: report.degenerate_folds,
            outputs,
        },
    )?;
    files.push(manifest_path);

    let summary = format!(
        "{} | {} instances | context {} | protocol {} | accuracy {:.4} | degenerate folds {}",
        dataset.name,
        dataset.len(),
        cfg.context,
        cfg.protocol,
        report.accuracy,
        report.degenerate_folds
    );
    Ok(Written { files, summary })
}

/// Parses the sweep size list: comma-separated window sizes plus the
/// pseudo-sizes `verb` (0) and `sentence` (unbounded).
pub fn parse_sweep_sizes(raw: &str) -> anyhow::Result<Vec<ContextSpec>> {
    let mut points = Vec::new();
    for item in raw.split(',') {
        let item = item.trim();
        let spec = match item {
            "" => continue,
            "verb" => ContextSpec::VerbOnly,
            "sentence" => ContextSpec::FullSentence,
            k => match k.parse::<usize>() {
                Ok(0) => ContextSpec::VerbOnly,
                Ok(n) => ContextSpec::Window(n),
                Err(_) => anyhow::bail!(
                    "bad sweep size `{item}` (expected a window size, `verb`, or `sentence`)"
                ),
            },
        };
        points.push(spec);
    }
    anyhow::ensure!(!points.is_empty(), "sweep needs at least one size");
    Ok(points)
}

fn sweep_kind_size(spec: ContextSpec) -> (String, String) {
    match spec {
        ContextSpec::VerbOnly => ("verb".to_string(), "0".to_string()),
        ContextSpec::Window(k) => ("window".to_string(), k.to_string()),
        ContextSpec::FullSentence => ("sentence".to_string(), "inf".to_string()),
        other => (other.to_string(), "-".to_string()),
    }
}

/// Renders sweep rows as plot-ready TSV.
pub fn sweep_tsv(labels: &[String], rows: &[SweepRow], digest: &str) -> String {
    let mut out = format!("# inputs_digest={digest}\n");
    out.push_str("context_kind\tsize\taccuracy");
    for label in labels {
        out.push_str(&format!("\tf1_{label}"));
    }
    out.push('\n');
    for row in rows {
        let (kind, size) = sweep_kind_size(row.context);
        out.push_str(&format!("{kind}\t{size}\t{}", row.accuracy));
        for label in labels {
            let f1 = row.per_class_f1.get(label).copied().unwrap_or(0.0);
            out.push_str(&format!("\t{f1}"));
        }
        out.push('\n');
    }
    out
}

/// The `sweep` command: one evaluation per context point, shared seed.
pub fn cmd_sweep(cfg: &RunConfig, points: &[ContextSpec]) -> anyhow::Result<Written> {
    anyhow::ensure!(!points.is_empty(), "sweep needs at least one size");
    let inputs = [
        hash_file("embeddings", &cfg.embeddings_path)?,
        hash_file("conllu", &cfg.conllu)?,
        hash_file("index", &cfg.index)?,
    ];
    let digest = combined_digest(&inputs);

    let table = load_embeddings(cfg)?;
    let dataset = crate::formats::load_dataset(
        &cfg.conllu,
        &cfg.index,
        &cfg.dataset_name,
        cfg.label_set.clone(),
    )?;

    // Mirrors the core sweep driver point by point (same seed per row, so
    // fold plans are identical across rows), but evaluates points in
    // parallel.
    let eval_point = |&context: &ContextSpec| -> anyhow::Result<SweepRow> {
        let composed = compose_batch_with(&dataset, context, &table, cfg.composition);
        let report = run_protocol(&dataset, &composed, cfg.protocol, &cfg.train, cfg.seed)?;
        Ok(SweepRow {
            context,
            accuracy: report.accuracy,
            per_class_f1: report
                .per_class
                .iter()
                .map(|(l, c)| (l.clone(), c.f1))
                .collect(),
            fold_summary: report.fold_summary,
            degenerate_folds: report.degenerate_folds,
        })
    };
    let run_all = || {
        points
            .par_iter()
            .map(eval_point)
            .collect::<anyhow::Result<Vec<_>>>()
    };
    let rows = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("cannot build thread pool")?
            .install(run_all),
        None => run_all(),
    }?;

    fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("cannot create `{}`", cfg.out_dir.display()))?;
    let tsv_path = cfg.out_dir.join("sweep.tsv");
    let json_path = cfg.out_dir.join("sweep.json");
    write_output(&tsv_path, sweep_tsv(&dataset.label_set, &rows, &digest))?;

    #[derive(Serialize)]
    struct SweepDoc<'a> {
        inputs_digest: &'a str,
        inputs: &'a [InputRecord],
        config: serde_json::Value,
        rows: &'a [SweepRow],
    }
    write_json(
        &json_path,
        &SweepDoc {
            inputs_digest: &digest,
            inputs: &inputs,
            config: cfg.echo(),
            rows: &rows,
        },
    )?;

    let summary = format!(
        "{} sweep points | protocol {} | best accuracy {:.4}",
        rows.len(),
        cfg.protocol,
        rows.iter().map(|r| r.accuracy).fold(f64::MIN, f64::max)
    );
    Ok(Written {
        files: vec![tsv_path, json_path],
        summary,
    })
}

/// The `subsample` command: drop single-label lemmas, cap per-lemma
/// majority skew, emit the reduced index plus a manifest.
pub fn cmd_subsample(cfg: &CorpusConfig) -> anyhow::Result<Written> {
    let inputs = [
        hash_file("conllu", &cfg.conllu)?,
        hash_file("index", &cfg.index)?,
    ];
    let digest = combined_digest(&inputs);

    let dataset = crate::formats::load_dataset(
        &cfg.conllu,
        &cfg.index,
        &cfg.dataset_name,
        cfg.label_set.clone(),
    )?;
    let (reduced, report) =
        subsample_ambiguous_with(&dataset, cfg.max_majority_fraction, cfg.seed)?;

    let mut lemma_before: BTreeMap<String, usize> = BTreeMap::new();
    for inst in &dataset.instances {
        *lemma_before.entry(inst.verb_lemma.clone()).or_default() += 1;
    }
    let mut lemma_after: BTreeMap<String, usize> = BTreeMap::new();
    for inst in &reduced.instances {
        *lemma_after.entry(inst.verb_lemma.clone()).or_default() += 1;
    }
    let per_lemma: BTreeMap<String, (usize, usize)> = lemma_before
        .iter()
        .map(|(lemma, &before)| {
            let after = lemma_after.get(lemma).copied().unwrap_or(0);
            (lemma.clone(), (before, after))
        })
        .collect();

    fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("cannot create `{}`", cfg.out_dir.display()))?;
    let index_path = cfg.out_dir.join("subsampled_index.tsv");
    let manifest_path = cfg.out_dir.join("subsample_manifest.json");
    let mut tsv = format!("# inputs_digest={digest}\n");
    tsv.push_str(&index::serialize_index(&reduced.instances));
    write_output(&index_path, tsv)?;

    #[derive(Serialize)]
    struct SubsampleDoc<'a> {
        inputs_digest: &'a str,
        inputs: &'a [InputRecord],
        seed: u64,
        max_majority_fraction: f64,
        report: &'a aspect_core::resample::SubsampleReport,
        /// lemma → (instances before, instances after)
        per_lemma_counts: &'a BTreeMap<String, (usize, usize)>,
    }
    write_json(
        &manifest_path,
        &SubsampleDoc {
            inputs_digest: &digest,
            inputs: &inputs,
            seed: cfg.seed,
            max_majority_fraction: cfg.max_majority_fraction,
            report: &report,
            per_lemma_counts: &per_lemma,
        },
    )?;

    let summary = format!(
        "{} -> {} instances | {} single-label lemmas dropped | {} lemmas downsampled",
        report.input_instances,
        report.output_instances,
        report.single_label_lemmas_dropped,
        report.lemmas_downsampled
    );
    Ok(Written {
        files: vec![index_path, manifest_path],
        summary,
    })
}

/// The `stats` command: dataset statistics as JSON.
pub fn cmd_stats(cfg: &CorpusConfig) -> anyhow::Result<Written> {
    let inputs = [
        hash_file("conllu", &cfg.conllu)?,
        hash_file("index", &cfg.index)?,
    ];
    let digest = combined_digest(&inputs);
    let dataset = crate::formats::load_dataset(
        &cfg.conllu,
        &cfg.index,
        &cfg.dataset_name,
        cfg.label_set.clone(),
    )?;
    let stats = dataset_stats(&dataset);

    fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("cannot create `{}`", cfg.out_dir.display()))?;
    let stats_path = cfg.out_dir.join("stats.json");

    #[derive(Serialize)]
    struct StatsDoc<'a> {
        inputs_digest: &'a str,
        inputs: &'a [InputRecord],
        stats: &'a aspect_core::corpus::DatasetStats,
    }
    write_json(
        &stats_path,
        &StatsDoc {
            inputs_digest: &digest,
            inputs: &inputs,
            stats: &stats,
        },
    )?;

    let counts = dataset
        .label_set
        .iter()
        .map(|l| format!("{l} {}", stats.label_counts.get(l).copied().unwrap_or(0)))
        .collect::<Vec<_>>()
        .join(", ");
    let summary = format!(
        "{} | {} instances | {}",
        dataset.name, stats.instances, counts
    );
    Ok(Written {
        files: vec![stats_path],
        summary,
    })
}

/// Loads predictions for analysis from either a report JSON or a
/// prediction-log TSV. The TSV carries no verb lemmas, so per-verb output
/// is only available from the JSON flavor.
fn load_predictions(path: &Path) -> anyhow::Result<(Vec<String>, Vec<Prediction>, bool)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read prediction log `{}`", path.display()))?;
    if text.trim_start().starts_with('{') {
        #[derive(serde::Deserialize)]
        struct ReportOnly {
            labels: Vec<String>,
            predictions: Vec<Prediction>,
        }
        let doc: ReportOnly = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse report JSON `{}`", path.display()))?;
        Ok((doc.labels, doc.predictions, true))
    } else {
        let rows = predlog::parse_predlog(&text)?;
        let mut labels: Vec<String> = Vec::new();
        for row in &rows {
            for (label, _) in &row.scores {
                if !labels.iter().any(|l| l == label) {
                    labels.push(label.clone());
                }
            }
        }
        let predictions = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.to_prediction(i))
            .collect();
        Ok((labels, predictions, false))
    }
}

fn load_partition(path: Option<&Path>) -> anyhow::Result<TagClassPartition> {
    match path {
        None => Ok(TagClassPartition::ptb()),
        Some(p) => {
            #[derive(serde::Deserialize)]
            struct PartitionFile {
                closed: BTreeSet<String>,
                open: BTreeSet<String>,
            }
            let text = fs::read_to_string(p)
                .with_context(|| format!("cannot read partition `{}`", p.display()))?;
            let file: PartitionFile = serde_json::from_str(&text)
                .with_context(|| format!("cannot parse partition `{}`", p.display()))?;
            Ok(TagClassPartition::new(file.closed, file.open)?)
        }
    }
}

/// The `analyze` command: PoS accuracy, class-group means, per-verb table.
pub fn cmd_analyze(
    log_path: &Path,
    partition_path: Option<&Path>,
    out_dir: &Path,
) -> anyhow::Result<Written> {
    let mut inputs = vec![hash_file("log", log_path)?];
    if let Some(p) = partition_path {
        inputs.push(hash_file("partition", p)?);
    }
    let digest = combined_digest(&inputs);

    let (labels, predictions, has_lemmas) = load_predictions(log_path)?;
    anyhow::ensure!(!predictions.is_empty(), "empty prediction log");
    let partition = load_partition(partition_path)?;

    let table = pos_accuracy(&predictions);
    let groups = class_group_accuracy(&table, &partition);
    let groups_weighted = class_group_accuracy_weighted(&table, &partition);

    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create `{}`", out_dir.display()))?;
    let json_path = out_dir.join("pos_accuracy.json");
    let tsv_path = out_dir.join("pos_accuracy.tsv");

    #[derive(Serialize)]
    struct AnalyzeDoc<'a> {
        inputs_digest: &'a str,
        inputs: &'a [InputRecord],
        total_participations: usize,
        pos_accuracy: &'a PosAccuracyTable,
        partition: &'a TagClassPartition,
        group_means: &'a GroupAverages,
        group_means_weighted: &'a GroupAverages,
    }
    write_json(
        &json_path,
        &AnalyzeDoc {
            inputs_digest: &digest,
            inputs: &inputs,
            total_participations: table.total_participations(),
            pos_accuracy: &table,
            partition: &partition,
            group_means: &groups,
            group_means_weighted: &groups_weighted,
        },
    )?;

    let mut tsv = format!("# inputs_digest={digest}\ntag\tcorrect\tincorrect\taccuracy\n");
    for (tag, stats) in &table.per_tag {
        tsv.push_str(&format!(
            "{tag}\t{}\t{}\t{}\n",
            stats.correct, stats.incorrect, stats.accuracy
        ));
    }
    write_output(&tsv_path, tsv)?;

    let mut files = vec![json_path, tsv_path];
    if has_lemmas {
        let verb_path = out_dir.join("per_verb.tsv");
        let verbs = per_verb_report(&labels, &predictions);
        write_output(&verb_path, per_verb_tsv(&labels, &verbs, &digest))?;
        files.push(verb_path);
    }

    let summary = format!(
        "{} predictions | {} tags | closed {} | open {}",
        predictions.len(),
        table.per_tag.len(),
        groups
            .closed
            .map(|a| format!("{a:.4}"))
            .unwrap_or_else(|| "-".to_string()),
        groups
            .open
            .map(|a| format!("{a:.4}"))
            .unwrap_or_else(|| "-".to_string()),
    );
    Ok(Written { files, summary })
}

fn per_verb_tsv(
    labels: &[String],
    verbs: &BTreeMap<String, aspect_core::analysis::VerbReport>,
    digest: &str,
) -> String {
    let mut out = format!("# inputs_digest={digest}\n");
    out.push_str("lemma\tsupport\taccuracy");
    for label in labels {
        out.push_str(&format!("\tf1_{label}"));
    }
    out.push_str("\tdegenerate\n");
    for (lemma, report) in verbs {
        out.push_str(&format!(
            "{}\t{}\t{}",
            predlog::escape_cell(lemma),
            report.support,
            report.accuracy
        ));
        for label in labels {
            let f1 = report.per_class_f1.get(label).copied().unwrap_or(0.0);
            out.push_str(&format!("\t{f1}"));
        }
        out.push_str(&format!("\t{}\n", report.degenerate));
    }
    out
}

/// Result of the `baseline` command.
#[derive(Debug, Clone, Serialize)]
pub struct BaselineSummary {
    /// The majority label of the training portion.
    pub label: String,
    /// Fraction of the evaluated portion carrying that label.
    pub p: f64,
    /// Whether p was computed on a held-out test split or the whole set.
    pub evaluated_on: &'static str,
    pub accuracy: f64,
    pub majority_f1: f64,
    pub minority_f1: f64,
}

/// Computes the majority baseline from index rows alone. With split tags
/// on every row, the majority label comes from train and p from test;
/// otherwise both come from the whole file.
pub fn baseline_from_rows(
    rows: &[index::IndexRow],
    label_order: &[String],
) -> anyhow::Result<BaselineSummary> {
    anyhow::ensure!(!rows.is_empty(), "index file has no instances");
    let all_tagged = rows.iter().all(|r| r.split.is_some());
    let (train_labels, eval_labels): (Vec<String>, Vec<String>) = if all_tagged {
        (
            rows.iter()
                .filter(|r| r.split == Some(Split::Train))
                .map(|r| r.label.clone())
                .collect(),
            rows.iter()
                .filter(|r| r.split == Some(Split::Test))
                .map(|r| r.label.clone())
                .collect(),
        )
    } else {
        let all: Vec<String> = rows.iter().map(|r| r.label.clone()).collect();
        (all.clone(), all)
    };
    anyhow::ensure!(!train_labels.is_empty(), "no training instances");
    anyhow::ensure!(!eval_labels.is_empty(), "no evaluation instances");

    let baseline = majority_baseline(&train_labels, label_order)?;
    let p = eval_labels.iter().filter(|l| *l == &baseline.label).count() as f64
        / eval_labels.len() as f64;
    let closed = majority_closed_form(p);
    Ok(BaselineSummary {
        label: baseline.label,
        p,
        evaluated_on: if all_tagged {
            "test split"
        } else {
            "all instances"
        },
        accuracy: closed.accuracy,
        majority_f1: closed.majority_f1,
        minority_f1: closed.minority_f1,
    })
}

/// The `baseline` command: majority-class closed forms from the index.
pub fn cmd_baseline(
    index_path: &Path,
    label_set: Option<Vec<String>>,
    out_dir: Option<&Path>,
) -> anyhow::Result<Written> {
    let inputs = [hash_file("index", index_path)?];
    let digest = combined_digest(&inputs);
    let rows = index::load_index(index_path)?;

    // Without a declared label set, labels rank by first appearance.
    let label_order = label_set.unwrap_or_else(|| {
        let mut seen = Vec::new();
        for row in &rows {
            if !seen.iter().any(|l| l == &row.label) {
                seen.push(row.label.clone());
            }
        }
        seen
    });
    let baseline = baseline_from_rows(&rows, &label_order)?;

    let mut files = Vec::new();
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create `{}`", dir.display()))?;
        let path = dir.join("baseline.json");
        #[derive(Serialize)]
        struct BaselineDoc<'a> {
            inputs_digest: &'a str,
            inputs: &'a [InputRecord],
            baseline: &'a BaselineSummary,
        }
        write_json(
            &path,
            &BaselineDoc {
                inputs_digest: &digest,
                inputs: &inputs,
                baseline: &baseline,
            },
        )?;
        files.push(path);
    }

    let summary = format!(
        "majority label `{}` on {} (p={:.3}): acc {:.1} / F1 {:.1} / {:.1}",
        baseline.label,
        baseline.evaluated_on,
        baseline.p,
        100.0 * baseline.accuracy,
        100.0 * baseline.majority_f1,
        100.0 * baseline.minority_f1
    );
    Ok(Written { files, summary })
}

/// Context PoS-distribution report (part of `stats` when a context spec is
/// given).
pub fn context_distribution(dataset: &Dataset, spec: ContextSpec) -> BTreeMap<String, usize> {
    pos_distribution(dataset, spec)
}

/// Re-exported treebank loader used by tests and the CLI.
pub fn load_sentences(path: &Path) -> anyhow::Result<Vec<ConlluSentence>> {
    Ok(conllu::load_conllu(path)?)
}
