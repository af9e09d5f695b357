//! Post-hoc analyses over prediction logs: which PoS tags accompany
//! correct decisions, closed- versus open-class aggregation, context tag
//! distributions, per-verb breakdowns, and context-size sweeps.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::compose::compose_batch;
use crate::context::{extract_context, ContextSpec};
use crate::corpus::Dataset;
use crate::embeddings::EmbeddingTable;
use crate::eval::{compute_metrics, run_protocol, EvalError, FoldSummary, Prediction, Protocol};
use crate::model::TrainConfig;

/// Participation counts and accuracy for one PoS tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TagStats {
    /// Occurrences inside correctly classified instances.
    pub correct: usize,
    /// Occurrences inside misclassified instances.
    pub incorrect: usize,
    /// `correct / (correct + incorrect)`.
    pub accuracy: f64,
}

/// Per-tag context accuracy over a prediction log. Tags that never occur
/// as context are absent.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PosAccuracyTable {
    pub per_tag: BTreeMap<String, TagStats>,
}

impl PosAccuracyTable {
    /// Total context-token occurrences accounted for.
    pub fn total_participations(&self) -> usize {
        self.per_tag.values().map(|t| t.correct + t.incorrect).sum()
    }
}

/// Counts, for every context occurrence of a tag, whether the surrounding
/// instance was classified correctly. Target verbs are not counted — only
/// their context contributors (in- and out-of-vocabulary alike).
pub fn pos_accuracy(predictions: &[Prediction]) -> PosAccuracyTable {
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for p in predictions {
        for c in &p.contributors {
            let entry = counts.entry(c.pos.clone()).or_default();
            if p.correct {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
    }
    PosAccuracyTable {
        per_tag: counts
            .into_iter()
            .map(|(tag, (correct, incorrect))| {
                let accuracy = correct as f64 / (correct + incorrect) as f64;
                (
                    tag,
                    TagStats {
                        correct,
                        incorrect,
                        accuracy,
                    },
                )
            })
            .collect(),
    }
}

/// Error for overlapping closed/open tag sets.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("tag `{tag}` appears in both the closed and open class sets")]
pub struct PartitionError {
    pub tag: String,
}

/// Disjoint closed-class / open-class tag sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagClassPartition {
    pub closed: BTreeSet<String>,
    pub open: BTreeSet<String>,
}

impl TagClassPartition {
    pub fn new(closed: BTreeSet<String>, open: BTreeSet<String>) -> Result<Self, PartitionError> {
        if let Some(tag) = closed.intersection(&open).next() {
            return Err(PartitionError { tag: tag.clone() });
        }
        Ok(TagClassPartition { closed, open })
    }

    /// Standard Penn Treebank partition: function-word tags versus
    /// content-word tags.
    pub fn ptb() -> Self {
        let closed = [
            "DT", "IN", "TO", "CC", "MD", "RP", "EX", "PDT", "POS", "PRP", "PRP$", "WDT", "WP",
            "WP$", "WRB", "UH",
        ];
        let open = [
            "NN", "NNS", "NNP", "NNPS", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "JJ", "JJR",
            "JJS", "RB", "RBR", "RBS", "CD", "FW",
        ];
        TagClassPartition {
            closed: closed.iter().map(|s| s.to_string()).collect(),
            open: open.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Universal-POS fallback for corpora without fine-grained tags.
    pub fn upos() -> Self {
        let closed = [
            "ADP", "AUX", "CCONJ", "DET", "PART", "PRON", "SCONJ", "INTJ",
        ];
        let open = ["ADJ", "ADV", "NOUN", "NUM", "PROPN", "VERB"];
        TagClassPartition {
            closed: closed.iter().map(|s| s.to_string()).collect(),
            open: open.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Group-level accuracy aggregates; `None` when no tag of the group occurs
/// in the table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupAverages {
    pub closed: Option<f64>,
    pub open: Option<f64>,
}

/// Unweighted mean of per-tag accuracies within each group.
pub fn class_group_accuracy(
    table: &PosAccuracyTable,
    partition: &TagClassPartition,
) -> GroupAverages {
    let mean_of = |tags: &BTreeSet<String>| {
        let values: Vec<f64> = table
            .per_tag
            .iter()
            .filter(|(tag, _)| tags.contains(*tag))
            .map(|(_, stats)| stats.accuracy)
            .collect();
        if values.is_empty() {
            None
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    };
    GroupAverages {
        closed: mean_of(&partition.closed),
        open: mean_of(&partition.open),
    }
}

/// Participation-weighted variant: pools occurrences before dividing.
pub fn class_group_accuracy_weighted(
    table: &PosAccuracyTable,
    partition: &TagClassPartition,
) -> GroupAverages {
    let pooled = |tags: &BTreeSet<String>| {
        let (mut correct, mut total) = (0usize, 0usize);
        for (tag, stats) in &table.per_tag {
            if tags.contains(tag) {
                correct += stats.correct;
                total += stats.correct + stats.incorrect;
            }
        }
        if total == 0 {
            None
        } else {
            Some(correct as f64 / total as f64)
        }
    };
    GroupAverages {
        closed: pooled(&partition.closed),
        open: pooled(&partition.open),
    }
}

/// Counts every extracted context occurrence per PoS tag for one
/// extractor over a whole dataset.
pub fn pos_distribution(dataset: &Dataset, spec: ContextSpec) -> BTreeMap<String, usize> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for inst in &dataset.instances {
        for idx in extract_context(&inst.tokens, inst.target, spec) {
            *counts.entry(inst.tokens[idx].pos.clone()).or_default() += 1;
        }
    }
    counts
}

/// Metrics for one verb lemma's share of a prediction log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerbReport {
    pub support: usize,
    pub accuracy: f64,
    pub per_class_f1: BTreeMap<String, f64>,
    /// How many of the lemma's predictions came from degenerate folds.
    pub degenerate: usize,
}

/// Per-lemma metrics over a prediction log.
pub fn per_verb_report(
    labels: &[String],
    predictions: &[Prediction],
) -> BTreeMap<String, VerbReport> {
    let mut groups: BTreeMap<&str, Vec<&Prediction>> = BTreeMap::new();
    for p in predictions {
        groups.entry(p.verb_lemma.as_str()).or_default().push(p);
    }
    groups
        .into_iter()
        .map(|(lemma, group)| {
            let owned: Vec<Prediction> = group.iter().map(|p| (*p).clone()).collect();
            let m = compute_metrics(labels, &owned).expect("nonempty group");
            let report = VerbReport {
                support: owned.len(),
                accuracy: m.accuracy,
                per_class_f1: m.per_class.iter().map(|(l, c)| (l.clone(), c.f1)).collect(),
                degenerate: owned.iter().filter(|p| p.degenerate_fold).count(),
            };
            (lemma.to_string(), report)
        })
        .collect()
}

/// Errors from the sweep driver.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("sweep needs at least one context point")]
    EmptySweep,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// One sweep measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub context: ContextSpec,
    pub accuracy: f64,
    pub per_class_f1: BTreeMap<String, f64>,
    pub fold_summary: Option<FoldSummary>,
    pub degenerate_folds: usize,
}

/// Runs the same protocol (same seed, hence identical fold plans) once per
/// context point. Rows are independent: removing a point leaves the other
/// rows bit-identical.
pub fn window_sweep(
    dataset: &Dataset,
    table: &EmbeddingTable,
    points: &[ContextSpec],
    protocol: Protocol,
    config: &TrainConfig,
    seed: u64,
) -> Result<Vec<SweepRow>, AnalysisError> {
    if points.is_empty() {
        return Err(AnalysisError::EmptySweep);
    }
    points
        .iter()
        .map(|&context| {
            let composed = compose_batch(dataset, context, table);
            let report = run_protocol(dataset, &composed, protocol, config, seed)?;
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
        })
        .collect()
}
