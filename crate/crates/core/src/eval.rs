//! Evaluation protocols, metrics, and prediction logs.
//!
//! A protocol is planned as a list of [`Fold`]s (train/test index sets over
//! the dataset), each fold is executed independently, and the outcomes are
//! assembled into an [`EvalReport`] in dataset order. The split makes fold
//! execution embarrassingly parallel without giving up determinism: the
//! assembled report depends only on the plan, never on completion order.
//!
//! Folds whose training complement collapses to a single label do not
//! abort the run; they fall back to the majority-class baseline and are
//! flagged both on each affected [`Prediction`] and in the report's
//! degenerate-fold count.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compose::{ComposedInstance, Contributor};
use crate::corpus::{Dataset, Split};
use crate::model::{majority_baseline, train_indexed, ModelError, TrainConfig};

/// An evaluation protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Protocol {
    /// Leave-one-out cross-validation.
    Loo,
    /// Stratified k-fold cross-validation.
    KFold { k: usize },
    /// Cross-validation with whole documents assigned to folds.
    DocCv { k: usize },
    /// Train on the predefined train split, evaluate on the test split.
    Fixed,
    /// Hold out one verb lemma at a time.
    VerbHoldout,
}

/// Error for unrecognised [`Protocol`] strings.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown protocol `{0}`; expected loo, kfold:K, doc-cv:K, fixed, or verb-holdout")]
pub struct ParseProtocolError(pub String);

impl core::str::FromStr for Protocol {
    type Err = ParseProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "loo" => return Ok(Protocol::Loo),
            "fixed" => return Ok(Protocol::Fixed),
            "verb-holdout" => return Ok(Protocol::VerbHoldout),
            "kfold" => return Ok(Protocol::KFold { k: 10 }),
            "doc-cv" => return Ok(Protocol::DocCv { k: 10 }),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("kfold:") {
            if let Ok(k) = k.parse::<usize>() {
                return Ok(Protocol::KFold { k });
            }
        }
        if let Some(k) = s.strip_prefix("doc-cv:") {
            if let Ok(k) = k.parse::<usize>() {
                return Ok(Protocol::DocCv { k });
            }
        }
        Err(ParseProtocolError(s.to_string()))
    }
}

impl core::fmt::Display for Protocol {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Protocol::Loo => write!(f, "loo"),
            Protocol::KFold { k } => write!(f, "kfold:{k}"),
            Protocol::DocCv { k } => write!(f, "doc-cv:{k}"),
            Protocol::Fixed => write!(f, "fixed"),
            Protocol::VerbHoldout => write!(f, "verb-holdout"),
        }
    }
}

impl From<Protocol> for String {
    fn from(p: Protocol) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Protocol {
    type Error = ParseProtocolError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Errors from planning or running an evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("protocol needs at least {needed} instances, dataset has {got}")]
    DatasetTooSmall { needed: usize, got: usize },
    #[error("fold count must be at least 2, got {k}")]
    TooFewFolds { k: usize },
    #[error("cannot split {n} instances into {k} folds")]
    MoreFoldsThanInstances { k: usize, n: usize },
    #[error("cannot assign {docs} documents to {k} folds")]
    FewerDocsThanFolds { docs: usize, k: usize },
    #[error("instance {index} has no train/test split tag")]
    MissingSplitTag { index: usize },
    #[error("the {split:?} split is empty")]
    EmptySplit { split: Split },
    #[error("verb holdout needs at least 2 distinct lemmas")]
    SingleLemma,
    #[error("composed batch has {composed} rows for {instances} instances")]
    BatchMismatch { composed: usize, instances: usize },
    #[error("cannot compute metrics over an empty prediction list")]
    EmptyPredictions,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One train/test split of the dataset, by instance index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub index: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// The model's verdict on one evaluated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    /// Position of the instance in the dataset.
    pub instance_index: usize,
    /// Stable identifier (`doc::sent::target`).
    pub instance_ref: String,
    pub verb_lemma: String,
    pub gold: String,
    pub predicted: String,
    /// Raw per-class scores aligned with the report's label order. For
    /// degenerate folds this holds the fallback's one-hot vote instead.
    pub scores: Vec<f64>,
    pub correct: bool,
    /// True when this prediction came from the majority-baseline fallback
    /// of a single-label training complement.
    pub degenerate_fold: bool,
    /// Context provenance copied from the composed instance.
    pub contributors: Vec<Contributor>,
}

/// Precision/recall/F1/support for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Pooled metrics plus confusion matrix over a prediction list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsBundle {
    pub accuracy: f64,
    pub per_class: BTreeMap<String, ClassMetrics>,
    /// `confusion[g][p]` counts instances of gold class `g` (label-order
    /// index) predicted as class `p`.
    pub confusion: Vec<Vec<usize>>,
    pub total: usize,
}

/// Accuracy and per-class F1 of a single fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldScore {
    pub fold: usize,
    pub test_size: usize,
    pub accuracy: f64,
    pub macro_f1: f64,
    pub per_class_f1: BTreeMap<String, f64>,
}

/// Mean and sample standard deviation of fold-level metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSummary {
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub macro_f1_mean: f64,
    pub macro_f1_std: f64,
    pub per_class_f1_mean: BTreeMap<String, f64>,
    pub per_class_f1_std: BTreeMap<String, f64>,
}

/// The complete result of one evaluation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: Protocol,
    /// Class labels in declared order; confusion rows/columns and
    /// prediction score vectors follow this order.
    pub labels: Vec<String>,
    pub accuracy: f64,
    pub per_class: BTreeMap<String, ClassMetrics>,
    pub confusion: Vec<Vec<usize>>,
    /// Per-fold scores for cross-validation protocols, `None` otherwise.
    pub fold_scores: Option<Vec<FoldScore>>,
    pub fold_summary: Option<FoldSummary>,
    pub degenerate_folds: usize,
    /// One entry per evaluated instance, in dataset order.
    pub predictions: Vec<Prediction>,
}

/// Computes accuracy, per-class precision/recall/F1 (0/0 counts as 0),
/// and the confusion matrix for a prediction log.
pub fn compute_metrics(
    labels: &[String],
    predictions: &[Prediction],
) -> Result<MetricsBundle, EvalError> {
    if predictions.is_empty() {
        return Err(EvalError::EmptyPredictions);
    }
    let index: BTreeMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let n = labels.len();
    let mut confusion = vec![vec![0usize; n]; n];
    let mut correct = 0usize;
    for p in predictions {
        let g = index[p.gold.as_str()];
        let pr = index[p.predicted.as_str()];
        confusion[g][pr] += 1;
        if g == pr {
            correct += 1;
        }
    }
    let total = predictions.len();
    let mut per_class = BTreeMap::new();
    for (k, label) in labels.iter().enumerate() {
        let tp = confusion[k][k];
        let gold_k: usize = confusion[k].iter().sum();
        let pred_k: usize = confusion.iter().map(|row| row[k]).sum();
        let precision = ratio(tp, pred_k);
        let recall = ratio(tp, gold_k);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_class.insert(
            label.clone(),
            ClassMetrics {
                precision,
                recall,
                f1,
                support: gold_k,
            },
        );
    }
    Ok(MetricsBundle {
        accuracy: correct as f64 / total as f64,
        per_class,
        confusion,
        total,
    })
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Plans the folds of `protocol` over `dataset`. The plan depends only on
/// the dataset, the protocol, and `seed`.
pub fn plan_folds(
    dataset: &Dataset,
    protocol: Protocol,
    seed: u64,
) -> Result<Vec<Fold>, EvalError> {
    match protocol {
        Protocol::Loo => plan_loo(dataset),
        Protocol::KFold { k } => plan_kfold(dataset, k, seed),
        Protocol::DocCv { k } => plan_doc_cv(dataset, k, seed),
        Protocol::Fixed => plan_fixed(dataset),
        Protocol::VerbHoldout => plan_verb_holdout(dataset),
    }
}

fn plan_loo(dataset: &Dataset) -> Result<Vec<Fold>, EvalError> {
    let n = dataset.len();
    if n < 2 {
        return Err(EvalError::DatasetTooSmall { needed: 2, got: n });
    }
    Ok((0..n)
        .map(|i| Fold {
            index: i,
            train: (0..n).filter(|&j| j != i).collect(),
            test: vec![i],
        })
        .collect())
}

/// Stratified k-fold. Fold sizes are fixed to ⌊n/k⌋ or ⌈n/k⌉; the number
/// of instances of each class going to each fold comes from a controlled
/// rounding of the exact quota matrix (fold size × class share), so every
/// fold's class proportions sit strictly within 1/fold_size of the global
/// proportions. Within a class, the seeded shuffle decides which concrete
/// instances fill the quotas.
fn plan_kfold(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<Fold>, EvalError> {
    if k < 2 {
        return Err(EvalError::TooFewFolds { k });
    }
    let n = dataset.len();
    if n < k {
        return Err(EvalError::MoreFoldsThanInstances { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let class_members: Vec<Vec<usize>> = dataset
        .label_set
        .iter()
        .map(|label| {
            let mut members: Vec<usize> = dataset
                .instances
                .iter()
                .enumerate()
                .filter(|(_, inst)| &inst.label == label)
                .map(|(i, _)| i)
                .collect();
            members.shuffle(&mut rng);
            members
        })
        .collect();
    let row_sums: Vec<usize> = (0..k).map(|f| n / k + usize::from(f < n % k)).collect();
    let col_sums: Vec<usize> = class_members.iter().map(|m| m.len()).collect();
    let quota = round_quota_matrix(&row_sums, &col_sums);
    let mut fold_members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (c, members) in class_members.iter().enumerate() {
        let mut offset = 0usize;
        for (f, row) in quota.iter().enumerate() {
            fold_members[f].extend(&members[offset..offset + row[c]]);
            offset += row[c];
        }
    }
    Ok(build_partition_folds(n, fold_members))
}

/// Rounds the fractional matrix `row_sums[f]·col_sums[c]/n` to integers so
/// that all row and column sums are preserved exactly and every entry
/// differs from the exact quota by strictly less than one.
///
/// Entries are kept as numerators scaled by `n`, so the arithmetic is
/// exact. Fractional cells always form a bipartite subgraph of minimum
/// degree two (row and column sums are integral), so while any remain
/// there is a cycle along which mass can be pushed alternately up and down
/// until some cell reaches its floor or ceiling — rounding one cell per
/// push without disturbing any sum.
fn round_quota_matrix(row_sums: &[usize], col_sums: &[usize]) -> Vec<Vec<usize>> {
    let n: u64 = row_sums.iter().map(|&s| s as u64).sum();
    debug_assert_eq!(n, col_sums.iter().map(|&s| s as u64).sum::<u64>());
    let mut num: Vec<Vec<u64>> = row_sums
        .iter()
        .map(|&s| col_sums.iter().map(|&c| s as u64 * c as u64).collect())
        .collect();
    loop {
        let fractional: Vec<Vec<bool>> = num
            .iter()
            .map(|row| row.iter().map(|&v| v % n != 0).collect())
            .collect();
        let Some(cycle) = fractional_cycle(&fractional) else {
            break;
        };
        let mut delta = u64::MAX;
        for (i, &(f, c)) in cycle.iter().enumerate() {
            let down = num[f][c] % n;
            let step = if i % 2 == 0 { n - down } else { down };
            delta = delta.min(step);
        }
        for (i, &(f, c)) in cycle.iter().enumerate() {
            if i % 2 == 0 {
                num[f][c] += delta;
            } else {
                num[f][c] -= delta;
            }
        }
    }
    num.iter()
        .map(|row| row.iter().map(|&v| (v / n) as usize).collect())
        .collect()
}

/// Finds a simple cycle through fractional cells, returned as the list of
/// cells (edges) around the cycle. `None` when no fractional cell remains.
fn fractional_cycle(fractional: &[Vec<bool>]) -> Option<Vec<(usize, usize)>> {
    let rows = fractional.len();
    let cols = fractional.first().map_or(0, Vec::len);
    let start = (0..rows).find(|&f| fractional[f].iter().any(|&b| b))?;
    // Node ids: rows are 0..rows, columns are rows..rows+cols. Walk the
    // graph never re-using the arriving edge; every touched node has
    // degree >= 2, so the walk must eventually revisit a node.
    let mut position: Vec<Option<usize>> = vec![None; rows + cols];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut current = start;
    let mut came_by: Option<(usize, usize)> = None;
    loop {
        if let Some(first) = position[current] {
            return Some(edges[first..].to_vec());
        }
        position[current] = Some(edges.len());
        let (cell, next) = if current < rows {
            let f = current;
            let c = (0..cols)
                .find(|&c| fractional[f][c] && came_by != Some((f, c)))
                .expect("fractional row has a second fractional cell");
            ((f, c), rows + c)
        } else {
            let c = current - rows;
            let f = (0..rows)
                .find(|&f| fractional[f][c] && came_by != Some((f, c)))
                .expect("fractional column has a second fractional cell");
            ((f, c), f)
        };
        edges.push(cell);
        came_by = Some(cell);
        current = next;
    }
}

/// Document-grouped folds: documents are seeded-shuffled, ordered by
/// instance count (largest first), and each assigned to the currently
/// smallest fold.
fn plan_doc_cv(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<Fold>, EvalError> {
    if k < 2 {
        return Err(EvalError::TooFewFolds { k });
    }
    let mut doc_members: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, inst) in dataset.instances.iter().enumerate() {
        doc_members.entry(inst.doc_id.as_str()).or_default().push(i);
    }
    if doc_members.len() < k {
        return Err(EvalError::FewerDocsThanFolds {
            docs: doc_members.len(),
            k,
        });
    }
    let mut docs: Vec<(&str, Vec<usize>)> = doc_members.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    docs.shuffle(&mut rng);
    // Stable sort keeps the shuffled order among equal-sized documents.
    docs.sort_by(|a, b| b.1.len().cmp(&a.1.len()));
    let mut fold_members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (_, members) in docs {
        let smallest = (0..k)
            .min_by_key(|&f| (fold_members[f].len(), f))
            .expect("k >= 2");
        fold_members[smallest].extend(members);
    }
    Ok(build_partition_folds(dataset.len(), fold_members))
}

fn build_partition_folds(n: usize, mut fold_members: Vec<Vec<usize>>) -> Vec<Fold> {
    for members in &mut fold_members {
        members.sort_unstable();
    }
    let k = fold_members.len();
    (0..k)
        .map(|f| {
            let mut in_fold = vec![false; n];
            for &i in &fold_members[f] {
                in_fold[i] = true;
            }
            Fold {
                index: f,
                train: (0..n).filter(|&i| !in_fold[i]).collect(),
                test: fold_members[f].clone(),
            }
        })
        .collect()
}

fn plan_fixed(dataset: &Dataset) -> Result<Vec<Fold>, EvalError> {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, inst) in dataset.instances.iter().enumerate() {
        match inst.split {
            Some(Split::Train) => train.push(i),
            Some(Split::Test) => test.push(i),
            None => return Err(EvalError::MissingSplitTag { index: i }),
        }
    }
    if train.is_empty() {
        return Err(EvalError::EmptySplit {
            split: Split::Train,
        });
    }
    if test.is_empty() {
        return Err(EvalError::EmptySplit { split: Split::Test });
    }
    Ok(vec![Fold {
        index: 0,
        train,
        test,
    }])
}

fn plan_verb_holdout(dataset: &Dataset) -> Result<Vec<Fold>, EvalError> {
    let mut by_lemma: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, inst) in dataset.instances.iter().enumerate() {
        by_lemma
            .entry(inst.verb_lemma.as_str())
            .or_default()
            .push(i);
    }
    if by_lemma.len() < 2 {
        return Err(EvalError::SingleLemma);
    }
    let n = dataset.len();
    Ok(by_lemma
        .into_values()
        .enumerate()
        .map(|(f, test)| {
            let mut held = vec![false; n];
            for &i in &test {
                held[i] = true;
            }
            Fold {
                index: f,
                train: (0..n).filter(|&i| !held[i]).collect(),
                test,
            }
        })
        .collect())
}

/// Predictions of a single executed fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub fold: usize,
    pub predictions: Vec<Prediction>,
    /// True when the fold used the majority-baseline fallback.
    pub degenerate: bool,
}

/// Trains on the fold's train rows and predicts its test rows. A
/// single-label training complement falls back to the majority baseline
/// instead of failing.
pub fn run_fold(
    dataset: &Dataset,
    composed: &[ComposedInstance],
    fold: &Fold,
    config: &TrainConfig,
) -> Result<FoldOutcome, EvalError> {
    if composed.len() != dataset.len() {
        return Err(EvalError::BatchMismatch {
            composed: composed.len(),
            instances: dataset.len(),
        });
    }
    let gold: Vec<String> = dataset.instances.iter().map(|i| i.label.clone()).collect();
    let labels = &dataset.label_set;
    match train_indexed(composed, &gold, &fold.train, labels, config) {
        Ok(model) => {
            let predictions = fold
                .test
                .iter()
                .map(|&i| {
                    let scored = model.predict(&composed[i].vector)?;
                    let predicted = model.predicted_label(&scored).to_string();
                    Ok(make_prediction(
                        dataset,
                        composed,
                        i,
                        predicted,
                        scored.scores,
                        false,
                    ))
                })
                .collect::<Result<Vec<_>, ModelError>>()?;
            Ok(FoldOutcome {
                fold: fold.index,
                predictions,
                degenerate: false,
            })
        }
        Err(ModelError::SingleClass { .. }) => {
            let train_gold: Vec<String> = fold.train.iter().map(|&i| gold[i].clone()).collect();
            let baseline = majority_baseline(&train_gold, labels)?;
            let vote: Vec<f64> = labels
                .iter()
                .map(|l| if *l == baseline.label { 1.0 } else { 0.0 })
                .collect();
            let predictions = fold
                .test
                .iter()
                .map(|&i| {
                    make_prediction(
                        dataset,
                        composed,
                        i,
                        baseline.label.clone(),
                        vote.clone(),
                        true,
                    )
                })
                .collect();
            Ok(FoldOutcome {
                fold: fold.index,
                predictions,
                degenerate: true,
            })
        }
        Err(e) => Err(EvalError::Model(e)),
    }
}

fn make_prediction(
    dataset: &Dataset,
    composed: &[ComposedInstance],
    i: usize,
    predicted: String,
    scores: Vec<f64>,
    degenerate: bool,
) -> Prediction {
    let inst = &dataset.instances[i];
    Prediction {
        instance_index: i,
        instance_ref: composed[i].instance_ref.clone(),
        verb_lemma: inst.verb_lemma.clone(),
        gold: inst.label.clone(),
        correct: inst.label == predicted,
        predicted,
        scores,
        degenerate_fold: degenerate,
        contributors: composed[i].contributors.clone(),
    }
}

/// Pools fold outcomes into a report: predictions in dataset order, pooled
/// metrics, and (for cross-validation protocols) per-fold scores with
/// mean ± sample standard deviation.
pub fn assemble(
    protocol: Protocol,
    dataset: &Dataset,
    mut outcomes: Vec<FoldOutcome>,
) -> Result<EvalReport, EvalError> {
    outcomes.sort_by_key(|o| o.fold);
    let cross_validated = matches!(protocol, Protocol::KFold { .. } | Protocol::DocCv { .. });
    let fold_scores = if cross_validated {
        let scores = outcomes
            .iter()
            .map(|o| {
                let m = compute_metrics(&dataset.label_set, &o.predictions)?;
                let per_class_f1: BTreeMap<String, f64> =
                    m.per_class.iter().map(|(l, c)| (l.clone(), c.f1)).collect();
                let macro_f1 = per_class_f1.values().sum::<f64>() / per_class_f1.len() as f64;
                Ok(FoldScore {
                    fold: o.fold,
                    test_size: m.total,
                    accuracy: m.accuracy,
                    macro_f1,
                    per_class_f1,
                })
            })
            .collect::<Result<Vec<_>, EvalError>>()?;
        Some(scores)
    } else {
        None
    };
    let fold_summary = fold_scores.as_ref().map(|scores| {
        let (accuracy_mean, accuracy_std) =
            mean_std(&scores.iter().map(|s| s.accuracy).collect::<Vec<_>>());
        let (macro_f1_mean, macro_f1_std) =
            mean_std(&scores.iter().map(|s| s.macro_f1).collect::<Vec<_>>());
        let mut per_class_f1_mean = BTreeMap::new();
        let mut per_class_f1_std = BTreeMap::new();
        for label in &dataset.label_set {
            let values: Vec<f64> = scores.iter().map(|s| s.per_class_f1[label]).collect();
            let (m, s) = mean_std(&values);
            per_class_f1_mean.insert(label.clone(), m);
            per_class_f1_std.insert(label.clone(), s);
        }
        FoldSummary {
            accuracy_mean,
            accuracy_std,
            macro_f1_mean,
            macro_f1_std,
            per_class_f1_mean,
            per_class_f1_std,
        }
    });

    let degenerate_folds = outcomes.iter().filter(|o| o.degenerate).count();
    let mut predictions: Vec<Prediction> =
        outcomes.into_iter().flat_map(|o| o.predictions).collect();
    predictions.sort_by_key(|p| p.instance_index);
    let pooled = compute_metrics(&dataset.label_set, &predictions)?;
    Ok(EvalReport {
        protocol,
        labels: dataset.label_set.clone(),
        accuracy: pooled.accuracy,
        per_class: pooled.per_class,
        confusion: pooled.confusion,
        fold_scores,
        fold_summary,
        degenerate_folds,
        predictions,
    })
}

/// Mean and sample (n−1) standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, libm::sqrt(var))
}

/// Plans, executes, and assembles `protocol` sequentially. Callers that
/// want parallel folds can drive [`plan_folds`]/[`run_fold`]/[`assemble`]
/// themselves; the result is identical.
pub fn run_protocol(
    dataset: &Dataset,
    composed: &[ComposedInstance],
    protocol: Protocol,
    config: &TrainConfig,
    seed: u64,
) -> Result<EvalReport, EvalError> {
    let folds = plan_folds(dataset, protocol, seed)?;
    let outcomes = folds
        .iter()
        .map(|f| run_fold(dataset, composed, f, config))
        .collect::<Result<Vec<_>, _>>()?;
    assemble(protocol, dataset, outcomes)
}
