//! Parsed sentences, annotated instances, and dataset-level operations.
//!
//! A [`Sentence`] is a dependency-parsed token list whose head pointers form
//! a tree with exactly one root. An [`Instance`] is a sentence together with
//! the index of the annotated target verb, its gold label, and its verb
//! lemma. A [`Dataset`] is a named list of instances over a declared label
//! set; the label-set order is significant (it drives prediction
//! tie-breaking and report layout).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// One token of a parsed sentence. Its position in the sentence is its
/// index in the containing `Vec`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// Surface form, stored verbatim (lowercasing happens at lookup time).
    pub form: String,
    /// PoS tag; fine-grained (PTB-style) when available, coarse otherwise.
    pub pos: String,
    /// 0-based index of the syntactic head; `None` marks the root.
    pub head: Option<usize>,
    /// Dependency relation to the head.
    pub deprel: String,
}

impl Token {
    pub fn new(
        form: impl Into<String>,
        pos: impl Into<String>,
        head: Option<usize>,
        deprel: impl Into<String>,
    ) -> Self {
        Token {
            form: form.into(),
            pos: pos.into(),
            head,
            deprel: deprel.into(),
        }
    }
}

/// Train/test membership for datasets with a predefined split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

/// Errors raised while validating sentences, instances, or datasets.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("sentence `{sent_id}` is empty")]
    EmptySentence { sent_id: String },
    #[error("sentence `{sent_id}`: token {index} has out-of-range head {head}")]
    HeadOutOfRange {
        sent_id: String,
        index: usize,
        head: usize,
    },
    #[error("sentence `{sent_id}`: token {index} is its own head")]
    SelfHead { sent_id: String, index: usize },
    #[error("sentence `{sent_id}` has {roots} root tokens, expected exactly one")]
    RootCount { sent_id: String, roots: usize },
    #[error("sentence `{sent_id}`: head pointers contain a cycle through token {index}")]
    HeadCycle { sent_id: String, index: usize },
    #[error("instance `{id}`: target index {target} out of range for {len} tokens")]
    TargetOutOfRange {
        id: String,
        target: usize,
        len: usize,
    },
    #[error("instance `{id}`: label `{label}` is not in the label set")]
    UnknownLabel { id: String, label: String },
    #[error("duplicate instance `{id}`")]
    DuplicateInstance { id: String },
    #[error("label set must not be empty")]
    EmptyLabelSet,
    #[error("label set contains duplicate `{label}`")]
    DuplicateLabel { label: String },
    #[error("label `{label}` contains a reserved character (tab, newline, `:` or `;`)")]
    ReservedLabelCharacter { label: String },
    #[error("merge mapping key `{label}` is not in the label set")]
    UnknownMergeKey { label: String },
    #[error("keep set entry `{label}` is not in the label set")]
    UnknownKeepLabel { label: String },
    #[error("keep set must not be empty")]
    EmptyKeepSet,
    #[error("operation produced an empty dataset")]
    EmptyResult,
}

/// A dependency-parsed sentence with validated tree structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub doc_id: String,
    pub sent_id: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// Builds a sentence and checks the head pointers: in range, never
    /// self-referential, exactly one root, and acyclic.
    pub fn new(
        doc_id: impl Into<String>,
        sent_id: impl Into<String>,
        tokens: Vec<Token>,
    ) -> Result<Self, CorpusError> {
        let sent_id = sent_id.into();
        validate_tree(&sent_id, &tokens)?;
        Ok(Sentence {
            doc_id: doc_id.into(),
            sent_id,
            tokens,
        })
    }

    /// 0-based index of the root token.
    pub fn root(&self) -> usize {
        self.tokens
            .iter()
            .position(|t| t.head.is_none())
            .expect("validated sentence has a root")
    }

    /// Indices of the tokens whose head is `index`, in ascending order.
    pub fn children(&self, index: usize) -> Vec<usize> {
        self.tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.head == Some(index))
            .map(|(i, _)| i)
            .collect()
    }
}

fn validate_tree(sent_id: &str, tokens: &[Token]) -> Result<(), CorpusError> {
    if tokens.is_empty() {
        return Err(CorpusError::EmptySentence {
            sent_id: sent_id.to_string(),
        });
    }
    let n = tokens.len();
    let mut roots = 0usize;
    for (i, tok) in tokens.iter().enumerate() {
        match tok.head {
            None => roots += 1,
            Some(h) if h == i => {
                return Err(CorpusError::SelfHead {
                    sent_id: sent_id.to_string(),
                    index: i,
                })
            }
            Some(h) if h >= n => {
                return Err(CorpusError::HeadOutOfRange {
                    sent_id: sent_id.to_string(),
                    index: i,
                    head: h,
                })
            }
            Some(_) => {}
        }
    }
    if roots != 1 {
        return Err(CorpusError::RootCount {
            sent_id: sent_id.to_string(),
            roots,
        });
    }
    // Every token must reach the root in at most n-1 parent steps.
    for start in 0..n {
        let mut cur = start;
        let mut steps = 0usize;
        while let Some(h) = tokens[cur].head {
            cur = h;
            steps += 1;
            if steps >= n {
                return Err(CorpusError::HeadCycle {
                    sent_id: sent_id.to_string(),
                    index: start,
                });
            }
        }
    }
    Ok(())
}

/// One annotated example: a sentence, the target verb within it, and the
/// gold label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub doc_id: String,
    pub sent_id: String,
    pub tokens: Vec<Token>,
    /// 0-based index of the annotated verb.
    pub target: usize,
    pub label: String,
    pub verb_lemma: String,
    pub split: Option<Split>,
}

impl Instance {
    /// Stable identifier: `doc_id::sent_id::target`.
    pub fn id(&self) -> String {
        format!("{}::{}::{}", self.doc_id, self.sent_id, self.target)
    }

    /// Surface form of the target verb.
    pub fn target_form(&self) -> &str {
        &self.tokens[self.target].form
    }
}

/// A named collection of instances over an ordered label set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    /// Declared labels in priority order (ties in prediction break towards
    /// the earliest label).
    pub label_set: Vec<String>,
    pub instances: Vec<Instance>,
}

impl Dataset {
    /// Builds a dataset and enforces its invariants: non-empty label set
    /// without duplicates or reserved characters, every instance label in
    /// the set, valid target indices, tree-shaped sentences, and unique
    /// `(doc_id, sent_id, target)` triples.
    pub fn new(
        name: impl Into<String>,
        label_set: Vec<String>,
        instances: Vec<Instance>,
    ) -> Result<Self, CorpusError> {
        if label_set.is_empty() {
            return Err(CorpusError::EmptyLabelSet);
        }
        let mut seen_labels = BTreeSet::new();
        for label in &label_set {
            if label.contains(['\t', '\n', ':', ';']) {
                return Err(CorpusError::ReservedLabelCharacter {
                    label: label.clone(),
                });
            }
            if !seen_labels.insert(label.as_str()) {
                return Err(CorpusError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        let mut seen_ids = BTreeSet::new();
        for inst in &instances {
            validate_tree(&inst.sent_id, &inst.tokens)?;
            if inst.target >= inst.tokens.len() {
                return Err(CorpusError::TargetOutOfRange {
                    id: inst.id(),
                    target: inst.target,
                    len: inst.tokens.len(),
                });
            }
            if !seen_labels.contains(inst.label.as_str()) {
                return Err(CorpusError::UnknownLabel {
                    id: inst.id(),
                    label: inst.label.clone(),
                });
            }
            if !seen_ids.insert(inst.id()) {
                return Err(CorpusError::DuplicateInstance { id: inst.id() });
            }
        }
        Ok(Dataset {
            name: name.into(),
            label_set,
            instances,
        })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Index of a label within the label set.
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.label_set.iter().position(|l| l == label)
    }

    /// Per-instance label indices, in dataset order.
    pub fn label_indices(&self) -> Vec<usize> {
        self.instances
            .iter()
            .map(|i| self.label_index(&i.label).expect("validated label"))
            .collect()
    }
}

/// Remaps labels through `mapping` and recomputes the label set, keeping
/// the original ordering (first occurrence wins). Labels outside the
/// mapping pass through unchanged.
pub fn merge_labels(
    dataset: &Dataset,
    mapping: &BTreeMap<String, String>,
) -> Result<Dataset, CorpusError> {
    for key in mapping.keys() {
        if !dataset.label_set.contains(key) {
            return Err(CorpusError::UnknownMergeKey { label: key.clone() });
        }
    }
    let remap = |label: &str| -> String {
        mapping
            .get(label)
            .cloned()
            .unwrap_or_else(|| label.to_string())
    };
    let mut label_set = Vec::new();
    for label in &dataset.label_set {
        let mapped = remap(label);
        if !label_set.contains(&mapped) {
            label_set.push(mapped);
        }
    }
    let instances = dataset
        .instances
        .iter()
        .map(|inst| Instance {
            label: remap(&inst.label),
            ..inst.clone()
        })
        .collect();
    Dataset::new(dataset.name.clone(), label_set, instances)
}

/// Keeps only the instances whose label is in `keep`; the label set shrinks
/// to the kept labels in their original order.
pub fn filter_labels(dataset: &Dataset, keep: &BTreeSet<String>) -> Result<Dataset, CorpusError> {
    if keep.is_empty() {
        return Err(CorpusError::EmptyKeepSet);
    }
    for label in keep {
        if !dataset.label_set.contains(label) {
            return Err(CorpusError::UnknownKeepLabel {
                label: label.clone(),
            });
        }
    }
    let label_set: Vec<String> = dataset
        .label_set
        .iter()
        .filter(|l| keep.contains(*l))
        .cloned()
        .collect();
    let instances: Vec<Instance> = dataset
        .instances
        .iter()
        .filter(|i| keep.contains(&i.label))
        .cloned()
        .collect();
    if instances.is_empty() {
        return Err(CorpusError::EmptyResult);
    }
    Dataset::new(dataset.name.clone(), label_set, instances)
}

/// Sentence-length summary for one label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthStats {
    pub mean: f64,
    pub median: f64,
    pub min: usize,
    pub max: usize,
}

/// Descriptive statistics over a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub name: String,
    pub instances: usize,
    pub label_counts: BTreeMap<String, usize>,
    pub label_fractions: BTreeMap<String, f64>,
    /// Sentence length (all retained tokens, punctuation included) per label.
    pub length_by_label: BTreeMap<String, LengthStats>,
    pub lemma_frequencies: BTreeMap<String, usize>,
    pub lemma_label_distribution: BTreeMap<String, BTreeMap<String, usize>>,
    /// Lemmas attested with at least two distinct labels.
    pub lemmas_with_multiple_labels: usize,
    /// Lemmas whose majority-label fraction is at most `ambiguity_threshold`.
    pub balanced_lemmas: usize,
    pub ambiguity_threshold: f64,
}

/// Majority-label fraction threshold below which a lemma counts as having
/// a balanced (ambiguous) label distribution.
pub const DEFAULT_AMBIGUITY_THRESHOLD: f64 = 0.6;

/// Computes [`DatasetStats`] with the default ambiguity threshold.
pub fn dataset_stats(dataset: &Dataset) -> DatasetStats {
    dataset_stats_with_threshold(dataset, DEFAULT_AMBIGUITY_THRESHOLD)
}

pub fn dataset_stats_with_threshold(dataset: &Dataset, threshold: f64) -> DatasetStats {
    let mut label_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut lengths: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut lemma_frequencies: BTreeMap<String, usize> = BTreeMap::new();
    let mut lemma_labels: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for inst in &dataset.instances {
        *label_counts.entry(inst.label.clone()).or_default() += 1;
        lengths
            .entry(inst.label.clone())
            .or_default()
            .push(inst.tokens.len());
        *lemma_frequencies
            .entry(inst.verb_lemma.clone())
            .or_default() += 1;
        *lemma_labels
            .entry(inst.verb_lemma.clone())
            .or_default()
            .entry(inst.label.clone())
            .or_default() += 1;
    }
    let total = dataset.instances.len();
    let label_fractions = label_counts
        .iter()
        .map(|(l, &c)| (l.clone(), c as f64 / total.max(1) as f64))
        .collect();
    let length_by_label = lengths
        .into_iter()
        .map(|(label, mut ls)| {
            ls.sort_unstable();
            let sum: usize = ls.iter().sum();
            let mean = sum as f64 / ls.len() as f64;
            let median = if ls.len() % 2 == 1 {
                ls[ls.len() / 2] as f64
            } else {
                (ls[ls.len() / 2 - 1] + ls[ls.len() / 2]) as f64 / 2.0
            };
            let stats = LengthStats {
                mean,
                median,
                min: *ls.first().expect("nonempty group"),
                max: *ls.last().expect("nonempty group"),
            };
            (label, stats)
        })
        .collect();
    let mut lemmas_with_multiple_labels = 0usize;
    let mut balanced_lemmas = 0usize;
    for dist in lemma_labels.values() {
        if dist.len() >= 2 {
            lemmas_with_multiple_labels += 1;
        }
        let lemma_total: usize = dist.values().sum();
        let majority = dist.values().copied().max().unwrap_or(0);
        if lemma_total > 0 && majority as f64 / lemma_total as f64 <= threshold {
            balanced_lemmas += 1;
        }
    }
    DatasetStats {
        name: dataset.name.clone(),
        instances: total,
        label_counts,
        label_fractions,
        length_by_label,
        lemma_frequencies,
        lemma_label_distribution: lemma_labels,
        lemmas_with_multiple_labels,
        balanced_lemmas,
        ambiguity_threshold: threshold,
    }
}
