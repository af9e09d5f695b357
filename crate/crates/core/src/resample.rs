//! Ambiguity-focused subsampling: keep only verb lemmas attested with both
//! labels, and cap each lemma's majority label so no lemma's label
//! distribution is more skewed than a configurable bound (60:40 by
//! default).
//!
//! The cap for a lemma with `m` minority instances is the largest majority
//! count `M` with `M / (M + m) ≤ max_majority_fraction` — the integer
//! search sidesteps floating-point trouble in the equivalent
//! `floor(ratio · m)` formula right at the boundary. Majority instances to
//! keep are drawn uniformly with a seeded generator; everything else about
//! the dataset (instance order, fields) is preserved. When split tags are
//! present the procedure runs independently within each split.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusError, Dataset, Split};

/// Default skew bound: majority label at most 60% within each lemma.
pub const DEFAULT_MAX_MAJORITY_FRACTION: f64 = 0.6;

/// Errors from the subsampling procedure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResampleError {
    #[error("subsampling requires a 2-class dataset, got {labels} labels")]
    NotTwoClass { labels: usize },
    #[error("max majority fraction must be in [0.5, 1), got {value}")]
    InvalidFraction { value: f64 },
    #[error("subsampling removed every instance")]
    EmptyResult,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// What the subsampling pass did, alongside the surviving dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsampleReport {
    pub max_majority_fraction: f64,
    pub seed: u64,
    pub input_instances: usize,
    pub output_instances: usize,
    /// Lemmas removed because they occur with a single label.
    pub single_label_lemmas_dropped: usize,
    /// Lemmas whose majority label was downsampled.
    pub lemmas_downsampled: usize,
    pub label_counts_before: BTreeMap<String, usize>,
    pub label_counts_after: BTreeMap<String, usize>,
}

/// Runs the subsampling procedure with the default 60:40 bound.
pub fn subsample_ambiguous(
    dataset: &Dataset,
    seed: u64,
) -> Result<(Dataset, SubsampleReport), ResampleError> {
    subsample_ambiguous_with(dataset, DEFAULT_MAX_MAJORITY_FRACTION, seed)
}

/// Runs the subsampling procedure with an explicit skew bound.
pub fn subsample_ambiguous_with(
    dataset: &Dataset,
    max_majority_fraction: f64,
    seed: u64,
) -> Result<(Dataset, SubsampleReport), ResampleError> {
    if dataset.label_set.len() != 2 {
        return Err(ResampleError::NotTwoClass {
            labels: dataset.label_set.len(),
        });
    }
    if !(0.5..1.0).contains(&max_majority_fraction) {
        return Err(ResampleError::InvalidFraction {
            value: max_majority_fraction,
        });
    }

    // Group instance positions by (split, lemma); BTreeMap ordering plus a
    // single RNG stream make the whole pass a pure function of the seed.
    let mut groups: BTreeMap<(Option<Split>, &str), Vec<usize>> = BTreeMap::new();
    for (i, inst) in dataset.instances.iter().enumerate() {
        groups
            .entry((inst.split, inst.verb_lemma.as_str()))
            .or_default()
            .push(i);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = alloc::vec![false; dataset.len()];
    let mut single_label_lemmas_dropped = 0usize;
    let mut lemmas_downsampled = 0usize;
    let label_a = &dataset.label_set[0];

    for members in groups.values() {
        let a_rows: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| &dataset.instances[i].label == label_a)
            .collect();
        let b_rows: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| &dataset.instances[i].label != label_a)
            .collect();
        if a_rows.is_empty() || b_rows.is_empty() {
            single_label_lemmas_dropped += 1;
            continue;
        }
        let (majority, minority) = if a_rows.len() >= b_rows.len() {
            (&a_rows, &b_rows)
        } else {
            (&b_rows, &a_rows)
        };
        let cap = majority_cap(minority.len(), max_majority_fraction);
        for &i in minority {
            keep[i] = true;
        }
        if majority.len() > cap {
            lemmas_downsampled += 1;
            let mut chosen: Vec<usize> = sample(&mut rng, majority.len(), cap).into_vec();
            chosen.sort_unstable();
            for c in chosen {
                keep[majority[c]] = true;
            }
        } else {
            for &i in majority {
                keep[i] = true;
            }
        }
    }

    let instances: Vec<_> = dataset
        .instances
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(inst, _)| inst.clone())
        .collect();
    if instances.is_empty() {
        return Err(ResampleError::EmptyResult);
    }
    let subsampled = Dataset::new(dataset.name.clone(), dataset.label_set.clone(), instances)?;

    let count = |ds: &Dataset| -> BTreeMap<String, usize> {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for label in &ds.label_set {
            counts.insert(label.clone(), 0);
        }
        for inst in &ds.instances {
            *counts.get_mut(&inst.label).expect("validated label") += 1;
        }
        counts
    };
    let report = SubsampleReport {
        max_majority_fraction,
        seed,
        input_instances: dataset.len(),
        output_instances: subsampled.len(),
        single_label_lemmas_dropped,
        lemmas_downsampled,
        label_counts_before: count(dataset),
        label_counts_after: count(&subsampled),
    };
    Ok((subsampled, report))
}

/// Largest majority count `M` with `M / (M + minority) ≤ fraction`.
pub fn majority_cap(minority: usize, fraction: f64) -> usize {
    let ratio = fraction / (1.0 - fraction);
    let mut cap = (ratio * minority as f64) as usize;
    while cap > 0 && cap as f64 / (cap + minority) as f64 > fraction {
        cap -= 1;
    }
    while (cap + 1) as f64 / (cap + 1 + minority) as f64 <= fraction {
        cap += 1;
    }
    cap
}
