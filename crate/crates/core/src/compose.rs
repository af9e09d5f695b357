//! Additive composition of the target verb with its context vectors.
//!
//! The composed representation is `x' = x + Σ_{c ∈ C} c` where `x` is the
//! target's embedding and `C` the embeddings of the extracted context
//! tokens. Out-of-vocabulary tokens contribute nothing but are still
//! recorded as contributors, so analyses can count them. Accumulation runs
//! in `f64` over ascending token indices, which makes the result
//! bit-reproducible regardless of how callers parallelise batches.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::context::{extract_context, ContextSpec};
use crate::corpus::{Dataset, Instance};
use crate::embeddings::EmbeddingTable;

/// How the collected vectors are combined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Composition {
    /// Plain vector sum (the default).
    #[default]
    Sum,
    /// Sum divided by the number of in-vocabulary vectors included
    /// (target plus context); zero vector when nothing was in vocabulary.
    Average,
}

/// Provenance record for one extracted context token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contributor {
    /// 0-based position in the sentence.
    pub index: usize,
    pub form: String,
    pub pos: String,
    /// Whether a vector was found for the (lowercased) form.
    pub in_vocabulary: bool,
}

/// The composed vector for one instance, plus everything needed to explain
/// how it was assembled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedInstance {
    /// `x'`, at accumulation precision.
    pub vector: Vec<f64>,
    /// Identifier of the source instance (`doc::sent::target`).
    pub instance_ref: String,
    /// Every extracted context token, in ascending index order.
    pub contributors: Vec<Contributor>,
    pub target_in_vocabulary: bool,
}

impl ComposedInstance {
    /// Number of contributors that actually added a vector.
    pub fn in_vocabulary_contributors(&self) -> usize {
        self.contributors.iter().filter(|c| c.in_vocabulary).count()
    }
}

/// Composes one instance under the default [`Composition::Sum`].
pub fn compose(instance: &Instance, spec: ContextSpec, table: &EmbeddingTable) -> ComposedInstance {
    compose_with(instance, spec, table, Composition::Sum)
}

/// Composes one instance with an explicit combination rule.
pub fn compose_with(
    instance: &Instance,
    spec: ContextSpec,
    table: &EmbeddingTable,
    composition: Composition,
) -> ComposedInstance {
    let d = table.dimension();
    let mut vector = vec![0.0f64; d];
    let mut included = 0usize;

    let target_vec = table.lookup(instance.target_form());
    let target_in_vocabulary = target_vec.is_some();
    if let Some(v) = target_vec {
        debug_assert_eq!(v.len(), d);
        accumulate(&mut vector, v);
        included += 1;
    }

    let context = extract_context(&instance.tokens, instance.target, spec);
    let mut contributors = Vec::with_capacity(context.len());
    for idx in context {
        let tok = &instance.tokens[idx];
        let found = table.lookup(&tok.form);
        if let Some(v) = found {
            debug_assert_eq!(v.len(), d);
            accumulate(&mut vector, v);
            included += 1;
        }
        contributors.push(Contributor {
            index: idx,
            form: tok.form.clone(),
            pos: tok.pos.clone(),
            in_vocabulary: found.is_some(),
        });
    }

    if composition == Composition::Average && included > 0 {
        let scale = 1.0 / included as f64;
        for x in &mut vector {
            *x *= scale;
        }
    }

    ComposedInstance {
        vector,
        instance_ref: instance.id(),
        contributors,
        target_in_vocabulary,
    }
}

/// Composes every instance of a dataset, preserving dataset order.
pub fn compose_batch(
    dataset: &Dataset,
    spec: ContextSpec,
    table: &EmbeddingTable,
) -> Vec<ComposedInstance> {
    compose_batch_with(dataset, spec, table, Composition::Sum)
}

pub fn compose_batch_with(
    dataset: &Dataset,
    spec: ContextSpec,
    table: &EmbeddingTable,
    composition: Composition,
) -> Vec<ComposedInstance> {
    dataset
        .instances
        .iter()
        .map(|inst| compose_with(inst, spec, table, composition))
        .collect()
}

fn accumulate(acc: &mut [f64], v: &[f32]) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a += f64::from(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;
    use crate::embeddings::SourceFormat;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn figure_instance() -> Instance {
        Instance {
            doc_id: "d1".into(),
            sent_id: "s1".into(),
            tokens: vec![
                Token::new("Jane", "NNP", Some(1), "nsubj"),
                Token::new("decided", "VBD", None, "root"),
                Token::new("to", "TO", Some(3), "aux"),
                Token::new("leave", "VB", Some(1), "xcomp"),
                Token::new("early", "RB", Some(3), "advmod"),
            ],
            target: 1,
            label: "dynamic".into(),
            verb_lemma: "decide".into(),
            split: None,
        }
    }

    fn figure_table() -> EmbeddingTable {
        let mut b = EmbeddingTable::builder(2, SourceFormat::InMemory).unwrap();
        b.push("jane", &[1.0, 0.0]).unwrap();
        b.push("decided", &[0.0, 1.0]).unwrap();
        b.push("to", &[0.5, -1.0]).unwrap();
        b.push("leave", &[0.0, 3.0]).unwrap();
        // "early" deliberately missing: OOV context token.
        b.finish().unwrap()
    }

    #[test]
    fn sum_matches_hand_arithmetic() {
        // x=[0,1] plus context [0.5,-1] and [0,3] -> [0.5, 3.0].
        let mut inst = figure_instance();
        inst.tokens[0].form = "unknownword".into();
        let composed = compose(&inst, ContextSpec::Window(2), &figure_table());
        assert_eq!(composed.vector, vec![0.5, 3.0]);
    }

    #[test]
    fn verb_only_equals_target_vector() {
        let composed = compose(&figure_instance(), ContextSpec::VerbOnly, &figure_table());
        assert_eq!(composed.vector, vec![0.0, 1.0]);
        assert!(composed.contributors.is_empty());
        assert!(composed.target_in_vocabulary);
    }

    #[test]
    fn window_one_uses_lowercased_lookup() {
        // v(decided) + v(Jane -> jane) + v(to) = [1.5, 0.0].
        let composed = compose(&figure_instance(), ContextSpec::Window(1), &figure_table());
        assert_eq!(composed.vector, vec![1.5, 0.0]);
        let forms: Vec<_> = composed
            .contributors
            .iter()
            .map(|c| c.form.as_str())
            .collect();
        assert_eq!(forms, vec!["Jane", "to"]);
        assert!(composed.contributors.iter().all(|c| c.in_vocabulary));
    }

    #[test]
    fn oov_context_recorded_but_contributes_nothing() {
        let composed = compose(
            &figure_instance(),
            ContextSpec::FullSentence,
            &figure_table(),
        );
        // decided + jane + to + leave, early skipped.
        assert_eq!(composed.vector, vec![1.5, 3.0]);
        let early = composed
            .contributors
            .iter()
            .find(|c| c.form == "early")
            .unwrap();
        assert!(!early.in_vocabulary);
        assert_eq!(composed.contributors.len(), 4);
        assert_eq!(composed.in_vocabulary_contributors(), 3);
    }

    #[test]
    fn oov_target_flagged_and_zero_based() {
        let mut inst = figure_instance();
        inst.tokens[1].form = "zzzmissing".into();
        let composed = compose(&inst, ContextSpec::VerbOnly, &figure_table());
        assert!(!composed.target_in_vocabulary);
        assert_eq!(composed.vector, vec![0.0, 0.0]);
    }

    #[test]
    fn average_divides_by_included_count() {
        let composed = compose_with(
            &figure_instance(),
            ContextSpec::Window(1),
            &figure_table(),
            Composition::Average,
        );
        assert_eq!(composed.vector, vec![0.5, 0.0]);
    }

    #[test]
    fn average_of_nothing_is_zero() {
        let mut inst = figure_instance();
        for tok in &mut inst.tokens {
            tok.form = "zzzmissing".into();
        }
        let composed = compose_with(
            &inst,
            ContextSpec::FullSentence,
            &figure_table(),
            Composition::Average,
        );
        assert_eq!(composed.vector, vec![0.0, 0.0]);
    }

    #[test]
    fn batch_aligns_with_dataset_order() {
        let mut second = figure_instance();
        second.sent_id = "s2".into();
        second.target = 3;
        let ds = Dataset::new(
            "toy",
            vec!["dynamic".into()],
            vec![figure_instance(), second.clone()],
        )
        .unwrap();
        let batch = compose_batch(&ds, ContextSpec::DepFull, &figure_table());
        assert_eq!(batch.len(), 2);
        assert_eq!(
            batch[0],
            compose(&figure_instance(), ContextSpec::DepFull, &figure_table())
        );
        assert_eq!(
            batch[1],
            compose(&second, ContextSpec::DepFull, &figure_table())
        );
        assert_eq!(batch[0].instance_ref, "d1::s1::1");
        assert_eq!(batch[1].instance_ref, "d1::s2::3");
    }

    #[test]
    fn empty_dataset_composes_to_empty_batch() {
        let ds = Dataset::new("toy", vec!["dynamic".into()], vec![]).unwrap();
        assert!(compose_batch(&ds, ContextSpec::VerbOnly, &figure_table()).is_empty());
    }

    fn arb_vectors() -> impl Strategy<Value = Vec<Vec<f32>>> {
        (1usize..6, 1usize..16).prop_flat_map(|(d, n)| {
            proptest::collection::vec(proptest::collection::vec(-8.0f32..8.0, d..=d), n..=n)
        })
    }

    proptest! {
        /// Linearity: composing over a full window equals the verb-only
        /// composition plus the sum of the context vectors.
        #[test]
        fn composition_is_additive(vectors in arb_vectors()) {
            let d = vectors[0].len();
            let mut b = EmbeddingTable::builder(d, SourceFormat::InMemory).unwrap();
            for (i, v) in vectors.iter().enumerate() {
                b.push(alloc::format!("w{i}"), v).unwrap();
            }
            let table = b.finish().unwrap();

            let tokens: Vec<Token> = (0..vectors.len())
                .map(|i| {
                    let head = if i == 0 { None } else { Some(0) };
                    Token::new(alloc::format!("w{i}"), "NN", head, "dep")
                })
                .collect();
            let inst = Instance {
                doc_id: "d".into(),
                sent_id: "s".into(),
                tokens,
                target: 0,
                label: "l".into(),
                verb_lemma: "w0".to_string(),
                split: None,
            };
            let ds = Dataset::new("t", vec!["l".into()], vec![inst.clone()]).unwrap();

            let full = compose(&inst, ContextSpec::FullSentence, &table);
            let alone = compose(&inst, ContextSpec::VerbOnly, &table);
            let mut expected = alone.vector.clone();
            for v in &vectors[1..] {
                for (e, &x) in expected.iter_mut().zip(v) {
                    *e += f64::from(x);
                }
            }
            for (got, want) in full.vector.iter().zip(&expected) {
                prop_assert!((got - want).abs() < 1e-9);
            }
            // Batch path agrees with the scalar path bit-for-bit.
            let batch = compose_batch(&ds, ContextSpec::FullSentence, &table);
            prop_assert_eq!(&batch[0], &full);
        }
    }
}
