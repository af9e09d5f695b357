//! Acceptance suite: one test per release criterion, each printing a
//! single PASS line when it holds. Everything runs offline on synthetic
//! fixtures in under a minute.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::process::Command;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use aspect_core::analysis::pos_accuracy;
use aspect_core::compose::{ComposedInstance, Contributor};
use aspect_core::context::{extract_context, ContextSpec};
use aspect_core::corpus::{Dataset, Instance, Token};
use aspect_core::eval::{compute_metrics, plan_folds, Prediction, Protocol};
use aspect_core::model::{binary_objective_and_gradient, majority_closed_form, train, TrainConfig};
use aspect_core::resample::subsample_ambiguous;
use aspect_harness::formats::word2vec::{
    parse_word2vec_binary, serialize_word2vec_binary, Utf8Policy,
};

fn pass(n: usize, name: &str) {
    println!("criterion {n} ({name}): PASS");
}

// --- shared synthetic-data helpers -------------------------------------

/// The worked example: "Jane decided to leave early" with heads
/// (2, 0, 4, 2, 4) in 1-based treebank form.
fn figure_tokens() -> Vec<Token> {
    vec![
        Token::new("Jane", "NNP", Some(1), "nsubj"),
        Token::new("decided", "VBD", None, "root"),
        Token::new("to", "TO", Some(3), "aux"),
        Token::new("leave", "VB", Some(1), "xcomp"),
        Token::new("early", "RB", Some(3), "advmod"),
    ]
}

fn one_token_instance(sent: usize, doc: &str, lemma: &str, label: &str) -> Instance {
    Instance {
        doc_id: doc.to_string(),
        sent_id: format!("s{sent}"),
        tokens: vec![Token::new(lemma, "VB", None, "root")],
        target: 0,
        label: label.to_string(),
        verb_lemma: lemma.to_string(),
        split: None,
    }
}

fn prediction(
    index: usize,
    gold: &str,
    predicted: &str,
    contributors: Vec<Contributor>,
) -> Prediction {
    Prediction {
        instance_index: index,
        instance_ref: format!("d::s{index}::0"),
        verb_lemma: format!("v{index}"),
        gold: gold.to_string(),
        predicted: predicted.to_string(),
        scores: Vec::new(),
        correct: gold == predicted,
        degenerate_fold: false,
        contributors,
    }
}

// --- criterion 1: context extraction on the worked figure ---------------

#[test]
fn criterion_1_figure_fixture_contexts() {
    let tokens = figure_tokens();
    let target = 1; // "decided"
    let forms = |indices: &[usize]| -> Vec<&str> {
        indices.iter().map(|&i| tokens[i].form.as_str()).collect()
    };

    let window1 = extract_context(&tokens, target, ContextSpec::Window(1));
    assert_eq!(forms(&window1), ["Jane", "to"]);

    let dep_full = extract_context(&tokens, target, ContextSpec::DepFull);
    assert_eq!(forms(&dep_full), ["Jane", "leave"]);

    let dep_head = extract_context(&tokens, target, ContextSpec::DepHead);
    assert!(dep_head.is_empty(), "root has no head");

    pass(1, "figure fixture contexts");
}

// --- criterion 2: majority-baseline closed forms -------------------------

#[test]
fn criterion_2_majority_closed_forms() {
    let points = |x: f64| 100.0 * x;

    let telicity = majority_closed_form(0.82);
    assert!((points(telicity.accuracy) - 82.0).abs() <= 0.1);
    assert!((points(telicity.majority_f1) - 90.1).abs() <= 0.1);
    assert_eq!(telicity.minority_f1, 0.0);

    let captions_merged = majority_closed_form(0.78);
    assert!((points(captions_merged.majority_f1) - 87.6).abs() <= 0.1);

    let diaspora_merged = majority_closed_form(527.0 / 927.0);
    assert!((points(diaspora_merged.majority_f1) - 72.5).abs() <= 0.1);

    let diaspora_telic = majority_closed_form(279.0 / 527.0);
    assert!((points(diaspora_telic.accuracy) - 52.9).abs() <= 0.1);

    pass(2, "majority closed forms");
}

// --- criterion 3: optimizer gradient + separable fit ---------------------

#[test]
fn criterion_3_optimizer_gradient_and_separable_fit() {
    // Analytic gradient vs central finite differences on 20 random draws.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let dim = rng.random_range(1..=6);
        let n = rng.random_range(1..=8);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let features: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let signs: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let c = [0.1, 1.0, 10.0][rng.random_range(0..3)];
        let theta: Vec<f64> = (0..=dim).map(|_| rng.random_range(-2.0..2.0)).collect();

        let (_, analytic) = binary_objective_and_gradient(&features, &signs, c, &theta);
        let h = 1e-5;
        for j in 0..theta.len() {
            let mut plus = theta.clone();
            plus[j] += h;
            let mut minus = theta.clone();
            minus[j] -= h;
            let (f_plus, _) = binary_objective_and_gradient(&features, &signs, c, &plus);
            let (f_minus, _) = binary_objective_and_gradient(&features, &signs, c, &minus);
            let numeric = (f_plus - f_minus) / (2.0 * h);
            let rel = (analytic[j] - numeric).abs() / analytic[j].abs().max(1.0);
            assert!(
                rel < 1e-5,
                "coordinate {j}: analytic {} vs numeric {numeric}",
                analytic[j]
            );
        }
    }

    // The 4-point separable fixture trains to 100% with a tiny gradient.
    let xs = [
        (vec![0.0, 0.0], "a"),
        (vec![0.0, 1.0], "a"),
        (vec![2.0, 0.0], "b"),
        (vec![2.0, 1.0], "b"),
    ];
    let composed: Vec<ComposedInstance> = xs
        .iter()
        .enumerate()
        .map(|(i, (v, _))| ComposedInstance {
            vector: v.clone(),
            instance_ref: format!("i{i}"),
            contributors: Vec::new(),
            target_in_vocabulary: true,
        })
        .collect();
    let gold: Vec<String> = xs.iter().map(|(_, l)| l.to_string()).collect();
    let labels = vec!["a".to_string(), "b".to_string()];
    let model = train(&composed, &gold, &labels, &TrainConfig::default()).unwrap();
    for (comp, want) in composed.iter().zip(&gold) {
        let scored = model.predict(&comp.vector).unwrap();
        assert_eq!(model.predicted_label(&scored), want);
    }
    for fit in &model.fit {
        assert!(
            fit.final_gradient_norm <= 1e-4,
            "class {}: gradient norm {}",
            fit.label,
            fit.final_gradient_norm
        );
    }

    pass(3, "optimizer gradient + separable fit");
}

// --- criterion 4: metrics vs brute-force recount --------------------------

#[test]
fn criterion_4_metrics_match_brute_force() {
    let pool = ["a", "b", "c", "d"];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let n_labels = rng.random_range(2..=4);
        let labels: Vec<String> = pool[..n_labels].iter().map(|s| s.to_string()).collect();
        let rows = rng.random_range(1..=50);
        let predictions: Vec<Prediction> = (0..rows)
            .map(|i| {
                let gold = &labels[rng.random_range(0..n_labels)];
                let pred = &labels[rng.random_range(0..n_labels)];
                prediction(i, gold, pred, Vec::new())
            })
            .collect();

        let got = compute_metrics(&labels, &predictions).unwrap();

        // Independent recount.
        let mut confusion = vec![vec![0usize; n_labels]; n_labels];
        for p in &predictions {
            let g = labels.iter().position(|l| *l == p.gold).unwrap();
            let r = labels.iter().position(|l| *l == p.predicted).unwrap();
            confusion[g][r] += 1;
        }
        let correct: usize = (0..n_labels).map(|k| confusion[k][k]).sum();
        assert_eq!(got.confusion, confusion);
        assert_eq!(got.accuracy, correct as f64 / rows as f64);
        assert_eq!(got.total, rows);
        for (k, label) in labels.iter().enumerate() {
            let tp = confusion[k][k];
            let gold_total: usize = confusion[k].iter().sum();
            let pred_total: usize = (0..n_labels).map(|g| confusion[g][k]).sum();
            let precision = if pred_total == 0 {
                0.0
            } else {
                tp as f64 / pred_total as f64
            };
            let recall = if gold_total == 0 {
                0.0
            } else {
                tp as f64 / gold_total as f64
            };
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            let class = &got.per_class[label];
            assert_eq!(class.precision, precision, "precision of {label}");
            assert_eq!(class.recall, recall, "recall of {label}");
            assert_eq!(class.f1, f1, "f1 of {label}");
            assert_eq!(class.support, gold_total, "support of {label}");
        }
    }
    pass(4, "metrics oracle");
}

// --- criterion 5: subsampling invariants ----------------------------------

#[test]
fn criterion_5_subsampling_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0usize;
    while checked < 100 {
        let n_lemmas = rng.random_range(1..=6);
        let mut instances = Vec::new();
        let mut sent = 0usize;
        for lemma_idx in 0..n_lemmas {
            let lemma = format!("v{lemma_idx}");
            let n_a = rng.random_range(0..=12);
            let n_b = rng.random_range(0..=12);
            if n_a + n_b == 0 {
                continue;
            }
            for _ in 0..n_a {
                instances.push(one_token_instance(sent, "d", &lemma, "a"));
                sent += 1;
            }
            for _ in 0..n_b {
                instances.push(one_token_instance(sent, "d", &lemma, "b"));
                sent += 1;
            }
        }
        if instances.is_empty() {
            continue;
        }
        let has_ambiguous_lemma = {
            let mut per_lemma: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
            for inst in &instances {
                per_lemma
                    .entry(inst.verb_lemma.as_str())
                    .or_default()
                    .insert(inst.label.as_str());
            }
            per_lemma.values().any(|s| s.len() == 2)
        };
        let dataset =
            Dataset::new("sub", vec!["a".to_string(), "b".to_string()], instances).unwrap();
        let seed = rng.random::<u64>();

        if !has_ambiguous_lemma {
            assert!(subsample_ambiguous(&dataset, seed).is_err());
            continue;
        }
        let (reduced, _) = subsample_ambiguous(&dataset, seed).unwrap();
        checked += 1;

        // Every surviving lemma carries both labels, and its majority
        // count respects the floor(1.5 x minority) cap.
        let mut per_lemma: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for inst in &reduced.instances {
            let entry = per_lemma.entry(inst.verb_lemma.as_str()).or_default();
            if inst.label == "a" {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
        for (lemma, &(n_a, n_b)) in &per_lemma {
            assert!(n_a > 0 && n_b > 0, "lemma {lemma} lost a label");
            let minority = n_a.min(n_b);
            let majority = n_a.max(n_b);
            assert!(
                majority <= minority + minority / 2,
                "lemma {lemma}: {majority} > floor(1.5 * {minority})"
            );
        }

        // Output is an order-preserving subset of the input.
        let input_ids: Vec<String> = dataset.instances.iter().map(|i| i.id()).collect();
        let output_ids: Vec<String> = reduced.instances.iter().map(|i| i.id()).collect();
        let mut cursor = 0usize;
        for id in &output_ids {
            let found = input_ids[cursor..].iter().position(|x| x == id);
            assert!(found.is_some(), "{id} not in input after position {cursor}");
            cursor += found.unwrap() + 1;
        }

        // Seed determinism and idempotence.
        let (again, _) = subsample_ambiguous(&dataset, seed).unwrap();
        let again_ids: Vec<String> = again.instances.iter().map(|i| i.id()).collect();
        assert_eq!(output_ids, again_ids);
        let (twice, _) = subsample_ambiguous(&reduced, seed).unwrap();
        let twice_ids: Vec<String> = twice.instances.iter().map(|i| i.id()).collect();
        assert_eq!(output_ids, twice_ids);
    }
    pass(5, "subsampling invariants");
}

// --- criterion 6: PoS accuracy oracle --------------------------------------

#[test]
fn criterion_6_pos_accuracy_oracle() {
    // Random logs against a brute-force recount.
    let tags = ["IN", "DT", "NN", "VB", "RB"];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..60 {
        let rows = rng.random_range(1..=30);
        let predictions: Vec<Prediction> = (0..rows)
            .map(|i| {
                let correct = rng.random_bool(0.5);
                let contributors = (0..rng.random_range(0..=4))
                    .map(|j| Contributor {
                        index: j,
                        form: format!("w{j}"),
                        pos: tags[rng.random_range(0..tags.len())].to_string(),
                        in_vocabulary: rng.random_bool(0.8),
                    })
                    .collect();
                let (gold, pred) = if correct { ("x", "x") } else { ("x", "y") };
                prediction(i, gold, pred, contributors)
            })
            .collect();

        let table = pos_accuracy(&predictions);

        let mut expected: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for p in &predictions {
            for c in &p.contributors {
                let entry = expected.entry(c.pos.clone()).or_default();
                if p.correct {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
        assert_eq!(table.per_tag.len(), expected.len());
        let mut total = 0usize;
        for (tag, &(correct, incorrect)) in &expected {
            let stats = &table.per_tag[tag];
            assert_eq!(stats.correct, correct, "tag {tag}");
            assert_eq!(stats.incorrect, incorrect, "tag {tag}");
            assert_eq!(
                stats.accuracy,
                correct as f64 / (correct + incorrect) as f64,
                "tag {tag}"
            );
            total += correct + incorrect;
        }
        assert_eq!(table.total_participations(), total);
    }

    // The exact 8-correct / 2-incorrect preposition case.
    let in_contributor = || Contributor {
        index: 0,
        form: "of".to_string(),
        pos: "IN".to_string(),
        in_vocabulary: true,
    };
    let mut predictions = Vec::new();
    for i in 0..8 {
        predictions.push(prediction(i, "x", "x", vec![in_contributor()]));
    }
    for i in 8..10 {
        predictions.push(prediction(i, "x", "y", vec![in_contributor()]));
    }
    let table = pos_accuracy(&predictions);
    assert_eq!(table.per_tag["IN"].accuracy, 0.8);

    pass(6, "pos accuracy oracle");
}

// --- criterion 7: word2vec binary round trip --------------------------------

#[test]
fn criterion_7_word2vec_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..10 {
        let dim = rng.random_range(1..=16);
        let words = rng.random_range(1..=1000);
        let mut builder = aspect_core::embeddings::EmbeddingTable::builder(
            dim,
            aspect_core::embeddings::SourceFormat::Word2vecBinary,
        )
        .unwrap();
        let mut originals: Vec<(String, Vec<u32>)> = Vec::with_capacity(words);
        for w in 0..words {
            let token = format!("w{trial}_{w}");
            let vector: Vec<f32> = (0..dim)
                .map(|_| loop {
                    // Random bit patterns exercise subnormals, -0.0, and
                    // values decimal formatting would corrupt.
                    let candidate = f32::from_bits(rng.random::<u32>());
                    if candidate.is_finite() {
                        break candidate;
                    }
                })
                .collect();
            originals.push((token.clone(), vector.iter().map(|v| v.to_bits()).collect()));
            builder.push(&token, &vector).unwrap();
        }
        let table = builder.finish().unwrap();
        let bytes = serialize_word2vec_binary(&table);
        let reloaded = parse_word2vec_binary(&bytes, Utf8Policy::Reject).unwrap();

        assert_eq!(reloaded.len(), words);
        assert_eq!(reloaded.dimension(), dim);
        for (token, bits) in &originals {
            let got: Vec<u32> = reloaded
                .lookup(token)
                .unwrap_or_else(|| panic!("{token} lost"))
                .iter()
                .map(|v| v.to_bits())
                .collect();
            assert_eq!(&got, bits, "token {token}");
        }
    }
    pass(7, "word2vec binary round trip");
}

// --- criterion 8: protocol partitions ----------------------------------------

#[test]
fn criterion_8_protocol_partitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..60 {
        let n = rng.random_range(2..=40);
        let n_labels = rng.random_range(2..=3);
        let labels: Vec<String> = ["a", "b", "c"][..n_labels]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let n_docs = rng.random_range(1..=6);
        let n_lemmas = rng.random_range(2..=8);
        let instances: Vec<Instance> = (0..n)
            .map(|i| {
                let doc = format!("d{}", rng.random_range(0..n_docs));
                // Force at least two lemmas so verb-holdout is plannable.
                let lemma = if i < 2 {
                    format!("v{i}")
                } else {
                    format!("v{}", rng.random_range(0..n_lemmas))
                };
                let label = labels[rng.random_range(0..n_labels)].clone();
                let mut inst = one_token_instance(i, &doc, &lemma, &label);
                inst.doc_id = doc;
                inst
            })
            .collect();
        let dataset = Dataset::new("part", labels.clone(), instances).unwrap();
        let seed = rng.random::<u64>();

        let check_partition = |folds: &[aspect_core::eval::Fold]| {
            let mut seen = vec![0usize; n];
            for fold in folds {
                let test: BTreeSet<usize> = fold.test.iter().copied().collect();
                assert_eq!(test.len(), fold.test.len(), "duplicate test index");
                for &t in &fold.test {
                    seen[t] += 1;
                    assert!(!fold.train.contains(&t), "index {t} in both halves");
                }
                let train: BTreeSet<usize> = fold.train.iter().copied().collect();
                assert_eq!(
                    train.len() + test.len(),
                    n,
                    "fold {} does not cover the dataset",
                    fold.index
                );
            }
            assert!(seen.iter().all(|&c| c == 1), "not evaluated exactly once");
        };

        // LOO.
        let loo = plan_folds(&dataset, Protocol::Loo, seed).unwrap();
        assert_eq!(loo.len(), n);
        check_partition(&loo);

        // Stratified k-fold with the proportion bound.
        let k = rng.random_range(2..=n.min(8));
        let folds = plan_folds(&dataset, Protocol::KFold { k }, seed).unwrap();
        assert_eq!(folds.len(), k);
        check_partition(&folds);
        let mut global: BTreeMap<&str, usize> = BTreeMap::new();
        for inst in &dataset.instances {
            *global.entry(inst.label.as_str()).or_default() += 1;
        }
        for fold in &folds {
            let size = fold.test.len() as f64;
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for &t in &fold.test {
                *counts
                    .entry(dataset.instances[t].label.as_str())
                    .or_default() += 1;
            }
            for label in &labels {
                let fold_prop = counts.get(label.as_str()).copied().unwrap_or(0) as f64 / size;
                let global_prop =
                    global.get(label.as_str()).copied().unwrap_or(0) as f64 / n as f64;
                assert!(
                    (fold_prop - global_prop).abs() < 1.0 / size,
                    "fold {}: label {label} proportion {fold_prop} vs {global_prop} (1/{size})",
                    fold.index
                );
            }
        }

        // Document CV: a document never spans folds.
        let docs: BTreeSet<&str> = dataset
            .instances
            .iter()
            .map(|i| i.doc_id.as_str())
            .collect();
        let k_docs = rng.random_range(1..=docs.len());
        if k_docs >= 2 {
            let folds = plan_folds(&dataset, Protocol::DocCv { k: k_docs }, seed).unwrap();
            check_partition(&folds);
            let mut fold_of_doc: BTreeMap<&str, usize> = BTreeMap::new();
            for fold in &folds {
                for &t in &fold.test {
                    let doc = dataset.instances[t].doc_id.as_str();
                    let prior = fold_of_doc.insert(doc, fold.index);
                    assert!(
                        prior.is_none() || prior == Some(fold.index),
                        "document {doc} split across folds"
                    );
                }
            }
        }

        // Verb holdout: one fold per lemma, each instance tested once.
        let folds = plan_folds(&dataset, Protocol::VerbHoldout, seed).unwrap();
        check_partition(&folds);
        for fold in &folds {
            let lemmas: BTreeSet<&str> = fold
                .test
                .iter()
                .map(|&t| dataset.instances[t].verb_lemma.as_str())
                .collect();
            assert_eq!(lemmas.len(), 1, "verb-holdout fold mixes lemmas");
            let held_out = *lemmas.iter().next().unwrap();
            assert!(
                fold.train
                    .iter()
                    .all(|&t| dataset.instances[t].verb_lemma != held_out),
                "held-out lemma leaks into training"
            );
        }
    }
    pass(8, "protocol partitions");
}

// --- criterion 9: end-to-end determinism --------------------------------------

#[test]
fn criterion_9_run_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    // Synthetic corpus: two embedded classes, three documents.
    let dim = 3;
    let mut builder = aspect_core::embeddings::EmbeddingTable::builder(
        dim,
        aspect_core::embeddings::SourceFormat::Word2vecBinary,
    )
    .unwrap();
    for i in 0..6 {
        let eps = 0.01 * i as f32;
        builder
            .push(format!("sverb{i}"), &[1.0 + eps, 0.0, 0.1])
            .unwrap();
        builder
            .push(format!("everb{i}"), &[0.0, 1.0 + eps, 0.1])
            .unwrap();
    }
    builder.push("she", &[0.05, 0.05, 1.0]).unwrap();
    builder.push("it", &[0.02, 0.08, 0.9]).unwrap();
    let table = builder.finish().unwrap();
    fs::write(root.join("vectors.bin"), serialize_word2vec_binary(&table)).unwrap();

    let mut conllu = String::new();
    let mut index = String::from("doc_id\tsent_id\ttarget_index\tlabel\tverb_lemma\tsplit\n");
    for i in 0..6 {
        for (label, verb) in [
            ("state", format!("sverb{i}")),
            ("event", format!("everb{i}")),
        ] {
            let sent = format!("{label}-{i}");
            let doc = format!("d{}", i % 3);
            conllu.push_str(&format!(
                "# newdoc id = {doc}\n# sent_id = {sent}\n\
                 1\tShe\tshe\tPRON\tPRP\t_\t2\tnsubj\t_\t_\n\
                 2\t{verb}\t{verb}\tVERB\tVBZ\t_\t0\troot\t_\t_\n\
                 3\tit\tit\tPRON\tPRP\t_\t2\tobj\t_\t_\n\n"
            ));
            index.push_str(&format!("{doc}\t{sent}\t1\t{label}\t{verb}\t\n"));
        }
    }
    fs::write(root.join("corpus.conllu"), conllu).unwrap();
    fs::write(root.join("index.tsv"), index).unwrap();
    fs::write(
        root.join("config.json"),
        format!(
            r#"{{
  "embeddings": {{"path": "{0}/vectors.bin", "format": "word2vec-binary"}},
  "corpus": {{"conllu": "{0}/corpus.conllu", "index": "{0}/index.tsv",
             "label_set": ["state", "event"]}},
  "context": "window:1",
  "protocol": "kfold",
  "k": 3,
  "seed": 17,
  "train": {{"c": 1.0, "tol": 1e-4, "max_iter": 100}},
  "out_dir": "{0}/out"
}}"#,
            root.display()
        ),
    )
    .unwrap();

    let run = || {
        let output = Command::new(env!("CARGO_BIN_EXE_aspect"))
            .args(["run", "--config"])
            .arg(root.join("config.json"))
            .output()
            .expect("binary runs");
        assert!(
            output.status.success(),
            "run failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    };

    run();
    let artifacts = ["report.json", "predictions.tsv", "manifest.json"];
    let first: Vec<Vec<u8>> = artifacts
        .iter()
        .map(|f| fs::read(root.join("out").join(f)).unwrap())
        .collect();
    run();
    for (name, before) in artifacts.iter().zip(&first) {
        let after = fs::read(root.join("out").join(name)).unwrap();
        assert_eq!(&after, before, "{name} changed between identical runs");
    }

    pass(9, "run determinism");
}
