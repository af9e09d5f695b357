//! The classifier: one-vs-rest L2-regularized logistic regression over
//! composed vectors, trained from scratch with a deterministic L-BFGS
//! optimizer, plus the majority-class baseline and its closed-form metrics.
//!
//! Each class `k` gets an independent binary subproblem
//!
//! ```text
//! minimize  0.5·‖w‖² + C · Σ_i log(1 + exp(−ŷ_i (w·x_i + b)))
//! ```
//!
//! with `ŷ_i = +1` for instances of class `k` and `−1` otherwise. The bias
//! is not regularized. Optimization starts from zero parameters, uses
//! two-loop L-BFGS directions with Armijo backtracking, and stops when the
//! gradient infinity-norm drops to `tolerance` or after `max_iterations`
//! accepted steps. With zero initialization and a fixed summation order
//! the whole procedure is deterministic: identical inputs produce bitwise
//! identical parameters.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::compose::ComposedInstance;

/// Hyperparameters of the logistic-regression trainer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Inverse regularization strength `C`; larger values fit the training
    /// data harder.
    pub c: f64,
    /// Convergence threshold on the gradient infinity-norm.
    pub tolerance: f64,
    /// Cap on accepted optimizer steps per class.
    pub max_iterations: usize,
    /// Seed echoed into reports; training itself is seed-free (zero init).
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            c: 1.0,
            tolerance: 1e-4,
            max_iterations: 100,
            seed: 0,
        }
    }
}

/// Errors from training or prediction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("feature/label lengths differ: {features} features, {labels} labels")]
    LengthMismatch { features: usize, labels: usize },
    #[error("training labels contain a single distinct class `{label}`")]
    SingleClass { label: String },
    #[error("training label `{label}` is not in the declared label order")]
    UnknownLabel { label: String },
    #[error("label order must list at least two classes")]
    TooFewClasses,
    #[error("non-finite feature value in instance {index}")]
    NonFiniteFeature { index: usize },
    #[error("inconsistent feature dimensions: expected {expected}, instance {index} has {got}")]
    FeatureDimensionMismatch {
        expected: usize,
        index: usize,
        got: usize,
    },
    #[error("input vector has dimension {got}, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("optimizer produced non-finite parameters for class `{label}`")]
    NonFiniteParameters { label: String },
}

/// Optimizer outcome for one binary subproblem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFit {
    pub label: String,
    /// Accepted optimizer steps.
    pub iterations: usize,
    /// Whether the gradient tolerance was met (hitting the iteration cap
    /// is reported here, not raised as an error).
    pub converged: bool,
    pub final_gradient_norm: f64,
    /// Objective value at the start and after each accepted step;
    /// non-increasing by construction of the line search.
    pub objective_trace: Vec<f64>,
}

/// A trained one-vs-rest linear classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    /// Class labels in declared order; ties in prediction break towards
    /// the earliest entry.
    pub labels: Vec<String>,
    /// Per-class weight vectors, each of length `dimension`.
    pub weights: Vec<Vec<f64>>,
    /// Per-class (unregularized) biases.
    pub biases: Vec<f64>,
    pub dimension: usize,
    pub config_echo: TrainConfig,
    pub fit: Vec<ClassFit>,
}

/// Raw scores, per-class sigmoid probabilities, and the argmax decision
/// for one input vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scored {
    pub scores: Vec<f64>,
    /// `σ(score)` per class; reported for logging, never used for argmax.
    pub probabilities: Vec<f64>,
    /// Index into the model's label list.
    pub predicted: usize,
}

impl LinearModel {
    /// Scores `x` against every class. The decision is the argmax of the
    /// raw scores with ties broken towards the first label.
    pub fn predict(&self, x: &[f64]) -> Result<Scored, ModelError> {
        if x.len() != self.dimension {
            return Err(ModelError::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        let scores: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.biases)
            .map(|(w, &b)| dot(w, x) + b)
            .collect();
        let probabilities = scores.iter().map(|&s| sigmoid(s)).collect();
        let mut predicted = 0;
        for (i, &s) in scores.iter().enumerate() {
            if s > scores[predicted] {
                predicted = i;
            }
        }
        Ok(Scored {
            scores,
            probabilities,
            predicted,
        })
    }

    pub fn predicted_label(&self, scored: &Scored) -> &str {
        &self.labels[scored.predicted]
    }
}

/// Trains on every instance of `x` with gold labels `y`.
///
/// `label_order` fixes the class order of the model (and thereby the
/// tie-break); it must cover every label in `y` and list at least two
/// classes, and `y` must contain at least two distinct classes.
pub fn train(
    x: &[ComposedInstance],
    y: &[String],
    label_order: &[String],
    config: &TrainConfig,
) -> Result<LinearModel, ModelError> {
    let idx: Vec<usize> = (0..x.len()).collect();
    train_indexed(x, y, &idx, label_order, config)
}

/// Trains on the subset `rows` of `x`/`y` — the fold-friendly entry point
/// that avoids copying composed vectors.
pub fn train_indexed(
    x: &[ComposedInstance],
    y: &[String],
    rows: &[usize],
    label_order: &[String],
    config: &TrainConfig,
) -> Result<LinearModel, ModelError> {
    if x.len() != y.len() {
        return Err(ModelError::LengthMismatch {
            features: x.len(),
            labels: y.len(),
        });
    }
    if rows.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    if label_order.len() < 2 {
        return Err(ModelError::TooFewClasses);
    }

    let dimension = x[rows[0]].vector.len();
    let mut features: Vec<&[f64]> = Vec::with_capacity(rows.len());
    let mut class_of: Vec<usize> = Vec::with_capacity(rows.len());
    for &r in rows {
        let v = x[r].vector.as_slice();
        if v.len() != dimension {
            return Err(ModelError::FeatureDimensionMismatch {
                expected: dimension,
                index: r,
                got: v.len(),
            });
        }
        if v.iter().any(|e| !e.is_finite()) {
            return Err(ModelError::NonFiniteFeature { index: r });
        }
        let k = label_order.iter().position(|l| l == &y[r]).ok_or_else(|| {
            ModelError::UnknownLabel {
                label: y[r].clone(),
            }
        })?;
        features.push(v);
        class_of.push(k);
    }
    let first = class_of[0];
    if class_of.iter().all(|&k| k == first) {
        return Err(ModelError::SingleClass {
            label: label_order[first].clone(),
        });
    }

    let mut weights = Vec::with_capacity(label_order.len());
    let mut biases = Vec::with_capacity(label_order.len());
    let mut fit = Vec::with_capacity(label_order.len());
    for (k, label) in label_order.iter().enumerate() {
        let signs: Vec<f64> = class_of
            .iter()
            .map(|&c| if c == k { 1.0 } else { -1.0 })
            .collect();
        let objective =
            |theta: &[f64]| binary_objective_and_gradient(&features, &signs, config.c, theta);
        let start = vec![0.0f64; dimension + 1];
        let outcome = lbfgs(objective, start, config.tolerance, config.max_iterations);
        if outcome.theta.iter().any(|t| !t.is_finite()) {
            return Err(ModelError::NonFiniteParameters {
                label: label.clone(),
            });
        }
        let (w, b) = outcome.theta.split_at(dimension);
        weights.push(w.to_vec());
        biases.push(b[0]);
        fit.push(ClassFit {
            label: label.clone(),
            iterations: outcome.iterations,
            converged: outcome.converged,
            final_gradient_norm: outcome.gradient_norm,
            objective_trace: outcome.trace,
        });
    }

    Ok(LinearModel {
        labels: label_order.to_vec(),
        weights,
        biases,
        dimension,
        config_echo: config.clone(),
        fit,
    })
}

/// Objective and gradient of one binary subproblem at `theta = [w…, b]`.
///
/// `signs` holds ±1 per training row. Exposed so tests can cross-check the
/// optimizer against finite differences and grid search.
pub fn binary_objective_and_gradient(
    features: &[&[f64]],
    signs: &[f64],
    c: f64,
    theta: &[f64],
) -> (f64, Vec<f64>) {
    let d = theta.len() - 1;
    let (w, b) = (&theta[..d], theta[d]);
    let mut obj = 0.5 * dot(w, w);
    let mut grad = vec![0.0f64; d + 1];
    grad[..d].copy_from_slice(w);
    for (x, &s) in features.iter().zip(signs) {
        let z = dot(w, x) + b;
        let m = -s * z;
        obj += c * softplus(m);
        // d/dz of softplus(−s·z) = −s·σ(−s·z)
        let g = c * -s * sigmoid(m);
        for (gj, &xj) in grad[..d].iter_mut().zip(*x) {
            *gj += g * xj;
        }
        grad[d] += g;
    }
    (obj, grad)
}

struct OptOutcome {
    theta: Vec<f64>,
    iterations: usize,
    converged: bool,
    gradient_norm: f64,
    trace: Vec<f64>,
}

const LBFGS_MEMORY: usize = 10;
const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// Limited-memory BFGS with backtracking line search. Entirely
/// deterministic for a deterministic objective.
fn lbfgs<F>(objective: F, mut theta: Vec<f64>, tolerance: f64, max_iterations: usize) -> OptOutcome
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let n = theta.len();
    let (mut fx, mut gx) = objective(&theta);
    let mut trace = vec![fx];
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut rho_hist: Vec<f64> = Vec::new();
    let mut iterations = 0;

    while inf_norm(&gx) > tolerance && iterations < max_iterations {
        let mut direction = two_loop(&gx, &s_hist, &y_hist, &rho_hist);
        let mut slope = dot(&direction, &gx);
        if slope >= 0.0 {
            // Curvature has gone stale; fall back to steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            direction = gx.iter().map(|g| -g).collect();
            slope = dot(&direction, &gx);
        }

        let mut alpha = 1.0f64;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let candidate: Vec<f64> = theta
                .iter()
                .zip(&direction)
                .map(|(t, p)| t + alpha * p)
                .collect();
            let (fc, gc) = objective(&candidate);
            if fc <= fx + ARMIJO_C1 * alpha * slope {
                accepted = Some((candidate, fc, gc));
                break;
            }
            alpha *= 0.5;
        }
        let Some((next, fn_, gn)) = accepted else {
            break; // No decrease found: report the best point so far.
        };

        let s: Vec<f64> = next.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = gn.iter().zip(&gx).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &yv);
        if sy > 1e-10 {
            if s_hist.len() == LBFGS_MEMORY {
                s_hist.remove(0);
                y_hist.remove(0);
                rho_hist.remove(0);
            }
            s_hist.push(s);
            y_hist.push(yv);
            rho_hist.push(1.0 / sy);
        }
        theta = next;
        fx = fn_;
        gx = gn;
        trace.push(fx);
        iterations += 1;
    }

    debug_assert_eq!(theta.len(), n);
    let gradient_norm = inf_norm(&gx);
    OptOutcome {
        theta,
        iterations,
        converged: gradient_norm <= tolerance,
        gradient_norm,
        trace,
    }
}

/// Two-loop recursion: applies the implicit inverse Hessian to −g.
fn two_loop(g: &[f64], s_hist: &[Vec<f64>], y_hist: &[Vec<f64>], rho_hist: &[f64]) -> Vec<f64> {
    let mut q: Vec<f64> = g.to_vec();
    let k = s_hist.len();
    let mut alphas = vec![0.0f64; k];
    for i in (0..k).rev() {
        let a = rho_hist[i] * dot(&s_hist[i], &q);
        alphas[i] = a;
        for (qj, yj) in q.iter_mut().zip(&y_hist[i]) {
            *qj -= a * yj;
        }
    }
    if k > 0 {
        let last = k - 1;
        let gamma = dot(&s_hist[last], &y_hist[last]) / dot(&y_hist[last], &y_hist[last]);
        for qj in &mut q {
            *qj *= gamma;
        }
    }
    for i in 0..k {
        let beta = rho_hist[i] * dot(&y_hist[i], &q);
        for (qj, sj) in q.iter_mut().zip(&s_hist[i]) {
            *qj += (alphas[i] - beta) * sj;
        }
    }
    for qj in &mut q {
        *qj = -*qj;
    }
    q
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(libm::fabs(*x)))
}

/// Numerically stable `log(1 + exp(t))`.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + libm::log1p(libm::exp(-t))
    } else {
        libm::log1p(libm::exp(t))
    }
}

/// Numerically stable logistic function.
pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + libm::exp(-t))
    } else {
        let e = libm::exp(t);
        e / (1.0 + e)
    }
}

/// The constant classifier that always predicts the most frequent
/// training label (ties break towards the earliest label in
/// `label_order`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorityBaseline {
    pub label: String,
    /// The label's share of the training set.
    pub train_fraction: f64,
}

pub fn majority_baseline(
    y: &[String],
    label_order: &[String],
) -> Result<MajorityBaseline, ModelError> {
    if y.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    let mut counts = vec![0usize; label_order.len()];
    for label in y {
        let k = label_order.iter().position(|l| l == label).ok_or_else(|| {
            ModelError::UnknownLabel {
                label: label.clone(),
            }
        })?;
        counts[k] += 1;
    }
    let mut best = 0;
    for (k, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = k;
        }
    }
    Ok(MajorityBaseline {
        label: label_order[best].clone(),
        train_fraction: counts[best] as f64 / y.len() as f64,
    })
}

/// Expected metrics of a constant classifier on a set where the predicted
/// label has frequency `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorityClosedForm {
    pub accuracy: f64,
    /// F1 of the predicted (majority) class: `2p / (1 + p)`.
    pub majority_f1: f64,
    /// F1 of every other class; always 0 (no predictions, so recall 0).
    pub minority_f1: f64,
}

pub fn majority_closed_form(p: f64) -> MajorityClosedForm {
    MajorityClosedForm {
        accuracy: p,
        majority_f1: if p > 0.0 { 2.0 * p / (1.0 + p) } else { 0.0 },
        minority_f1: 0.0,
    }
}
