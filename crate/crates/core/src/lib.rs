//! Core algorithms for classifying the aspectual class of a verb from
//! composed distributional word vectors.
//!
//! The crate is organised around a small pipeline:
//!
//! 1. [`embeddings`] holds an immutable token-to-vector table.
//! 2. [`corpus`] models parsed sentences, annotated instances, and datasets.
//! 3. [`context`] extracts the context words of a target verb (linear
//!    windows, first-order dependency neighbourhoods, or the full sentence).
//! 4. [`compose`] sums the verb vector with its context vectors.
//! 5. [`model`] trains an L2-regularised one-vs-rest logistic regression on
//!    the composed vectors and provides a majority-class baseline.
//! 6. [`eval`] runs the evaluation protocols (leave-one-out, stratified
//!    k-fold, document-based CV, fixed split, verb holdout) and computes
//!    metrics.
//! 7. [`resample`] builds ambiguity-focused subsampled datasets.
//! 8. [`analysis`] aggregates prediction logs by PoS tag, word class, and
//!    verb lemma, and sweeps context-window sizes.
//!
//! Everything in this crate is pure computation over in-memory data; file
//! formats and the command-line harness live in the companion crate.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature only exists so dependants and tests build against the standard
//! library prelude.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod compose;
pub mod context;
pub mod corpus;
pub mod embeddings;
pub mod eval;
pub mod model;
pub mod resample;

pub use compose::{compose, compose_batch, ComposedInstance, Composition, Contributor};
pub use context::{extract_context, ContextSpec};
pub use corpus::{Dataset, Instance, Sentence, Split, Token};
pub use embeddings::EmbeddingTable;
pub use eval::{EvalReport, Prediction, Protocol};
pub use model::{LinearModel, TrainConfig};
