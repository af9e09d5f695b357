//! IO, configuration, and orchestration around [`aspect_core`]: embedding
//! and treebank file formats, experiment configs, deterministic run
//! artifacts (reports, prediction logs, manifests), and the `aspect` CLI.

pub mod cli;
pub mod config;
pub mod formats;
pub mod runner;
