//! Experiment configuration: a JSON file whose every key can be overridden
//! by a same-named CLI flag.
//!
//! ```json
//! {
//!   "embeddings": {"path": "vectors.bin", "format": "word2vec-binary"},
//!   "corpus": {"conllu": "corpus.conllu", "index": "index.tsv",
//!              "label_set": ["state", "event"]},
//!   "context": "window:1",
//!   "protocol": "kfold",
//!   "k": 10,
//!   "seed": 42,
//!   "train": {"c": 1.0, "tol": 1e-4, "max_iter": 100},
//!   "out_dir": "runs/exp1"
//! }
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use aspect_core::compose::Composition;
use aspect_core::context::ContextSpec;
use aspect_core::eval::Protocol;
use aspect_core::model::TrainConfig;
use aspect_core::resample::DEFAULT_MAX_MAJORITY_FRACTION;

use crate::formats::word2vec::Utf8Policy;

/// Supported embedding file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmbeddingFormat {
    #[serde(rename = "word2vec-binary")]
    Word2vecBinary,
    #[serde(rename = "glove-text")]
    GloveText,
}

impl FromStr for EmbeddingFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "word2vec-binary" => Ok(EmbeddingFormat::Word2vecBinary),
            "glove-text" => Ok(EmbeddingFormat::GloveText),
            other => Err(ConfigError::BadValue {
                key: "embeddings.format",
                value: other.to_string(),
                expected: "word2vec-binary or glove-text".into(),
            }),
        }
    }
}

/// The `embeddings` config section.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingsSection {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
    /// Expected dimension; checked for text formats when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// `reject` (default) or `replace` for non-UTF-8 tokens.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub utf8: Option<String>,
}

/// The `corpus` config section.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSection {
    pub conllu: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub label_set: Option<Vec<String>>,
    /// Dataset name for reports; defaults to the index file stem.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// The `train` config section.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    pub c: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

/// The config file as written on disk; everything optional so flags can
/// fill the gaps.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub embeddings: EmbeddingsSection,
    #[serde(default)]
    pub corpus: CorpusSection,
    pub context: Option<String>,
    pub protocol: Option<String>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub train: TrainSection,
    pub out_dir: Option<PathBuf>,
    /// `sum` (default) or `average`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composition: Option<String>,
    /// Majority-fraction threshold for the subsample command.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_majority_fraction: Option<f64>,
    /// Worker threads for fold evaluation; never affects numeric results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Json {
            path: path.display().to_string(),
            source,
        })
    }
}

/// Flat CLI-side overrides; a `Some` always beats the file value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub embeddings_path: Option<PathBuf>,
    pub embeddings_format: Option<String>,
    pub dim: Option<usize>,
    pub utf8: Option<String>,
    pub conllu: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub label_set: Option<Vec<String>>,
    pub name: Option<String>,
    pub context: Option<String>,
    pub protocol: Option<String>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub c: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub composition: Option<String>,
    pub max_majority_fraction: Option<f64>,
    pub threads: Option<usize>,
}

/// Configuration errors.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config `{path}`: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("missing config key `{0}` (set it in the file or pass the flag)")]
    Missing(&'static str),
    #[error("bad value for `{key}`: `{value}` (expected {expected})")]
    BadValue {
        key: &'static str,
        value: String,
        expected: String,
    },
}

/// Resolved settings for the corpus-only commands (stats, subsample,
/// baseline): no embeddings, context, or protocol required.
#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub conllu: PathBuf,
    pub index: PathBuf,
    pub label_set: Vec<String>,
    pub dataset_name: String,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub max_majority_fraction: f64,
}

impl CorpusConfig {
    /// Merges file + overrides and validates the corpus-facing keys.
    pub fn resolve(file: ConfigFile, over: Overrides) -> Result<Self, ConfigError> {
        let conllu = over
            .conllu
            .or(file.corpus.conllu)
            .ok_or(ConfigError::Missing("corpus.conllu"))?;
        let index = over
            .index
            .or(file.corpus.index)
            .ok_or(ConfigError::Missing("corpus.index"))?;
        let label_set = over
            .label_set
            .or(file.corpus.label_set)
            .ok_or(ConfigError::Missing("corpus.label_set"))?;
        let dataset_name = over.name.or(file.corpus.name).unwrap_or_else(|| {
            index
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".to_string())
        });
        Ok(CorpusConfig {
            conllu,
            index,
            label_set,
            dataset_name,
            seed: over.seed.or(file.seed).unwrap_or(42),
            out_dir: over
                .out_dir
                .or(file.out_dir)
                .unwrap_or_else(|| PathBuf::from("out")),
            max_majority_fraction: over
                .max_majority_fraction
                .or(file.max_majority_fraction)
                .unwrap_or(DEFAULT_MAX_MAJORITY_FRACTION),
        })
    }
}

/// Fully resolved settings for an experiment run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub embeddings_path: PathBuf,
    pub embeddings_format: EmbeddingFormat,
    pub dim: Option<usize>,
    pub utf8: Utf8Policy,
    pub conllu: PathBuf,
    pub index: PathBuf,
    pub label_set: Vec<String>,
    pub dataset_name: String,
    pub context: ContextSpec,
    pub protocol: Protocol,
    pub seed: u64,
    pub train: TrainConfig,
    pub out_dir: PathBuf,
    pub composition: Composition,
    pub max_majority_fraction: f64,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Merges file + overrides and validates everything a `run` needs.
    pub fn resolve(file: ConfigFile, over: Overrides) -> Result<Self, ConfigError> {
        let corpus = CorpusConfig::resolve(file.clone(), over.clone())?;
        let embeddings_path = over
            .embeddings_path
            .or(file.embeddings.path)
            .ok_or(ConfigError::Missing("embeddings.path"))?;
        let embeddings_format: EmbeddingFormat = over
            .embeddings_format
            .or(file.embeddings.format)
            .ok_or(ConfigError::Missing("embeddings.format"))?
            .parse()?;
        let utf8 = match over
            .utf8
            .or(file.embeddings.utf8)
            .unwrap_or_else(|| "reject".to_string())
            .as_str()
        {
            "reject" => Utf8Policy::Reject,
            "replace" => Utf8Policy::Replace,
            other => {
                return Err(ConfigError::BadValue {
                    key: "embeddings.utf8",
                    value: other.to_string(),
                    expected: "reject or replace".into(),
                })
            }
        };
        let context_raw = over
            .context
            .or(file.context)
            .ok_or(ConfigError::Missing("context"))?;
        let context: ContextSpec = context_raw.parse().map_err(|_| ConfigError::BadValue {
            key: "context",
            value: context_raw.clone(),
            expected: "verb, window:K, dep-head, dep-children, dep-full, or sentence".into(),
        })?;
        let protocol_raw = over
            .protocol
            .or(file.protocol)
            .ok_or(ConfigError::Missing("protocol"))?;
        let mut protocol: Protocol = protocol_raw.parse().map_err(|_| ConfigError::BadValue {
            key: "protocol",
            value: protocol_raw.clone(),
            expected: "loo, kfold:K, doc-cv:K, fixed, or verb-holdout".into(),
        })?;
        // A `k` from the file is ignored when the protocol doesn't use it
        // (so one config file works across protocols); an explicit --k
        // flag on a non-CV protocol is a contradiction and errors.
        if let Some(k) = over.k.or(file.k) {
            protocol = match protocol {
                Protocol::KFold { .. } => Protocol::KFold { k },
                Protocol::DocCv { .. } => Protocol::DocCv { k },
                other if over.k.is_some() => {
                    return Err(ConfigError::BadValue {
                        key: "k",
                        value: k.to_string(),
                        expected: format!("k applies to kfold/doc-cv, not `{other}`"),
                    })
                }
                other => other,
            };
        }
        let train = TrainConfig {
            c: over.c.or(file.train.c).unwrap_or(1.0),
            tolerance: over.tol.or(file.train.tol).unwrap_or(1e-4),
            max_iterations: over.max_iter.or(file.train.max_iter).unwrap_or(100),
            seed: corpus.seed,
        };
        let composition = match over
            .composition
            .or(file.composition)
            .unwrap_or_else(|| "sum".to_string())
            .as_str()
        {
            "sum" => Composition::Sum,
            "average" => Composition::Average,
            other => {
                return Err(ConfigError::BadValue {
                    key: "composition",
                    value: other.to_string(),
                    expected: "sum or average".into(),
                })
            }
        };
        Ok(RunConfig {
            embeddings_path,
            embeddings_format,
            dim: over.dim.or(file.embeddings.dim),
            utf8,
            conllu: corpus.conllu,
            index: corpus.index,
            label_set: corpus.label_set,
            dataset_name: corpus.dataset_name,
            context,
            protocol,
            seed: corpus.seed,
            train,
            out_dir: corpus.out_dir,
            composition,
            max_majority_fraction: corpus.max_majority_fraction,
            threads: over.threads.or(file.threads),
        })
    }

    /// Echo of the resolved settings, embedded in the run manifest.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "embeddings": {
                "path": self.embeddings_path,
                "format": self.embeddings_format,
                "dim": self.dim,
                "utf8": match self.utf8 {
                    Utf8Policy::Reject => "reject",
                    Utf8Policy::Replace => "replace",
                },
            },
            "corpus": {
                "conllu": self.conllu,
                "index": self.index,
                "label_set": self.label_set,
                "name": self.dataset_name,
            },
            "context": self.context.to_string(),
            "protocol": self.protocol.to_string(),
            "seed": self.seed,
            "train": {
                "c": self.train.c,
                "tol": self.train.tolerance,
                "max_iter": self.train.max_iterations,
            },
            "out_dir": self.out_dir,
            "composition": match self.composition {
                Composition::Sum => "sum",
                Composition::Average => "average",
            },
        })
    }
}
