//! Immutable vocabulary-to-vector tables.
//!
//! Tables are keyed by lowercased tokens and store one dense `f32` vector of
//! a fixed dimension per token. Lookups lowercase the query, so `Jane` and
//! `jane` resolve to the same vector, while inflected forms (`look`,
//! `looked`) stay distinct entries. Loading from disk formats lives in the
//! companion crate; this module owns construction, validation, and lookup.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;

/// On-disk format a table was loaded from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SourceFormat {
    /// Binary format: ASCII header line, then token bytes and little-endian
    /// `f32` values per entry.
    Word2vecBinary,
    /// Plain text, one token and its whitespace-separated values per line.
    GloveText,
    /// Built directly in memory (fixtures, tests).
    InMemory,
}

/// Errors raised while building a table.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("embedding dimension must be at least 1")]
    ZeroDimension,
    #[error("vector for `{token}` has {got} components, expected {expected}")]
    DimensionMismatch {
        token: String,
        expected: usize,
        got: usize,
    },
    #[error("vector for `{token}` contains a non-finite component")]
    NonFinite { token: String },
    #[error("embedding table is empty")]
    Empty,
}

/// An immutable map from lowercase tokens to dense vectors of fixed
/// dimension.
///
/// Entries keep their insertion order, which makes serialisation
/// round-trips reproducible. Duplicate keys (after lowercasing) keep the
/// first occurrence; the number of dropped duplicates is recorded.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dimension: usize,
    format: SourceFormat,
    words: Vec<String>,
    index: HashMap<String, usize>,
    // Row-major storage: entry i occupies values[i * dimension .. (i + 1) * dimension].
    values: Vec<f32>,
    dropped_duplicates: usize,
}

impl EmbeddingTable {
    /// Starts building a table of the given dimension.
    pub fn builder(dimension: usize, format: SourceFormat) -> Result<Builder, EmbeddingError> {
        if dimension == 0 {
            return Err(EmbeddingError::ZeroDimension);
        }
        Ok(Builder {
            table: EmbeddingTable {
                dimension,
                format,
                words: Vec::new(),
                index: HashMap::new(),
                values: Vec::new(),
                dropped_duplicates: 0,
            },
        })
    }

    /// Vector length of every entry.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Format the table was loaded from.
    pub fn source_format(&self) -> SourceFormat {
        self.format
    }

    /// Number of stored entries.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Entries that were dropped because an earlier entry claimed the same
    /// lowercased key.
    pub fn dropped_duplicates(&self) -> usize {
        self.dropped_duplicates
    }

    /// Returns the vector stored under `lowercase(token)`, if any.
    ///
    /// Absence is a value, not an error: out-of-vocabulary tokens return
    /// `None`. No stemming or lemmatisation is applied.
    pub fn lookup(&self, token: &str) -> Option<&[f32]> {
        // Fast path: ASCII tokens without uppercase letters are already keys.
        if token.is_ascii() && !token.bytes().any(|b| b.is_ascii_uppercase()) {
            return self.row(*self.index.get(token)?);
        }
        let key = token.to_lowercase();
        self.row(*self.index.get(key.as_str())?)
    }

    /// Whether `lowercase(token)` is in the vocabulary.
    pub fn contains(&self, token: &str) -> bool {
        self.lookup(token).is_some()
    }

    /// Iterates entries in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), self.row(i).expect("row in range")))
    }

    fn row(&self, i: usize) -> Option<&[f32]> {
        let start = i.checked_mul(self.dimension)?;
        self.values.get(start..start + self.dimension)
    }
}

/// Incremental [`EmbeddingTable`] construction with per-entry validation.
#[derive(Debug)]
pub struct Builder {
    table: EmbeddingTable,
}

impl Builder {
    /// Adds one entry. The token is lowercased; duplicates keep the first
    /// occurrence and bump the dropped-duplicate count.
    pub fn push(&mut self, token: impl AsRef<str>, vector: &[f32]) -> Result<(), EmbeddingError> {
        let token = token.as_ref();
        let t = &mut self.table;
        if vector.len() != t.dimension {
            return Err(EmbeddingError::DimensionMismatch {
                token: token.to_string(),
                expected: t.dimension,
                got: vector.len(),
            });
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(EmbeddingError::NonFinite {
                token: token.to_string(),
            });
        }
        let key = token.to_lowercase();
        if t.index.contains_key(key.as_str()) {
            t.dropped_duplicates += 1;
            return Ok(());
        }
        t.index.insert(key.clone(), t.words.len());
        t.words.push(key);
        t.values.extend_from_slice(vector);
        Ok(())
    }

    /// Number of entries pushed so far (after duplicate dropping).
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Finishes the table; empty tables are rejected.
    pub fn finish(self) -> Result<EmbeddingTable, EmbeddingError> {
        if self.table.is_empty() {
            return Err(EmbeddingError::Empty);
        }
        Ok(self.table)
    }
}
