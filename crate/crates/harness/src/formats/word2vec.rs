//! The word2vec binary embedding format.
//!
//! Layout: an ASCII header `"<vocab_size> <dim>\n"`, then one record per
//! word — the token bytes terminated by a single space, followed by `dim`
//! little-endian 32-bit floats, optionally followed by one newline byte.
//! Values are moved bit-for-bit between disk and [`EmbeddingTable`]; no
//! float ever goes through a decimal representation.

use std::fs;
use std::path::Path;

use aspect_core::embeddings::{EmbeddingError, EmbeddingTable, SourceFormat};

/// How to treat token bytes that are not valid UTF-8.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Utf8Policy {
    /// Fail the load (the default).
    #[default]
    Reject,
    /// Substitute U+FFFD replacement characters and continue.
    Replace,
}

/// Errors from reading or writing the binary format.
#[derive(Debug, thiserror::Error)]
pub enum Word2vecError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed word2vec header: {0}")]
    MalformedHeader(String),
    #[error("entry {entry}: token is not valid UTF-8")]
    NonUtf8Token { entry: usize },
    #[error("entry {entry}: file truncated mid-record")]
    Truncated { entry: usize },
    #[error(transparent)]
    Table(#[from] EmbeddingError),
}

/// Loads a binary embedding file from disk.
pub fn load_word2vec_binary(
    path: impl AsRef<Path>,
    utf8: Utf8Policy,
) -> Result<EmbeddingTable, Word2vecError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Word2vecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_word2vec_binary(&bytes, utf8)
}

/// Parses binary embedding bytes.
pub fn parse_word2vec_binary(
    bytes: &[u8],
    utf8: Utf8Policy,
) -> Result<EmbeddingTable, Word2vecError> {
    let header_end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Word2vecError::MalformedHeader("no newline found".into()))?;
    let header = std::str::from_utf8(&bytes[..header_end])
        .map_err(|_| Word2vecError::MalformedHeader("header is not ASCII".into()))?;
    let mut parts = header.split(' ');
    let (vocab, dim) = match (parts.next(), parts.next(), parts.next()) {
        (Some(v), Some(d), None) => {
            let vocab: usize = v
                .parse()
                .map_err(|_| Word2vecError::MalformedHeader(format!("bad vocab size `{v}`")))?;
            let dim: usize = d
                .parse()
                .map_err(|_| Word2vecError::MalformedHeader(format!("bad dimension `{d}`")))?;
            (vocab, dim)
        }
        _ => {
            return Err(Word2vecError::MalformedHeader(format!(
                "expected `<vocab> <dim>`, got `{header}`"
            )))
        }
    };

    let mut builder = EmbeddingTable::builder(dim, SourceFormat::Word2vecBinary)?;
    let mut cursor = header_end + 1;
    for entry in 0..vocab {
        // Tolerate a stray newline before the token (some writers emit
        // "\n" record separators instead of trailing ones).
        if bytes.get(cursor) == Some(&b'\n') {
            cursor += 1;
        }
        let token_end = bytes[cursor..]
            .iter()
            .position(|&b| b == b' ')
            .map(|p| cursor + p)
            .ok_or(Word2vecError::Truncated { entry })?;
        let token = match std::str::from_utf8(&bytes[cursor..token_end]) {
            Ok(t) => t.to_string(),
            Err(_) => match utf8 {
                Utf8Policy::Reject => return Err(Word2vecError::NonUtf8Token { entry }),
                Utf8Policy::Replace => {
                    String::from_utf8_lossy(&bytes[cursor..token_end]).into_owned()
                }
            },
        };
        cursor = token_end + 1;
        let vec_end = cursor + 4 * dim;
        if vec_end > bytes.len() {
            return Err(Word2vecError::Truncated { entry });
        }
        let vector: Vec<f32> = bytes[cursor..vec_end]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        cursor = vec_end;
        builder.push(&token, &vector)?;
    }
    Ok(builder.finish()?)
}

/// Serializes a table in the binary format (token + space + floats +
/// newline per record).
pub fn serialize_word2vec_binary(table: &EmbeddingTable) -> Vec<u8> {
    let dim = table.dimension();
    let mut out = Vec::with_capacity(16 + table.len() * (8 + 4 * dim));
    out.extend_from_slice(format!("{} {}\n", table.len(), dim).as_bytes());
    for (token, vector) in table.iter() {
        out.extend_from_slice(token.as_bytes());
        out.push(b' ');
        for v in vector {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.push(b'\n');
    }
    out
}

/// Writes a table to disk in the binary format.
pub fn write_word2vec_binary(
    table: &EmbeddingTable,
    path: impl AsRef<Path>,
) -> Result<(), Word2vecError> {
    let path = path.as_ref();
    fs::write(path, serialize_word2vec_binary(table)).map_err(|source| Word2vecError::Io {
        path: path.display().to_string(),
        source,
    })
}
