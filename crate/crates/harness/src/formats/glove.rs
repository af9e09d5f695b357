//! The GloVe text embedding format.
//!
//! One line per word: `<token> <f1> ... <fd>` with single-space separators.
//! The dimension is inferred from the first line and every later line must
//! agree with it.

use std::fs;
use std::path::Path;

use aspect_core::embeddings::{EmbeddingError, EmbeddingTable, SourceFormat};

/// Errors from reading the text format.
#[derive(Debug, thiserror::Error)]
pub enum GloveError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("embedding file has no entries")]
    Empty,
    #[error("line {line}: expected {expected} components, found {got}")]
    InconsistentDimension {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: cannot parse `{value}` as a float")]
    BadFloat { line: usize, value: String },
    #[error("line {line}: missing token or vector")]
    ShortLine { line: usize },
    #[error(transparent)]
    Table(#[from] EmbeddingError),
}

/// Loads a text embedding file from disk.
///
/// `expected_dim` pins the dimension up front; when `None` it is inferred
/// from the first line.
pub fn load_glove_text(
    path: impl AsRef<Path>,
    expected_dim: Option<usize>,
) -> Result<EmbeddingTable, GloveError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| GloveError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_glove_text(&text, expected_dim)
}

/// Parses text-format embedding content.
pub fn parse_glove_text(
    text: &str,
    expected_dim: Option<usize>,
) -> Result<EmbeddingTable, GloveError> {
    let mut builder: Option<aspect_core::embeddings::Builder> = None;
    let mut dim = expected_dim;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.is_empty() {
            continue;
        }
        let mut fields = raw.split(' ');
        let token = fields
            .next()
            .filter(|t| !t.is_empty())
            .ok_or(GloveError::ShortLine { line })?;
        let mut vector = Vec::with_capacity(dim.unwrap_or(0));
        for field in fields {
            let value: f32 = field.parse().map_err(|_| GloveError::BadFloat {
                line,
                value: field.to_string(),
            })?;
            vector.push(value);
        }
        if vector.is_empty() {
            return Err(GloveError::ShortLine { line });
        }
        let expected = *dim.get_or_insert(vector.len());
        if vector.len() != expected {
            return Err(GloveError::InconsistentDimension {
                line,
                expected,
                got: vector.len(),
            });
        }
        let builder = match builder.as_mut() {
            Some(b) => b,
            None => {
                builder = Some(EmbeddingTable::builder(expected, SourceFormat::GloveText)?);
                builder.as_mut().unwrap()
            }
        };
        builder.push(token, &vector)?;
    }
    match builder {
        Some(b) => Ok(b.finish()?),
        None => Err(GloveError::Empty),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "the 0.1 0.2 0.3\nCat -1 0 1\nsat 2.5 -2.5 0.125\n";

    #[test]
    fn fixture_parses() {
        let table = parse_glove_text(FIXTURE, None).unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(table.dimension(), 3);
        assert_eq!(table.lookup("the").unwrap(), &[0.1, 0.2, 0.3]);
        assert_eq!(table.lookup("cat").unwrap(), &[-1.0, 0.0, 1.0]);
        assert_eq!(table.lookup("CAT").unwrap(), &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn expected_dimension_is_enforced() {
        assert!(parse_glove_text(FIXTURE, Some(3)).is_ok());
        let err = parse_glove_text(FIXTURE, Some(4)).unwrap_err();
        assert!(matches!(
            err,
            GloveError::InconsistentDimension {
                line: 1,
                expected: 4,
                got: 3
            }
        ));
    }

    #[test]
    fn inconsistent_line_names_its_number() {
        let err = parse_glove_text("a 1 2\nb 1 2 3\n", None).unwrap_err();
        assert!(matches!(
            err,
            GloveError::InconsistentDimension {
                line: 2,
                expected: 2,
                got: 3
            }
        ));
    }

    #[test]
    fn bad_float_reported() {
        let err = parse_glove_text("a 1 x\n", None).unwrap_err();
        match err {
            GloveError::BadFloat { line, value } => {
                assert_eq!(line, 1);
                assert_eq!(value, "x");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(parse_glove_text("", None), Err(GloveError::Empty)));
        assert!(matches!(
            parse_glove_text("\n\n", None),
            Err(GloveError::Empty)
        ));
    }

    #[test]
    fn token_only_line_is_short() {
        let err = parse_glove_text("lonely\n", None).unwrap_err();
        assert!(matches!(err, GloveError::ShortLine { line: 1 }));
    }

    #[test]
    fn duplicate_keys_keep_first() {
        let table = parse_glove_text("Dog 1 1\ndog 2 2\n", None).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.lookup("dog").unwrap(), &[1.0, 1.0]);
        assert_eq!(table.dropped_duplicates(), 1);
    }

    #[test]
    fn loads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vectors.txt");
        std::fs::write(&path, FIXTURE).unwrap();
        let table = load_glove_text(&path, None).unwrap();
        assert_eq!(table.len(), 3);
    }
}
