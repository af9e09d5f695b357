//! The instance-index TSV: one row per annotated target verb.
//!
//! Header line `doc_id\tsent_id\ttarget_index\tlabel\tverb_lemma\tsplit`,
//! then one six-column row per instance. The split column may be empty.

use std::fs;
use std::path::Path;

use aspect_core::corpus::{Instance, Split};

pub const INDEX_HEADER: &str = "doc_id\tsent_id\ttarget_index\tlabel\tverb_lemma\tsplit";

/// One row of the index file, before joining with parsed sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexRow {
    pub doc_id: String,
    pub sent_id: String,
    pub target_index: usize,
    pub label: String,
    pub verb_lemma: String,
    pub split: Option<Split>,
}

/// Errors from reading the index format.
#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("index file is empty")]
    Empty,
    #[error("bad index header: expected `{INDEX_HEADER}`, got `{0}`")]
    BadHeader(String),
    #[error("line {line}: expected 6 tab-separated columns, found {got}")]
    ColumnCount { line: usize, got: usize },
    #[error("line {line}: non-integer target_index `{value}`")]
    BadTarget { line: usize, value: String },
    #[error("line {line}: unknown split `{value}` (expected train, test, or empty)")]
    BadSplit { line: usize, value: String },
}

/// Loads an index file from disk.
pub fn load_index(path: impl AsRef<Path>) -> Result<Vec<IndexRow>, IndexError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| IndexError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_index(&text)
}

/// Parses index text.
pub fn parse_index(text: &str) -> Result<Vec<IndexRow>, IndexError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(IndexError::Empty)?;
    if header != INDEX_HEADER {
        return Err(IndexError::BadHeader(header.to_string()));
    }
    let mut rows = Vec::new();
    for (idx, raw) in lines.enumerate() {
        let line = idx + 2; // 1-based, after the header
        if raw.is_empty() {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != 6 {
            return Err(IndexError::ColumnCount {
                line,
                got: cols.len(),
            });
        }
        let target_index: usize = cols[2].parse().map_err(|_| IndexError::BadTarget {
            line,
            value: cols[2].to_string(),
        })?;
        let split = match cols[5] {
            "" => None,
            "train" => Some(Split::Train),
            "test" => Some(Split::Test),
            other => {
                return Err(IndexError::BadSplit {
                    line,
                    value: other.to_string(),
                })
            }
        };
        rows.push(IndexRow {
            doc_id: cols[0].to_string(),
            sent_id: cols[1].to_string(),
            target_index,
            label: cols[3].to_string(),
            verb_lemma: cols[4].to_string(),
            split,
        });
    }
    Ok(rows)
}

/// Serializes instances back into index rows (used by the subsampler to
/// emit its reduced corpus).
pub fn serialize_index(instances: &[Instance]) -> String {
    let mut out = String::from(INDEX_HEADER);
    out.push('\n');
    for inst in instances {
        let split = match inst.split {
            Some(Split::Train) => "train",
            Some(Split::Test) => "test",
            None => "",
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            inst.doc_id, inst.sent_id, inst.target, inst.label, inst.verb_lemma, split
        ));
    }
    out
}

/// Writes index rows to disk.
pub fn write_index(instances: &[Instance], path: impl AsRef<Path>) -> Result<(), IndexError> {
    let path = path.as_ref();
    fs::write(path, serialize_index(instances)).map_err(|source| IndexError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use aspect_core::corpus::Token;

    const FIXTURE: &str = "\
doc_id\tsent_id\ttarget_index\tlabel\tverb_lemma\tsplit
doc1\ts1\t1\tevent\tdecide\ttrain
doc1\ts2\t0\tstate\tknow\t
";

    #[test]
    fn fixture_parses() {
        let rows = parse_index(FIXTURE).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].doc_id, "doc1");
        assert_eq!(rows[0].target_index, 1);
        assert_eq!(rows[0].split, Some(Split::Train));
        assert_eq!(rows[1].split, None);
        assert_eq!(rows[1].verb_lemma, "know");
    }

    #[test]
    fn header_is_mandatory() {
        let err = parse_index("doc\tsent\n").unwrap_err();
        assert!(matches!(err, IndexError::BadHeader(_)));
        assert!(matches!(parse_index(""), Err(IndexError::Empty)));
    }

    #[test]
    fn bad_rows_name_their_line() {
        let text = format!("{INDEX_HEADER}\na\tb\tc\n");
        let err = parse_index(&text).unwrap_err();
        assert!(matches!(err, IndexError::ColumnCount { line: 2, got: 3 }));

        let text = format!("{INDEX_HEADER}\nd\ts\tone\tx\tl\t\n");
        let err = parse_index(&text).unwrap_err();
        assert!(matches!(err, IndexError::BadTarget { line: 2, .. }));

        let text = format!("{INDEX_HEADER}\nd\ts\t0\tx\tl\tdev\n");
        let err = parse_index(&text).unwrap_err();
        match err {
            IndexError::BadSplit { line, value } => {
                assert_eq!(line, 2);
                assert_eq!(value, "dev");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn round_trips_through_instances() {
        let rows = parse_index(FIXTURE).unwrap();
        let instances: Vec<Instance> = rows
            .iter()
            .map(|r| Instance {
                doc_id: r.doc_id.clone(),
                sent_id: r.sent_id.clone(),
                tokens: vec![
                    Token::new("a", "X", None, "root"),
                    Token::new("b", "X", Some(0), "dep"),
                ],
                target: r.target_index,
                label: r.label.clone(),
                verb_lemma: r.verb_lemma.clone(),
                split: r.split,
            })
            .collect();
        assert_eq!(serialize_index(&instances), FIXTURE);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("index.tsv");
        std::fs::write(&path, FIXTURE).unwrap();
        let rows = load_index(&path).unwrap();
        assert_eq!(rows.len(), 2);
    }
}
