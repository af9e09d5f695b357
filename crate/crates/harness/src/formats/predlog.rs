//! The prediction-log TSV.
//!
//! One row per prediction: instance id, gold label, predicted label,
//! per-class scores as `label:score` pairs, and contributor records as
//! `index:form:pos:in_vocab`, both semicolon-joined. Surface forms and
//! tags are percent-escaped (`%`, `:`, `;`, tab, newline) so the field
//! separators stay unambiguous. Lines starting with `#` carry metadata
//! such as the input digest and are skipped on read.

use std::fs;
use std::path::Path;

use aspect_core::compose::Contributor;
use aspect_core::eval::Prediction;

pub const PREDLOG_HEADER: &str = "instance_id\tgold\tpredicted\tscores\tcontributors";

/// Escapes the characters that would collide with the `:`/`;` record
/// separators inside a column, plus the TSV structure characters.
pub fn escape(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for ch in raw.chars() {
        match ch {
            '%' => out.push_str("%25"),
            ':' => out.push_str("%3A"),
            ';' => out.push_str("%3B"),
            '\t' => out.push_str("%09"),
            '\n' => out.push_str("%0A"),
            other => out.push(other),
        }
    }
    out
}

/// Escapes a plain TSV cell: only the characters that would break the
/// row/column structure. Colons stay literal, so instance ids such as
/// `doc::sent::3` read naturally.
pub fn escape_cell(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for ch in raw.chars() {
        match ch {
            '%' => out.push_str("%25"),
            '\t' => out.push_str("%09"),
            '\n' => out.push_str("%0A"),
            other => out.push(other),
        }
    }
    out
}

/// Reverses [`escape`]. Unknown escapes are an error.
pub fn unescape(escaped: &str) -> Result<String, PredlogError> {
    let mut out = String::with_capacity(escaped.len());
    let mut chars = escaped.chars();
    while let Some(ch) = chars.next() {
        if ch != '%' {
            out.push(ch);
            continue;
        }
        let code: String = chars.by_ref().take(2).collect();
        match code.as_str() {
            "25" => out.push('%'),
            "3A" => out.push(':'),
            "3B" => out.push(';'),
            "09" => out.push('\t'),
            "0A" => out.push('\n'),
            other => return Err(PredlogError::BadEscape(format!("%{other}"))),
        }
    }
    Ok(out)
}

/// One parsed log row. Correctness is recomputed from the labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub instance_id: String,
    pub gold: String,
    pub predicted: String,
    pub scores: Vec<(String, f64)>,
    pub contributors: Vec<Contributor>,
}

impl LogRow {
    pub fn correct(&self) -> bool {
        self.gold == self.predicted
    }

    /// Rebuilds a [`Prediction`] for the analysis operations. The row
    /// carries no verb lemma or fold provenance, so those fields are
    /// empty/false.
    pub fn to_prediction(&self, index: usize) -> Prediction {
        Prediction {
            instance_index: index,
            instance_ref: self.instance_id.clone(),
            verb_lemma: String::new(),
            gold: self.gold.clone(),
            predicted: self.predicted.clone(),
            scores: self.scores.iter().map(|(_, s)| *s).collect(),
            correct: self.correct(),
            degenerate_fold: false,
            contributors: self.contributors.clone(),
        }
    }
}

/// Errors from reading the log format.
#[derive(Debug, thiserror::Error)]
pub enum PredlogError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad prediction-log header: expected `{PREDLOG_HEADER}`, got `{0}`")]
    BadHeader(String),
    #[error("empty prediction log")]
    Empty,
    #[error("line {line}: expected 5 tab-separated columns, found {got}")]
    ColumnCount { line: usize, got: usize },
    #[error("line {line}: malformed {what} record `{value}`")]
    BadRecord {
        line: usize,
        what: &'static str,
        value: String,
    },
    #[error("unknown escape sequence `{0}`")]
    BadEscape(String),
}

/// Serializes predictions. `labels` gives the score column order;
/// `digest`, when present, is embedded as a `# inputs_digest=` comment so
/// stale logs can be detected.
pub fn serialize_predlog(
    labels: &[String],
    predictions: &[Prediction],
    digest: Option<&str>,
) -> String {
    let mut out = String::new();
    if let Some(d) = digest {
        out.push_str(&format!("# inputs_digest={d}\n"));
    }
    out.push_str(PREDLOG_HEADER);
    out.push('\n');
    for p in predictions {
        let scores = labels
            .iter()
            .zip(&p.scores)
            .map(|(l, s)| format!("{}:{}", escape(l), s))
            .collect::<Vec<_>>()
            .join(";");
        let contributors = p
            .contributors
            .iter()
            .map(|c| {
                format!(
                    "{}:{}:{}:{}",
                    c.index,
                    escape(&c.form),
                    escape(&c.pos),
                    c.in_vocabulary
                )
            })
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            escape_cell(&p.instance_ref),
            escape_cell(&p.gold),
            escape_cell(&p.predicted),
            scores,
            contributors
        ));
    }
    out
}

/// Writes a log to disk.
pub fn write_predlog(
    labels: &[String],
    predictions: &[Prediction],
    digest: Option<&str>,
    path: impl AsRef<Path>,
) -> Result<(), PredlogError> {
    let path = path.as_ref();
    fs::write(path, serialize_predlog(labels, predictions, digest)).map_err(|source| {
        PredlogError::Io {
            path: path.display().to_string(),
            source,
        }
    })
}

/// Loads a log from disk.
pub fn load_predlog(path: impl AsRef<Path>) -> Result<Vec<LogRow>, PredlogError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| PredlogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_predlog(&text)
}

/// Parses log text, skipping `#` comment lines.
pub fn parse_predlog(text: &str) -> Result<Vec<LogRow>, PredlogError> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        if !saw_header {
            if raw != PREDLOG_HEADER {
                return Err(PredlogError::BadHeader(raw.to_string()));
            }
            saw_header = true;
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != 5 {
            return Err(PredlogError::ColumnCount {
                line,
                got: cols.len(),
            });
        }
        let mut scores = Vec::new();
        if !cols[3].is_empty() {
            for record in cols[3].split(';') {
                let (label, score) =
                    record
                        .split_once(':')
                        .ok_or_else(|| PredlogError::BadRecord {
                            line,
                            what: "score",
                            value: record.to_string(),
                        })?;
                let score: f64 = score.parse().map_err(|_| PredlogError::BadRecord {
                    line,
                    what: "score",
                    value: record.to_string(),
                })?;
                scores.push((unescape(label)?, score));
            }
        }
        let mut contributors = Vec::new();
        if !cols[4].is_empty() {
            for record in cols[4].split(';') {
                let parts: Vec<&str> = record.split(':').collect();
                let bad = || PredlogError::BadRecord {
                    line,
                    what: "contributor",
                    value: record.to_string(),
                };
                if parts.len() != 4 {
                    return Err(bad());
                }
                let index: usize = parts[0].parse().map_err(|_| bad())?;
                let in_vocabulary: bool = parts[3].parse().map_err(|_| bad())?;
                contributors.push(Contributor {
                    index,
                    form: unescape(parts[1])?,
                    pos: unescape(parts[2])?,
                    in_vocabulary,
                });
            }
        }
        rows.push(LogRow {
            instance_id: unescape(cols[0])?,
            gold: unescape(cols[1])?,
            predicted: unescape(cols[2])?,
            scores,
            contributors,
        });
    }
    if !saw_header {
        return Err(PredlogError::Empty);
    }
    Ok(rows)
}
