//! CoNLL-U treebank ingestion.
//!
//! Token lines have ten tab-separated columns (ID FORM LEMMA UPOS XPOS
//! FEATS HEAD DEPREL DEPS MISC), sentences are separated by blank lines,
//! and `# key = value` comments carry sentence and document ids.
//! Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are skipped; the
//! remaining word lines are kept verbatim so they can be re-serialized
//! unchanged.

use std::fs;
use std::path::Path;

use aspect_core::corpus::{CorpusError, Sentence, Token};

/// One retained word line with all ten columns as read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConlluWord {
    /// 1-based word id (column 1).
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: String,
    /// Column 7 as written: 0 means root.
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
}

impl ConlluWord {
    /// The part-of-speech tag used downstream: XPOS when present, else
    /// UPOS.
    pub fn pos(&self) -> &str {
        if self.xpos.is_empty() || self.xpos == "_" {
            &self.upos
        } else {
            &self.xpos
        }
    }

    fn serialize(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.id,
            self.form,
            self.lemma,
            self.upos,
            self.xpos,
            self.feats,
            self.head,
            self.deprel,
            self.deps,
            self.misc
        )
    }
}

/// One parsed sentence with its identifying comments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConlluSentence {
    /// Value of the most recent `# newdoc id = ...` comment, if any.
    pub doc_id: Option<String>,
    /// Value of this sentence's `# sent_id = ...` comment, if any.
    pub sent_id: Option<String>,
    pub words: Vec<ConlluWord>,
}

impl ConlluSentence {
    /// The ten columns reduced to the fields the classifier needs, with
    /// HEAD shifted to 0-based (`h > 0` becomes index `h - 1`, `h = 0`
    /// becomes the absent head of the root).
    pub fn to_tokens(&self) -> Vec<Token> {
        self.words
            .iter()
            .map(|w| {
                let head = if w.head == 0 { None } else { Some(w.head - 1) };
                Token::new(&w.form, w.pos(), head, &w.deprel)
            })
            .collect()
    }

    /// Converts the raw columns into a validated dependency tree.
    pub fn to_sentence(&self) -> Result<Sentence, CorpusError> {
        Sentence::new(
            self.doc_id.clone().unwrap_or_default(),
            self.sent_id.clone().unwrap_or_default(),
            self.to_tokens(),
        )
    }
}

/// Errors from reading the treebank format.
#[derive(Debug, thiserror::Error)]
pub enum ConlluError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected 10 tab-separated columns, found {got}")]
    ColumnCount { line: usize, got: usize },
    #[error("line {line}: non-integer HEAD `{value}`")]
    BadHead { line: usize, value: String },
    #[error("line {line}: non-integer word id `{value}`")]
    BadId { line: usize, value: String },
    #[error("line {line}: word id {got} out of order, expected {expected}")]
    IdOutOfOrder {
        line: usize,
        expected: usize,
        got: usize,
    },
}

/// Loads and parses a treebank file.
pub fn load_conllu(path: impl AsRef<Path>) -> Result<Vec<ConlluSentence>, ConlluError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ConlluError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_conllu(&text)
}

/// Parses treebank text into sentences.
pub fn parse_conllu(text: &str) -> Result<Vec<ConlluSentence>, ConlluError> {
    let mut sentences = Vec::new();
    let mut doc_id: Option<String> = None;
    let mut sent_id: Option<String> = None;
    let mut words: Vec<ConlluWord> = Vec::new();

    let mut flush =
        |sent_id: &mut Option<String>, words: &mut Vec<ConlluWord>, doc_id: &Option<String>| {
            if !words.is_empty() {
                sentences.push(ConlluSentence {
                    doc_id: doc_id.clone(),
                    sent_id: sent_id.take(),
                    words: std::mem::take(words),
                });
            } else {
                *sent_id = None;
            }
        };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.is_empty() {
            flush(&mut sent_id, &mut words, &doc_id);
            continue;
        }
        if let Some(comment) = raw.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let key = key.trim();
                let value = value.trim();
                match key {
                    "sent_id" => sent_id = Some(value.to_string()),
                    "newdoc id" => doc_id = Some(value.to_string()),
                    _ => {}
                }
            } else if comment.trim() == "newdoc" {
                doc_id = None;
            }
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != 10 {
            return Err(ConlluError::ColumnCount {
                line,
                got: cols.len(),
            });
        }
        // Multiword-token ranges ("3-4") and empty nodes ("5.1") carry no
        // syntactic word of their own.
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let id: usize = cols[0].parse().map_err(|_| ConlluError::BadId {
            line,
            value: cols[0].to_string(),
        })?;
        if id != words.len() + 1 {
            return Err(ConlluError::IdOutOfOrder {
                line,
                expected: words.len() + 1,
                got: id,
            });
        }
        let head: usize = cols[6].parse().map_err(|_| ConlluError::BadHead {
            line,
            value: cols[6].to_string(),
        })?;
        words.push(ConlluWord {
            id,
            form: cols[1].to_string(),
            lemma: cols[2].to_string(),
            upos: cols[3].to_string(),
            xpos: cols[4].to_string(),
            feats: cols[5].to_string(),
            head,
            deprel: cols[7].to_string(),
            deps: cols[8].to_string(),
            misc: cols[9].to_string(),
        });
    }
    flush(&mut sent_id, &mut words, &doc_id);
    Ok(sentences)
}

/// Re-serializes the retained word lines (no comments, no skipped lines),
/// one sentence per blank-line-separated block.
pub fn serialize_word_lines(sentences: &[ConlluSentence]) -> String {
    let mut out = String::new();
    for (i, sentence) in sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for word in &sentence.words {
            out.push_str(&word.serialize());
            out.push('\n');
        }
    }
    out
}
