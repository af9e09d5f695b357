//! File formats: embedding tables, treebanks, instance indices, and
//! prediction logs, plus the join that turns treebank + index into a
//! [`Dataset`].

pub mod conllu;
pub mod glove;
pub mod index;
pub mod predlog;
pub mod word2vec;

use std::collections::HashMap;
use std::path::Path;

use aspect_core::corpus::{CorpusError, Dataset, Instance};

use conllu::{ConlluError, ConlluSentence};
use index::IndexError;

/// Errors from joining an index file with a parsed treebank.
#[derive(Debug, thiserror::Error)]
pub enum JoinError {
    #[error(transparent)]
    Conllu(#[from] ConlluError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("treebank contains duplicate sent_id `{0}`")]
    DuplicateSentId(String),
    #[error("index row {row} references unknown sent_id `{sent_id}`")]
    UnknownSentId { row: usize, sent_id: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Joins parsed sentences with index rows into a validated dataset.
///
/// Sentences are keyed by their `sent_id` comment; sentences without one
/// cannot be referenced. The index file is the single source of document
/// ids, gold labels, and split tags.
pub fn join_dataset(
    sentences: &[ConlluSentence],
    rows: &[index::IndexRow],
    name: &str,
    label_set: Vec<String>,
) -> Result<Dataset, JoinError> {
    let mut by_sent_id: HashMap<&str, &ConlluSentence> = HashMap::new();
    for sentence in sentences {
        if let Some(id) = sentence.sent_id.as_deref() {
            if by_sent_id.insert(id, sentence).is_some() {
                return Err(JoinError::DuplicateSentId(id.to_string()));
            }
        }
    }
    let mut instances = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let sentence =
            by_sent_id
                .get(row.sent_id.as_str())
                .ok_or_else(|| JoinError::UnknownSentId {
                    row: i + 1,
                    sent_id: row.sent_id.clone(),
                })?;
        instances.push(Instance {
            doc_id: row.doc_id.clone(),
            sent_id: row.sent_id.clone(),
            tokens: sentence.to_tokens(),
            target: row.target_index,
            label: row.label.clone(),
            verb_lemma: row.verb_lemma.clone(),
            split: row.split,
        });
    }
    Ok(Dataset::new(name, label_set, instances)?)
}

/// Loads treebank and index files from disk and joins them.
pub fn load_dataset(
    conllu_path: impl AsRef<Path>,
    index_path: impl AsRef<Path>,
    name: &str,
    label_set: Vec<String>,
) -> Result<Dataset, JoinError> {
    let sentences = conllu::load_conllu(conllu_path)?;
    let rows = index::load_index(index_path)?;
    join_dataset(&sentences, &rows, name, label_set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use aspect_core::corpus::Split;

    fn corpus_text() -> &'static str {
        "\
# newdoc id = doc1
# sent_id = s1
1\tJane\tJane\tPROPN\tNNP\t_\t2\tnsubj\t_\t_
2\tdecided\tdecide\tVERB\tVBD\t_\t0\troot\t_\t_
3\tto\tto\tPART\tTO\t_\t4\taux\t_\t_
4\tleave\tleave\tVERB\tVB\t_\t2\txcomp\t_\t_
5\tearly\tearly\tADV\tRB\t_\t4\tadvmod\t_\t_

# sent_id = s2
1\tShe\tshe\tPRON\tPRP\t_\t2\tnsubj\t_\t_
2\tknows\tknow\tVERB\tVBZ\t_\t0\troot\t_\t_
3\tit\tit\tPRON\tPRP\t_\t2\tobj\t_\t_
"
    }

    fn index_text() -> String {
        format!(
            "{}\ndoc1\ts1\t1\tevent\tdecide\ttrain\ndoc1\ts2\t1\tstate\tknow\t\n",
            index::INDEX_HEADER
        )
    }

    fn labels() -> Vec<String> {
        vec!["event".to_string(), "state".to_string()]
    }

    #[test]
    fn join_produces_expected_instances() {
        let sentences = conllu::parse_conllu(corpus_text()).unwrap();
        let rows = index::parse_index(&index_text()).unwrap();
        let dataset = join_dataset(&sentences, &rows, "toy", labels()).unwrap();
        assert_eq!(dataset.len(), 2);
        let first = &dataset.instances[0];
        assert_eq!(first.target_form(), "decided");
        assert_eq!(first.label, "event");
        assert_eq!(first.split, Some(Split::Train));
        assert_eq!(first.tokens.len(), 5);
        let second = &dataset.instances[1];
        assert_eq!(second.target_form(), "knows");
        assert_eq!(second.split, None);
    }

    #[test]
    fn unknown_sent_id_names_the_row() {
        let sentences = conllu::parse_conllu(corpus_text()).unwrap();
        let bad = format!("{}\ndoc1\tmissing\t0\tevent\tx\t\n", index::INDEX_HEADER);
        let rows = index::parse_index(&bad).unwrap();
        let err = join_dataset(&sentences, &rows, "toy", labels()).unwrap_err();
        match err {
            JoinError::UnknownSentId { row, sent_id } => {
                assert_eq!(row, 1);
                assert_eq!(sent_id, "missing");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn out_of_range_target_rejected() {
        let sentences = conllu::parse_conllu(corpus_text()).unwrap();
        let bad = format!("{}\ndoc1\ts2\t9\tevent\tx\t\n", index::INDEX_HEADER);
        let rows = index::parse_index(&bad).unwrap();
        let err = join_dataset(&sentences, &rows, "toy", labels()).unwrap_err();
        assert!(matches!(
            err,
            JoinError::Corpus(CorpusError::TargetOutOfRange { .. })
        ));
    }

    #[test]
    fn label_outside_set_rejected() {
        let sentences = conllu::parse_conllu(corpus_text()).unwrap();
        let bad = format!("{}\ndoc1\ts1\t1\tprocess\tx\t\n", index::INDEX_HEADER);
        let rows = index::parse_index(&bad).unwrap();
        let err = join_dataset(&sentences, &rows, "toy", labels()).unwrap_err();
        assert!(matches!(
            err,
            JoinError::Corpus(CorpusError::UnknownLabel { .. })
        ));
    }

    #[test]
    fn duplicate_sent_id_rejected() {
        let text = format!("{0}\n\n{0}", corpus_text());
        let sentences = conllu::parse_conllu(&text).unwrap();
        let rows = index::parse_index(&index_text()).unwrap();
        let err = join_dataset(&sentences, &rows, "toy", labels()).unwrap_err();
        assert!(matches!(err, JoinError::DuplicateSentId(ref id) if id == "s1"));
    }

    #[test]
    fn loads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let conllu_path = dir.path().join("corpus.conllu");
        let index_path = dir.path().join("index.tsv");
        std::fs::write(&conllu_path, corpus_text()).unwrap();
        std::fs::write(&index_path, index_text()).unwrap();
        let dataset = load_dataset(&conllu_path, &index_path, "toy", labels()).unwrap();
        assert_eq!(dataset.len(), 2);
        assert_eq!(dataset.name, "toy");
    }
}
