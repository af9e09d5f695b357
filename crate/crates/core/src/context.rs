//! Context selection: which sentence positions accompany the target verb
//! into the composition.
//!
//! Every extractor returns 0-based token indices in ascending order, never
//! including the target itself. Linear windows are truncated at the
//! sentence boundaries; dependency contexts are first-order only (the
//! target's head and/or its direct dependents).

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Token;

/// A context-selection strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ContextSpec {
    /// No context at all: the target vector stands alone.
    VerbOnly,
    /// Up to `k` tokens on each side of the target.
    Window(usize),
    /// The target's syntactic head (empty when the target is the root).
    DepHead,
    /// The target's direct dependents.
    DepChildren,
    /// Head and direct dependents together.
    DepFull,
    /// Every other token in the sentence.
    FullSentence,
}

/// Error for unrecognised [`ContextSpec`] strings.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown context spec `{0}`; expected verb, window:K, dep-head, dep-children, dep-full, or sentence")]
pub struct ParseContextSpecError(pub String);

impl core::str::FromStr for ContextSpec {
    type Err = ParseContextSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "verb" => return Ok(ContextSpec::VerbOnly),
            "dep-head" => return Ok(ContextSpec::DepHead),
            "dep-children" => return Ok(ContextSpec::DepChildren),
            "dep-full" => return Ok(ContextSpec::DepFull),
            "sentence" => return Ok(ContextSpec::FullSentence),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("window:") {
            if let Ok(k) = k.parse::<usize>() {
                return Ok(ContextSpec::Window(k));
            }
        }
        Err(ParseContextSpecError(s.to_string()))
    }
}

impl core::fmt::Display for ContextSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ContextSpec::VerbOnly => write!(f, "verb"),
            ContextSpec::Window(k) => write!(f, "window:{k}"),
            ContextSpec::DepHead => write!(f, "dep-head"),
            ContextSpec::DepChildren => write!(f, "dep-children"),
            ContextSpec::DepFull => write!(f, "dep-full"),
            ContextSpec::FullSentence => write!(f, "sentence"),
        }
    }
}

impl From<ContextSpec> for String {
    fn from(spec: ContextSpec) -> String {
        spec.to_string()
    }
}

impl TryFrom<String> for ContextSpec {
    type Error = ParseContextSpecError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Selects the context positions for `target` within `tokens`.
///
/// The returned indices are strictly ascending, lie in `0..tokens.len()`,
/// and never contain `target`. Callers must pass a valid target index.
pub fn extract_context(tokens: &[Token], target: usize, spec: ContextSpec) -> Vec<usize> {
    assert!(target < tokens.len(), "target index out of range");
    match spec {
        ContextSpec::VerbOnly => Vec::new(),
        ContextSpec::Window(k) => {
            let lo = target.saturating_sub(k);
            let hi = (target + k).min(tokens.len() - 1);
            (lo..=hi).filter(|&i| i != target).collect()
        }
        ContextSpec::DepHead => tokens[target].head.into_iter().collect(),
        ContextSpec::DepChildren => children_of(tokens, target),
        ContextSpec::DepFull => {
            let mut out = children_of(tokens, target);
            if let Some(h) = tokens[target].head {
                // Insert the head at its sorted position among the children.
                let pos = out.partition_point(|&i| i < h);
                out.insert(pos, h);
            }
            out
        }
        ContextSpec::FullSentence => (0..tokens.len()).filter(|&i| i != target).collect(),
    }
}

fn children_of(tokens: &[Token], target: usize) -> Vec<usize> {
    tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.head == Some(target))
        .map(|(i, _)| i)
        .collect()
}
