use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clause::{classify_edge, ClauseStructure, EdgeCategory};
use crate::colgen::{Collostruction, SlotKey};

use super::matching::Alignment;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureEntry {
    pub deprel: String,
    /// Clause word, or the collostruction slot's top collexeme.
    pub word: String,
    /// Alignment similarity, 0 when unaligned.
    pub sim: f64,
}

impl fmt::Display for FeatureEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{:.3})", self.deprel, self.word, self.sim)
    }
}

/// Relations attached directly around the focus on both sides of a match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub core_dep_col: String,
    pub deps_col: Vec<FeatureEntry>,
    pub core_dep_cls: String,
    pub deps_cls: Vec<FeatureEntry>,
}

impl FeatureVector {
    /// Tab-separated row: the four features in order.
    pub fn to_tsv(&self) -> String {
        let list = |v: &[FeatureEntry]| {
            let items: Vec<String> = v.iter().map(|e| e.to_string()).collect();
            format!("[{}]", items.join(", "))
        };
        format!(
            "{}\t{}\t{}\t{}",
            self.core_dep_col,
            list(&self.deps_col),
            self.core_dep_cls,
            list(&self.deps_cls)
        )
    }
}

fn focus_attached(col: &Collostruction, key: &SlotKey) -> bool {
    let Some(focus) = col.focus() else { return false };
    if col.head_of(&focus.key) == Some(key) {
        return true;
    }
    // Dependent of the focus, possibly through other slots.
    let mut cur = col.head_of(key);
    for _ in 0..col.slots.len() {
        match cur {
            Some(h) if h.is_focus() => return true,
            Some(h) => cur = col.head_of(h),
            None => return false,
        }
    }
    false
}

/// Builds the feature vector from the clause, its top collostruction, and
/// their alignment. Only focus-child and head-of-focus entries are kept, in
/// linear order.
pub fn extract_features(clause: &ClauseStructure, col: &Collostruction, alignment: &Alignment) -> FeatureVector {
    let deps_col = col
        .slots
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.key.is_focus() && focus_attached(col, &s.key))
        .map(|(j, s)| FeatureEntry {
            deprel: s.key.deprel.clone(),
            word: s.collexemes.first().map(|c| c.word.clone()).unwrap_or_default(),
            sim: alignment.for_slot(j).unwrap_or(0.0),
        })
        .collect();
    let deps_cls = clause
        .nodes_in_order()
        .into_iter()
        .enumerate()
        .filter(|(_, n)| {
            matches!(
                classify_edge(clause, n),
                Ok(EdgeCategory::FocusChild | EdgeCategory::HeadFocus)
            )
        })
        .map(|(i, n)| FeatureEntry {
            deprel: n.deprel.clone(),
            word: n.dep_word.clone(),
            sim: alignment.for_clause(i).unwrap_or(0.0),
        })
        .collect();
    FeatureVector {
        core_dep_col: col.focus().map(|s| s.key.deprel.clone()).unwrap_or_default(),
        deps_col,
        core_dep_cls: clause.focus.deprel.clone(),
        deps_cls,
    }
}
