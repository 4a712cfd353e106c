//! Collostruction generation from a cluster of clause structures.
//!
//! Clauses are merged into a graph whose edges are linear adjacency between
//! slot keys. Candidate traversal paths are filtered and scored; the winning
//! path becomes the slot order, and dependency heads between slots are
//! recovered from the clauses.

mod generate;
mod graph;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::depcluster::ClusteringStage;

pub use generate::{
    collexeme_strength, generate_collostruction, validate_collostruction, validate_verb_entries,
    CorpusCounts, GenerateOptions, StrengthMode,
};
pub use graph::{
    build_adjacency_graph, enumerate_paths, filter_paths, key_clause, majority_focus_deprel,
    score_path, AdjacencyGraph, ClusterProfile, KeyedNode, PathMode, PathScore, DEFAULT_PATH_CAP,
};

#[derive(Debug, Error, PartialEq)]
pub enum ColgenError {
    #[error("cluster is empty")]
    EmptyCluster,
    #[error("cluster mixes verbs {0:?} and {1:?}")]
    VerbMismatch(String, String),
    #[error("path is empty")]
    EmptyPath,
    #[error("cluster size must be positive")]
    ZeroClusterSize,
    #[error("count {count} exceeds cluster size {size}")]
    CountOverflow { count: usize, size: usize },
    #[error("literal strength needs corpus counts: {0}")]
    CorpusCounts(String),
    #[error("invalid collostruction for {verb:?}: {message}")]
    Invalid { verb: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotSide {
    Ancestor,
    Child,
    Focus,
}

/// Slot identity: structural side, relation, and a 1-based ordinal that
/// separates repeated relations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlotKey {
    pub side: SlotSide,
    pub deprel: String,
    pub ordinal: u32,
}

impl SlotKey {
    pub fn new(side: SlotSide, deprel: &str, ordinal: u32) -> Self {
        Self {
            side,
            deprel: deprel.to_string(),
            ordinal,
        }
    }

    pub fn focus(deprel: &str) -> Self {
        Self::new(SlotSide::Focus, deprel, 1)
    }

    pub fn is_focus(&self) -> bool {
        self.side == SlotSide::Focus
    }

    pub(crate) fn min_key() -> Self {
        Self::new(SlotSide::Ancestor, "", 0)
    }
}

impl fmt::Display for SlotKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            SlotSide::Ancestor => "anc",
            SlotSide::Child => "child",
            SlotSide::Focus => "FOCUS",
        };
        if self.ordinal > 1 {
            write!(f, "{side}:{}{}", self.deprel, self.ordinal)
        } else {
            write!(f, "{side}:{}", self.deprel)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collexeme {
    pub word: String,
    pub count: u32,
    pub p_lex: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slot {
    pub key: SlotKey,
    /// Share of cluster clauses that fill this slot; 1 for the focus.
    pub p_slot: f64,
    /// Sorted by `p_lex` descending, then word.
    pub collexemes: Vec<Collexeme>,
    /// Words observed governing this slot, most frequent first.
    pub head_words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotEdge {
    pub dependent: SlotKey,
    pub head: SlotKey,
    pub deprel: String,
    pub p_slot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collostruction {
    pub verb: String,
    pub sense_cluster_id: usize,
    /// Which clustering pass produced the source cluster.
    pub stage: ClusteringStage,
    pub p_col: f64,
    /// Number of clauses in the source cluster.
    pub support: usize,
    /// In linear order.
    pub slots: Vec<Slot>,
    pub edges: Vec<SlotEdge>,
    pub example_sent_ids: Vec<String>,
}

impl Collostruction {
    pub fn focus_index(&self) -> Option<usize> {
        self.slots.iter().position(|s| s.key.is_focus())
    }

    pub fn focus(&self) -> Option<&Slot> {
        self.focus_index().map(|i| &self.slots[i])
    }

    pub fn slot(&self, key: &SlotKey) -> Option<&Slot> {
        self.slots.iter().find(|s| &s.key == key)
    }

    pub fn head_of(&self, key: &SlotKey) -> Option<&SlotKey> {
        self.edges
            .iter()
            .find(|e| &e.dependent == key)
            .map(|e| &e.head)
    }

    /// One-line rendering such as `nsubj[他] FOCUS:root[体验] dobj[生活,工作]`.
    pub fn render(&self, max_collexemes: usize) -> String {
        self.slots
            .iter()
            .map(|s| {
                let words: Vec<&str> = s
                    .collexemes
                    .iter()
                    .take(max_collexemes)
                    .map(|c| c.word.as_str())
                    .collect();
                let label = if s.key.is_focus() {
                    s.key.to_string()
                } else if s.key.ordinal > 1 {
                    format!("{}{}", s.key.deprel, s.key.ordinal)
                } else {
                    s.key.deprel.clone()
                };
                format!("{label}[{}]", words.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}
