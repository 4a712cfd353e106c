use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::colgen::Slot;
use crate::db::Database;
use crate::ingest::{unit_dot, EmbeddingStore};

use super::StatsError;

/// Denominator for the pairwise similarity sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairNormalization {
    /// Number of unordered pairs, giving a true mean.
    #[default]
    PairCount,
    /// `N - 1`, which can exceed 1 for large slots.
    NMinusOne,
}

/// Mean pairwise cosine among a slot's collexemes. Collexemes without an
/// embedding are skipped with a warning.
pub fn within_slot_similarity(
    slot: &Slot,
    words: &EmbeddingStore,
    norm: PairNormalization,
) -> Result<f64, StatsError> {
    let mut vectors = Vec::with_capacity(slot.collexemes.len());
    for c in &slot.collexemes {
        match words.get(&c.word) {
            Some(v) => vectors.push(v),
            None => log::warn!("no embedding for collexeme {:?} in slot {}", c.word, slot.key),
        }
    }
    let n = vectors.len();
    if n < 2 {
        return Err(StatsError::TooFewCollexemes(n));
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += unit_dot(vectors[i], vectors[j]);
        }
    }
    let denom = match norm {
        PairNormalization::PairCount => (n * (n - 1) / 2) as f64,
        PairNormalization::NMinusOne => (n - 1) as f64,
    };
    Ok(sum / denom)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceRow {
    pub deprel: String,
    /// Mean within-slot similarity over the slots that could be scored.
    pub mean_similarity: f64,
    pub slots: usize,
}

/// Within-slot similarity averaged per relation; slots with fewer than two
/// embedded collexemes are left out. Sorted by relation.
pub fn coherence_by_relation(
    db: &Database,
    words: &EmbeddingStore,
    norm: PairNormalization,
) -> Result<Vec<CoherenceRow>, StatsError> {
    if db.is_empty() {
        return Err(StatsError::EmptyDatabase);
    }
    let mut acc: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for (_, c) in db.collostructions() {
        for s in c.slots.iter().filter(|s| !s.key.is_focus()) {
            if let Ok(v) = within_slot_similarity(s, words, norm) {
                let e = acc.entry(s.key.deprel.as_str()).or_default();
                e.0 += v;
                e.1 += 1;
            }
        }
    }
    Ok(acc
        .into_iter()
        .map(|(deprel, (sum, n))| CoherenceRow {
            deprel: deprel.to_string(),
            mean_similarity: sum / n as f64,
            slots: n,
        })
        .collect())
}
