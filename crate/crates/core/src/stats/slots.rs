use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::db::Database;

use super::StatsError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotStat {
    pub deprel: String,
    /// Share of collostructions with at least one slot of this relation.
    pub occurrence_fraction: f64,
    /// Mean `p_slot` over all slots of this relation.
    pub mean_p_slot: f64,
    pub slot_count: usize,
}

/// Per-relation slot occurrence over every collostruction of every verb,
/// most frequent first. Focus slots are not counted.
pub fn slot_statistics(db: &Database) -> Result<Vec<SlotStat>, StatsError> {
    let total = db.len();
    if total == 0 {
        return Err(StatsError::EmptyDatabase);
    }
    // deprel -> (collostructions containing it, p_slot sum, slot count)
    let mut acc: BTreeMap<&str, (usize, f64, usize)> = BTreeMap::new();
    for (_, c) in db.collostructions() {
        let mut seen: Vec<&str> = Vec::new();
        for s in c.slots.iter().filter(|s| !s.key.is_focus()) {
            let e = acc.entry(s.key.deprel.as_str()).or_default();
            e.1 += s.p_slot;
            e.2 += 1;
            if !seen.contains(&s.key.deprel.as_str()) {
                seen.push(&s.key.deprel);
                e.0 += 1;
            }
        }
    }
    let mut rows: Vec<SlotStat> = acc
        .into_iter()
        .map(|(deprel, (n, p_sum, slots))| SlotStat {
            deprel: deprel.to_string(),
            occurrence_fraction: n as f64 / total as f64,
            mean_p_slot: p_sum / slots as f64,
            slot_count: slots,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.occurrence_fraction
            .total_cmp(&a.occurrence_fraction)
            .then_with(|| a.deprel.cmp(&b.deprel))
    });
    Ok(rows)
}
