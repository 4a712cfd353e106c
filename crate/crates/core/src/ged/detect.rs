use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clause::{retrieve_clause, ClauseOptions, ClauseStructure};
use crate::db::Database;
use crate::ingest::DependencyTree;
use crate::wordsim::WordSimilarity;

use super::dataset::{locate_target, GedInstance};
use super::features::{extract_features, FeatureVector};
use super::index::{heuristic_search, CollostructionIndex};
use super::matching::{select_top, MatchParams, MatchWeights, TopMatch};
use super::GedError;

/// Search result for one clause. `top` and `features` are `None` when the
/// index has no candidate for the verb.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub clause: ClauseStructure,
    pub candidates: Vec<usize>,
    pub top: Option<TopMatch>,
    pub features: Option<FeatureVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectSummary {
    pub candidates: usize,
    pub top_id: Option<usize>,
    pub combined: Option<f64>,
}

impl Detection {
    pub fn summary(&self) -> DetectSummary {
        DetectSummary {
            candidates: self.candidates.len(),
            top_id: self.top.as_ref().map(|t| t.id),
            combined: self.top.as_ref().map(|t| t.score.combined),
        }
    }
}

/// Read-only matching context shared across instances.
pub struct Detector<'a, W: WordSimilarity + ?Sized> {
    pub db: &'a Database,
    pub index: &'a CollostructionIndex,
    pub weights: MatchWeights,
    pub params: MatchParams,
    pub word_sim: &'a W,
    pub clause_options: ClauseOptions,
}

impl<W: WordSimilarity + ?Sized> Detector<'_, W> {
    pub fn detect_clause(&self, clause: ClauseStructure) -> Result<Detection, GedError> {
        let candidates = heuristic_search(&clause, self.index);
        let cols: Vec<_> = candidates
            .iter()
            .filter_map(|&id| self.db.get(id).map(|c| (id, c)))
            .collect();
        if cols.is_empty() {
            return Ok(Detection {
                clause,
                candidates,
                top: None,
                features: None,
            });
        }
        let top = select_top(&clause, &cols, &self.weights, &self.params, self.word_sim)?;
        let col = self.db.get(top.id).expect("candidate id from the database");
        let features = extract_features(&clause, col, &top.alignment);
        Ok(Detection {
            clause,
            candidates,
            top: Some(top),
            features: Some(features),
        })
    }

    /// Locates the instance's verb in its parse and matches its clause.
    pub fn detect_instance(&self, inst: &GedInstance, tree: &DependencyTree) -> Result<Detection, GedError> {
        let target = locate_target(inst, tree, &self.clause_options)?;
        let clause = retrieve_clause(tree, target, &self.clause_options).map_err(|e| GedError::Target {
            id: inst.id.clone(),
            message: e.to_string(),
        })?;
        self.detect_clause(clause)
    }

    /// Matches every instance in parallel against its parse, looked up by
    /// instance id. Output order follows `instances`.
    pub fn detect_all(
        &self,
        instances: &[GedInstance],
        parses: &HashMap<String, DependencyTree>,
    ) -> Vec<Result<Detection, GedError>> {
        instances
            .par_iter()
            .map(|inst| {
                let tree = parses.get(&inst.id).ok_or_else(|| GedError::Target {
                    id: inst.id.clone(),
                    message: "no parse with this sent_id".into(),
                })?;
                self.detect_instance(inst, tree)
            })
            .collect()
    }
}
