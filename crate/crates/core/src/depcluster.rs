//! Density clustering of clause structures.
//!
//! Two departures from textbook DBSCAN:
//!
//! * every clause gets its own radius, `eps(i) = min_{j != i} d(i, j)`;
//! * a candidate `q` may join a growing neighborhood `N` only if
//!   `d(q, m) <= eps(m)` for **every** member `m` already in `N`.
//!
//! Seeds are taken in ascending index order. While a neighborhood grows, the
//! lowest-indexed admissible candidate is admitted next, so the admission
//! sequence is the lexicographically smallest maximal one. A neighborhood
//! with at least `min_pts` members becomes a cluster; clauses never placed in
//! a cluster are outliers.
//!
//! Distances are integers: `d = ceil(ln(sim) / ln(0.05))`, so identical
//! clauses are at distance 0, any similarity in `[0.05, 1)` gives 1,
//! `[0.0025, 0.05)` gives 2, and so on.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::align::monotone_align;
use crate::clause::{ClauseNode, ClauseStructure};
use crate::wordsim::WordSimilarity;

#[derive(Debug, Error, PartialEq)]
pub enum DepClusterError {
    #[error("nothing to cluster")]
    Empty,
    #[error("invalid similarity parameters: {0}")]
    Params(String),
    #[error("min_pts must be at least 1")]
    MinPts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMode {
    /// Relation identity gate times weighted head/dependent word similarity.
    SynSem,
    /// Relation identity only.
    Syntactic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityParams {
    /// Weight of the child side.
    pub alpha: f64,
    /// Weight of the ancestor side.
    pub beta: f64,
    /// Weight of head-word similarity.
    pub alpha_w: f64,
    /// Weight of dependent-word similarity.
    pub beta_w: f64,
    pub mode: SimilarityMode,
    /// Similarity that maps to distance exactly 1; the base of the log scale.
    pub sim_floor: f64,
}

impl Default for SimilarityParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.5,
            alpha_w: 0.5,
            beta_w: 0.5,
            mode: SimilarityMode::SynSem,
            sim_floor: 0.05,
        }
    }
}

impl SimilarityParams {
    pub fn syntactic(self) -> Self {
        Self {
            mode: SimilarityMode::Syntactic,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), DepClusterError> {
        let pair_ok = |a: f64, b: f64| a >= 0.0 && b >= 0.0 && ((a + b) - 1.0).abs() < 1e-9;
        if !pair_ok(self.alpha, self.beta) {
            return Err(DepClusterError::Params(format!(
                "alpha + beta must be 1, got {} + {}",
                self.alpha, self.beta
            )));
        }
        if !pair_ok(self.alpha_w, self.beta_w) {
            return Err(DepClusterError::Params(format!(
                "alpha_w + beta_w must be 1, got {} + {}",
                self.alpha_w, self.beta_w
            )));
        }
        if !(self.sim_floor > 0.0 && self.sim_floor < 1.0) {
            return Err(DepClusterError::Params(format!(
                "sim_floor must lie in (0, 1), got {}",
                self.sim_floor
            )));
        }
        Ok(())
    }
}

/// Similarity of two clause nodes: 0 unless the relations match.
pub fn node_similarity<W: WordSimilarity + ?Sized>(
    n1: &ClauseNode,
    n2: &ClauseNode,
    params: &SimilarityParams,
    word_sim: &W,
) -> f64 {
    if !n1.deprel.eq_ignore_ascii_case(&n2.deprel) {
        return 0.0;
    }
    match params.mode {
        SimilarityMode::Syntactic => 1.0,
        SimilarityMode::SynSem => {
            let h = word_sim.similarity(&n1.head_word, &n2.head_word).clamp(0.0, 1.0);
            let d = word_sim.similarity(&n1.dep_word, &n2.dep_word).clamp(0.0, 1.0);
            (params.alpha_w * h + params.beta_w * d).clamp(0.0, 1.0)
        }
    }
}

/// Best monotone alignment score, normalized by the longer list.
pub fn set_similarity<W: WordSimilarity + ?Sized>(
    v1: &[ClauseNode],
    v2: &[ClauseNode],
    params: &SimilarityParams,
    word_sim: &W,
) -> f64 {
    match (v1.is_empty(), v2.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let (total, _) = monotone_align(v1.len(), v2.len(), |i, j| {
        node_similarity(&v1[i], &v2[j], params, word_sim)
    });
    (total / v1.len().max(v2.len()) as f64).clamp(0.0, 1.0)
}

pub fn clause_similarity<W: WordSimilarity + ?Sized>(
    c1: &ClauseStructure,
    c2: &ClauseStructure,
    params: &SimilarityParams,
    word_sim: &W,
) -> f64 {
    params.alpha * set_similarity(&c1.v_child, &c2.v_child, params, word_sim)
        + params.beta * set_similarity(&c1.v_ancestor, &c2.v_ancestor, params, word_sim)
}

/// Slack absorbing rounding in `ln(sim) / ln(floor)` when `sim` is an exact
/// power of the floor.
const DISTANCE_SLACK: f64 = 1e-9;

/// Maps a similarity to the integer distance scale. Similarity 0 (or below)
/// maps to the largest distance reachable from a positive double.
pub fn distance_from_similarity(sim: f64, sim_floor: f64) -> u32 {
    let s = sim.clamp(f64::MIN_POSITIVE, 1.0);
    let ratio = s.ln() / sim_floor.ln();
    (ratio - DISTANCE_SLACK).ceil().max(0.0) as u32
}

pub fn clause_distance<W: WordSimilarity + ?Sized>(
    c1: &ClauseStructure,
    c2: &ClauseStructure,
    params: &SimilarityParams,
    word_sim: &W,
) -> u32 {
    distance_from_similarity(clause_similarity(c1, c2, params, word_sim), params.sim_floor)
}

/// Dense symmetric matrix of integer distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    /// Builds from a full row-major matrix.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        let n = rows.len();
        let data = rows.into_iter().flatten().collect::<Vec<_>>();
        assert_eq!(data.len(), n * n, "distance matrix must be square");
        Self { n, data }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> u32 + Sync) -> Self {
        let upper: Vec<(usize, usize, u32)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| (i + 1..n).map(move |j| (i, j)).collect::<Vec<_>>())
            .map(|(i, j)| (i, j, f(i, j)))
            .collect();
        let mut data = vec![0; n * n];
        for (i, j, d) in upper {
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    /// Per-point radius: distance to the nearest other point (`u32::MAX` when
    /// there is no other point).
    pub fn epsilons(&self) -> Vec<u32> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| j != i)
                    .map(|j| self.get(i, j))
                    .min()
                    .unwrap_or(u32::MAX)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterResult {
    /// Each cluster's members ascending; clusters ordered by their seed.
    pub clusters: Vec<Vec<usize>>,
    pub outliers: Vec<usize>,
}

/// Runs the per-point-radius, mutual-admission clustering on precomputed
/// distances.
pub fn cluster_distances(dist: &DistanceMatrix, min_pts: usize) -> Result<ClusterResult, DepClusterError> {
    if min_pts == 0 {
        return Err(DepClusterError::MinPts);
    }
    let n = dist.len();
    if n == 0 {
        return Err(DepClusterError::Empty);
    }
    let eps = dist.epsilons();
    let mut assigned = vec![false; n];
    let mut clusters = Vec::new();

    for seed in 0..n {
        if assigned[seed] {
            continue;
        }
        // Only the seed's nearest neighbours can ever be admitted.
        let candidates: Vec<usize> = (0..n)
            .filter(|&q| q != seed && !assigned[q] && dist.get(q, seed) <= eps[seed])
            .collect();
        let mut admissible = vec![true; candidates.len()];
        let mut taken = vec![false; candidates.len()];
        let mut members = vec![seed];
        while let Some(k) = (0..candidates.len()).find(|&k| admissible[k] && !taken[k]) {
            taken[k] = true;
            let q = candidates[k];
            members.push(q);
            for (r, ok) in admissible.iter_mut().enumerate() {
                if *ok && dist.get(candidates[r], q) > eps[q] {
                    *ok = false;
                }
            }
        }
        if members.len() >= min_pts {
            members.sort_unstable();
            for &m in &members {
                assigned[m] = true;
            }
            clusters.push(members);
        }
    }
    let outliers = (0..n).filter(|&i| !assigned[i]).collect();
    Ok(ClusterResult { clusters, outliers })
}

/// Clusters clause structures under one similarity mode.
pub fn depcluster_dbscan<W: WordSimilarity + ?Sized>(
    clauses: &[ClauseStructure],
    params: &SimilarityParams,
    word_sim: &W,
    min_pts: usize,
) -> Result<ClusterResult, DepClusterError> {
    params.validate()?;
    if clauses.is_empty() {
        return Err(DepClusterError::Empty);
    }
    let dist = DistanceMatrix::from_fn(clauses.len(), |i, j| {
        clause_distance(&clauses[i], &clauses[j], params, word_sim)
    });
    cluster_distances(&dist, min_pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusteringStage {
    SynSem,
    Syntactic,
}

/// Which clustering passes to run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusteringPlan {
    /// Syn-sem pass, then a syntactic pass over its outliers.
    #[default]
    TwoStage,
    SynSemOnly,
    SyntacticOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagedCluster {
    pub stage: ClusteringStage,
    /// Indices into the clause list given to [`staged_clustering`].
    pub members: Vec<usize>,
}

/// Runs the configured passes. Returns clusters in stage order and the
/// clauses left over at the end.
pub fn staged_clustering<W: WordSimilarity + ?Sized>(
    clauses: &[ClauseStructure],
    params: &SimilarityParams,
    word_sim: &W,
    min_pts: usize,
    plan: ClusteringPlan,
) -> Result<(Vec<StagedCluster>, Vec<usize>), DepClusterError> {
    let first_mode = match plan {
        ClusteringPlan::SyntacticOnly => SimilarityMode::Syntactic,
        _ => SimilarityMode::SynSem,
    };
    let first_params = SimilarityParams {
        mode: first_mode,
        ..*params
    };
    let first = depcluster_dbscan(clauses, &first_params, word_sim, min_pts)?;
    let stage_of = |m: SimilarityMode| match m {
        SimilarityMode::SynSem => ClusteringStage::SynSem,
        SimilarityMode::Syntactic => ClusteringStage::Syntactic,
    };
    let mut out: Vec<StagedCluster> = first
        .clusters
        .into_iter()
        .map(|members| StagedCluster {
            stage: stage_of(first_mode),
            members,
        })
        .collect();
    let mut leftover = first.outliers;

    if plan == ClusteringPlan::TwoStage && !leftover.is_empty() {
        let subset: Vec<ClauseStructure> = leftover.iter().map(|&i| clauses[i].clone()).collect();
        let second = depcluster_dbscan(&subset, &params.syntactic(), word_sim, min_pts)?;
        out.extend(second.clusters.into_iter().map(|members| StagedCluster {
            stage: ClusteringStage::Syntactic,
            members: members.into_iter().map(|k| leftover[k]).collect(),
        }));
        leftover = second.outliers.into_iter().map(|k| leftover[k]).collect();
    }
    Ok((out, leftover))
}
