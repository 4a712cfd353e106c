//! Sense splitting: agglomerative clustering of a verb's instance sentences.
//!
//! Average linkage over cosine distance `1 - cos`. Merging stops once the
//! smallest inter-cluster distance exceeds `1 - sim_threshold`, which is the
//! same as cutting the (monotone) average-linkage dendrogram at that height.
//! Memory is quadratic in the number of instances.

use std::collections::HashSet;

use kodama::{linkage, Method};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{unit_dot, EmbeddingStore};

#[derive(Debug, Error, PartialEq)]
pub enum SenseError {
    #[error("no sentence ids to cluster")]
    Empty,
    #[error("sentence {0:?} has no embedding")]
    UnknownId(String),
    #[error("sentence {0:?} listed twice")]
    DuplicateId(String),
    #[error("similarity threshold must lie in (0, 1), got {0}")]
    Threshold(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseCluster {
    pub cluster_id: usize,
    /// Sorted ascending.
    pub member_sent_ids: Vec<String>,
}

impl SenseCluster {
    pub fn size(&self) -> usize {
        self.member_sent_ids.len()
    }
}

pub const DEFAULT_SENSE_THRESHOLD: f64 = 0.5;
pub const DEFAULT_MIN_CLUSTER_SIZE: usize = 5;

/// Groups `ids` into sense clusters. Clusters come back largest first, ties
/// broken by their smallest member id; `cluster_id` is the position in that
/// order.
pub fn cluster_sentences(
    store: &EmbeddingStore,
    ids: &[String],
    sim_threshold: f64,
) -> Result<Vec<SenseCluster>, SenseError> {
    if !(sim_threshold > 0.0 && sim_threshold < 1.0) {
        return Err(SenseError::Threshold(sim_threshold));
    }
    if ids.is_empty() {
        return Err(SenseError::Empty);
    }
    let mut sorted: Vec<&String> = ids.iter().collect();
    sorted.sort();
    let mut seen = HashSet::new();
    let mut vectors = Vec::with_capacity(sorted.len());
    for id in &sorted {
        if !seen.insert(id.as_str()) {
            return Err(SenseError::DuplicateId((*id).clone()));
        }
        vectors.push(
            store
                .get(id)
                .ok_or_else(|| SenseError::UnknownId((*id).clone()))?,
        );
    }

    let n = sorted.len();
    let mut labels: Vec<usize> = (0..n).collect();
    if n > 1 {
        let mut condensed = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n - 1 {
            for j in i + 1..n {
                condensed.push((1.0 - unit_dot(vectors[i], vectors[j])).max(0.0));
            }
        }
        let dendrogram = linkage(&mut condensed, n, Method::Average);
        let cut = 1.0 - sim_threshold;
        let mut uf = UnionFind::new(2 * n - 1);
        for (step_idx, step) in dendrogram.steps().iter().enumerate() {
            if step.dissimilarity <= cut {
                let new_node = n + step_idx;
                uf.union(step.cluster1, new_node);
                uf.union(step.cluster2, new_node);
            }
        }
        labels = (0..n).map(|i| uf.find(i)).collect();
    }

    let mut groups: std::collections::BTreeMap<usize, Vec<String>> = Default::default();
    for (i, label) in labels.into_iter().enumerate() {
        groups.entry(label).or_default().push(sorted[i].clone());
    }
    let mut clusters: Vec<Vec<String>> = groups.into_values().collect();
    // Members are already ascending because `sorted` is.
    clusters.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
    Ok(clusters
        .into_iter()
        .enumerate()
        .map(|(cluster_id, member_sent_ids)| SenseCluster {
            cluster_id,
            member_sent_ids,
        })
        .collect())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so labels do not depend on union order.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store(vectors: &[(&str, Vec<f64>)]) -> EmbeddingStore {
        let mut s = EmbeddingStore::new(vectors[0].1.len());
        for (id, v) in vectors {
            s.insert(*id, v.clone()).unwrap();
        }
        s
    }

    fn ids(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identical_vectors_form_one_cluster() {
        let names = ["a", "b", "c", "d", "e"];
        let st = store(&names.map(|n| (n, vec![1.0, 2.0, 3.0])));
        let c = cluster_sentences(&st, &ids(&names), 0.5).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].size(), 5);
    }

    #[test]
    fn orthogonal_vectors_stay_apart() {
        let st = store(&[
            ("a", vec![1.0, 0.0, 0.0]),
            ("b", vec![0.0, 1.0, 0.0]),
            ("c", vec![0.0, 0.0, 1.0]),
        ]);
        let c = cluster_sentences(&st, &ids(&["c", "a", "b"]), 0.5).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|s| s.size() == 1));
        // Ties on size break on smallest member id.
        assert_eq!(c[0].member_sent_ids, vec!["a"]);
    }

    #[test]
    fn errors() {
        let st = store(&[("a", vec![1.0, 0.0])]);
        assert_eq!(cluster_sentences(&st, &[], 0.5), Err(SenseError::Empty));
        assert_eq!(
            cluster_sentences(&st, &ids(&["zz"]), 0.5),
            Err(SenseError::UnknownId("zz".into()))
        );
        assert!(matches!(
            cluster_sentences(&st, &ids(&["a"]), 1.0),
            Err(SenseError::Threshold(_))
        ));
        assert_eq!(
            cluster_sentences(&st, &ids(&["a", "a"]), 0.5),
            Err(SenseError::DuplicateId("a".into()))
        );
    }

    #[test]
    fn threshold_controls_merging() {
        let st = store(&[("a", vec![1.0, 0.0]), ("b", vec![0.6, 0.8])]);
        let both = ids(&["a", "b"]);
        assert_eq!(cluster_sentences(&st, &both, 0.55).unwrap().len(), 1);
        assert_eq!(cluster_sentences(&st, &both, 0.65).unwrap().len(), 2);
    }
}
