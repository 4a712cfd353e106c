//! Slot keys, the linear-adjacency graph, and path search over it.

use std::collections::{BTreeMap, BTreeSet};

use crate::clause::{ClauseNode, ClauseStructure, LinearSide};

use super::{ColgenError, SlotKey, SlotSide};

/// A clause node together with the slot it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyedNode {
    pub key: SlotKey,
    pub node: ClauseNode,
}

/// Maps every node of `clause` (focus included) to its slot key, in linear
/// order. Repeated `(side, deprel)` pairs are numbered outward from the
/// focus; equal distances number the left node first.
pub fn key_clause(clause: &ClauseStructure, focus_deprel: &str) -> Vec<KeyedNode> {
    let t = clause.target_id as i64;
    let mut out = Vec::with_capacity(clause.v_child.len() + clause.v_ancestor.len() + 1);
    for (side, nodes) in [
        (SlotSide::Child, &clause.v_child),
        (SlotSide::Ancestor, &clause.v_ancestor),
    ] {
        let mut by_rel: BTreeMap<&str, Vec<&ClauseNode>> = BTreeMap::new();
        for n in nodes {
            by_rel.entry(n.deprel.as_str()).or_default().push(n);
        }
        for (rel, mut group) in by_rel {
            group.sort_by_key(|n| ((n.token_id as i64 - t).abs(), n.token_id));
            for (i, n) in group.into_iter().enumerate() {
                out.push(KeyedNode {
                    key: SlotKey::new(side, rel, i as u32 + 1),
                    node: n.clone(),
                });
            }
        }
    }
    out.push(KeyedNode {
        key: SlotKey::focus(focus_deprel),
        node: clause.focus.clone(),
    });
    out.sort_by_key(|k| k.node.token_id);
    out
}

/// Most frequent focus relation in the cluster, ties to the smallest label.
pub fn majority_focus_deprel(cluster: &[ClauseStructure]) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for c in cluster {
        *counts.entry(c.focus.deprel.as_str()).or_default() += 1;
    }
    let best = counts.values().copied().max()?;
    counts
        .into_iter()
        .find(|&(_, n)| n == best)
        .map(|(rel, _)| rel.to_string())
}

/// Everything generation needs to know about a cluster, keyed by slot.
#[derive(Debug, Clone)]
pub struct ClusterProfile {
    pub verb: String,
    pub focus_key: SlotKey,
    pub keyed: Vec<Vec<KeyedNode>>,
    /// Linear sides (relative to the focus) each key was observed on.
    pub linear_sides: BTreeMap<SlotKey, BTreeSet<LinearSide>>,
    /// `(dependent, head)` key pairs with the number of clauses showing them.
    pub dependencies: BTreeMap<(SlotKey, SlotKey), u32>,
    /// Number of clauses containing each key.
    pub occurrences: BTreeMap<SlotKey, u32>,
    /// Keys that governed the focus in some clause.
    pub focus_heads: BTreeSet<SlotKey>,
    pub all_have_ancestor: bool,
    pub sent_ids: Vec<String>,
}

impl ClusterProfile {
    pub fn new(cluster: &[ClauseStructure]) -> Result<Self, ColgenError> {
        let first = cluster.first().ok_or(ColgenError::EmptyCluster)?;
        let verb = first.verb().to_string();
        if let Some(other) = cluster.iter().find(|c| c.verb() != verb) {
            return Err(ColgenError::VerbMismatch(verb, other.verb().to_string()));
        }
        let focus_deprel = majority_focus_deprel(cluster).expect("cluster is nonempty");
        let focus_key = SlotKey::focus(&focus_deprel);

        let mut profile = ClusterProfile {
            verb,
            focus_key,
            keyed: Vec::with_capacity(cluster.len()),
            linear_sides: BTreeMap::new(),
            dependencies: BTreeMap::new(),
            occurrences: BTreeMap::new(),
            focus_heads: BTreeSet::new(),
            all_have_ancestor: cluster.iter().all(|c| !c.v_ancestor.is_empty()),
            sent_ids: cluster.iter().map(|c| c.sent_id.clone()).collect(),
        };
        for clause in cluster {
            let keyed = key_clause(clause, &focus_deprel);
            let by_token: BTreeMap<usize, &SlotKey> =
                keyed.iter().map(|k| (k.node.token_id, &k.key)).collect();
            let mut seen = BTreeSet::new();
            for k in &keyed {
                if seen.insert(k.key.clone()) {
                    *profile.occurrences.entry(k.key.clone()).or_default() += 1;
                }
                if k.node.side != LinearSide::Target {
                    profile
                        .linear_sides
                        .entry(k.key.clone())
                        .or_default()
                        .insert(k.node.side);
                }
                if let Some(head) = by_token.get(&k.node.head_id) {
                    *profile
                        .dependencies
                        .entry((k.key.clone(), (*head).clone()))
                        .or_default() += 1;
                    if k.node.token_id == clause.target_id {
                        profile.focus_heads.insert((*head).clone());
                    }
                }
            }
            profile.keyed.push(keyed);
        }
        Ok(profile)
    }

    pub fn size(&self) -> usize {
        self.keyed.len()
    }

    /// Whether the two keys stand in a dependency relation in some clause.
    pub fn related(&self, a: &SlotKey, b: &SlotKey) -> bool {
        self.dependencies.contains_key(&(a.clone(), b.clone()))
            || self.dependencies.contains_key(&(b.clone(), a.clone()))
    }
}

/// Linear-adjacency merge graph of a cluster.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdjacencyGraph {
    pub nodes: BTreeSet<SlotKey>,
    pub edges: BTreeMap<(SlotKey, SlotKey), u32>,
    /// First node of each clause, with multiplicity.
    pub start_nodes: BTreeMap<SlotKey, u32>,
}

impl AdjacencyGraph {
    pub fn from_profile(profile: &ClusterProfile) -> Self {
        let mut g = AdjacencyGraph::default();
        for keyed in &profile.keyed {
            for k in keyed {
                g.nodes.insert(k.key.clone());
            }
            if let Some(first) = keyed.first() {
                *g.start_nodes.entry(first.key.clone()).or_default() += 1;
            }
            for pair in keyed.windows(2) {
                *g.edges
                    .entry((pair[0].key.clone(), pair[1].key.clone()))
                    .or_default() += 1;
            }
        }
        g
    }

    pub fn weight(&self, from: &SlotKey, to: &SlotKey) -> u32 {
        self.edges
            .get(&(from.clone(), to.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// Outgoing edges of `from`, ordered by key.
    pub fn successors<'a>(&'a self, from: &'a SlotKey) -> impl Iterator<Item = (&'a SlotKey, u32)> + 'a {
        self.edges
            .range((from.clone(), SlotKey::min_key())..)
            .take_while(move |((f, _), _)| f == from)
            .map(|((_, to), w)| (to, *w))
    }
}

pub fn build_adjacency_graph(cluster: &[ClauseStructure]) -> Result<AdjacencyGraph, ColgenError> {
    Ok(AdjacencyGraph::from_profile(&ClusterProfile::new(cluster)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathMode {
    /// One path per distinct start node, always taking the heaviest edge.
    #[default]
    Greedy,
    /// Every maximal simple path, stopping after `cap` paths.
    Exhaustive { cap: usize },
}

pub const DEFAULT_PATH_CAP: usize = 10_000;

pub fn enumerate_paths(graph: &AdjacencyGraph, mode: PathMode) -> Vec<Vec<SlotKey>> {
    let mut paths = Vec::new();
    for start in graph.start_nodes.keys() {
        match mode {
            PathMode::Greedy => paths.push(greedy_path(graph, start)),
            PathMode::Exhaustive { cap } => {
                let mut path = vec![start.clone()];
                let mut on_path = BTreeSet::from([start.clone()]);
                all_paths(graph, &mut path, &mut on_path, &mut paths, cap);
                if paths.len() >= cap {
                    log::warn!("path enumeration stopped at the cap of {cap}");
                    break;
                }
            }
        }
    }
    paths
}

fn greedy_path(graph: &AdjacencyGraph, start: &SlotKey) -> Vec<SlotKey> {
    let mut path = vec![start.clone()];
    let mut visited = BTreeSet::from([start.clone()]);
    loop {
        let cur = path.last().expect("path is nonempty");
        // Successors come in key order, so `>` keeps the smallest key on ties.
        let mut best: Option<(&SlotKey, u32)> = None;
        for (to, w) in graph.successors(cur) {
            if visited.contains(to) {
                continue;
            }
            if best.is_none_or(|(_, bw)| w > bw) {
                best = Some((to, w));
            }
        }
        match best {
            Some((to, _)) => {
                let to = to.clone();
                visited.insert(to.clone());
                path.push(to);
            }
            None => return path,
        }
    }
}

fn all_paths(
    graph: &AdjacencyGraph,
    path: &mut Vec<SlotKey>,
    on_path: &mut BTreeSet<SlotKey>,
    out: &mut Vec<Vec<SlotKey>>,
    cap: usize,
) {
    if out.len() >= cap {
        return;
    }
    let cur = path.last().expect("path is nonempty").clone();
    let next: Vec<SlotKey> = graph
        .successors(&cur)
        .filter(|(to, _)| !on_path.contains(*to))
        .map(|(to, _)| to.clone())
        .collect();
    if next.is_empty() {
        out.push(path.clone());
        return;
    }
    for to in next {
        on_path.insert(to.clone());
        path.push(to);
        all_paths(graph, path, on_path, out, cap);
        let to = path.pop().expect("just pushed");
        on_path.remove(&to);
        if out.len() >= cap {
            return;
        }
    }
}

/// Drops paths that cannot yield a well-formed collostruction for this
/// cluster.
pub fn filter_paths(paths: Vec<Vec<SlotKey>>, profile: &ClusterProfile) -> Vec<Vec<SlotKey>> {
    paths
        .into_iter()
        .filter(|p| path_admissible(p, profile))
        .collect()
}

fn path_admissible(path: &[SlotKey], profile: &ClusterProfile) -> bool {
    let Some(focus_pos) = path.iter().position(|k| *k == profile.focus_key) else {
        return false;
    };
    if profile.all_have_ancestor
        && !profile.focus_heads.is_empty()
        && !path.iter().any(|k| profile.focus_heads.contains(k))
    {
        return false;
    }
    for (i, key) in path.iter().enumerate() {
        if i == focus_pos {
            continue;
        }
        let here = if i < focus_pos {
            LinearSide::Left
        } else {
            LinearSide::Right
        };
        if let Some(sides) = profile.linear_sides.get(key) {
            if sides.len() == 1 && !sides.contains(&here) {
                return false;
            }
        }
    }
    true
}

/// Breakdown of a path's score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathScore {
    pub coverage: f64,
    pub average: f64,
    pub num_dangle: usize,
    pub score: f64,
}

/// `(Coverage + Average) / (1 + NumDangle)`. A node dangles when it has no
/// dependency with any other node of the path; Average is the mean graph
/// weight over consecutive path pairs where neither node dangles.
pub fn score_path(
    path: &[SlotKey],
    graph: &AdjacencyGraph,
    profile: &ClusterProfile,
) -> Result<PathScore, ColgenError> {
    if path.is_empty() {
        return Err(ColgenError::EmptyPath);
    }
    let dangling: Vec<bool> = path
        .iter()
        .enumerate()
        .map(|(i, a)| {
            !path
                .iter()
                .enumerate()
                .any(|(j, b)| i != j && profile.related(a, b))
        })
        .collect();
    let num_dangle = dangling.iter().filter(|&&d| d).count();
    let coverage = (path.len() - num_dangle) as f64 / path.len() as f64;
    let weights: Vec<f64> = (0..path.len().saturating_sub(1))
        .filter(|&i| !dangling[i] && !dangling[i + 1])
        .map(|i| f64::from(graph.weight(&path[i], &path[i + 1])))
        .collect();
    let average = if weights.is_empty() {
        0.0
    } else {
        weights.iter().sum::<f64>() / weights.len() as f64
    };
    Ok(PathScore {
        coverage,
        average,
        num_dangle,
        score: (coverage + average) / (1.0 + num_dangle as f64),
    })
}
