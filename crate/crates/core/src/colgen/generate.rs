use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::clause::ClauseStructure;
use crate::depcluster::ClusteringStage;

use super::graph::{enumerate_paths, filter_paths, score_path, AdjacencyGraph, ClusterProfile, PathMode};
use super::{Collexeme, ColgenError, Collostruction, Slot, SlotEdge, SlotKey};

const MAX_EXAMPLES: usize = 5;

/// How collexeme association strength is computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrengthMode {
    /// `count / cluster_size`.
    #[default]
    Conditional,
    /// Joint times word prior over the collostruction probability, which
    /// reduces to `count / cluster_size * freq / corpus_tokens`.
    Literal,
}

/// Corpus word frequencies, needed only for [`StrengthMode::Literal`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusCounts {
    pub tokens: u64,
    pub freq: HashMap<String, u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenerateOptions {
    pub path_mode: PathMode,
    pub strength: StrengthMode,
}

pub fn collexeme_strength(
    count_in_slot: usize,
    cluster_size: usize,
    word_corpus_freq: u64,
    corpus_tokens: u64,
    mode: StrengthMode,
) -> Result<f64, ColgenError> {
    if cluster_size == 0 {
        return Err(ColgenError::ZeroClusterSize);
    }
    if count_in_slot > cluster_size {
        return Err(ColgenError::CountOverflow {
            count: count_in_slot,
            size: cluster_size,
        });
    }
    let conditional = count_in_slot as f64 / cluster_size as f64;
    match mode {
        StrengthMode::Conditional => Ok(conditional),
        StrengthMode::Literal => {
            if corpus_tokens == 0 || word_corpus_freq > corpus_tokens {
                return Err(ColgenError::CorpusCounts(format!(
                    "frequency {word_corpus_freq} over {corpus_tokens} tokens"
                )));
            }
            Ok(conditional * word_corpus_freq as f64 / corpus_tokens as f64)
        }
    }
}

/// Generates the collostruction for one cluster, or `None` when no traversal
/// path survives filtering.
pub fn generate_collostruction(
    cluster: &[ClauseStructure],
    total_verb_instances: usize,
    sense_cluster_id: usize,
    stage: ClusteringStage,
    options: &GenerateOptions,
    corpus: Option<&CorpusCounts>,
) -> Result<Option<Collostruction>, ColgenError> {
    let profile = ClusterProfile::new(cluster)?;
    let size = profile.size();
    if total_verb_instances < size {
        return Err(ColgenError::CountOverflow {
            count: size,
            size: total_verb_instances,
        });
    }
    if options.strength == StrengthMode::Literal && corpus.is_none() {
        return Err(ColgenError::CorpusCounts("none supplied".into()));
    }
    let graph = AdjacencyGraph::from_profile(&profile);
    let paths = filter_paths(enumerate_paths(&graph, options.path_mode), &profile);

    let mut best: Option<(f64, Vec<SlotKey>)> = None;
    for path in paths {
        let s = score_path(&path, &graph, &profile)?.score;
        let better = match &best {
            None => true,
            Some((bs, bp)) => s
                .total_cmp(bs)
                .then_with(|| path.len().cmp(&bp.len()))
                .then_with(|| bp.cmp(&path))
                .is_gt(),
        };
        if better {
            best = Some((s, path));
        }
    }
    let Some((_, path)) = best else {
        return Ok(None);
    };

    let (keys, heads) = prune_to_tree(path, &profile);
    let occurrence = |k: &SlotKey| profile.occurrences.get(k).copied().unwrap_or(0);

    let mut slots = Vec::with_capacity(keys.len());
    for key in &keys {
        if *key == profile.focus_key {
            slots.push(Slot {
                key: key.clone(),
                p_slot: 1.0,
                collexemes: vec![Collexeme {
                    word: profile.verb.clone(),
                    count: size as u32,
                    p_lex: 1.0,
                }],
                head_words: head_words(&profile, key),
            });
            continue;
        }
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for keyed in &profile.keyed {
            for k in keyed.iter().filter(|k| &k.key == key) {
                *counts.entry(k.node.dep_word.as_str()).or_default() += 1;
            }
        }
        let mut collexemes = Vec::with_capacity(counts.len());
        for (word, count) in counts {
            let (freq, tokens) = match corpus {
                Some(c) => (c.freq.get(word).copied().unwrap_or(0), c.tokens),
                None => (0, 0),
            };
            let p_lex = collexeme_strength(count, size, freq, tokens, options.strength)?;
            if options.strength == StrengthMode::Literal && p_lex <= 0.0 {
                return Err(ColgenError::CorpusCounts(format!("{word:?} has no corpus frequency")));
            }
            collexemes.push(Collexeme {
                word: word.to_string(),
                count: count as u32,
                p_lex,
            });
        }
        collexemes.sort_by(|a, b| b.p_lex.total_cmp(&a.p_lex).then_with(|| a.word.cmp(&b.word)));
        slots.push(Slot {
            key: key.clone(),
            p_slot: occurrence(key) as f64 / size as f64,
            collexemes,
            head_words: head_words(&profile, key),
        });
    }

    let edges = keys
        .iter()
        .filter_map(|k| heads.get(k).map(|h| (k, h)))
        .map(|(dep, head)| SlotEdge {
            dependent: dep.clone(),
            head: head.clone(),
            deprel: dep.deprel.clone(),
            p_slot: occurrence(dep) as f64 / size as f64,
        })
        .collect();

    let examples: BTreeSet<&String> = profile.sent_ids.iter().collect();
    Ok(Some(Collostruction {
        verb: profile.verb.clone(),
        sense_cluster_id,
        stage,
        p_col: size as f64 / total_verb_instances as f64,
        support: size,
        slots,
        edges,
        example_sent_ids: examples.into_iter().take(MAX_EXAMPLES).cloned().collect(),
    }))
}

fn head_words(profile: &ClusterProfile, key: &SlotKey) -> Vec<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for keyed in &profile.keyed {
        for k in keyed.iter().filter(|k| &k.key == key) {
            *counts.entry(k.node.head_word.as_str()).or_default() += 1;
        }
    }
    let mut words: Vec<(&str, usize)> = counts.into_iter().collect();
    words.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    words.into_iter().map(|(w, _)| w.to_string()).collect()
}

/// Picks a head for each slot from the clause dependencies, drops slots not
/// connected to the focus, and removes slots until no two edges cross.
fn prune_to_tree(
    path: Vec<SlotKey>,
    profile: &ClusterProfile,
) -> (Vec<SlotKey>, BTreeMap<SlotKey, SlotKey>) {
    let mut keys = path;
    loop {
        let heads = assign_heads(&keys, profile);
        let reach = reachable(&profile.focus_key, &heads);
        keys.retain(|k| reach.contains(k));
        let heads: BTreeMap<SlotKey, SlotKey> = heads
            .into_iter()
            .filter(|(d, h)| reach.contains(d) && reach.contains(h))
            .collect();

        let pos: BTreeMap<&SlotKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let spans: Vec<(usize, usize, &SlotKey, &SlotKey)> = heads
            .iter()
            .map(|(d, h)| {
                let (a, b) = (pos[d], pos[h]);
                (a.min(b), a.max(b), d, h)
            })
            .collect();
        let mut offending: BTreeSet<&SlotKey> = BTreeSet::new();
        for (i, x) in spans.iter().enumerate() {
            for y in &spans[i + 1..] {
                if crosses((x.0, x.1), (y.0, y.1)) {
                    offending.extend([x.2, x.3, y.2, y.3]);
                }
            }
        }
        let victim = offending
            .into_iter()
            .filter(|k| !k.is_focus())
            .min_by(|a, b| {
                let oa = profile.occurrences.get(*a).copied().unwrap_or(0);
                let ob = profile.occurrences.get(*b).copied().unwrap_or(0);
                oa.cmp(&ob).then_with(|| b.cmp(a))
            })
            .cloned();
        match victim {
            Some(v) => keys.retain(|k| *k != v),
            None => return (keys, heads),
        }
    }
}

fn assign_heads(keys: &[SlotKey], profile: &ClusterProfile) -> BTreeMap<SlotKey, SlotKey> {
    let present: BTreeSet<&SlotKey> = keys.iter().collect();
    let mut candidates: Vec<(u32, &SlotKey, &SlotKey)> = profile
        .dependencies
        .iter()
        .filter(|((d, h), _)| d != h && present.contains(d) && present.contains(h))
        .map(|((d, h), n)| (*n, d, h))
        .collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)).then_with(|| a.2.cmp(b.2)));

    let mut heads: BTreeMap<SlotKey, SlotKey> = BTreeMap::new();
    for (_, dep, head) in candidates {
        if heads.contains_key(dep) {
            continue;
        }
        let mut cur = Some(head);
        let mut cycle = false;
        while let Some(c) = cur {
            if c == dep {
                cycle = true;
                break;
            }
            cur = heads.get(c);
        }
        if !cycle {
            heads.insert(dep.clone(), head.clone());
        }
    }
    heads
}

fn reachable(start: &SlotKey, heads: &BTreeMap<SlotKey, SlotKey>) -> BTreeSet<SlotKey> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut stack = vec![start.clone()];
    while let Some(k) = stack.pop() {
        for (d, h) in heads {
            let other = if *d == k {
                h
            } else if *h == k {
                d
            } else {
                continue;
            };
            if seen.insert(other.clone()) {
                stack.push(other.clone());
            }
        }
    }
    seen
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

fn invalid(c: &Collostruction, message: impl Into<String>) -> ColgenError {
    ColgenError::Invalid {
        verb: c.verb.clone(),
        message: message.into(),
    }
}

/// Checks every structural and probabilistic invariant of one record.
pub fn validate_collostruction(c: &Collostruction) -> Result<(), ColgenError> {
    let in_unit = |p: f64| (0.0..=1.0).contains(&p);
    let focus: Vec<&Slot> = c.slots.iter().filter(|s| s.key.is_focus()).collect();
    if focus.len() != 1 {
        return Err(invalid(c, format!("{} focus slots", focus.len())));
    }
    match focus[0].collexemes.as_slice() {
        [only] if only.word == c.verb && only.p_lex == 1.0 => {}
        _ => return Err(invalid(c, "focus collexeme must be the verb with p_lex 1")),
    }
    let keys: BTreeSet<&SlotKey> = c.slots.iter().map(|s| &s.key).collect();
    if keys.len() != c.slots.len() {
        return Err(invalid(c, "duplicate slot keys"));
    }
    if c.support == 0 || !in_unit(c.p_col) {
        return Err(invalid(c, format!("support {} / p_col {}", c.support, c.p_col)));
    }
    for s in &c.slots {
        if !in_unit(s.p_slot) {
            return Err(invalid(c, format!("slot {} has p_slot {}", s.key, s.p_slot)));
        }
        if s.collexemes.is_empty() {
            return Err(invalid(c, format!("slot {} has no collexemes", s.key)));
        }
        for x in &s.collexemes {
            if x.count == 0 || !(x.p_lex > 0.0 && x.p_lex <= 1.0) {
                return Err(invalid(c, format!("collexeme {} in {} out of bounds", x.word, s.key)));
            }
        }
        if s.collexemes.windows(2).any(|w| w[0].p_lex < w[1].p_lex) {
            return Err(invalid(c, format!("collexemes of {} not sorted", s.key)));
        }
    }

    let mut heads: BTreeMap<&SlotKey, &SlotKey> = BTreeMap::new();
    for e in &c.edges {
        if !keys.contains(&e.dependent) || !keys.contains(&e.head) {
            return Err(invalid(c, format!("edge {} -> {} has a missing endpoint", e.dependent, e.head)));
        }
        if !in_unit(e.p_slot) {
            return Err(invalid(c, format!("edge p_slot {}", e.p_slot)));
        }
        if heads.insert(&e.dependent, &e.head).is_some() {
            return Err(invalid(c, format!("slot {} has two heads", e.dependent)));
        }
    }
    let owned: BTreeMap<SlotKey, SlotKey> = heads
        .iter()
        .map(|(d, h)| ((*d).clone(), (*h).clone()))
        .collect();
    let reach = reachable(&focus[0].key, &owned);
    if reach.len() != keys.len() {
        return Err(invalid(c, "slots not connected to the focus"));
    }
    let pos: BTreeMap<&SlotKey, usize> = c.slots.iter().enumerate().map(|(i, s)| (&s.key, i)).collect();
    let spans: Vec<(usize, usize)> = c
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (pos[&e.dependent], pos[&e.head]);
            (a.min(b), a.max(b))
        })
        .collect();
    for (i, x) in spans.iter().enumerate() {
        if spans[i + 1..].iter().any(|y| crosses(*x, *y)) {
            return Err(invalid(c, "crossing edges"));
        }
    }
    Ok(())
}

/// Validates all records of one verb, including `sum(p_col) <= 1`.
pub fn validate_verb_entries(entries: &[Collostruction]) -> Result<(), ColgenError> {
    let mut total = 0.0;
    for c in entries {
        validate_collostruction(c)?;
        if c.verb != entries[0].verb {
            return Err(ColgenError::VerbMismatch(entries[0].verb.clone(), c.verb.clone()));
        }
        total += c.p_col;
    }
    if total > 1.0 + 1e-9 {
        return Err(ColgenError::Invalid {
            verb: entries[0].verb.clone(),
            message: format!("p_col sums to {total}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::{ClauseNode, LinearSide, Strategy};
    use crate::colgen::{build_adjacency_graph, SlotSide};

    const T: usize = 10;

    /// A root-verb clause; `(rel, word, token_id, head_id)` with head 0
    /// meaning the focus.
    fn clause(sent: &str, nodes: &[(&str, &str, usize, usize)]) -> ClauseStructure {
        let mk = |rel: &str, word: &str, id: usize, head: usize| ClauseNode {
            token_id: id,
            head_id: if head == 0 { T } else { head },
            deprel: rel.into(),
            head_word: if head == 0 { "v".into() } else { format!("w{head}") },
            dep_word: word.into(),
            side: if id < T { LinearSide::Left } else { LinearSide::Right },
        };
        ClauseStructure {
            sent_id: sent.into(),
            target_id: T,
            strategy: Strategy::Root,
            focus: ClauseNode {
                token_id: T,
                head_id: 0,
                deprel: "root".into(),
                head_word: "ROOT".into(),
                dep_word: "v".into(),
                side: LinearSide::Target,
            },
            v_child: nodes.iter().map(|&(r, w, id, h)| mk(r, w, id, h)).collect(),
            v_ancestor: vec![],
        }
    }

    fn child(rel: &str) -> SlotKey {
        SlotKey::new(SlotSide::Child, rel, 1)
    }

    fn focus() -> SlotKey {
        SlotKey::focus("root")
    }

    #[test]
    fn adjacency_single_and_double() {
        let c = clause("a", &[("nsubj", "他", 9, 0), ("dobj", "书", 11, 0)]);
        let g = build_adjacency_graph(&[c.clone()]).unwrap();
        assert_eq!(g.weight(&child("nsubj"), &focus()), 1);
        assert_eq!(g.weight(&focus(), &child("dobj")), 1);
        let g2 = build_adjacency_graph(&[c.clone(), c]).unwrap();
        assert_eq!(g2.weight(&child("nsubj"), &focus()), 2);
        assert_eq!(g2.edges.len(), 2);
    }

    #[test]
    fn adjacency_hand_count() {
        let a = clause("a", &[("advmod", "很", 9, 0), ("dobj", "书", 11, 0)]);
        let b = clause("b", &[("nsubj", "他", 8, 0), ("advmod", "很", 9, 0)]);
        let g = build_adjacency_graph(&[a, b]).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.edges.len(), 3);
        assert_eq!(g.weight(&child("advmod"), &focus()), 2);
        assert_eq!(g.weight(&focus(), &child("dobj")), 1);
        assert_eq!(g.weight(&child("nsubj"), &child("advmod")), 1);
        assert_eq!(g.start_nodes.values().sum::<u32>(), 2);
    }

    #[test]
    fn ordinals_count_outward() {
        let c = clause("a", &[("nmod", "x", 7, 0), ("nmod", "y", 9, 0), ("nmod", "z", 11, 0)]);
        let keyed = crate::colgen::key_clause(&c, "root");
        let ords: Vec<(String, u32)> = keyed.iter().map(|k| (k.node.dep_word.clone(), k.key.ordinal)).collect();
        assert_eq!(ords[0], ("x".to_string(), 3));
        assert_eq!(ords[1], ("y".to_string(), 1));
        assert_eq!(ords[3], ("z".to_string(), 2));
    }

    fn chain_graph(edges: &[(&str, &str, u32)], starts: &[&str]) -> AdjacencyGraph {
        let mut g = AdjacencyGraph::default();
        for &(a, b, w) in edges {
            g.nodes.insert(child(a));
            g.nodes.insert(child(b));
            g.edges.insert((child(a), child(b)), w);
        }
        for s in starts {
            *g.start_nodes.entry(child(s)).or_default() += 1;
        }
        g
    }

    #[test]
    fn greedy_paths() {
        let g = chain_graph(&[("a", "b", 1), ("b", "c", 1)], &["a"]);
        assert_eq!(enumerate_paths(&g, PathMode::Greedy), vec![vec![child("a"), child("b"), child("c")]]);
        let g = chain_graph(&[("a", "b", 1), ("b", "c", 1)], &["b"]);
        assert_eq!(enumerate_paths(&g, PathMode::Greedy), vec![vec![child("b"), child("c")]]);

        let g = chain_graph(&[("a", "b", 3), ("a", "c", 1)], &["a"]);
        assert_eq!(enumerate_paths(&g, PathMode::Greedy), vec![vec![child("a"), child("b")]]);
        let all = enumerate_paths(&g, PathMode::Exhaustive { cap: 100 });
        assert_eq!(all, vec![vec![child("a"), child("b")], vec![child("a"), child("c")]]);
        assert_eq!(enumerate_paths(&g, PathMode::Exhaustive { cap: 1 }).len(), 1);
    }

    #[test]
    fn greedy_ties_take_smallest_key() {
        let g = chain_graph(&[("a", "c", 2), ("a", "b", 2)], &["a"]);
        assert_eq!(enumerate_paths(&g, PathMode::Greedy), vec![vec![child("a"), child("b")]]);
    }

    #[test]
    fn filter_rules() {
        let c = clause("a", &[("nsubj", "他", 9, 0), ("dobj", "书", 11, 0)]);
        let profile = ClusterProfile::new(&[c]).unwrap();
        let kept = filter_paths(
            vec![
                vec![child("nsubj"), focus(), child("dobj")],
                vec![child("nsubj"), child("dobj")],
                vec![focus(), child("nsubj")],
            ],
            &profile,
        );
        assert_eq!(kept, vec![vec![child("nsubj"), focus(), child("dobj")]]);
    }

    #[test]
    fn path_score_fixtures() {
        let c = clause("a", &[("nsubj", "他", 9, 0), ("dobj", "书", 11, 0)]);
        let cl = vec![c.clone(), c];
        let profile = ClusterProfile::new(&cl).unwrap();
        let g = AdjacencyGraph::from_profile(&profile);
        let s = score_path(&[child("nsubj"), focus(), child("dobj")], &g, &profile).unwrap();
        assert_eq!(s.score, 3.0);

        // Fourth node hangs off a token outside the clause.
        let c = clause("b", &[("nsubj", "他", 9, 0), ("dobj", "书", 11, 0), ("dep", "了", 12, 99)]);
        let profile = ClusterProfile::new(&[c]).unwrap();
        let g = AdjacencyGraph::from_profile(&profile);
        let s = score_path(&[child("nsubj"), focus(), child("dobj"), child("dep")], &g, &profile).unwrap();
        assert_eq!((s.coverage, s.average, s.num_dangle), (0.75, 1.0, 1));
        assert_eq!(s.score, 0.875);

        let s = score_path(&[child("dep")], &g, &profile).unwrap();
        assert_eq!(s.score, 0.0);
        assert_eq!(score_path(&[], &g, &profile), Err(ColgenError::EmptyPath));
    }

    #[test]
    fn strength_modes() {
        let c = StrengthMode::Conditional;
        assert_eq!(collexeme_strength(10, 10, 0, 0, c).unwrap(), 1.0);
        assert_eq!(collexeme_strength(0, 10, 0, 0, c).unwrap(), 0.0);
        assert_eq!(collexeme_strength(3, 10, 0, 0, c).unwrap(), 0.3);
        assert_eq!(collexeme_strength(1, 0, 0, 0, c), Err(ColgenError::ZeroClusterSize));
        let lit = collexeme_strength(3, 10, 50, 100, StrengthMode::Literal).unwrap();
        assert!((lit - 0.15).abs() < 1e-12);
    }

    #[test]
    fn five_identical_clauses() {
        let c = clause("s", &[("nsubj", "他", 9, 0), ("dobj", "生活", 11, 0)]);
        let cl: Vec<_> = (0..5)
            .map(|i| ClauseStructure { sent_id: format!("s{i}"), ..c.clone() })
            .collect();
        let col = generate_collostruction(&cl, 20, 0, ClusteringStage::SynSem, &GenerateOptions::default(), None)
            .unwrap()
            .unwrap();
        validate_collostruction(&col).unwrap();
        assert_eq!(col.p_col, 0.25);
        assert_eq!(col.support, 5);
        assert_eq!(col.slots.len(), 3);
        assert!(col.edges.iter().all(|e| e.p_slot == 1.0 && e.head == focus()));
        assert_eq!(col.focus().unwrap().collexemes[0].p_lex, 1.0);
        assert_eq!(col.render(3), "nsubj[他] FOCUS:root[v] dobj[生活]");
    }

    #[test]
    fn dangling_slot_is_pruned() {
        let c = clause("s", &[("nsubj", "他", 9, 0), ("dobj", "书", 11, 0), ("dep", "了", 12, 99)]);
        let col = generate_collostruction(&[c], 1, 0, ClusteringStage::SynSem, &GenerateOptions::default(), None)
            .unwrap()
            .unwrap();
        validate_collostruction(&col).unwrap();
        assert!(col.slot(&child("dep")).is_none());
    }

    #[test]
    fn crossing_edges_prune_rarest() {
        // nsubj(8) <- dobj(11) and obl(12) <- advmod(9) cross.
        let c = clause(
            "s",
            &[("nsubj", "a", 8, 11), ("advmod", "d", 9, 0), ("dobj", "b", 11, 0), ("obl", "c", 12, 9)],
        );
        let col = generate_collostruction(&[c], 1, 0, ClusteringStage::SynSem, &GenerateOptions::default(), None)
            .unwrap()
            .unwrap();
        validate_collostruction(&col).unwrap();
        // All equally rare, so the largest key goes.
        assert!(col.slot(&child("obl")).is_none());
        assert_eq!(col.head_of(&child("nsubj")), Some(&child("dobj")));
    }

    #[test]
    fn validator_rejects_bad_records() {
        let c = clause("s", &[("nsubj", "他", 9, 0), ("dobj", "书", 11, 0)]);
        let good = generate_collostruction(&[c], 1, 0, ClusteringStage::SynSem, &GenerateOptions::default(), None)
            .unwrap()
            .unwrap();
        let mut bad = good.clone();
        bad.p_col = 1.5;
        assert!(validate_collostruction(&bad).is_err());
        let mut bad = good.clone();
        bad.edges.clear();
        assert!(validate_collostruction(&bad).is_err());
        let mut bad = good.clone();
        bad.slots[1].collexemes[0].p_lex = 0.5;
        assert!(validate_collostruction(&bad).is_err());
        assert!(validate_verb_entries(&[good.clone(), good]).is_err());
    }

    #[test]
    fn literal_mode_requires_counts() {
        let c = clause("s", &[("nsubj", "他", 9, 0)]);
        let opts = GenerateOptions { strength: StrengthMode::Literal, ..Default::default() };
        assert!(generate_collostruction(&[c.clone()], 1, 0, ClusteringStage::SynSem, &opts, None).is_err());
        let counts = CorpusCounts {
            tokens: 100,
            freq: [("他".to_string(), 10), ("v".to_string(), 1)].into_iter().collect(),
        };
        let col = generate_collostruction(&[c], 1, 0, ClusteringStage::SynSem, &opts, Some(&counts))
            .unwrap()
            .unwrap();
        assert!((col.slots[0].collexemes[0].p_lex - 0.1).abs() < 1e-12);
    }
}
