//! Fixture builders shared by the integration and acceptance tests.
#![allow(dead_code)]

use collostruct::clause::{ClauseNode, ClauseStructure, LinearSide, Strategy};
use collostruct::colgen::{Collexeme, Collostruction, Slot, SlotEdge, SlotKey, SlotSide};
use collostruct::depcluster::ClusteringStage;
use collostruct::ged::{FeatureEntry, FeatureVector, Label};
use rand::seq::IndexedRandom;
use rand::Rng;

pub const RELATIONS: [&str; 5] = ["nsubj", "dobj", "advmod", "ccomp", "xcomp"];

pub fn node(id: usize, rel: &str, head: &str, dep: &str, target: usize) -> ClauseNode {
    ClauseNode {
        token_id: id,
        head_id: 0,
        deprel: rel.to_string(),
        head_word: head.to_string(),
        dep_word: dep.to_string(),
        side: match id.cmp(&target) {
            std::cmp::Ordering::Less => LinearSide::Left,
            std::cmp::Ordering::Equal => LinearSide::Target,
            std::cmp::Ordering::Greater => LinearSide::Right,
        },
    }
}

/// A clause whose child side is `(deprel, dependent word)` pairs around a
/// focus at position `focus_at`, all headed by the verb.
pub fn clause(sent_id: &str, verb: &str, children: &[(&str, &str)], focus_at: usize) -> ClauseStructure {
    let target = focus_at + 1;
    let mut v_child = Vec::new();
    let mut id = 1;
    for (k, (rel, word)) in children.iter().enumerate() {
        if k == focus_at {
            id += 1;
        }
        let mut n = node(id, rel, verb, word, target);
        n.head_id = target;
        v_child.push(n);
        id += 1;
    }
    ClauseStructure {
        sent_id: sent_id.to_string(),
        target_id: target,
        strategy: Strategy::Root,
        focus: node(target, "root", "ROOT", verb, target),
        v_child,
        v_ancestor: Vec::new(),
    }
}

/// A collostruction with the given `(deprel, collexemes)` child slots and the
/// focus at `focus_at`; every slot hangs off the focus.
pub fn collostruction(verb: &str, slots: &[(&str, Vec<&str>)], focus_at: usize, support: usize) -> Collostruction {
    let focus_key = SlotKey::focus("root");
    let mut out = Vec::new();
    let mut edges = Vec::new();
    let mut ordinals = std::collections::HashMap::new();
    for (k, (rel, words)) in slots.iter().enumerate() {
        if k == focus_at {
            out.push(focus_slot(verb));
        }
        let ord = ordinals.entry(*rel).or_insert(0u32);
        *ord += 1;
        let key = SlotKey::new(SlotSide::Child, rel, *ord);
        let n = words.len() as f64;
        out.push(Slot {
            key: key.clone(),
            p_slot: 1.0,
            collexemes: words
                .iter()
                .map(|w| Collexeme {
                    word: w.to_string(),
                    count: 1,
                    p_lex: 1.0 / n,
                })
                .collect(),
            head_words: vec![verb.to_string()],
        });
        edges.push(SlotEdge {
            dependent: key,
            head: focus_key.clone(),
            deprel: rel.to_string(),
            p_slot: 1.0,
        });
    }
    if focus_at >= slots.len() {
        out.push(focus_slot(verb));
    }
    Collostruction {
        verb: verb.to_string(),
        sense_cluster_id: 0,
        stage: ClusteringStage::SynSem,
        p_col: 0.01,
        support,
        slots: out,
        edges,
        example_sent_ids: Vec::new(),
    }
}

fn focus_slot(verb: &str) -> Slot {
    Slot {
        key: SlotKey::focus("root"),
        p_slot: 1.0,
        collexemes: vec![Collexeme {
            word: verb.to_string(),
            count: 1,
            p_lex: 1.0,
        }],
        head_words: vec!["ROOT".to_string()],
    }
}

/// Synthetic classifier data with a known separating rule: correct items
/// align strongly (clause-side similarities in `[0.6, 1]`), error items
/// weakly (`[0, 0.4]`) and often carry a relation the collostruction lacks.
/// Roughly 35% of items are correct, so resampling is exercised.
pub fn synthetic_features<R: Rng>(n: usize, rng: &mut R) -> Vec<(FeatureVector, Label)> {
    let words = ["他", "她", "书", "饭", "家", "去"];
    (0..n)
        .map(|_| {
            let label = if rng.random_bool(0.35) { Label::Correct } else { Label::Error };
            let k = rng.random_range(1..=4);
            let mut rels: Vec<&str> = RELATIONS.choose_multiple(rng, k).copied().collect();
            rels.sort_unstable();
            let entry = |rel: &str, sim: f64, rng: &mut R| FeatureEntry {
                deprel: rel.to_string(),
                word: words.choose(rng).unwrap().to_string(),
                sim,
            };
            let deps_col: Vec<FeatureEntry> = rels.iter().map(|r| entry(r, 1.0, rng)).collect();
            let mut deps_cls: Vec<FeatureEntry> = rels
                .iter()
                .map(|r| {
                    let sim = match label {
                        Label::Correct => rng.random_range(0.6..=1.0),
                        Label::Error => rng.random_range(0.0..=0.4),
                    };
                    entry(r, sim, rng)
                })
                .collect();
            if label == Label::Error && rng.random_bool(0.5) {
                deps_cls.push(entry("iobj", 0.0, rng));
            }
            let fv = FeatureVector {
                core_dep_col: "root".into(),
                deps_col,
                core_dep_cls: "root".into(),
                deps_cls,
            };
            (fv, label)
        })
        .collect()
}
