//! Clause-structure retrieval around a target verb.
//!
//! A clause is the target verb (the focus) plus two ordered node lists: the
//! child side and the ancestor side. Every node is a dependency edge
//! `r(w_h, w_d)` identified by its dependent token. Four strategies are tried
//! in order:
//!
//! 1. target is the root: children of the target, minus `conj` subtrees;
//! 2. target is a `conj` with its own subject: all children of the target, and
//!    the target's governor on the ancestor side;
//! 3. the target's governor (`ancestor-01`) has a subject: children of
//!    `ancestor-01` (the target among them), with `ancestor-01` and its own
//!    governor on the ancestor side;
//! 4. otherwise the same shape one level up, pivoting on `ancestor-02`.
//!
//! Each child entry brings its own immediate children along. An ancestor
//! brings its subject and object children ("skeleton" nodes). Punctuation is
//! never part of a clause.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{DependencyTree, Token, WordKey};

/// Head word used for nodes governed by the artificial root.
pub const ROOT_WORD: &str = "ROOT";

const SUBJECT_RELS: &[&str] = &["nsubj", "nsubjpass", "nsubj:pass"];
const SKELETON_RELS: &[&str] = &["nsubj", "nsubjpass", "nsubj:pass", "dobj", "obj", "iobj"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClauseError {
    #[error("token {0} does not exist in sentence {1}")]
    TargetOutOfRange(usize, String),
    #[error("token {id} ({form}, {pos}) is not a verb")]
    NotAVerb { id: usize, form: String, pos: String },
    #[error("token {0} is not part of the clause")]
    NotInClause(usize),
    #[error("the focus node has no edge category")]
    FocusNode,
}

/// Position of a node relative to the target verb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinearSide {
    Left,
    Target,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseNode {
    /// Dependent token id.
    pub token_id: usize,
    /// Governor token id, 0 for the root.
    pub head_id: usize,
    pub deprel: String,
    pub head_word: String,
    pub dep_word: String,
    pub side: LinearSide,
}

impl fmt::Display for ClauseNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.deprel, self.head_word, self.dep_word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Target is the main predicate.
    Root = 1,
    /// Conjoined verb with its own subject.
    ConjWithSubject = 2,
    /// Governor of the target carries the subject.
    GovernorSubject = 3,
    /// Pivot two levels up.
    GrandGovernor = 4,
}

impl Strategy {
    pub fn number(self) -> u8 {
        self as u8
    }
}

/// Functional category of a clause edge relative to the focus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeCategory {
    FocusChild,
    HeadFocus,
    ContextHead,
    HeadContext,
    ContextContext,
}

impl fmt::Display for EdgeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeCategory::FocusChild => "FOCUS>CHILD",
            EdgeCategory::HeadFocus => "HEAD>FOCUS",
            EdgeCategory::ContextHead => "CONTEXT>HEAD",
            EdgeCategory::HeadContext => "HEAD>CONTEXT",
            EdgeCategory::ContextContext => "CONTEXT>CONTEXT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseStructure {
    pub sent_id: String,
    pub target_id: usize,
    pub strategy: Strategy,
    /// The target verb's own edge.
    pub focus: ClauseNode,
    /// Child-side nodes in linear order, never containing the focus.
    pub v_child: Vec<ClauseNode>,
    /// Ancestor-side nodes in linear order, never containing the focus.
    pub v_ancestor: Vec<ClauseNode>,
}

/// Predicate and word-identity settings for retrieval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseOptions {
    /// Tags (UPOS or XPOS) accepted as verbs.
    pub verb_tags: Vec<String>,
    pub word_key: WordKey,
}

impl Default for ClauseOptions {
    fn default() -> Self {
        Self {
            verb_tags: ["VERB", "VV", "VC", "VE"].iter().map(|s| s.to_string()).collect(),
            word_key: WordKey::Lemma,
        }
    }
}

impl ClauseOptions {
    pub fn is_verb(&self, token: &Token) -> bool {
        self.verb_tags
            .iter()
            .any(|t| t == &token.upos || t == &token.xpos)
    }
}

impl ClauseStructure {
    /// The target verb's word.
    pub fn verb(&self) -> &str {
        &self.focus.dep_word
    }

    /// Focus and both sides merged into linear order.
    pub fn nodes_in_order(&self) -> Vec<&ClauseNode> {
        let mut all: Vec<&ClauseNode> = self
            .v_child
            .iter()
            .chain(&self.v_ancestor)
            .chain(std::iter::once(&self.focus))
            .collect();
        all.sort_by_key(|n| n.token_id);
        all.dedup_by_key(|n| n.token_id);
        all
    }

    pub fn len(&self) -> usize {
        self.nodes_in_order().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, token_id: usize) -> bool {
        token_id == self.target_id
            || self.v_child.iter().any(|n| n.token_id == token_id)
            || self.v_ancestor.iter().any(|n| n.token_id == token_id)
    }

    fn node(&self, token_id: usize) -> Option<&ClauseNode> {
        if token_id == self.target_id {
            return Some(&self.focus);
        }
        self.v_child
            .iter()
            .chain(&self.v_ancestor)
            .find(|n| n.token_id == token_id)
    }

    /// Tab-separated `r(w_h,w_d)` rendering, focus marked with `*`.
    pub fn to_tsv(&self) -> String {
        self.nodes_in_order()
            .iter()
            .map(|n| {
                if n.token_id == self.target_id {
                    format!("*{n}")
                } else {
                    n.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\t")
    }
}

fn make_node(tree: &DependencyTree, tok: &Token, target: usize, key: WordKey) -> ClauseNode {
    let head_word = tree
        .token(tok.head)
        .map(|h| key.of(h).to_string())
        .unwrap_or_else(|| ROOT_WORD.to_string());
    ClauseNode {
        token_id: tok.id,
        head_id: tok.head,
        deprel: tok.deprel.clone(),
        head_word,
        dep_word: key.of(tok).to_string(),
        side: match tok.id.cmp(&target) {
            std::cmp::Ordering::Less => LinearSide::Left,
            std::cmp::Ordering::Equal => LinearSide::Target,
            std::cmp::Ordering::Greater => LinearSide::Right,
        },
    }
}

fn has_subject(tree: &DependencyTree, id: usize) -> bool {
    tree.children(id)
        .any(|c| SUBJECT_RELS.contains(&c.deprel.as_str()))
}

/// Retrieves the clause around `target_id`.
pub fn retrieve_clause(
    tree: &DependencyTree,
    target_id: usize,
    options: &ClauseOptions,
) -> Result<ClauseStructure, ClauseError> {
    let target = tree
        .token(target_id)
        .ok_or_else(|| ClauseError::TargetOutOfRange(target_id, tree.sent_id().to_string()))?;
    if !options.is_verb(target) {
        return Err(ClauseError::NotAVerb {
            id: target.id,
            form: target.form.clone(),
            pos: target.pos().to_string(),
        });
    }

    // (strategy, pivot whose children form the child side, drop conj?, ancestor-side ids)
    let (strategy, pivot, drop_conj, ancestors): (Strategy, usize, bool, Vec<usize>) =
        if target.head == 0 {
            (Strategy::Root, target.id, true, Vec::new())
        } else if target.deprel == "conj" && has_subject(tree, target.id) {
            (Strategy::ConjWithSubject, target.id, false, vec![target.head])
        } else {
            let anc1 = target.head;
            if has_subject(tree, anc1) {
                let mut anc = vec![anc1];
                anc.extend(tree.token(anc1).map(|t| t.head).filter(|&h| h != 0));
                (Strategy::GovernorSubject, anc1, false, anc)
            } else {
                let anc2 = tree.token(anc1).map(|t| t.head).unwrap_or(0);
                if anc2 == 0 {
                    // No second ancestor: rule 2's shape.
                    (Strategy::GrandGovernor, target.id, false, vec![anc1])
                } else {
                    let mut anc = vec![anc2];
                    anc.extend(tree.token(anc2).map(|t| t.head).filter(|&h| h != 0));
                    (Strategy::GrandGovernor, anc2, false, anc)
                }
            }
        };

    let keep = |t: &&Token| t.deprel != "punct";

    let mut child_ids = BTreeSet::new();
    for child in tree.children(pivot).filter(keep) {
        if drop_conj && child.deprel == "conj" {
            continue;
        }
        child_ids.insert(child.id);
        for grandchild in tree.children(child.id).filter(keep) {
            child_ids.insert(grandchild.id);
        }
    }

    let mut ancestor_ids = BTreeSet::new();
    // The last listed ancestor is the one whose skeleton is attached.
    if let Some(&top) = ancestors.last() {
        for &a in &ancestors {
            ancestor_ids.insert(a);
        }
        for c in tree.children(top).filter(keep) {
            if SKELETON_RELS.contains(&c.deprel.as_str()) {
                ancestor_ids.insert(c.id);
            }
        }
    }
    child_ids.remove(&target.id);
    ancestor_ids.remove(&target.id);
    for id in &child_ids {
        ancestor_ids.remove(id);
    }

    let node_of = |id: &usize| make_node(tree, tree.token(*id).expect("id from tree"), target.id, options.word_key);
    Ok(ClauseStructure {
        sent_id: tree.sent_id().to_string(),
        target_id: target.id,
        strategy,
        focus: make_node(tree, target, target.id, options.word_key),
        v_child: child_ids.iter().map(node_of).collect(),
        v_ancestor: ancestor_ids.iter().map(node_of).collect(),
    })
}

/// Retrieves clauses for every token whose word equals `verb`.
pub fn retrieve_all(
    tree: &DependencyTree,
    verb: &str,
    options: &ClauseOptions,
) -> Vec<ClauseStructure> {
    tree.tokens()
        .iter()
        .filter(|t| options.word_key.of(t) == verb && options.is_verb(t))
        .filter_map(|t| retrieve_clause(tree, t.id, options).ok())
        .collect()
}

/// Places a non-focus clause node into one of the five edge categories.
pub fn classify_edge(clause: &ClauseStructure, node: &ClauseNode) -> Result<EdgeCategory, ClauseError> {
    if node.token_id == clause.target_id {
        return Err(ClauseError::FocusNode);
    }
    if clause.node(node.token_id).is_none() {
        return Err(ClauseError::NotInClause(node.token_id));
    }
    let heads: BTreeMap<usize, usize> = clause
        .nodes_in_order()
        .iter()
        .map(|n| (n.token_id, n.head_id))
        .collect();

    // Descendant of the focus inside the clause?
    let mut cur = node.head_id;
    for _ in 0..=heads.len() {
        if cur == clause.target_id {
            return Ok(EdgeCategory::FocusChild);
        }
        match heads.get(&cur) {
            Some(&h) => cur = h,
            None => break,
        }
    }

    let governor = clause.focus.head_id;
    if governor == 0 {
        return Ok(EdgeCategory::ContextContext);
    }
    if node.token_id == governor {
        return Ok(EdgeCategory::HeadFocus);
    }
    if heads.get(&governor) == Some(&node.token_id) {
        return Ok(EdgeCategory::ContextHead);
    }
    if node.head_id == governor {
        return Ok(EdgeCategory::HeadContext);
    }
    Ok(EdgeCategory::ContextContext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_conllu_str;

    fn tree(rows: &[(&str, &str, usize, &str)]) -> DependencyTree {
        let mut src = String::from("# sent_id = t\n");
        for (i, (form, pos, head, rel)) in rows.iter().enumerate() {
            src.push_str(&format!("{}\t{form}\t{form}\t{pos}\t_\t_\t{head}\t{rel}\t_\t_\n", i + 1));
        }
        parse_conllu_str(&src).unwrap().remove(0)
    }

    fn rels(nodes: &[ClauseNode]) -> Vec<&str> {
        nodes.iter().map(|n| n.deprel.as_str()).collect()
    }

    #[test]
    fn root_verb_strategy_one() {
        // 他 体验 生活 。
        let t = tree(&[
            ("他", "PRON", 2, "nsubj"),
            ("体验", "VERB", 0, "root"),
            ("生活", "NOUN", 2, "dobj"),
            ("。", "PUNCT", 2, "punct"),
        ]);
        let c = retrieve_clause(&t, 2, &ClauseOptions::default()).unwrap();
        assert_eq!(c.strategy, Strategy::Root);
        assert_eq!(rels(&c.v_child), vec!["nsubj", "dobj"]);
        assert!(c.v_ancestor.is_empty());
        assert_eq!(c.to_tsv(), "nsubj(体验,他)\t*root(ROOT,体验)\tdobj(体验,生活)");
    }

    #[test]
    fn root_strategy_drops_conj_subtree() {
        let t = tree(&[
            ("他", "PRON", 2, "nsubj"),
            ("唱", "VERB", 0, "root"),
            ("跳", "VERB", 2, "conj"),
            ("舞", "NOUN", 3, "dobj"),
        ]);
        let c = retrieve_clause(&t, 2, &ClauseOptions::default()).unwrap();
        assert_eq!(rels(&c.v_child), vec!["nsubj"]);
    }

    /// 我 说 他 去 并 买 书: hand trace of rule 2 on token 6 (买).
    fn conj_tree() -> DependencyTree {
        tree(&[
            ("我", "PRON", 2, "nsubj"),
            ("说", "VERB", 0, "root"),
            ("他", "PRON", 4, "nsubj"),
            ("去", "VERB", 2, "ccomp"),
            ("她", "PRON", 6, "nsubj"),
            ("买", "VERB", 4, "conj"),
            ("书", "NOUN", 6, "dobj"),
        ])
    }

    #[test]
    fn conj_with_subject_strategy_two() {
        let t = conj_tree();
        let c = retrieve_clause(&t, 6, &ClauseOptions::default()).unwrap();
        assert_eq!(c.strategy, Strategy::ConjWithSubject);
        assert_eq!(rels(&c.v_child), vec!["nsubj", "dobj"]);
        assert_eq!(c.v_child[0].token_id, 5);
        // Governor 去 plus its subject 他.
        let anc: Vec<usize> = c.v_ancestor.iter().map(|n| n.token_id).collect();
        assert_eq!(anc, vec![3, 4]);
        assert_eq!(classify_edge(&c, &c.v_ancestor[1]).unwrap(), EdgeCategory::HeadFocus);
        assert_eq!(classify_edge(&c, &c.v_ancestor[0]).unwrap(), EdgeCategory::HeadContext);
        assert_eq!(classify_edge(&c, &c.v_child[1]).unwrap(), EdgeCategory::FocusChild);
        assert_eq!(classify_edge(&c, &c.focus), Err(ClauseError::FocusNode));
    }

    #[test]
    fn governor_subject_strategy_three() {
        // 他 帮助 解决 问题: 解决 is xcomp of 帮助 which has a subject.
        let t = tree(&[
            ("他", "PRON", 2, "nsubj"),
            ("帮助", "VERB", 0, "root"),
            ("解决", "VERB", 2, "xcomp"),
            ("问题", "NOUN", 3, "dobj"),
        ]);
        let c = retrieve_clause(&t, 3, &ClauseOptions::default()).unwrap();
        assert_eq!(c.strategy, Strategy::GovernorSubject);
        assert_eq!(c.to_tsv(), "nsubj(帮助,他)\troot(ROOT,帮助)\t*xcomp(帮助,解决)\tdobj(解决,问题)");
        assert_eq!(classify_edge(&c, &c.v_child[1]).unwrap(), EdgeCategory::FocusChild);
        assert_eq!(classify_edge(&c, &c.v_ancestor[0]).unwrap(), EdgeCategory::HeadFocus);
    }

    #[test]
    fn grandparent_is_context_head() {
        // 要求 组织 干部 帮助 解决 问题 ; 解决 -> 帮助 -> 要求 chain, no subjects.
        let t = tree(&[
            ("要求", "VERB", 0, "root"),
            ("组织", "NOUN", 3, "compound:nn"),
            ("干部", "NOUN", 1, "dobj"),
            ("帮助", "VERB", 1, "ccomp"),
            ("解决", "VERB", 4, "xcomp"),
            ("问题", "NOUN", 5, "dobj"),
        ]);
        let c = retrieve_clause(&t, 5, &ClauseOptions::default()).unwrap();
        assert_eq!(c.strategy, Strategy::GrandGovernor);
        let by_id = |id: usize| {
            c.v_child
                .iter()
                .chain(&c.v_ancestor)
                .find(|n| n.token_id == id)
                .unwrap()
                .clone()
        };
        assert_eq!(classify_edge(&c, &by_id(4)).unwrap(), EdgeCategory::HeadFocus);
        assert_eq!(classify_edge(&c, &by_id(1)).unwrap(), EdgeCategory::ContextHead);
        assert_eq!(classify_edge(&c, &by_id(3)).unwrap(), EdgeCategory::ContextContext);
    }

    #[test]
    fn rule_four_without_second_ancestor_uses_rule_two_shape() {
        let t = tree(&[
            ("想", "VERB", 0, "root"),
            ("去", "VERB", 1, "xcomp"),
            ("北京", "PROPN", 2, "dobj"),
        ]);
        let c = retrieve_clause(&t, 2, &ClauseOptions::default()).unwrap();
        assert_eq!(c.strategy, Strategy::GrandGovernor);
        assert_eq!(rels(&c.v_child), vec!["dobj"]);
        assert_eq!(rels(&c.v_ancestor), vec!["root"]);
    }

    #[test]
    fn non_verb_and_out_of_range() {
        let t = tree(&[("他", "PRON", 2, "nsubj"), ("书", "NOUN", 0, "root")]);
        assert!(matches!(
            retrieve_clause(&t, 2, &ClauseOptions::default()),
            Err(ClauseError::NotAVerb { .. })
        ));
        assert!(matches!(
            retrieve_clause(&t, 9, &ClauseOptions::default()),
            Err(ClauseError::TargetOutOfRange(9, _))
        ));
    }

    #[test]
    fn clause_edges_exist_in_tree() {
        let t = conj_tree();
        for id in [2, 4, 6] {
            let c = retrieve_clause(&t, id, &ClauseOptions::default()).unwrap();
            for n in c.nodes_in_order() {
                assert_eq!(t.token(n.token_id).unwrap().head, n.head_id);
            }
        }
    }
}
