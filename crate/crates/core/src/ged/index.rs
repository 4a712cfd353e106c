//! Inverted indices over collostruction slot sequences and the heuristic
//! candidate search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clause::ClauseStructure;
use crate::colgen::Collostruction;
use crate::db::Database;

/// Collostructions kept per pattern category.
pub const CANDIDATES_PER_CATEGORY: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PatternCategory {
    BiWordDep,
    /// Word bigrams and unigrams together.
    WordGram,
    BiDep,
    UniWordDep,
}

impl PatternCategory {
    pub const ALL: [PatternCategory; 4] = [
        PatternCategory::BiWordDep,
        PatternCategory::WordGram,
        PatternCategory::BiDep,
        PatternCategory::UniWordDep,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PatternUnit {
    /// `(word_i, dep_i), (word_i+1, dep_i+1)`
    BiWordDep(String, String, String, String),
    WordBigram(String, String),
    Word(String),
    BiDep(String, String),
    UniWordDep(String, String),
}

impl PatternUnit {
    pub fn category(&self) -> PatternCategory {
        match self {
            PatternUnit::BiWordDep(..) => PatternCategory::BiWordDep,
            PatternUnit::WordBigram(..) | PatternUnit::Word(_) => PatternCategory::WordGram,
            PatternUnit::BiDep(..) => PatternCategory::BiDep,
            PatternUnit::UniWordDep(..) => PatternCategory::UniWordDep,
        }
    }
}

impl fmt::Display for PatternUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternUnit::BiWordDep(w1, d1, w2, d2) => write!(f, "({w1},{d1})({w2},{d2})"),
            PatternUnit::WordBigram(a, b) => write!(f, "({a},{b})"),
            PatternUnit::Word(w) => f.write_str(w),
            PatternUnit::BiDep(a, b) => write!(f, "({a},{b})"),
            PatternUnit::UniWordDep(w, d) => write!(f, "({w},{d})"),
        }
    }
}

/// One position of a slot sequence: its relation label and its words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqItem {
    pub label: String,
    pub words: Vec<String>,
}

fn focus_label(deprel: &str) -> String {
    format!("{deprel}-focus")
}

/// Clause nodes in linear order; the focus is labelled `<deprel>-focus`.
pub fn clause_items(clause: &ClauseStructure) -> Vec<SeqItem> {
    clause
        .nodes_in_order()
        .into_iter()
        .map(|n| SeqItem {
            label: if n.token_id == clause.target_id {
                focus_label(&n.deprel)
            } else {
                n.deprel.clone()
            },
            words: vec![n.dep_word.clone()],
        })
        .collect()
}

/// Collostruction slots in order, each carrying all of its collexemes.
pub fn collostruction_items(c: &Collostruction) -> Vec<SeqItem> {
    c.slots
        .iter()
        .map(|s| SeqItem {
            label: if s.key.is_focus() {
                focus_label(&s.key.deprel)
            } else {
                s.key.deprel.clone()
            },
            words: s.collexemes.iter().map(|x| x.word.clone()).collect(),
        })
        .collect()
}

/// Every pattern unit of a slot sequence.
pub fn units(items: &[SeqItem]) -> BTreeSet<PatternUnit> {
    let mut out = BTreeSet::new();
    for it in items {
        for w in &it.words {
            out.insert(PatternUnit::Word(w.clone()));
            out.insert(PatternUnit::UniWordDep(w.clone(), it.label.clone()));
        }
    }
    for pair in items.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        out.insert(PatternUnit::BiDep(a.label.clone(), b.label.clone()));
        for w1 in &a.words {
            for w2 in &b.words {
                out.insert(PatternUnit::WordBigram(w1.clone(), w2.clone()));
                out.insert(PatternUnit::BiWordDep(
                    w1.clone(),
                    a.label.clone(),
                    w2.clone(),
                    b.label.clone(),
                ));
            }
        }
    }
    out
}

/// Four inverted indices from pattern units to collostruction ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CollostructionIndex {
    postings: [BTreeMap<PatternUnit, BTreeSet<usize>>; 4],
    by_verb: BTreeMap<String, BTreeSet<usize>>,
    support: BTreeMap<usize, usize>,
}

impl CollostructionIndex {
    pub fn build(db: &Database) -> Self {
        Self::from_collostructions(db.collostructions())
    }

    pub fn from_collostructions<'a>(items: impl IntoIterator<Item = (usize, &'a Collostruction)>) -> Self {
        let mut idx = CollostructionIndex::default();
        for (id, c) in items {
            idx.by_verb.entry(c.verb.clone()).or_default().insert(id);
            idx.support.insert(id, c.support);
            for u in units(&collostruction_items(c)) {
                idx.postings[u.category().index()].entry(u).or_default().insert(id);
            }
        }
        idx
    }

    pub fn postings(&self, category: PatternCategory) -> &BTreeMap<PatternUnit, BTreeSet<usize>> {
        &self.postings[category.index()]
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn has_verb(&self, verb: &str) -> bool {
        self.by_verb.contains_key(verb)
    }

    pub fn support(&self, id: usize) -> usize {
        self.support.get(&id).copied().unwrap_or(0)
    }

    /// Tab-separated dump: category, unit, comma-joined ids.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for cat in PatternCategory::ALL {
            for (unit, ids) in self.postings(cat) {
                let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!("{cat:?}\t{unit}\t{}\n", ids.join(",")));
            }
        }
        out
    }

    /// Ranked `(id, matching units)` for one category, restricted to `verb`.
    pub fn ranked(&self, clause_units: &BTreeSet<PatternUnit>, verb: &str, category: PatternCategory) -> Vec<(usize, usize)> {
        let Some(allowed) = self.by_verb.get(verb) else {
            return Vec::new();
        };
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for u in clause_units.iter().filter(|u| u.category() == category) {
            if let Some(ids) = self.postings(category).get(u) {
                for id in ids.intersection(allowed) {
                    *counts.entry(*id).or_default() += 1;
                }
            }
        }
        let mut ranked: Vec<(usize, usize)> = counts.into_iter().collect();
        ranked.sort_by(|a, b| {
            b.1.cmp(&a.1)
                .then_with(|| self.support(b.0).cmp(&self.support(a.0)))
                .then_with(|| a.0.cmp(&b.0))
        });
        ranked
    }
}

/// Up to three best-matching collostructions per category, merged in
/// category order without duplicates. Empty when the verb is unknown.
pub fn heuristic_search(clause: &ClauseStructure, index: &CollostructionIndex) -> Vec<usize> {
    let clause_units = units(&clause_items(clause));
    let mut out = Vec::new();
    for cat in PatternCategory::ALL {
        for (id, _) in index
            .ranked(&clause_units, clause.verb(), cat)
            .into_iter()
            .take(CANDIDATES_PER_CATEGORY)
        {
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    out
}
