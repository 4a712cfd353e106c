//! Prototypical action sequences: the most frequent sememes among the
//! collexemes linked to the focus by selected relations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::db::Database;

use super::StatsError;

pub const ACTION_RELATIONS: &[&str] = &["xcomp", "ccomp", "nsubj", "dobj", "compound:vc", "nmod:prep", "conj"];
pub const TOP_SEMEMES: usize = 5;

/// Word-to-sememe lexicon with optional hypernym links between sememes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SememeLexicon {
    words: BTreeMap<String, Vec<String>>,
    parents: BTreeMap<String, String>,
}

fn lines<R: BufRead>(input: R) -> impl Iterator<Item = (usize, Result<String, StatsError>)> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.map_err(|e| StatsError::Io(e.to_string()))))
}

impl SememeLexicon {
    /// Reads `word<TAB>sememe,sememe,...` lines. Blank lines and `#` comments
    /// are ignored; a repeated word adds to its sememes.
    pub fn from_reader<R: BufRead>(input: R) -> Result<Self, StatsError> {
        let mut lex = SememeLexicon::default();
        for (line_no, line) in lines(input) {
            let line = line?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, sememes) = line.split_once('\t').ok_or_else(|| StatsError::Lexicon {
                line: line_no,
                message: "expected word<TAB>sememes".into(),
            })?;
            let entry = lex.words.entry(word.trim().to_string()).or_default();
            for s in sememes.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                if !entry.iter().any(|e| e == s) {
                    entry.push(s.to_string());
                }
            }
        }
        Ok(lex)
    }

    /// Adds `sememe<TAB>parent` links and rejects cycles.
    pub fn with_hypernyms<R: BufRead>(mut self, input: R) -> Result<Self, StatsError> {
        for (line_no, line) in lines(input) {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (child, parent) = line.split_once('\t').ok_or_else(|| StatsError::Lexicon {
                line: line_no,
                message: "expected sememe<TAB>parent".into(),
            })?;
            let (child, parent) = (child.trim(), parent.trim());
            if let Some(old) = self.parents.insert(child.to_string(), parent.to_string()) {
                if old != parent {
                    return Err(StatsError::Lexicon {
                        line: line_no,
                        message: format!("{child:?} already has parent {old:?}"),
                    });
                }
            }
        }
        for start in self.parents.keys() {
            let mut seen = BTreeSet::from([start.as_str()]);
            let mut cur = start.as_str();
            while let Some(p) = self.parents.get(cur) {
                if !seen.insert(p.as_str()) {
                    return Err(StatsError::HypernymCycle(start.clone()));
                }
                cur = p;
            }
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Sememes of `word` plus all their hypernyms; empty for unknown words.
    pub fn expand(&self, word: &str) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for s in self.words.get(word).into_iter().flatten() {
            let mut cur = s.as_str();
            out.insert(cur);
            while let Some(p) = self.parents.get(cur) {
                cur = p;
                out.insert(cur);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActionSide {
    /// Collexemes of slots governing the focus.
    Ancestor,
    /// Collexemes of slots the focus governs.
    Child,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRow {
    pub side: ActionSide,
    pub deprel: String,
    /// Up to [`TOP_SEMEMES`] `(sememe, weighted count)` pairs.
    pub top: Vec<(String, u64)>,
}

impl ActionRow {
    /// Row label such as `ANCESTOR: COMPOUND:VC`.
    pub fn label(&self) -> String {
        let side = match self.side {
            ActionSide::Ancestor => "ANCESTOR",
            ActionSide::Child => "CHILD",
        };
        format!("{side}: {}", self.deprel.to_uppercase())
    }
}

impl fmt::Display for ActionRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.top.iter().map(|(s, n)| format!("('{s}', {n})")).collect();
        write!(f, "{}\t{}", self.label(), items.join(", "))
    }
}

/// Ranks sememes per (side, relation) over all collostructions of `verb`.
/// Each collexeme contributes its count to every sememe it expands to.
/// Rows come ancestor side first, relations in [`ACTION_RELATIONS`] order;
/// relations with no sememes are omitted.
pub fn action_sequences(db: &Database, verb: &str, lexicon: &SememeLexicon) -> Result<Vec<ActionRow>, StatsError> {
    let entry = db.entry(verb).ok_or_else(|| StatsError::UnknownVerb(verb.to_string()))?;
    let mut counts: BTreeMap<(ActionSide, &str), BTreeMap<&str, u64>> = BTreeMap::new();
    for c in &entry.collostructions {
        for e in &c.edges {
            let rel = e.deprel.to_lowercase();
            let Some(&rel) = ACTION_RELATIONS.iter().find(|r| **r == rel) else {
                continue;
            };
            let (side, other) = if e.head.is_focus() {
                (ActionSide::Child, &e.dependent)
            } else if e.dependent.is_focus() {
                (ActionSide::Ancestor, &e.head)
            } else {
                continue;
            };
            let Some(slot) = c.slot(other) else { continue };
            let bucket = counts.entry((side, rel)).or_default();
            for x in &slot.collexemes {
                for s in lexicon.expand(&x.word) {
                    *bucket.entry(s).or_default() += u64::from(x.count);
                }
            }
        }
    }

    let mut rows = Vec::new();
    for side in [ActionSide::Ancestor, ActionSide::Child] {
        for rel in ACTION_RELATIONS {
            let Some(bucket) = counts.get(&(side, *rel)) else { continue };
            let mut ranked: Vec<(&str, u64)> = bucket.iter().map(|(s, n)| (*s, *n)).collect();
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
            if ranked.is_empty() {
                continue;
            }
            rows.push(ActionRow {
                side,
                deprel: rel.to_string(),
                top: ranked
                    .into_iter()
                    .take(TOP_SEMEMES)
                    .map(|(s, n)| (s.to_string(), n))
                    .collect(),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicon_expansion_and_cycles() {
        let lex = SememeLexicon::from_reader("想\twilling,think\n要\twilling\n".as_bytes())
            .unwrap()
            .with_hypernyms("willing\tmental\nmental\tattribute\n".as_bytes())
            .unwrap();
        let e: Vec<&str> = lex.expand("要").into_iter().collect();
        assert_eq!(e, vec!["attribute", "mental", "willing"]);
        assert!(lex.expand("不在").is_empty());

        let cyc = SememeLexicon::default().with_hypernyms("a\tb\nb\ta\n".as_bytes());
        assert!(matches!(cyc, Err(StatsError::HypernymCycle(_))));
        assert!(SememeLexicon::from_reader("no tab here\n".as_bytes()).is_err());
    }
}
