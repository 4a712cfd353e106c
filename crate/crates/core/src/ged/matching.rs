//! Fuzzy slot alignment between a clause and a collostruction, and the
//! weighted match score used to pick the top candidate.

use serde::{Deserialize, Serialize};

use crate::align::{monotone_align, AlignedPair};
use crate::clause::{ClauseNode, ClauseStructure};
use crate::colgen::{Collostruction, Slot};
use crate::wordsim::WordSimilarity;

use super::GedError;

/// Head/dependent word weights for slot matching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchParams {
    pub alpha_w: f64,
    pub beta_w: f64,
}

impl Default for MatchParams {
    fn default() -> Self {
        Self {
            alpha_w: 0.5,
            beta_w: 0.5,
        }
    }
}

/// Weights `a..e` of sim2clause, sim2col, cov_clause, den_clause, den_col.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchWeights(pub [f64; 5]);

impl Default for MatchWeights {
    fn default() -> Self {
        Self([0.2; 5])
    }
}

impl MatchWeights {
    pub fn new(w: [f64; 5]) -> Result<Self, GedError> {
        let ok = w.iter().all(|x| x.is_finite() && *x >= 0.0) && (w.iter().sum::<f64>() - 1.0).abs() <= 1e-9;
        if ok {
            Ok(Self(w))
        } else {
            Err(GedError::Weights(w))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    /// `left` indexes clause nodes in linear order, `right` collostruction
    /// slots.
    pub pairs: Vec<AlignedPair>,
}

impl Alignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Sum of the pair similarities, each clamped to `[0, 1]`.
    pub fn total(&self) -> f64 {
        self.pairs.iter().map(|p| p.score.clamp(0.0, 1.0)).sum()
    }

    pub fn for_clause(&self, i: usize) -> Option<f64> {
        self.pairs.iter().find(|p| p.left == i).map(|p| p.score)
    }

    pub fn for_slot(&self, j: usize) -> Option<f64> {
        self.pairs.iter().find(|p| p.right == j).map(|p| p.score)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchScore {
    pub sim2clause: f64,
    pub sim2col: f64,
    pub cov_clause: f64,
    pub den_clause: f64,
    pub den_col: f64,
    pub combined: f64,
}

fn relation_similarity(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - strsim::levenshtein(a, b) as f64 / longest as f64
}

/// `p_slot * rel_sim * (alpha_w * head_sim + beta_w * dep_sim)`, where the
/// word similarities take the best match among the slot's head words and
/// collexemes.
pub fn fuzzy_node_sim<W: WordSimilarity + ?Sized>(
    node: &ClauseNode,
    slot: &Slot,
    params: &MatchParams,
    word_sim: &W,
) -> f64 {
    if slot.p_slot <= 0.0 {
        return 0.0;
    }
    let rel = relation_similarity(&node.deprel, &slot.key.deprel);
    if rel <= 0.0 {
        return 0.0;
    }
    let best = |w: &str, candidates: &mut dyn Iterator<Item = &str>| {
        candidates
            .map(|c| word_sim.similarity(w, c).clamp(0.0, 1.0))
            .fold(0.0, f64::max)
    };
    let head = best(&node.head_word, &mut slot.head_words.iter().map(String::as_str));
    let dep = best(&node.dep_word, &mut slot.collexemes.iter().map(|c| c.word.as_str()));
    (slot.p_slot.min(1.0) * rel * (params.alpha_w * head + params.beta_w * dep)).clamp(0.0, 1.0)
}

/// Best monotone alignment of the clause (focus included, linear order)
/// against the collostruction's slots. Zero-similarity pairs are never
/// aligned.
pub fn align<W: WordSimilarity + ?Sized>(
    clause: &ClauseStructure,
    col: &Collostruction,
    params: &MatchParams,
    word_sim: &W,
) -> Alignment {
    let nodes = clause.nodes_in_order();
    let (_, pairs) = monotone_align(nodes.len(), col.slots.len(), |i, j| {
        fuzzy_node_sim(nodes[i], &col.slots[j], params, word_sim)
    });
    Alignment { pairs }
}

/// Tversky-style `(sim2clause, sim2col)` for aligned mass `z` between an
/// `m`-slot clause and an `n`-slot collostruction.
pub fn asym_similarities(z: f64, m: usize, n: usize) -> Result<(f64, f64), GedError> {
    if m == 0 && n == 0 {
        return Err(GedError::EmptySequences);
    }
    let (mf, nf) = (m as f64, n as f64);
    let z = z.clamp(0.0, mf.min(nf));
    if z == 0.0 {
        return Ok((0.0, 0.0));
    }
    // One expression for both directions keeps them bit-identical when m == n.
    let tversky = |own: f64, other: f64| z / (z + 0.1 * (own - z) + 0.9 * (other - z));
    let sim2col = tversky(mf, nf);
    let sim2clause = tversky(nf, mf);
    Ok((sim2clause.clamp(0.0, 1.0), sim2col.clamp(0.0, 1.0)))
}

/// `(cov_clause, den_clause, den_col)`: aligned share of the clause, and the
/// share of adjacent aligned pairs on each side over that side's length.
pub fn coverage_density(a: &Alignment, clause_len: usize, col_len: usize) -> Result<(f64, f64, f64), GedError> {
    if clause_len == 0 {
        return Err(GedError::EmptyClause);
    }
    let adjacent = |idx: Vec<usize>| idx.windows(2).filter(|w| w[1] == w[0] + 1).count();
    let mut left: Vec<usize> = a.pairs.iter().map(|p| p.left).collect();
    let mut right: Vec<usize> = a.pairs.iter().map(|p| p.right).collect();
    left.sort_unstable();
    right.sort_unstable();
    let cov = a.len() as f64 / clause_len as f64;
    let den_clause = adjacent(left) as f64 / clause_len as f64;
    let den_col = if col_len == 0 {
        0.0
    } else {
        adjacent(right) as f64 / col_len as f64
    };
    Ok((cov, den_clause, den_col))
}

pub fn match_score(a: &Alignment, clause_len: usize, col_len: usize, weights: &MatchWeights) -> Result<MatchScore, GedError> {
    let (sim2clause, sim2col) = asym_similarities(a.total(), clause_len, col_len)?;
    let (cov_clause, den_clause, den_col) = coverage_density(a, clause_len, col_len)?;
    let w = weights.0;
    let combined = w[0] * sim2clause + w[1] * sim2col + w[2] * cov_clause + w[3] * den_clause + w[4] * den_col;
    Ok(MatchScore {
        sim2clause,
        sim2col,
        cov_clause,
        den_clause,
        den_col,
        combined: combined.clamp(0.0, 1.0),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopMatch {
    pub id: usize,
    pub alignment: Alignment,
    pub score: MatchScore,
}

/// The candidate with the highest combined score; ties go to higher support,
/// then lower id.
pub fn select_top<W: WordSimilarity + ?Sized>(
    clause: &ClauseStructure,
    candidates: &[(usize, &Collostruction)],
    weights: &MatchWeights,
    params: &MatchParams,
    word_sim: &W,
) -> Result<TopMatch, GedError> {
    let weights = MatchWeights::new(weights.0)?;
    let clause_len = clause.len();
    let mut best: Option<(TopMatch, usize)> = None;
    for &(id, col) in candidates {
        let alignment = align(clause, col, params, word_sim);
        let score = match_score(&alignment, clause_len, col.slots.len(), &weights)?;
        let better = match &best {
            None => true,
            Some((b, support)) => score
                .combined
                .total_cmp(&b.score.combined)
                .then_with(|| col.support.cmp(support))
                .then_with(|| b.id.cmp(&id))
                .is_gt(),
        };
        if better {
            best = Some((TopMatch { id, alignment, score }, col.support));
        }
    }
    best.map(|(m, _)| m).ok_or(GedError::NoCandidates)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_edit_distance() {
        assert_eq!(relation_similarity("dobj", "dobj"), 1.0);
        assert_eq!(relation_similarity("dobj", "iobj"), 0.75);
        assert_eq!(relation_similarity("", ""), 1.0);
    }

    #[test]
    fn asym_examples() {
        assert_eq!(asym_similarities(3.0, 3, 3).unwrap(), (1.0, 1.0));
        assert_eq!(asym_similarities(0.0, 2, 5).unwrap(), (0.0, 0.0));
        let (cls, col) = asym_similarities(2.0, 4, 6).unwrap();
        assert!((col - 2.0 / 5.8).abs() < 1e-12);
        assert!((cls - 2.0 / 4.2).abs() < 1e-12);
        assert_eq!(asym_similarities(0.0, 0, 0), Err(GedError::EmptySequences));
    }

    fn pairs(idx: &[(usize, usize)]) -> Alignment {
        Alignment {
            pairs: idx
                .iter()
                .map(|&(left, right)| AlignedPair { left, right, score: 1.0 })
                .collect(),
        }
    }

    #[test]
    fn coverage_examples() {
        let full = pairs(&[(0, 0), (1, 1), (2, 2), (3, 3)]);
        assert_eq!(coverage_density(&full, 4, 4).unwrap(), (1.0, 0.75, 0.75));
        assert_eq!(coverage_density(&Alignment::default(), 4, 4).unwrap(), (0.0, 0.0, 0.0));
        let gaps = pairs(&[(1, 0), (3, 1)]);
        let (cov, den, den_col) = coverage_density(&gaps, 4, 2).unwrap();
        assert_eq!((cov, den), (0.5, 0.0));
        assert_eq!(den_col, 0.5);
        assert_eq!(coverage_density(&gaps, 0, 2), Err(GedError::EmptyClause));
    }

    #[test]
    fn weights_must_sum_to_one() {
        assert!(MatchWeights::new([0.2; 5]).is_ok());
        assert!(MatchWeights::new([0.3; 5]).is_err());
        assert!(MatchWeights::new([1.2, -0.2, 0.0, 0.0, 0.0]).is_err());
    }
}
