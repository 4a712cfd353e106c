//! Order-preserving one-to-one alignment by dynamic programming.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignedPair {
    /// Index into the first sequence.
    pub left: usize,
    /// Index into the second sequence.
    pub right: usize,
    pub score: f64,
}

/// Maximum-total-score monotone alignment of an `m`-sequence with an
/// `n`-sequence. Pairs scoring zero or less are never aligned.
///
/// Returns the optimal total and the aligned pairs in increasing order.
pub fn monotone_align<F>(m: usize, n: usize, mut score: F) -> (f64, Vec<AlignedPair>)
where
    F: FnMut(usize, usize) -> f64,
{
    if m == 0 || n == 0 {
        return (0.0, Vec::new());
    }
    let mut sims = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            sims[i * n + j] = score(i, j);
        }
    }
    let w = n + 1;
    let mut dp = vec![0.0f64; (m + 1) * w];
    for i in 1..=m {
        for j in 1..=n {
            let s = sims[(i - 1) * n + (j - 1)];
            let mut best = dp[(i - 1) * w + j].max(dp[i * w + j - 1]);
            if s > 0.0 {
                best = best.max(dp[(i - 1) * w + j - 1] + s);
            }
            dp[i * w + j] = best;
        }
    }

    let mut pairs = Vec::new();
    let (mut i, mut j) = (m, n);
    while i > 0 && j > 0 {
        let s = sims[(i - 1) * n + (j - 1)];
        let here = dp[i * w + j];
        if s > 0.0 && here == dp[(i - 1) * w + j - 1] + s {
            pairs.push(AlignedPair {
                left: i - 1,
                right: j - 1,
                score: s,
            });
            i -= 1;
            j -= 1;
        } else if here == dp[(i - 1) * w + j] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    pairs.reverse();
    (dp[m * w + n], pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sequences() {
        assert_eq!(monotone_align(0, 3, |_, _| 1.0), (0.0, vec![]));
    }

    #[test]
    fn skips_middle_element() {
        // [a, b] vs [a, c, b]
        let l = ['a', 'b'];
        let r = ['a', 'c', 'b'];
        let (total, pairs) = monotone_align(2, 3, |i, j| f64::from(u8::from(l[i] == r[j])));
        assert_eq!(total, 2.0);
        let idx: Vec<(usize, usize)> = pairs.iter().map(|p| (p.left, p.right)).collect();
        assert_eq!(idx, vec![(0, 0), (1, 2)]);
    }

    #[test]
    fn zero_pairs_excluded() {
        let (total, pairs) = monotone_align(3, 3, |_, _| 0.0);
        assert_eq!(total, 0.0);
        assert!(pairs.is_empty());
    }

    #[test]
    fn traceback_sums_to_total() {
        let m = [[0.2, 0.9, 0.1], [0.8, 0.3, 0.0], [0.0, 0.5, 0.7]];
        let (total, pairs) = monotone_align(3, 3, |i, j| m[i][j]);
        let sum: f64 = pairs.iter().map(|p| p.score).sum();
        assert!((total - sum).abs() < 1e-12);
        assert!(pairs.windows(2).all(|w| w[0].left < w[1].left && w[0].right < w[1].right));
    }
}
