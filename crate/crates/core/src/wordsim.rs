//! Word-level similarity kernels in `[0, 1]`.

use crate::ingest::{fallback_embed, unit_dot, EmbeddingStore};

/// A similarity between two words, bounded to `[0, 1]`.
pub trait WordSimilarity: Sync {
    fn similarity(&self, a: &str, b: &str) -> f64;
}

impl<F> WordSimilarity for F
where
    F: Fn(&str, &str) -> f64 + Sync,
{
    fn similarity(&self, a: &str, b: &str) -> f64 {
        self(a, b).clamp(0.0, 1.0)
    }
}

/// 1 for identical strings, 0 otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactMatch;

impl WordSimilarity for ExactMatch {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        if a == b {
            1.0
        } else {
            0.0
        }
    }
}

/// `max(0, cosine)` over stored word vectors; words missing from the store
/// fall back to exact match.
#[derive(Debug, Clone, Copy)]
pub struct EmbeddingSimilarity<'a> {
    store: &'a EmbeddingStore,
}

impl<'a> EmbeddingSimilarity<'a> {
    pub fn new(store: &'a EmbeddingStore) -> Self {
        Self { store }
    }
}

impl WordSimilarity for EmbeddingSimilarity<'_> {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 1.0;
        }
        match (self.store.get(a), self.store.get(b)) {
            (Some(u), Some(v)) => unit_dot(u, v).max(0.0),
            _ => 0.0,
        }
    }
}

/// `max(0, cosine)` over [`fallback_embed`] vectors computed on the fly.
#[derive(Debug, Clone, Copy)]
pub struct FallbackSimilarity {
    pub dim: usize,
}

impl WordSimilarity for FallbackSimilarity {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 1.0;
        }
        match (fallback_embed(a, self.dim), fallback_embed(b, self.dim)) {
            (Ok(u), Ok(v)) => unit_dot(&u, &v).max(0.0),
            _ => 0.0,
        }
    }
}

/// Owned choice of word similarity, used by the pipeline and CLI.
#[derive(Debug, Clone)]
pub enum WordSimSource {
    Exact,
    Embeddings(EmbeddingStore),
    Fallback { dim: usize },
}

impl WordSimilarity for WordSimSource {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        match self {
            WordSimSource::Exact => ExactMatch.similarity(a, b),
            WordSimSource::Embeddings(store) => EmbeddingSimilarity::new(store).similarity(a, b),
            WordSimSource::Fallback { dim } => FallbackSimilarity { dim: *dim }.similarity(a, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oov_falls_back_to_exact_match() {
        let mut store = EmbeddingStore::new(2);
        store.insert("a", vec![1.0, 0.0]).unwrap();
        store.insert("b", vec![-1.0, 0.0]).unwrap();
        let sim = EmbeddingSimilarity::new(&store);
        assert_eq!(sim.similarity("a", "b"), 0.0);
        assert_eq!(sim.similarity("zz", "zz"), 1.0);
        assert_eq!(sim.similarity("a", "zz"), 0.0);
    }

    #[test]
    fn closures_are_clamped() {
        let f = |_: &str, _: &str| 3.0;
        assert_eq!(f.similarity("x", "y"), 1.0);
    }
}
