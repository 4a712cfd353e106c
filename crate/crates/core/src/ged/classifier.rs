//! Feed-forward error classifier over match features.
//!
//! Each relation label has a learned 32-dimensional embedding. An instance is
//! encoded as the core relation embedding and the mean relation embedding of
//! the attached entries, plus (mean, max, ln(1 + count)) of the alignment
//! similarities, for the collostruction side and then the clause side. Two
//! ReLU layers (64, 32) feed a 2-way softmax giving `(C-prob, E-prob)`.

use std::collections::BTreeSet;

use rand::seq::{index::sample, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::dataset::Label;
use super::features::{FeatureEntry, FeatureVector};
use super::GedError;

pub const EMBED_DIM: usize = 32;
/// Encoded input width.
pub const FEATURE_DIM: usize = 4 * EMBED_DIM + 6;
const H1: usize = 64;
const H2: usize = 32;
const UNKNOWN: &str = "<unk>";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyper {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// The error-class sample is redrawn every this many epochs.
    pub resample_every: usize,
    pub seed: u64,
}

impl Default for Hyper {
    fn default() -> Self {
        Self {
            epochs: 200,
            batch_size: 32,
            learning_rate: 1e-3,
            resample_every: 50,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierParams {
    /// Sorted relation vocabulary, including the unknown label.
    pub vocab: Vec<String>,
    /// Embeddings, then W1, b1, W2, b2, W3, b3, row-major.
    pub theta: Vec<f64>,
    /// Share of error instances in the training data.
    pub error_prior: f64,
    pub hyper: Hyper,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Hash of the error-class sample used in each epoch.
    pub sample_hashes: Vec<u64>,
    /// Mean cross-entropy per epoch.
    pub losses: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: Label,
    pub c_prob: f64,
    pub e_prob: f64,
    /// True when no features existed and the training prior decided.
    pub from_prior: bool,
}

impl Verdict {
    fn from_probs(c_prob: f64, e_prob: f64, from_prior: bool) -> Self {
        let label = if c_prob - e_prob < 0.0 {
            Label::Error
        } else {
            Label::Correct
        };
        Self {
            label,
            c_prob,
            e_prob,
            from_prior,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    emb: usize,
    w1: usize,
    b1: usize,
    w2: usize,
    b2: usize,
    w3: usize,
    b3: usize,
    len: usize,
}

impl Layout {
    fn new(vocab: usize) -> Self {
        let emb = 0;
        let w1 = emb + vocab * EMBED_DIM;
        let b1 = w1 + H1 * FEATURE_DIM;
        let w2 = b1 + H1;
        let b2 = w2 + H2 * H1;
        let w3 = b2 + H2;
        let b3 = w3 + 2 * H2;
        Self {
            emb,
            w1,
            b1,
            w2,
            b2,
            w3,
            b3,
            len: b3 + 2,
        }
    }
}

/// Relation ids plus similarity statistics for one instance.
#[derive(Debug, Clone)]
struct Encoded {
    core_col: usize,
    deps_col: Vec<usize>,
    stats_col: [f64; 3],
    core_cls: usize,
    deps_cls: Vec<usize>,
    stats_cls: [f64; 3],
}

fn sim_stats(entries: &[FeatureEntry]) -> [f64; 3] {
    if entries.is_empty() {
        return [0.0; 3];
    }
    let n = entries.len() as f64;
    let mean = entries.iter().map(|e| e.sim).sum::<f64>() / n;
    let max = entries.iter().map(|e| e.sim).fold(0.0, f64::max);
    [mean, max, (1.0 + n).ln()]
}

struct Cache {
    x: Vec<f64>,
    h1: Vec<f64>,
    h2: Vec<f64>,
    probs: [f64; 2],
}

impl ClassifierParams {
    fn layout(&self) -> Layout {
        Layout::new(self.vocab.len())
    }

    fn id(&self, rel: &str) -> usize {
        let find = |r: &str| self.vocab.binary_search_by(|v| v.as_str().cmp(r)).ok();
        find(&rel.to_lowercase())
            .or_else(|| find(UNKNOWN))
            .expect("vocabulary holds the unknown label")
    }

    fn encode(&self, f: &FeatureVector) -> Encoded {
        Encoded {
            core_col: self.id(&f.core_dep_col),
            deps_col: f.deps_col.iter().map(|e| self.id(&e.deprel)).collect(),
            stats_col: sim_stats(&f.deps_col),
            core_cls: self.id(&f.core_dep_cls),
            deps_cls: f.deps_cls.iter().map(|e| self.id(&e.deprel)).collect(),
            stats_cls: sim_stats(&f.deps_cls),
        }
    }

    fn embedding(&self, id: usize) -> &[f64] {
        let start = self.layout().emb + id * EMBED_DIM;
        &self.theta[start..start + EMBED_DIM]
    }

    fn input(&self, e: &Encoded) -> Vec<f64> {
        let mut x = Vec::with_capacity(FEATURE_DIM);
        let mut side = |core: usize, deps: &[usize], stats: &[f64; 3]| {
            x.extend_from_slice(self.embedding(core));
            let mut mean = [0.0; EMBED_DIM];
            for &d in deps {
                for (m, v) in mean.iter_mut().zip(self.embedding(d)) {
                    *m += v / deps.len() as f64;
                }
            }
            x.extend_from_slice(&mean);
            x.extend_from_slice(stats);
        };
        side(e.core_col, &e.deps_col, &e.stats_col);
        side(e.core_cls, &e.deps_cls, &e.stats_cls);
        x
    }

    fn forward(&self, e: &Encoded) -> Cache {
        let l = self.layout();
        let t = &self.theta;
        let x = self.input(e);
        let dense = |w: usize, b: usize, input: &[f64], out: usize, relu: bool| -> Vec<f64> {
            (0..out)
                .map(|o| {
                    let row = &t[w + o * input.len()..w + (o + 1) * input.len()];
                    let z = t[b + o] + row.iter().zip(input).map(|(a, b)| a * b).sum::<f64>();
                    if relu {
                        z.max(0.0)
                    } else {
                        z
                    }
                })
                .collect()
        };
        let h1 = dense(l.w1, l.b1, &x, H1, true);
        let h2 = dense(l.w2, l.b2, &h1, H2, true);
        let z = dense(l.w3, l.b3, &h2, 2, false);
        let m = z[0].max(z[1]);
        let (e0, e1) = ((z[0] - m).exp(), (z[1] - m).exp());
        let s = e0 + e1;
        Cache {
            x,
            h1,
            h2,
            probs: [e0 / s, e1 / s],
        }
    }

    /// Adds this instance's cross-entropy gradient into `grad`; returns the loss.
    fn backward(&self, e: &Encoded, label: Label, grad: &mut [f64]) -> f64 {
        let l = self.layout();
        let t = &self.theta;
        let c = self.forward(e);
        let y = label.index();
        let dz = [c.probs[0] - f64::from(u8::from(y == 0)), c.probs[1] - f64::from(u8::from(y == 1))];

        let mut dh2 = vec![0.0; H2];
        for (o, &d) in dz.iter().enumerate() {
            grad[l.b3 + o] += d;
            for i in 0..H2 {
                grad[l.w3 + o * H2 + i] += d * c.h2[i];
                dh2[i] += d * t[l.w3 + o * H2 + i];
            }
        }
        let mut dh1 = vec![0.0; H1];
        for o in 0..H2 {
            if c.h2[o] <= 0.0 {
                continue;
            }
            let d = dh2[o];
            grad[l.b2 + o] += d;
            for i in 0..H1 {
                grad[l.w2 + o * H1 + i] += d * c.h1[i];
                dh1[i] += d * t[l.w2 + o * H1 + i];
            }
        }
        let mut dx = vec![0.0; FEATURE_DIM];
        for o in 0..H1 {
            if c.h1[o] <= 0.0 {
                continue;
            }
            let d = dh1[o];
            grad[l.b1 + o] += d;
            let row = l.w1 + o * FEATURE_DIM;
            for i in 0..FEATURE_DIM {
                grad[row + i] += d * c.x[i];
                dx[i] += d * t[row + i];
            }
        }
        let mut push = |id: usize, from: usize, scale: f64| {
            for k in 0..EMBED_DIM {
                grad[l.emb + id * EMBED_DIM + k] += dx[from + k] * scale;
            }
        };
        let side = EMBED_DIM * 2 + 3;
        push(e.core_col, 0, 1.0);
        for &d in &e.deps_col {
            push(d, EMBED_DIM, 1.0 / e.deps_col.len() as f64);
        }
        push(e.core_cls, side, 1.0);
        for &d in &e.deps_cls {
            push(d, side + EMBED_DIM, 1.0 / e.deps_cls.len() as f64);
        }
        -c.probs[y].max(1e-300).ln()
    }

    /// `(C-prob, E-prob)` for one feature vector.
    pub fn probabilities(&self, features: &FeatureVector) -> (f64, f64) {
        let p = self.forward(&self.encode(features)).probs;
        (p[0], p[1])
    }
}

fn sample_hash(indices: &[usize]) -> u64 {
    let mut h = Sha256::new();
    for i in indices {
        h.update((*i as u64).to_le_bytes());
    }
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest is 32 bytes"))
}

fn init_theta(layout: &Layout, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut theta = vec![0.0; layout.len];
    let mut fill = |start: usize, len: usize, bound: f64| {
        for v in &mut theta[start..start + len] {
            *v = rng.random_range(-bound..bound);
        }
    };
    fill(layout.emb, layout.w1 - layout.emb, 0.1);
    let glorot = |fan_in: usize, fan_out: usize| (6.0 / (fan_in + fan_out) as f64).sqrt();
    fill(layout.w1, H1 * FEATURE_DIM, glorot(FEATURE_DIM, H1));
    fill(layout.w2, H2 * H1, glorot(H1, H2));
    fill(layout.w3, 2 * H2, glorot(H2, 2));
    theta
}

/// Mini-batch Adam on cross-entropy. Every epoch uses all correct instances
/// plus an equally large sample of error instances (all of them if there are
/// fewer); the sample is redrawn every `resample_every` epochs. Fully
/// determined by `hyper.seed`.
pub fn train(instances: &[(FeatureVector, Label)], hyper: &Hyper) -> Result<(ClassifierParams, TrainReport), GedError> {
    if hyper.batch_size == 0 || hyper.resample_every == 0 || !(hyper.learning_rate > 0.0) {
        return Err(GedError::Hyper(format!("{hyper:?}")));
    }
    let correct: Vec<usize> = (0..instances.len()).filter(|&i| instances[i].1 == Label::Correct).collect();
    let error: Vec<usize> = (0..instances.len()).filter(|&i| instances[i].1 == Label::Error).collect();
    if correct.len() < 2 || error.len() < 2 {
        return Err(GedError::SingleClass {
            correct: correct.len(),
            error: error.len(),
        });
    }

    let mut vocab: BTreeSet<String> = BTreeSet::new();
    for (f, _) in instances {
        vocab.insert(f.core_dep_col.to_lowercase());
        vocab.insert(f.core_dep_cls.to_lowercase());
        for e in f.deps_col.iter().chain(&f.deps_cls) {
            vocab.insert(e.deprel.to_lowercase());
        }
    }
    vocab.insert(UNKNOWN.to_string());
    let vocab: Vec<String> = vocab.into_iter().collect();

    let layout = Layout::new(vocab.len());
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut params = ClassifierParams {
        vocab,
        theta: init_theta(&layout, &mut rng),
        error_prior: error.len() as f64 / instances.len() as f64,
        hyper: hyper.clone(),
    };
    let encoded: Vec<Encoded> = instances.iter().map(|(f, _)| params.encode(f)).collect();

    let (beta1, beta2, eps) = (0.9_f64, 0.999_f64, 1e-8);
    let mut m = vec![0.0; layout.len];
    let mut v = vec![0.0; layout.len];
    let mut step = 0i32;
    let sample_size = correct.len().min(error.len());
    let mut error_sample: Vec<usize> = Vec::new();
    let mut report = TrainReport::default();
    let mut grad = vec![0.0; layout.len];

    for epoch in 0..hyper.epochs {
        if epoch % hyper.resample_every == 0 {
            let mut picked: Vec<usize> = sample(&mut rng, error.len(), sample_size)
                .into_iter()
                .map(|k| error[k])
                .collect();
            picked.sort_unstable();
            error_sample = picked;
        }
        let hash = sample_hash(&error_sample);
        report.sample_hashes.push(hash);

        let mut order: Vec<usize> = correct.iter().chain(&error_sample).copied().collect();
        order.shuffle(&mut rng);
        let mut loss = 0.0;
        for batch in order.chunks(hyper.batch_size) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            for &i in batch {
                loss += params.backward(&encoded[i], instances[i].1, &mut grad);
            }
            let scale = 1.0 / batch.len() as f64;
            step += 1;
            let (c1, c2) = (1.0 - beta1.powi(step), 1.0 - beta2.powi(step));
            for k in 0..layout.len {
                let g = grad[k] * scale;
                m[k] = beta1 * m[k] + (1.0 - beta1) * g;
                v[k] = beta2 * v[k] + (1.0 - beta2) * g * g;
                params.theta[k] -= hyper.learning_rate * (m[k] / c1) / ((v[k] / c2).sqrt() + eps);
            }
        }
        let mean_loss = loss / order.len() as f64;
        log::debug!("epoch {epoch} sample {hash:016x} loss {mean_loss:.5}");
        report.losses.push(mean_loss);
    }
    Ok((params, report))
}

/// Verdict for one instance. Without features (the verb has no
/// collostructions) the training prior decides.
pub fn classify(features: Option<&FeatureVector>, params: &ClassifierParams) -> Verdict {
    match features {
        Some(f) => {
            let (c, e) = params.probabilities(f);
            Verdict::from_probs(c, e, false)
        }
        None => Verdict::from_probs(1.0 - params.error_prior, params.error_prior, true),
    }
}
