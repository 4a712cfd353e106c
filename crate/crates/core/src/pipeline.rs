//! End-to-end mining: sample verb instances, split senses, retrieve and
//! cluster clauses, and generate one collostruction per clause cluster.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::clause::{retrieve_clause, ClauseOptions, ClauseStructure};
use crate::colgen::{
    generate_collostruction, validate_verb_entries, ColgenError, Collostruction, CorpusCounts,
    GenerateOptions, PathMode, StrengthMode, DEFAULT_PATH_CAP,
};
use crate::db::{sha256_hex, Database, DbError, Manifest, ManifestVerb, VerbEntry, SCHEMA_VERSION};
use crate::depcluster::{staged_clustering, ClusteringPlan, DepClusterError, SimilarityParams};
use crate::ged::{GedError, MatchParams, MatchWeights};
use crate::ingest::{fallback_embed, load_embeddings, parse_conllu, DependencyTree, EmbeddingStore, IngestError, WordKey};
use crate::sense::{cluster_sentences, SenseError, DEFAULT_MIN_CLUSTER_SIZE, DEFAULT_SENSE_THRESHOLD};
use crate::wordsim::WordSimSource;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },
    #[error("config key {key:?}: {message}")]
    Config { key: String, message: String },
    #[error("{path}: {source}")]
    Ingest { path: String, source: IngestError },
    #[error("duplicate sent_id {0:?} across the corpus")]
    DuplicateSentence(String),
    #[error("sentence {0:?} has no embedding")]
    MissingEmbedding(String),
    #[error("verb {verb}: {source}")]
    Sense { verb: String, source: SenseError },
    #[error("verb {verb}: {source}")]
    Cluster { verb: String, source: DepClusterError },
    #[error("verb {verb}: {source}")]
    Colgen { verb: String, source: ColgenError },
    #[error(transparent)]
    Db(#[from] DbError),
    #[error(transparent)]
    Ged(#[from] GedError),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

impl PipelineError {
    /// True for violated internal invariants, as opposed to bad input.
    pub fn is_invariant(&self) -> bool {
        matches!(
            self,
            PipelineError::Colgen {
                source: ColgenError::Invalid { .. },
                ..
            } | PipelineError::Db(DbError::Invalid(_))
                | PipelineError::Pool(_)
        )
    }
}

/// All mining settings. Read from a flat `key = value` file; any key can be
/// overridden afterwards with [`PipelineConfig::set`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub corpus: Vec<PathBuf>,
    /// Sentence vectors keyed by sent_id; hashed n-gram vectors when absent.
    pub sentence_embeddings: Option<PathBuf>,
    /// Word vectors; hashed n-gram similarity when absent.
    pub word_embeddings: Option<PathBuf>,
    pub fallback_dim: usize,
    pub verbs: Vec<String>,
    pub sample_cap: usize,
    pub sense_threshold: f64,
    pub min_cluster_size: usize,
    pub min_pts: usize,
    pub similarity: SimilarityParams,
    pub plan: ClusteringPlan,
    pub generate: GenerateOptions,
    pub clause: ClauseOptions,
    pub weights: MatchWeights,
    pub match_params: MatchParams,
    pub seed: u64,
    /// Worker threads; does not affect output.
    pub jobs: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            corpus: Vec::new(),
            sentence_embeddings: None,
            word_embeddings: None,
            fallback_dim: 64,
            verbs: Vec::new(),
            sample_cap: 40_000,
            sense_threshold: DEFAULT_SENSE_THRESHOLD,
            min_cluster_size: DEFAULT_MIN_CLUSTER_SIZE,
            min_pts: 3,
            similarity: SimilarityParams::default(),
            plan: ClusteringPlan::TwoStage,
            generate: GenerateOptions::default(),
            clause: ClauseOptions::default(),
            weights: MatchWeights::default(),
            match_params: MatchParams::default(),
            seed: 0,
            jobs: 1,
        }
    }
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn join_f64(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl PipelineConfig {
    pub const KEYS: &'static [&'static str] = &[
        "corpus",
        "sentence_embeddings",
        "word_embeddings",
        "fallback_dim",
        "verbs",
        "sample_cap",
        "sense_threshold",
        "min_cluster_size",
        "min_pts",
        "alpha",
        "beta",
        "alpha_w",
        "beta_w",
        "sim_floor",
        "clustering",
        "path_mode",
        "path_cap",
        "strength",
        "word_key",
        "verb_tags",
        "weights",
        "match_alpha_w",
        "match_beta_w",
        "seed",
        "jobs",
    ];

    /// Parses `key = value` lines; `#` starts a comment line. Relative paths
    /// are resolved against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, PipelineError> {
        let mut cfg = PipelineConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| PipelineError::ConfigSyntax {
                line: i + 1,
                message: "expected key = value".into(),
            })?;
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(base) = base {
            let fix = |p: &mut PathBuf| {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            };
            cfg.corpus.iter_mut().for_each(fix);
            cfg.sentence_embeddings.iter_mut().for_each(fix);
            cfg.word_embeddings.iter_mut().for_each(fix);
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Config {
            key: "--config".into(),
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text, path.parent())
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), PipelineError> {
        let bad = |message: String| PipelineError::Config {
            key: key.to_string(),
            message,
        };
        fn num<T: std::str::FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            v.parse::<T>().map_err(|e| format!("{v:?}: {e}"))
        }
        let opt_path = |v: &str| (!v.is_empty()).then(|| PathBuf::from(v));
        match key {
            "corpus" => self.corpus = list(value).into_iter().map(PathBuf::from).collect(),
            "sentence_embeddings" => self.sentence_embeddings = opt_path(value),
            "word_embeddings" => self.word_embeddings = opt_path(value),
            "fallback_dim" => self.fallback_dim = num(value).map_err(bad)?,
            "verbs" => self.verbs = list(value),
            "sample_cap" => self.sample_cap = num(value).map_err(bad)?,
            "sense_threshold" => self.sense_threshold = num(value).map_err(bad)?,
            "min_cluster_size" => self.min_cluster_size = num(value).map_err(bad)?,
            "min_pts" => self.min_pts = num(value).map_err(bad)?,
            "alpha" => self.similarity.alpha = num(value).map_err(bad)?,
            "beta" => self.similarity.beta = num(value).map_err(bad)?,
            "alpha_w" => self.similarity.alpha_w = num(value).map_err(bad)?,
            "beta_w" => self.similarity.beta_w = num(value).map_err(bad)?,
            "sim_floor" => self.similarity.sim_floor = num(value).map_err(bad)?,
            "clustering" => {
                self.plan = match value {
                    "two-stage" => ClusteringPlan::TwoStage,
                    "synsem-only" => ClusteringPlan::SynSemOnly,
                    "syntactic-only" => ClusteringPlan::SyntacticOnly,
                    _ => return Err(bad("expected two-stage, synsem-only or syntactic-only".into())),
                }
            }
            "path_mode" => {
                let cap = match self.generate.path_mode {
                    PathMode::Exhaustive { cap } => cap,
                    PathMode::Greedy => DEFAULT_PATH_CAP,
                };
                self.generate.path_mode = match value {
                    "greedy" => PathMode::Greedy,
                    "exhaustive" => PathMode::Exhaustive { cap },
                    _ => return Err(bad("expected greedy or exhaustive".into())),
                }
            }
            "path_cap" => {
                let cap = num(value).map_err(bad)?;
                if let PathMode::Exhaustive { cap: c } = &mut self.generate.path_mode {
                    *c = cap;
                } else {
                    self.generate.path_mode = PathMode::Exhaustive { cap };
                }
            }
            "strength" => {
                self.generate.strength = match value {
                    "conditional" => StrengthMode::Conditional,
                    "literal" => StrengthMode::Literal,
                    _ => return Err(bad("expected conditional or literal".into())),
                }
            }
            "word_key" => {
                self.clause.word_key = match value {
                    "lemma" => WordKey::Lemma,
                    "form" => WordKey::Form,
                    _ => return Err(bad("expected lemma or form".into())),
                }
            }
            "verb_tags" => self.clause.verb_tags = list(value),
            "weights" => {
                let w: Vec<f64> = list(value)
                    .iter()
                    .map(|x| num(x))
                    .collect::<Result<_, _>>()
                    .map_err(bad)?;
                let w: [f64; 5] = w.try_into().map_err(|_| bad("expected five comma-separated weights".into()))?;
                self.weights = MatchWeights::new(w)?;
            }
            "match_alpha_w" => self.match_params.alpha_w = num(value).map_err(bad)?,
            "match_beta_w" => self.match_params.beta_w = num(value).map_err(bad)?,
            "seed" => self.seed = num(value).map_err(bad)?,
            "jobs" => self.jobs = num(value).map_err(bad)?,
            _ => return Err(bad(format!("unknown key; expected one of {}", Self::KEYS.join(", ")))),
        }
        Ok(())
    }

    /// Checks value ranges and that referenced files exist.
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |key: &str, message: &str| {
            Err(PipelineError::Config {
                key: key.into(),
                message: message.into(),
            })
        };
        if self.corpus.is_empty() {
            return bad("corpus", "at least one corpus file is required");
        }
        if self.verbs.is_empty() {
            return bad("verbs", "at least one verb is required");
        }
        let paths = self
            .corpus
            .iter()
            .map(|p| ("corpus", p))
            .chain(self.sentence_embeddings.iter().map(|p| ("sentence_embeddings", p)))
            .chain(self.word_embeddings.iter().map(|p| ("word_embeddings", p)));
        for (key, p) in paths {
            if !p.is_file() {
                return bad(key, &format!("{} does not exist", p.display()));
            }
        }
        if self.fallback_dim < 8 {
            return bad("fallback_dim", "must be at least 8");
        }
        if self.sample_cap == 0 {
            return bad("sample_cap", "must be at least 1");
        }
        if !(self.sense_threshold > 0.0 && self.sense_threshold < 1.0) {
            return bad("sense_threshold", "must lie in (0, 1)");
        }
        if self.min_cluster_size == 0 {
            return bad("min_cluster_size", "must be at least 1");
        }
        if self.min_pts == 0 {
            return bad("min_pts", "must be at least 1");
        }
        if self.jobs == 0 {
            return bad("jobs", "must be at least 1");
        }
        if let PathMode::Exhaustive { cap: 0 } = self.generate.path_mode {
            return bad("path_cap", "must be at least 1");
        }
        self.similarity.validate().map_err(|e| PipelineError::Config {
            key: "alpha/beta/alpha_w/beta_w/sim_floor".into(),
            message: e.to_string(),
        })?;
        let m = self.match_params;
        if !(m.alpha_w >= 0.0 && m.beta_w >= 0.0 && (m.alpha_w + m.beta_w - 1.0).abs() <= 1e-9) {
            return bad("match_alpha_w/match_beta_w", "must be nonnegative and sum to 1");
        }
        MatchWeights::new(self.weights.0)?;
        Ok(())
    }

    /// Every output-affecting key in a fixed order; `jobs` is left out.
    pub fn canonical(&self) -> String {
        let path_list = |v: &[PathBuf]| v.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(",");
        let opt = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let s = &self.similarity;
        let (path_mode, cap) = match self.generate.path_mode {
            PathMode::Greedy => ("greedy", DEFAULT_PATH_CAP),
            PathMode::Exhaustive { cap } => ("exhaustive", cap),
        };
        let pairs: Vec<(&str, String)> = vec![
            ("corpus", path_list(&self.corpus)),
            ("sentence_embeddings", opt(&self.sentence_embeddings)),
            ("word_embeddings", opt(&self.word_embeddings)),
            ("fallback_dim", self.fallback_dim.to_string()),
            ("verbs", self.verbs.join(",")),
            ("sample_cap", self.sample_cap.to_string()),
            ("sense_threshold", self.sense_threshold.to_string()),
            ("min_cluster_size", self.min_cluster_size.to_string()),
            ("min_pts", self.min_pts.to_string()),
            ("alpha", s.alpha.to_string()),
            ("beta", s.beta.to_string()),
            ("alpha_w", s.alpha_w.to_string()),
            ("beta_w", s.beta_w.to_string()),
            ("sim_floor", s.sim_floor.to_string()),
            (
                "clustering",
                match self.plan {
                    ClusteringPlan::TwoStage => "two-stage",
                    ClusteringPlan::SynSemOnly => "synsem-only",
                    ClusteringPlan::SyntacticOnly => "syntactic-only",
                }
                .into(),
            ),
            ("path_mode", path_mode.into()),
            ("path_cap", cap.to_string()),
            (
                "strength",
                match self.generate.strength {
                    StrengthMode::Conditional => "conditional",
                    StrengthMode::Literal => "literal",
                }
                .into(),
            ),
            (
                "word_key",
                match self.clause.word_key {
                    WordKey::Lemma => "lemma",
                    WordKey::Form => "form",
                }
                .into(),
            ),
            ("verb_tags", self.clause.verb_tags.join(",")),
            ("weights", join_f64(&self.weights.0)),
            ("match_alpha_w", self.match_params.alpha_w.to_string()),
            ("match_beta_w", self.match_params.beta_w.to_string()),
            ("seed", self.seed.to_string()),
        ];
        pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn hash(&self) -> String {
        sha256_hex(&self.canonical())
    }

    /// Word similarity per the config: stored vectors if given, else hashed
    /// n-gram vectors.
    pub fn word_similarity(&self) -> Result<WordSimSource, PipelineError> {
        match &self.word_embeddings {
            Some(p) => Ok(WordSimSource::Embeddings(load_embedding_file(p)?)),
            None => Ok(WordSimSource::Fallback { dim: self.fallback_dim }),
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, PipelineError> {
    File::open(path).map(BufReader::new).map_err(|e| PipelineError::Ingest {
        path: path.display().to_string(),
        source: e.into(),
    })
}

pub fn load_embedding_file(path: &Path) -> Result<EmbeddingStore, PipelineError> {
    load_embeddings(open(path)?, None).map_err(|source| PipelineError::Ingest {
        path: path.display().to_string(),
        source,
    })
}

/// Reads all corpus files in order and rejects repeated sent_ids.
pub fn load_corpus(paths: &[PathBuf]) -> Result<Vec<DependencyTree>, PipelineError> {
    let mut trees = Vec::new();
    for p in paths {
        let part = parse_conllu(open(p)?).map_err(|source| PipelineError::Ingest {
            path: p.display().to_string(),
            source,
        })?;
        trees.extend(part);
    }
    let mut seen = HashSet::new();
    for t in &trees {
        if !seen.insert(t.sent_id()) {
            return Err(PipelineError::DuplicateSentence(t.sent_id().to_string()));
        }
    }
    Ok(trees)
}

/// A sampled verb occurrence: tree index and target token id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instance {
    pub tree: usize,
    pub token: usize,
}

/// First matching verb token of every sentence that has one, in corpus order.
pub fn find_instances(trees: &[DependencyTree], verb: &str, opts: &ClauseOptions) -> Vec<Instance> {
    trees
        .iter()
        .enumerate()
        .filter_map(|(i, t)| {
            t.tokens()
                .iter()
                .find(|tok| opts.word_key.of(tok) == verb && opts.is_verb(tok))
                .map(|tok| Instance { tree: i, token: tok.id })
        })
        .collect()
}

/// Keeps everything up to `cap`; otherwise a seeded reservoir sample, returned
/// in corpus order.
pub fn sample_instances(all: Vec<Instance>, cap: usize, seed: u64, verb: &str) -> Vec<Instance> {
    if all.len() <= cap {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ verb_salt(verb));
    let mut picked = all.into_iter().choose_multiple(&mut rng, cap);
    picked.sort_by_key(|i| i.tree);
    picked
}

fn verb_salt(verb: &str) -> u64 {
    let hex = sha256_hex(verb);
    u64::from_str_radix(&hex[..16], 16).expect("hex digest")
}

fn corpus_counts(trees: &[DependencyTree], key: WordKey) -> CorpusCounts {
    let mut counts = CorpusCounts::default();
    for t in trees {
        for tok in t.tokens() {
            counts.tokens += 1;
            *counts.freq.entry(key.of(tok).to_string()).or_default() += 1;
        }
    }
    counts
}

/// Shared read-only inputs for per-verb mining.
pub struct MiningInputs<'a> {
    pub trees: &'a [DependencyTree],
    /// Precomputed sentence vectors; `None` means hashed n-gram vectors.
    pub sentence_vectors: Option<&'a EmbeddingStore>,
    pub word_sim: &'a WordSimSource,
    pub corpus: Option<&'a CorpusCounts>,
}

/// Mines one verb. Verbs absent from the corpus give an empty entry and a
/// manifest warning.
pub fn mine_verb(verb: &str, cfg: &PipelineConfig, inputs: &MiningInputs<'_>) -> Result<(VerbEntry, ManifestVerb), PipelineError> {
    let mut report = ManifestVerb {
        verb: verb.to_string(),
        ..Default::default()
    };
    let sample = sample_instances(
        find_instances(inputs.trees, verb, &cfg.clause),
        cfg.sample_cap,
        cfg.seed,
        verb,
    );
    report.instances = sample.len();
    if sample.is_empty() {
        log::warn!("verb {verb} does not occur in the corpus");
        report.warnings.push("verb does not occur in the corpus".into());
        return Ok((VerbEntry::new(verb, 0, Vec::new()), report));
    }

    let mut store = EmbeddingStore::new(match inputs.sentence_vectors {
        Some(s) => s.dim(),
        None => cfg.fallback_dim,
    });
    let mut by_id: HashMap<&str, Instance> = HashMap::new();
    for inst in &sample {
        let tree = &inputs.trees[inst.tree];
        let id = tree.sent_id();
        let vector = match inputs.sentence_vectors {
            Some(s) => s
                .get(id)
                .ok_or_else(|| PipelineError::MissingEmbedding(id.to_string()))?
                .to_vec(),
            None => fallback_embed(tree.text(), cfg.fallback_dim).map_err(|source| PipelineError::Ingest {
                path: id.to_string(),
                source,
            })?,
        };
        store.insert(id, vector).map_err(|source| PipelineError::Ingest {
            path: id.to_string(),
            source,
        })?;
        by_id.insert(id, *inst);
    }
    let ids: Vec<String> = by_id.keys().map(|s| s.to_string()).collect();
    let senses = cluster_sentences(&store, &ids, cfg.sense_threshold).map_err(|source| PipelineError::Sense {
        verb: verb.to_string(),
        source,
    })?;

    let mut collostructions: Vec<Collostruction> = Vec::new();
    let mut failed_clauses = 0usize;
    for sense in &senses {
        if sense.size() < cfg.min_cluster_size {
            report.discarded += sense.size();
            continue;
        }
        report.kept += sense.size();
        report.sense_clusters += 1;
        let mut clauses: Vec<ClauseStructure> = Vec::new();
        for id in &sense.member_sent_ids {
            let inst = by_id[id.as_str()];
            match retrieve_clause(&inputs.trees[inst.tree], inst.token, &cfg.clause) {
                Ok(c) => clauses.push(c),
                Err(e) => {
                    log::warn!("verb {verb}, sentence {id}: {e}");
                    failed_clauses += 1;
                }
            }
        }
        if clauses.is_empty() {
            continue;
        }
        let (clusters, leftover) = staged_clustering(&clauses, &cfg.similarity, inputs.word_sim, cfg.min_pts, cfg.plan)
            .map_err(|source| PipelineError::Cluster {
                verb: verb.to_string(),
                source,
            })?;
        report.outlier_clauses += leftover.len();
        for cluster in clusters {
            let members: Vec<ClauseStructure> = cluster.members.iter().map(|&i| clauses[i].clone()).collect();
            let generated = generate_collostruction(
                &members,
                sample.len(),
                sense.cluster_id,
                cluster.stage,
                &cfg.generate,
                inputs.corpus,
            )
            .map_err(|source| PipelineError::Colgen {
                verb: verb.to_string(),
                source,
            })?;
            match generated {
                Some(c) => collostructions.push(c),
                None => log::info!("verb {verb}: a cluster of {} clauses left no valid path", members.len()),
            }
        }
    }
    if failed_clauses > 0 {
        report.warnings.push(format!("{failed_clauses} instances had no retrievable clause"));
    }
    validate_verb_entries(&collostructions).map_err(|source| PipelineError::Colgen {
        verb: verb.to_string(),
        source,
    })?;
    report.collostructions = collostructions.len();
    Ok((VerbEntry::new(verb, sample.len(), collostructions), report))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MineOutput {
    pub database: Database,
    pub manifest: Manifest,
}

/// Runs the whole pipeline. Verbs are mined in parallel on `cfg.jobs`
/// threads; the result does not depend on the thread count.
pub fn mine(cfg: &PipelineConfig) -> Result<MineOutput, PipelineError> {
    cfg.validate()?;
    let trees = load_corpus(&cfg.corpus)?;
    let sentence_vectors = match &cfg.sentence_embeddings {
        Some(p) => Some(load_embedding_file(p)?),
        None => None,
    };
    let word_sim = cfg.word_similarity()?;
    let counts = (cfg.generate.strength == StrengthMode::Literal).then(|| corpus_counts(&trees, cfg.clause.word_key));
    let inputs = MiningInputs {
        trees: &trees,
        sentence_vectors: sentence_vectors.as_ref(),
        word_sim: &word_sim,
        corpus: counts.as_ref(),
    };
    let mut verbs = cfg.verbs.clone();
    verbs.sort();
    verbs.dedup();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| PipelineError::Pool(e.to_string()))?;
    let results: Vec<Result<(VerbEntry, ManifestVerb), PipelineError>> =
        pool.install(|| verbs.par_iter().map(|v| mine_verb(v, cfg, &inputs)).collect());

    let mut entries = Vec::new();
    let mut reports = Vec::new();
    for r in results {
        let (e, m) = r?;
        entries.push(e);
        reports.push(m);
    }
    let database = Database::new(entries)?;
    database.validate()?;
    Ok(MineOutput {
        database,
        manifest: Manifest {
            schema_version: SCHEMA_VERSION,
            config_hash: cfg.hash(),
            seed: cfg.seed,
            verbs: reports,
        },
    })
}

/// Listing filters for [`query`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryFilter {
    /// Keep collostructions with a slot of this relation.
    pub deprel: Option<String>,
    /// Keep collostructions with a collexeme containing this text.
    pub collexeme: Option<String>,
}

impl QueryFilter {
    pub fn accepts(&self, c: &Collostruction) -> bool {
        let rel_ok = self
            .deprel
            .as_deref()
            .is_none_or(|d| c.slots.iter().any(|s| s.key.deprel == d));
        let word_ok = self.collexeme.as_deref().is_none_or(|w| {
            c.slots
                .iter()
                .any(|s| s.collexemes.iter().any(|x| x.word.contains(w)))
        });
        rel_ok && word_ok
    }
}

/// Collostructions of `verb` passing the filter, by `p_col` descending then
/// id ascending.
pub fn query<'a>(db: &'a Database, verb: &str, filter: &QueryFilter) -> Result<Vec<(usize, &'a Collostruction)>, DbError> {
    let mut out: Vec<_> = db
        .for_verb(verb)?
        .into_iter()
        .filter(|(_, c)| filter.accepts(c))
        .collect();
    out.sort_by(|a, b| b.1.p_col.total_cmp(&a.1.p_col).then(a.0.cmp(&b.0)));
    Ok(out)
}
