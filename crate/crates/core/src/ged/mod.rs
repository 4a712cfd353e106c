//! Verb-usage error detection against the collostruction database.
//!
//! A clause around the verb is matched to its closest collostruction (index
//! lookup, then fuzzy alignment and a weighted match score). Alignment
//! features of the focus-attached relations feed a small classifier whose
//! verdict is "error" when `C-prob - E-prob < 0`.

mod classifier;
mod dataset;
mod detect;
mod features;
mod index;
mod matching;
mod metrics;

use thiserror::Error;

pub use classifier::{
    classify, train, ClassifierParams, Hyper, TrainReport, Verdict, FEATURE_DIM, EMBED_DIM,
};
pub use dataset::{load_dataset, locate_target, GedInstance, Label};
pub use detect::{DetectSummary, Detection, Detector};
pub use features::{extract_features, FeatureEntry, FeatureVector};
pub use index::{
    clause_items, collostruction_items, heuristic_search, units, CollostructionIndex,
    PatternCategory, PatternUnit, SeqItem, CANDIDATES_PER_CATEGORY,
};
pub use matching::{
    align, asym_similarities, coverage_density, fuzzy_node_sim, match_score, select_top, Alignment,
    MatchParams, MatchScore, MatchWeights, TopMatch,
};
pub use metrics::{evaluate, ClassMetrics, Evaluation};

#[derive(Debug, Error, PartialEq)]
pub enum GedError {
    #[error("match weights must be nonnegative and sum to 1, got {0:?}")]
    Weights([f64; 5]),
    #[error("both sequences are empty")]
    EmptySequences,
    #[error("clause has no slots")]
    EmptyClause,
    #[error("no candidate collostructions")]
    NoCandidates,
    #[error("training data needs at least 2 instances of each class (correct {correct}, error {error})")]
    SingleClass { correct: usize, error: usize },
    #[error("invalid hyperparameters: {0}")]
    Hyper(String),
    #[error("{predicted} predictions for {gold} gold labels")]
    LengthMismatch { predicted: usize, gold: usize },
    #[error("dataset line {line}: {message}")]
    Dataset { line: usize, message: String },
    #[error("instance {id}: {message}")]
    Target { id: String, message: String },
    #[error("{0}")]
    Io(String),
}
