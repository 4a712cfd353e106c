//! Statistical analyses of a finished database.

mod actions;
mod coherence;
mod powerlaw;
mod slots;

use thiserror::Error;

pub use actions::{
    action_sequences, ActionRow, ActionSide, SememeLexicon, ACTION_RELATIONS, TOP_SEMEMES,
};
pub use coherence::{coherence_by_relation, within_slot_similarity, CoherenceRow, PairNormalization};
pub use powerlaw::{
    compare_power_exponential, fit_power_law, power_law_report, PowerLawFit, PowerLawReport,
    MIN_TAIL,
};
pub use slots::{slot_statistics, SlotStat};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("database is empty")]
    EmptyDatabase,
    #[error("need at least {needed} samples above x_min, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("samples must be positive and finite, got {0}")]
    NonPositive(f64),
    #[error("x_min {x_min} exceeds the largest sample {max}")]
    XminAboveMax { x_min: f64, max: f64 },
    #[error("degenerate sample: {0}")]
    Degenerate(String),
    #[error("need at least 2 collexemes with embeddings, got {0}")]
    TooFewCollexemes(usize),
    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },
    #[error("hypernym links form a cycle through {0:?}")]
    HypernymCycle(String),
    #[error("verb {0:?} is not in the database")]
    UnknownVerb(String),
    #[error("{0}")]
    Io(String),
}
