//! Verb collostruction mining from dependency-parsed corpora.
//!
//! The mining pipeline runs in three clustering steps per verb: sentences are
//! split into senses by embedding similarity ([`sense`]), clause structures
//! around the verb are retrieved ([`clause`]) and density-clustered
//! ([`depcluster`]), and each cluster is merged into one collostruction
//! ([`colgen`]). [`stats`] analyses a finished database and [`ged`] uses it to
//! flag verb-usage errors.

pub mod align;
pub mod clause;
pub mod colgen;
pub mod db;
pub mod depcluster;
pub mod ged;
pub mod ingest;
pub mod pipeline;
pub mod sense;
pub mod stats;
pub mod wordsim;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/clauses.md")]
    mod clauses {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/collostructions.md")]
    mod collostructions {}
    #[doc = include_str!("../../../book/src/statistics.md")]
    mod statistics {}
    #[doc = include_str!("../../../book/src/error_detection.md")]
    mod error_detection {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
