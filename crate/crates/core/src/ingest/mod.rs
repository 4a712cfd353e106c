//! Corpus and embedding input.

mod conllu;
mod embeddings;

use thiserror::Error;

pub use conllu::{parse_conllu, parse_conllu_str, DependencyTree, Token};
pub use embeddings::{
    cosine, fallback_embed, load_embeddings, EmbeddingStore, FallbackEmbedder, VectorLookup,
};
pub(crate) use embeddings::unit_dot;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("sentence {sent_id}: {message}")]
    Validation { sent_id: String, message: String },
    #[error("embedding file line {line}: {message}")]
    Embedding { line: usize, message: String },
    #[error("{0}")]
    Vector(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which token column identifies a word for collexeme counting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordKey {
    #[default]
    Lemma,
    Form,
}

impl WordKey {
    pub fn of<'a>(&self, token: &'a Token) -> &'a str {
        match self {
            WordKey::Lemma if !token.lemma.is_empty() && token.lemma != "_" => &token.lemma,
            _ => &token.form,
        }
    }
}
