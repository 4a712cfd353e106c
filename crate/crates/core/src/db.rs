//! On-disk collostruction database.
//!
//! A database is a JSON Lines file holding one document per verb, ordered by
//! verb. A manifest (pretty-printed JSON) records the configuration hash and
//! per-verb counts of the run that produced it. Collostruction ids are
//! positions in the flattened database order.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::colgen::{validate_verb_entries, ColgenError, Collostruction};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DbError {
    #[error("database line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("database line {line}: schema version {found}, expected {SCHEMA_VERSION}")]
    Schema { line: usize, found: u32 },
    #[error("verb {0:?} appears twice")]
    DuplicateVerb(String),
    #[error("verb {0:?} is not in the database")]
    UnknownVerb(String),
    #[error(transparent)]
    Invalid(#[from] ColgenError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerbEntry {
    pub schema_version: u32,
    pub verb: String,
    /// Sampled instance sentences of the verb.
    pub total_instances: usize,
    pub collostructions: Vec<Collostruction>,
}

impl VerbEntry {
    pub fn new(verb: impl Into<String>, total_instances: usize, collostructions: Vec<Collostruction>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            verb: verb.into(),
            total_instances,
            collostructions,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Database {
    /// Sorted by verb.
    pub entries: Vec<VerbEntry>,
}

impl Database {
    /// Builds a database, sorting entries by verb.
    pub fn new(mut entries: Vec<VerbEntry>) -> Result<Self, DbError> {
        entries.sort_by(|a, b| a.verb.cmp(&b.verb));
        if let Some(w) = entries.windows(2).find(|w| w[0].verb == w[1].verb) {
            return Err(DbError::DuplicateVerb(w[0].verb.clone()));
        }
        Ok(Self { entries })
    }

    pub fn entry(&self, verb: &str) -> Option<&VerbEntry> {
        self.entries
            .binary_search_by(|e| e.verb.as_str().cmp(verb))
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn verbs(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.verb.as_str())
    }

    /// All collostructions with their database ids.
    pub fn collostructions(&self) -> impl Iterator<Item = (usize, &Collostruction)> {
        self.entries
            .iter()
            .flat_map(|e| e.collostructions.iter())
            .enumerate()
    }

    /// Collostructions of one verb with their database ids.
    pub fn for_verb(&self, verb: &str) -> Result<Vec<(usize, &Collostruction)>, DbError> {
        if self.entry(verb).is_none() {
            return Err(DbError::UnknownVerb(verb.to_string()));
        }
        Ok(self.collostructions().filter(|(_, c)| c.verb == verb).collect())
    }

    pub fn get(&self, id: usize) -> Option<&Collostruction> {
        self.collostructions().nth(id).map(|(_, c)| c)
    }

    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.collostructions.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Runs the collostruction validator over every verb.
    pub fn validate(&self) -> Result<(), DbError> {
        for e in &self.entries {
            if e.collostructions.iter().any(|c| c.verb != e.verb) {
                return Err(ColgenError::VerbMismatch(e.verb.clone(), "a collostruction".into()).into());
            }
            if !e.collostructions.is_empty() {
                validate_verb_entries(&e.collostructions)?;
            }
        }
        Ok(())
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<(), DbError> {
        for e in &self.entries {
            serde_json::to_writer(&mut out, e).map_err(|source| DbError::Json { line: 0, source })?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_jsonl_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self, DbError> {
        let mut entries = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: VerbEntry =
                serde_json::from_str(&line).map_err(|source| DbError::Json { line: i + 1, source })?;
            if entry.schema_version != SCHEMA_VERSION {
                return Err(DbError::Schema {
                    line: i + 1,
                    found: entry.schema_version,
                });
            }
            entries.push(entry);
        }
        Self::new(entries)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestVerb {
    pub verb: String,
    /// Sampled instances; always `kept + discarded`.
    pub instances: usize,
    /// Instances in sense clusters large enough to mine.
    pub kept: usize,
    /// Instances in undersized sense clusters.
    pub discarded: usize,
    pub sense_clusters: usize,
    /// Clauses that fell out of both clustering passes.
    pub outlier_clauses: usize,
    pub collostructions: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    /// SHA-256 of the canonical configuration text.
    pub config_hash: String,
    pub seed: u64,
    pub verbs: Vec<ManifestVerb>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DbError> {
        serde_json::from_str(text).map_err(|source| DbError::Json { line: 0, source })
    }
}

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
