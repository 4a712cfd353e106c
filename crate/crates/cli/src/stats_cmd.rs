use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Subcommand, ValueEnum};
use collostruct::db::Database;
use collostruct::pipeline::{load_embedding_file, PipelineConfig};
use collostruct::stats::{
    action_sequences, coherence_by_relation, power_law_report, slot_statistics, PairNormalization,
    SememeLexicon,
};

use crate::{open, read_db};

#[derive(Clone, Copy, ValueEnum)]
pub enum Quantity {
    /// Clauses behind each collostruction.
    Support,
    /// Collostructions per verb.
    PerVerb,
    /// Collexemes per slot.
    SlotSize,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Norm {
    Pairs,
    NMinusOne,
}

#[derive(Subcommand)]
pub enum StatsCommand {
    /// Fit a power law and compare it with an exponential.
    Powerlaw {
        /// One positive number per line.
        #[arg(long, conflicts_with = "db")]
        samples: Option<PathBuf>,
        #[arg(long)]
        db: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "support")]
        quantity: Quantity,
        /// Fixed lower cutoff; chosen by KS distance when absent.
        #[arg(long)]
        x_min: Option<f64>,
    },
    /// Slot occurrence per relation.
    Slots {
        #[arg(long)]
        db: PathBuf,
    },
    /// Mean pairwise similarity of collexemes within slots, per relation.
    Coherence {
        #[arg(long)]
        db: PathBuf,
        /// Word vectors; the config's `word_embeddings` when absent.
        #[arg(long)]
        words: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "pairs")]
        norm: Norm,
    },
    /// Most frequent sememes around the focus.
    Actions {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        verb: String,
        /// `word<TAB>sememe,sememe` lines.
        #[arg(long)]
        lexicon: PathBuf,
        /// `sememe<TAB>parent` lines.
        #[arg(long)]
        hypernyms: Option<PathBuf>,
    },
}

fn db_samples(db: &Database, q: Quantity) -> Vec<f64> {
    match q {
        Quantity::Support => db.collostructions().map(|(_, c)| c.support as f64).collect(),
        Quantity::PerVerb => db
            .verbs()
            .filter_map(|v| db.entry(v))
            .map(|e| e.collostructions.len() as f64)
            .filter(|n| *n > 0.0)
            .collect(),
        Quantity::SlotSize => db
            .collostructions()
            .flat_map(|(_, c)| c.slots.iter().filter(|s| !s.key.is_focus()))
            .map(|s| s.collexemes.len() as f64)
            .collect(),
    }
}

fn read_samples(path: &PathBuf) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<f64>()
                .with_context(|| format!("{} line {}: not a number", path.display(), i + 1))
        })
        .collect()
}

pub fn run(cmd: StatsCommand, cfg: &PipelineConfig) -> Result<()> {
    match cmd {
        StatsCommand::Powerlaw {
            samples,
            db,
            quantity,
            x_min,
        } => {
            let data = match (samples, db) {
                (Some(p), _) => read_samples(&p)?,
                (None, Some(db)) => db_samples(&read_db(&db)?, quantity),
                (None, None) => bail!("give --samples or --db"),
            };
            let r = power_law_report(&data, x_min)?;
            println!("x_min\t{}", r.x_min);
            println!("exponent\t{:.4}", r.exponent);
            println!("n_tail\t{}", r.n_tail);
            println!("R\t{:.3}", r.r);
            println!("p\t{:.3E}", r.p);
        }
        StatsCommand::Slots { db } => {
            println!("deprel\toccurrence\tmean_p_slot\tslots");
            for s in slot_statistics(&read_db(&db)?)? {
                println!(
                    "{}\t{:.4}\t{:.4}\t{}",
                    s.deprel, s.occurrence_fraction, s.mean_p_slot, s.slot_count
                );
            }
        }
        StatsCommand::Coherence { db, words, norm } => {
            let path = words
                .or_else(|| cfg.word_embeddings.clone())
                .context("give --words or set word_embeddings")?;
            let store = load_embedding_file(&path)?;
            let norm = match norm {
                Norm::Pairs => PairNormalization::PairCount,
                Norm::NMinusOne => PairNormalization::NMinusOne,
            };
            println!("deprel\tsimilarity\tslots");
            for row in coherence_by_relation(&read_db(&db)?, &store, norm)? {
                println!("{}\t{:.4}\t{}", row.deprel, row.mean_similarity, row.slots);
            }
        }
        StatsCommand::Actions {
            db,
            verb,
            lexicon,
            hypernyms,
        } => {
            let mut lex = SememeLexicon::from_reader(open(&lexicon)?)?;
            if let Some(h) = hypernyms {
                lex = lex.with_hypernyms(open(&h)?)?;
            }
            for row in action_sequences(&read_db(&db)?, &verb, &lex)? {
                println!("{row}");
            }
        }
    }
    Ok(())
}
