use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Subcommand;
use collostruct::db::Database;
use collostruct::ged::{
    classify, evaluate, load_dataset, train, ClassifierParams, CollostructionIndex, Detection,
    Detector, FeatureVector, GedInstance, Hyper, Label,
};
use collostruct::ingest::{parse_conllu, DependencyTree};
use collostruct::pipeline::PipelineConfig;
use collostruct::wordsim::WordSimSource;

use crate::{create, open, read_db, Invariant};

/// Database, labelled instances and their parses.
#[derive(clap::Args)]
pub struct DataArgs {
    #[arg(long)]
    db: PathBuf,
    /// Instances, one JSON object per line.
    #[arg(long)]
    data: PathBuf,
    /// CoNLL-U parses whose sent_id equals the instance id.
    #[arg(long)]
    parses: PathBuf,
}

#[derive(Subcommand)]
pub enum GedCommand {
    /// Dump the pattern index as `category<TAB>unit<TAB>ids`.
    Index {
        #[arg(long)]
        db: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train the classifier and save it as JSON. `--seed` sets its seed.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        epochs: usize,
        #[arg(long, default_value_t = 1e-3)]
        lr: f64,
        #[arg(long, default_value_t = 32)]
        batch: usize,
        #[arg(long, default_value_t = 50)]
        resample_every: usize,
    },
    /// Evaluate a trained classifier.
    Eval {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        model: PathBuf,
        /// Row label in the report.
        #[arg(long, default_value = "collostruct")]
        system: String,
    },
    /// Judge one verb occurrence in a parsed sentence.
    Check {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// CoNLL-U file holding the parsed sentence.
        #[arg(long)]
        sentence: PathBuf,
        /// Sentence to use when the file holds several; the first otherwise.
        #[arg(long)]
        sent_id: Option<String>,
        #[arg(long)]
        verb: String,
    },
    /// Feature table for external analysis, one instance per line.
    DumpFeatures {
        #[command(flatten)]
        data: DataArgs,
    },
}

struct Loaded {
    db: Database,
    index: CollostructionIndex,
    word_sim: WordSimSource,
}

impl Loaded {
    fn new(db: &Path, cfg: &PipelineConfig) -> Result<Self> {
        let db = read_db(db)?;
        let index = CollostructionIndex::build(&db);
        Ok(Self {
            db,
            index,
            word_sim: cfg.word_similarity()?,
        })
    }

    fn detector<'a>(&'a self, cfg: &PipelineConfig) -> Detector<'a, WordSimSource> {
        Detector {
            db: &self.db,
            index: &self.index,
            weights: cfg.weights,
            params: cfg.match_params,
            word_sim: &self.word_sim,
            clause_options: cfg.clause.clone(),
        }
    }
}

fn load_parses(path: &Path) -> Result<HashMap<String, DependencyTree>> {
    let trees = parse_conllu(open(path)?).with_context(|| format!("reading {}", path.display()))?;
    Ok(trees.into_iter().map(|t| (t.sent_id().to_string(), t)).collect())
}

/// Instances with their detections; instances that cannot be matched at all
/// (missing parse, verb not found) are skipped with a warning.
fn detect_data(args: &DataArgs, cfg: &PipelineConfig) -> Result<(Vec<GedInstance>, Vec<Detection>)> {
    let loaded = Loaded::new(&args.db, cfg)?;
    let instances = load_dataset(open(&args.data)?).with_context(|| format!("reading {}", args.data.display()))?;
    let parses = load_parses(&args.parses)?;
    let detector = loaded.detector(cfg);
    let results = detector.detect_all(&instances, &parses);
    let mut kept = Vec::new();
    let mut detections = Vec::new();
    for (inst, det) in instances.into_iter().zip(results) {
        match det {
            Ok(d) => {
                kept.push(inst);
                detections.push(d);
            }
            Err(e) => log::warn!("{e}"),
        }
    }
    Ok((kept, detections))
}

fn read_model(path: &Path) -> Result<ClassifierParams> {
    serde_json::from_reader(open(path)?).with_context(|| format!("reading model {}", path.display()))
}

pub fn run(cmd: GedCommand, cfg: &PipelineConfig) -> Result<()> {
    match cmd {
        GedCommand::Index { db, out } => {
            let tsv = CollostructionIndex::build(&read_db(&db)?).to_tsv();
            match out {
                Some(p) => std::fs::write(&p, tsv).with_context(|| format!("cannot write {}", p.display()))?,
                None => print!("{tsv}"),
            }
        }
        GedCommand::Train {
            data,
            out,
            epochs,
            lr,
            batch,
            resample_every,
        } => {
            let (instances, detections) = detect_data(&data, cfg)?;
            let examples: Vec<(FeatureVector, Label)> = instances
                .iter()
                .zip(detections)
                .filter_map(|(i, d)| d.features.map(|f| (f, i.label)))
                .collect();
            let hyper = Hyper {
                epochs,
                batch_size: batch,
                learning_rate: lr,
                resample_every,
                seed: cfg.seed,
            };
            let (params, report) = train(&examples, &hyper)?;
            let mut w = create(&out)?;
            serde_json::to_writer(&mut w, &params)?;
            w.flush()?;
            println!("instances\t{}", examples.len());
            if let Some(loss) = report.losses.last() {
                println!("final_loss\t{loss:.5}");
            }
            for (epoch, pair) in report.sample_hashes.windows(2).enumerate() {
                if pair[0] != pair[1] {
                    println!("resampled\tepoch {}\t{:016x}", epoch + 1, pair[1]);
                }
            }
        }
        GedCommand::Eval { data, model, system } => {
            let params = read_model(&model)?;
            let (instances, detections) = detect_data(&data, cfg)?;
            let predicted: Vec<Label> = detections
                .iter()
                .map(|d| classify(d.features.as_ref(), &params).label)
                .collect();
            let gold: Vec<Label> = instances.iter().map(|i| i.label).collect();
            if predicted.len() != gold.len() {
                return Err(Invariant(format!("{} predictions for {} instances", predicted.len(), gold.len())).into());
            }
            print!("{}", evaluate(&predicted, &gold)?.report(&system));
        }
        GedCommand::Check {
            db,
            model,
            sentence,
            sent_id,
            verb,
        } => {
            let params = read_model(&model)?;
            let loaded = Loaded::new(&db, cfg)?;
            let trees = parse_conllu(open(&sentence)?)?;
            let tree = match &sent_id {
                Some(id) => trees.iter().find(|t| t.sent_id() == id),
                None => trees.first(),
            }
            .context("no matching sentence in the file")?;
            let target = tree
                .tokens()
                .iter()
                .find(|t| cfg.clause.word_key.of(t) == verb && cfg.clause.is_verb(t))
                .with_context(|| format!("no verb token {verb:?} in {}", tree.sent_id()))?;
            let clause = collostruct::clause::retrieve_clause(tree, target.id, &cfg.clause)?;
            let det = loaded.detector(cfg).detect_clause(clause)?;
            println!("clause\t{}", det.clause.to_tsv());
            println!("candidates\t{:?}", det.candidates);
            if let Some(top) = &det.top {
                let col = loaded.db.get(top.id).ok_or_else(|| Invariant(format!("missing id {}", top.id)))?;
                println!("top\t{}\t{}", top.id, col.render(3));
                println!("score\t{:.4}", top.score.combined);
            }
            if let Some(f) = &det.features {
                println!("features\t{}", f.to_tsv());
            }
            let v = classify(det.features.as_ref(), &params);
            let label = match v.label {
                Label::Correct => "correct",
                Label::Error => "error",
            };
            println!("verdict\t{label}\tC={:.4}\tE={:.4}{}", v.c_prob, v.e_prob, if v.from_prior { "\tprior" } else { "" });
        }
        GedCommand::DumpFeatures { data } => {
            let (instances, detections) = detect_data(&data, cfg)?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "id\tlabel\ttop\tcore_dep_col\tdeps_col\tcore_dep_cls\tdeps_cls")?;
            for (inst, d) in instances.iter().zip(&detections) {
                let label = serde_json::to_value(inst.label)?;
                let top = d.top.as_ref().map(|t| t.id.to_string()).unwrap_or_else(|| "-".into());
                let feats = d.features.as_ref().map(FeatureVector::to_tsv).unwrap_or_else(|| "-\t-\t-\t-".into());
                writeln!(out, "{}\t{}\t{top}\t{feats}", inst.id, label.as_str().unwrap_or("?"))?;
            }
        }
    }
    Ok(())
}
