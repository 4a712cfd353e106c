mod ged_cmd;
mod stats_cmd;

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use collostruct::clause::{classify_edge, retrieve_clause};
use collostruct::db::Database;
use collostruct::ingest::parse_conllu;
use collostruct::pipeline::{self, PipelineConfig, PipelineError, QueryFilter};

#[derive(Parser)]
#[command(name = "collostruct", version, about = "Mine, analyse and apply verb collostructions")]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Overrides any configuration key, e.g. `--set min_pts=4`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine collostructions and write the database plus a manifest.
    Mine {
        /// Database output (JSON lines).
        #[arg(long)]
        out: PathBuf,
        /// Manifest output; defaults to `<out>.manifest.json`.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// List a verb's collostructions by typicality.
    Query {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        verb: String,
        /// Only collostructions with a slot of this relation.
        #[arg(long)]
        deprel: Option<String>,
        /// Only collostructions with a collexeme containing this text.
        #[arg(long)]
        collexeme: Option<String>,
        /// Collexemes shown per slot.
        #[arg(long, default_value_t = 3)]
        show: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the clause structure around a verb token.
    Clause {
        /// CoNLL-U file.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        sent_id: String,
        /// Target token id; defaults to the first token matching `--verb`.
        #[arg(long)]
        token: Option<usize>,
        #[arg(long)]
        verb: Option<String>,
    },
    /// Statistical analyses of a database.
    #[command(subcommand)]
    Stats(stats_cmd::StatsCommand),
    /// Verb-usage error detection.
    #[command(subcommand)]
    Ged(ged_cmd::GedCommand),
}

/// An internal consistency check failed; exits with status 2.
#[derive(Debug)]
pub struct Invariant(pub String);

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant violated: {}", self.0)
    }
}

impl std::error::Error for Invariant {}

fn exit_code(err: &anyhow::Error) -> u8 {
    let invariant = err.chain().any(|e| {
        e.downcast_ref::<Invariant>().is_some()
            || e.downcast_ref::<PipelineError>().is_some_and(PipelineError::is_invariant)
    });
    if invariant {
        2
    } else {
        1
    }
}

/// Output cut short by a closed pipe (`| head`) is not a failure.
fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain()
        .filter_map(|e| e.downcast_ref::<std::io::Error>())
        .any(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
}

fn load_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(p) => PipelineConfig::from_file(p)?,
        None => PipelineConfig::default(),
    };
    for kv in &cli.overrides {
        let (k, v) = kv
            .split_once('=')
            .with_context(|| format!("--set expects KEY=VALUE, got {kv:?}"))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        cfg.jobs = jobs;
    }
    Ok(cfg)
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub(crate) fn read_db(path: &Path) -> Result<Database> {
    Database::read_jsonl(open(path)?).with_context(|| format!("reading {}", path.display()))
}

fn run_mine(cfg: &PipelineConfig, out: &Path, manifest: Option<&Path>) -> Result<()> {
    let result = pipeline::mine(cfg)?;
    let mut w = create(out)?;
    result.database.write_jsonl(&mut w)?;
    w.flush()?;
    let manifest_path = manifest.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut p = out.as_os_str().to_owned();
        p.push(".manifest.json");
        PathBuf::from(p)
    });
    std::fs::write(&manifest_path, result.manifest.to_json())
        .with_context(|| format!("cannot write {}", manifest_path.display()))?;
    for v in &result.manifest.verbs {
        println!(
            "{}\tinstances {}\tkept {}\tsense clusters {}\tcollostructions {}",
            v.verb, v.instances, v.kept, v.sense_clusters, v.collostructions
        );
        for w in &v.warnings {
            log::warn!("{}: {w}", v.verb);
        }
    }
    Ok(())
}

fn run_query(db: &Path, verb: &str, filter: &QueryFilter, show: usize, json: bool) -> Result<()> {
    let db = read_db(db)?;
    let rows = pipeline::query(&db, verb, filter)?;
    let mut out = std::io::stdout().lock();
    for (id, c) in rows {
        if json {
            writeln!(out, "{}", serde_json::to_string(c)?)?;
        } else {
            writeln!(out, "{id}\t{:.4}\t{}\t{}", c.p_col, c.support, c.render(show))?;
        }
    }
    Ok(())
}

fn run_clause(cfg: &PipelineConfig, corpus: &Path, sent_id: &str, token: Option<usize>, verb: Option<&str>) -> Result<()> {
    let trees = parse_conllu(open(corpus)?)?;
    let tree = trees
        .iter()
        .find(|t| t.sent_id() == sent_id)
        .with_context(|| format!("no sentence {sent_id:?} in {}", corpus.display()))?;
    let target = match (token, verb) {
        (Some(id), _) => id,
        (None, Some(v)) => tree
            .tokens()
            .iter()
            .find(|t| cfg.clause.word_key.of(t) == v && cfg.clause.is_verb(t))
            .map(|t| t.id)
            .with_context(|| format!("no verb token {v:?} in {sent_id}"))?,
        (None, None) => bail!("give --token or --verb"),
    };
    let clause = retrieve_clause(tree, target, &cfg.clause)?;
    println!("strategy\t{}", clause.strategy.number());
    println!("clause\t{}", clause.to_tsv());
    for n in clause.nodes_in_order() {
        match classify_edge(&clause, n) {
            Ok(cat) => println!("{}\t{n}\t{cat}", n.token_id),
            Err(_) => println!("{}\t{n}\tFOCUS", n.token_id),
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli)?;
    match cli.command {
        Command::Mine { out, manifest } => run_mine(&cfg, &out, manifest.as_deref()),
        Command::Query {
            db,
            verb,
            deprel,
            collexeme,
            show,
            json,
        } => run_query(&db, &verb, &QueryFilter { deprel, collexeme }, show, json),
        Command::Clause {
            corpus,
            sent_id,
            token,
            verb,
        } => run_clause(&cfg, &corpus, &sent_id, token, verb.as_deref()),
        Command::Stats(cmd) => stats_cmd::run(cmd, &cfg),
        Command::Ged(cmd) => ged_cmd::run(cmd, &cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
