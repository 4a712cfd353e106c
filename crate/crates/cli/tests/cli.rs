use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collostruct"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn mine_into(dir: &std::path::Path, seed: &str) -> PathBuf {
    let corpus = fixture("mini_corpus.conllu");
    let db = dir.join(format!("db{seed}.jsonl"));
    let o = run(&[
        "--seed",
        seed,
        "--set",
        &format!("corpus={}", corpus.display()),
        "--set",
        "verbs=体验,结婚",
        "mine",
        "--out",
        db.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    db
}

#[test]
fn mine_then_query() {
    let dir = tempfile::tempdir().unwrap();
    let db = mine_into(dir.path(), "5");
    let manifest = std::fs::read_to_string(format!("{}.manifest.json", db.display())).unwrap();
    assert!(manifest.contains("\"config_hash\""));

    let o = run(&["query", "--db", db.to_str().unwrap(), "--verb", "结婚"]);
    assert!(o.status.success());
    let p_cols: Vec<f64> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(!p_cols.is_empty());
    assert!(p_cols.windows(2).all(|w| w[0] >= w[1]));

    let o = run(&["query", "--db", db.to_str().unwrap(), "--verb", "体验", "--deprel", "xcomp"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.contains("xcomp")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let db = mine_into(dir.path(), "1");
    let o = run(&["query", "--db", db.to_str().unwrap(), "--verb", "没有"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["query", "--db", "/no/such/file", "--verb", "x"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--set", "bogus=1", "stats", "slots", "--db", db.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mine.conf");
    std::fs::write(
        &cfg,
        format!("corpus = {}\nverbs = 结婚\nmin_pts = 3\n", fixture("mini_corpus.conllu").display()),
    )
    .unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for (out, jobs) in [(&a, "1"), (&b, "2")] {
        let o = run(&["--config", cfg.to_str().unwrap(), "--jobs", jobs, "mine", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn ged_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let db = mine_into(dir.path(), "2");
    let model = dir.path().join("model.json");
    let data = fixture("ged_data.jsonl");
    let parses = fixture("ged_parses.conllu");
    let common = [
        "--db",
        db.to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
        "--parses",
        parses.to_str().unwrap(),
    ];
    let mut train = vec!["--seed", "4", "ged", "train", "--epochs", "60", "--out", model.to_str().unwrap()];
    train.extend(common);
    let o = run(&train);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // Balanced classes: every redraw takes all error items, so no resample line.
    assert!(stdout(&o).contains("instances\t40"));
    assert!(!stdout(&o).contains("resampled"));

    let mut eval = vec!["ged", "eval", "--model", model.to_str().unwrap()];
    eval.extend(common);
    let o = run(&eval);
    assert!(o.status.success());
    let report = stdout(&o);
    assert!(report.contains("Accuracy\tPrecision\tRecall\tF-score"));
    assert_eq!(report.lines().count(), 3);

    let o = run(&[
        "ged",
        "check",
        "--db",
        db.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
        "--sentence",
        parses.to_str().unwrap(),
        "--sent-id",
        "g002",
        "--verb",
        "结婚",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("verdict\t"));

    let mut dump = vec!["ged", "dump-features"];
    dump.extend(common);
    let o = run(&dump);
    assert_eq!(stdout(&o).lines().count(), 41);

    let o = run(&["ged", "index", "--db", db.to_str().unwrap()]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("BiDep\t")));
}

#[test]
fn clause_and_stats() {
    let corpus = fixture("mini_corpus.conllu");
    let o = run(&["clause", "--corpus", corpus.to_str().unwrap(), "--sent-id", "f001", "--verb", "体验"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("*root(ROOT,体验)"));

    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.txt");
    let text: String = (1..=40).map(|i| format!("{}\n", 1.0 / (i as f64 / 41.0).powf(1.0 / 1.5))).collect();
    std::fs::write(&samples, text).unwrap();
    let o = run(&["stats", "powerlaw", "--samples", samples.to_str().unwrap(), "--x-min", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("exponent\t"));
}
