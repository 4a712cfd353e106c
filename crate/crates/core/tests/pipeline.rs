use std::path::PathBuf;

use collostruct::colgen::validate_verb_entries;
use collostruct::pipeline::{mine, query, PipelineConfig, QueryFilter};

fn fixture_config() -> PipelineConfig {
    let mut cfg = PipelineConfig::default();
    cfg.corpus = vec![PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mini_corpus.conllu")];
    cfg.verbs = vec!["体验".into(), "结婚".into(), "飞翔".into()];
    cfg.seed = 11;
    cfg
}

#[test]
fn mines_both_fixture_verbs() {
    let out = mine(&fixture_config()).unwrap();
    for v in ["体验", "结婚"] {
        let entry = out.database.entry(v).unwrap();
        assert!(!entry.collostructions.is_empty(), "{v}");
        validate_verb_entries(&entry.collostructions).unwrap();
        for c in &entry.collostructions {
            eprintln!("{v} p_col={:.3} {}", c.p_col, c.render(3));
        }
    }
    for m in &out.manifest.verbs {
        assert_eq!(m.instances, m.kept + m.discarded);
        eprintln!("{m:?}");
    }
    let absent = out.manifest.verbs.iter().find(|m| m.verb == "飞翔").unwrap();
    assert_eq!(absent.instances, 0);
    assert!(!absent.warnings.is_empty());
    assert!(out.database.entry("飞翔").unwrap().collostructions.is_empty());
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = fixture_config();
    let a = mine(&cfg).unwrap();
    let mut cfg2 = cfg.clone();
    cfg2.jobs = 2;
    let b = mine(&cfg2).unwrap();
    assert_eq!(a.database.to_jsonl_string(), b.database.to_jsonl_string());
    assert_eq!(a.manifest.to_json(), b.manifest.to_json());
}

#[test]
fn query_sorts_and_filters() {
    let out = mine(&fixture_config()).unwrap();
    let all = query(&out.database, "体验", &QueryFilter::default()).unwrap();
    let mut expected: Vec<f64> = all.iter().map(|(_, c)| c.p_col).collect();
    expected.sort_by(|a, b| b.total_cmp(a));
    assert_eq!(all.iter().map(|(_, c)| c.p_col).collect::<Vec<_>>(), expected);
    let dobj = QueryFilter {
        deprel: Some("dobj".into()),
        ..Default::default()
    };
    for (_, c) in query(&out.database, "体验", &dobj).unwrap() {
        assert!(c.slots.iter().any(|s| s.key.deprel == "dobj"));
    }
    assert!(query(&out.database, "没有", &QueryFilter::default()).is_err());
}
