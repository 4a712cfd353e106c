use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use collostruct::ingest::{
    cosine, fallback_embed, load_embeddings, parse_conllu, parse_conllu_str, DependencyTree, IngestError, Token,
};
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn fixture_file_keeps_ids_and_structure() {
    let trees = parse_conllu(BufReader::new(File::open(fixture("three_sentences.conllu")).unwrap())).unwrap();
    let ids: Vec<&str> = trees.iter().map(|t| t.sent_id()).collect();
    assert_eq!(ids, ["t1", "t2", "t3"]);
    assert_eq!(trees[1].root().form, "想");
    assert_eq!(trees[1].token(5).unwrap().deprel, "dobj");
    let kids: Vec<&str> = trees[1].children(3).map(|t| t.form.as_str()).collect();
    assert_eq!(kids, ["生活"]);
    // The multiword range line is skipped and an empty lemma falls back to the form.
    assert_eq!(trees[2].len(), 3);
    assert_eq!(trees[2].token(3).unwrap().lemma, "结婚");
    assert_eq!(trees[2].text(), "他们明年结婚");
}

#[test]
fn two_token_sentence() {
    let trees = parse_conllu_str("1\t他\t他\tPRON\t_\t_\t2\tnsubj\t_\t_\n2\t走\t走\tVERB\t_\t_\t0\troot\t_\t_\n").unwrap();
    assert_eq!(trees.len(), 1);
    assert_eq!(trees[0].root().id, 2);
}

#[test]
fn malformed_input_is_rejected() {
    let self_loop = "1\t他\t他\tPRON\t_\t_\t1\tnsubj\t_\t_\n2\t走\t走\tVERB\t_\t_\t0\troot\t_\t_\n";
    assert!(matches!(parse_conllu_str(self_loop), Err(IngestError::Validation { .. })));
    let two_roots = "1\t他\t他\tPRON\t_\t_\t0\troot\t_\t_\n2\t走\t走\tVERB\t_\t_\t0\troot\t_\t_\n";
    assert!(matches!(parse_conllu_str(two_roots), Err(IngestError::Validation { .. })));
    let short_row = "1\t他\t他\n";
    assert!(matches!(parse_conllu_str(short_row), Err(IngestError::Parse { line: 1, .. })));
}

#[test]
fn embedding_file_format() {
    let store = load_embeddings("dim 4\ns1\t2 0 0 0\n".as_bytes(), Some(4)).unwrap();
    assert_eq!(store.len(), 1);
    assert_eq!(store.get("s1").unwrap(), &[1.0, 0.0, 0.0, 0.0]);
    assert!(load_embeddings("dim 4\ns1\t1 0 0\n".as_bytes(), Some(4)).is_err());
    assert!(load_embeddings("dim 4\ns1\t1 0 0 0\n".as_bytes(), Some(3)).is_err());
    assert!(load_embeddings("dim 2\ns1\t1 0\ns1\t0 1\n".as_bytes(), None).is_err());
    assert!(load_embeddings("dim 2\ns1\t0 0\n".as_bytes(), None).is_err());
}

#[test]
fn cosine_and_fallback() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((cosine(&[1.0, 0.0], &[h, h]).unwrap() - h).abs() < 1e-12);
    assert_eq!(cosine(&[1.0, 0.0], &[0.0, 3.0]).unwrap(), 0.0);
    assert!(cosine(&[0.0, 0.0], &[1.0, 0.0]).is_err());
    assert_eq!(fallback_embed("体验", 64).unwrap(), fallback_embed("体验", 64).unwrap());
    assert!(fallback_embed("", 64).is_err());
    let (a, b) = (fallback_embed("abc", 64).unwrap(), fallback_embed("xyz", 64).unwrap());
    assert!(cosine(&a, &b).unwrap() < 1.0);
}

/// Random single-rooted tree: tokens are attached in a random order, each
/// to a token attached before it.
fn random_tree() -> impl Strategy<Value = DependencyTree> {
    (1usize..9)
        .prop_flat_map(|n| (Just(n), Just((1..=n).collect::<Vec<usize>>()).prop_shuffle(), proptest::collection::vec(any::<usize>(), n)))
        .prop_map(|(n, order, picks)| {
            let mut head = vec![0; n + 1];
            for k in 1..n {
                head[order[k]] = order[picks[k] % k];
            }
            let words = ["他", "走", "书", "了", "看", "我们"];
            let tokens = (1..=n)
                .map(|id| Token {
                    id,
                    form: words[id % words.len()].to_string(),
                    lemma: words[id % words.len()].to_string(),
                    upos: if head[id] == 0 { "VERB".into() } else { "NOUN".into() },
                    xpos: "_".into(),
                    head: head[id],
                    deprel: if head[id] == 0 { "root".into() } else { "dep".into() },
                })
                .collect();
            DependencyTree::new("p1", "文本", tokens).unwrap()
        })
}

proptest! {
    #[test]
    fn conllu_round_trip(tree in random_tree()) {
        let again = parse_conllu_str(&tree.to_conllu()).unwrap();
        prop_assert_eq!(again, vec![tree]);
    }

    #[test]
    fn loaded_vectors_are_unit_length(values in proptest::collection::vec(-100.0f64..100.0, 3)) {
        prop_assume!(values.iter().any(|v| v.abs() > 1e-3));
        let line = values.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
        let store = load_embeddings(format!("dim 3\nx\t{line}\n").as_bytes(), Some(3)).unwrap();
        let norm: f64 = store.get("x").unwrap().iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() <= 1e-6);
    }
}
