//! CoNLL-U reading and writing.
//!
//! Only the basic dependency layer is kept: `ID FORM LEMMA UPOS XPOS HEAD
//! DEPREL`. Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are
//! skipped, and the enhanced `DEPS` column is ignored.

use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::IngestError;

/// One syntactic word of a parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the sentence.
    pub id: usize,
    pub form: String,
    /// Equal to `form` when the corpus leaves the column empty.
    pub lemma: String,
    /// Universal part-of-speech tag.
    pub upos: String,
    /// Language-specific tag, `_` when absent.
    pub xpos: String,
    /// Governor id, 0 for the root.
    pub head: usize,
    /// Lower-cased relation label.
    pub deprel: String,
}

impl Token {
    /// The coarse tag used for predicates: UPOS, or XPOS when UPOS is empty.
    pub fn pos(&self) -> &str {
        if self.upos == "_" || self.upos.is_empty() {
            &self.xpos
        } else {
            &self.upos
        }
    }
}

/// A validated single-rooted dependency tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyTree {
    sent_id: String,
    text: String,
    tokens: Vec<Token>,
}

impl DependencyTree {
    /// Builds a tree, checking that ids are contiguous from 1, that every head
    /// exists, that there is exactly one root and that head links are acyclic.
    pub fn new(
        sent_id: impl Into<String>,
        text: impl Into<String>,
        mut tokens: Vec<Token>,
    ) -> Result<Self, IngestError> {
        let sent_id = sent_id.into();
        let invalid = |message: String| IngestError::Validation {
            sent_id: sent_id.clone(),
            message,
        };
        if tokens.is_empty() {
            return Err(invalid("sentence has no tokens".into()));
        }
        let n = tokens.len();
        for (i, tok) in tokens.iter_mut().enumerate() {
            if tok.id != i + 1 {
                return Err(invalid(format!(
                    "token ids must be contiguous from 1, found {} at position {}",
                    tok.id,
                    i + 1
                )));
            }
            if tok.head > n {
                return Err(invalid(format!(
                    "token {} has head {} outside the sentence",
                    tok.id, tok.head
                )));
            }
            if tok.deprel.is_empty() || tok.deprel == "_" {
                return Err(invalid(format!("token {} has no relation label", tok.id)));
            }
            tok.deprel = tok.deprel.to_lowercase();
        }
        let roots: Vec<usize> = tokens.iter().filter(|t| t.head == 0).map(|t| t.id).collect();
        if roots.len() != 1 {
            return Err(invalid(format!("expected exactly one root, found {}", roots.len())));
        }
        // Every token must reach the root within n steps.
        for tok in &tokens {
            let mut cur = tok.id;
            let mut steps = 0;
            while cur != 0 {
                cur = tokens[cur - 1].head;
                steps += 1;
                if steps > n {
                    return Err(invalid(format!("head links of token {} form a cycle", tok.id)));
                }
            }
        }
        Ok(Self {
            sent_id,
            text: text.into(),
            tokens,
        })
    }

    pub fn sent_id(&self) -> &str {
        &self.sent_id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn root(&self) -> &Token {
        self.tokens
            .iter()
            .find(|t| t.head == 0)
            .expect("validated tree has a root")
    }

    /// The governor of `id`, or `None` for the root.
    pub fn governor(&self, id: usize) -> Option<&Token> {
        self.token(id).and_then(|t| self.token(t.head))
    }

    /// Direct dependents of `id` in linear order.
    pub fn children(&self, id: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == id && id != 0)
    }

    /// Serializes back to CoNLL-U, one block terminated by a blank line.
    pub fn to_conllu(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# sent_id = {}", self.sent_id);
        let _ = writeln!(out, "# text = {}", self.text);
        for t in &self.tokens {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t_\t{}\t{}\t_\t_",
                t.id, t.form, t.lemma, t.upos, t.xpos, t.head, t.deprel
            );
        }
        out.push('\n');
        out
    }
}

struct Block {
    first_line: usize,
    sent_id: Option<String>,
    text: Option<String>,
    tokens: Vec<Token>,
}

impl Block {
    fn new(first_line: usize) -> Self {
        Self {
            first_line,
            sent_id: None,
            text: None,
            tokens: Vec::new(),
        }
    }

    fn finish(self, ordinal: usize) -> Result<DependencyTree, IngestError> {
        let sent_id = self
            .sent_id
            .unwrap_or_else(|| format!("s{ordinal}"));
        let text = self.text.unwrap_or_else(|| {
            self.tokens
                .iter()
                .map(|t| t.form.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        });
        if self.tokens.is_empty() {
            return Err(IngestError::Parse {
                line: self.first_line,
                message: format!("sentence {sent_id} has metadata but no tokens"),
            });
        }
        DependencyTree::new(sent_id, text, self.tokens)
    }
}

/// Parses every sentence block of a CoNLL-U stream.
pub fn parse_conllu<R: BufRead>(reader: R) -> Result<Vec<DependencyTree>, IngestError> {
    let mut trees = Vec::new();
    let mut block: Option<Block> = None;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if let Some(b) = block.take() {
                trees.push(b.finish(trees.len() + 1)?);
            }
            continue;
        }
        let b = block.get_or_insert_with(|| Block::new(lineno));
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                match key.trim() {
                    "sent_id" => b.sent_id = Some(value.trim().to_string()),
                    "text" => b.text = Some(value.trim().to_string()),
                    _ => {}
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(IngestError::Parse {
                line: lineno,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let parse_num = |s: &str, what: &str| {
            s.parse::<usize>().map_err(|_| IngestError::Parse {
                line: lineno,
                message: format!("invalid {what} {s:?}"),
            })
        };
        let id = parse_num(cols[0], "token id")?;
        let head = parse_num(cols[6], "head")?;
        let form = cols[1].to_string();
        let lemma = if cols[2] == "_" && form != "_" {
            form.clone()
        } else {
            cols[2].to_string()
        };
        b.tokens.push(Token {
            id,
            form,
            lemma,
            upos: cols[3].to_string(),
            xpos: cols[4].to_string(),
            head,
            deprel: cols[7].to_lowercase(),
        });
    }
    if let Some(b) = block.take() {
        trees.push(b.finish(trees.len() + 1)?);
    }
    Ok(trees)
}

/// Convenience wrapper over [`parse_conllu`] for in-memory text.
pub fn parse_conllu_str(text: &str) -> Result<Vec<DependencyTree>, IngestError> {
    parse_conllu(text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TOKENS: &str = "# sent_id = a1\n# text = 他走\n\
1\t他\t他\tPRON\tPN\t_\t2\tnsubj\t_\t_\n\
2\t走\t走\tVERB\tVV\t_\t0\troot\t_\t_\n\n";

    #[test]
    fn minimal_sentence() {
        let trees = parse_conllu_str(TWO_TOKENS).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].root().id, 2);
        assert_eq!(trees[0].sent_id(), "a1");
        assert_eq!(trees[0].children(2).map(|t| t.id).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn self_loop_is_rejected() {
        let src = "# sent_id = bad\n1\t他\t他\tPRON\t_\t_\t1\tnsubj\t_\t_\n\
2\t走\t走\tVERB\t_\t_\t0\troot\t_\t_\n\n";
        match parse_conllu_str(src) {
            Err(IngestError::Validation { sent_id, message }) => {
                assert_eq!(sent_id, "bad");
                assert!(message.contains("cycle"), "{message}");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn two_roots_rejected() {
        let src = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t_\t0\troot\t_\t_\n";
        assert!(matches!(
            parse_conllu_str(src),
            Err(IngestError::Validation { .. })
        ));
    }

    #[test]
    fn column_count_reports_line() {
        let src = "# sent_id = x\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\n";
        match parse_conllu_str(src) {
            Err(IngestError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn multiword_and_empty_nodes_skipped() {
        let src = "1-2\tvámonos\t_\t_\t_\t_\t_\t_\t_\t_\n\
1\tvamos\tir\tVERB\t_\t_\t0\troot\t_\t_\n\
2\tnos\tnosotros\tPRON\t_\t_\t1\tobj\t_\t_\n\
2.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n\n";
        let trees = parse_conllu_str(src).unwrap();
        assert_eq!(trees[0].len(), 2);
        assert_eq!(trees[0].sent_id(), "s1");
    }

    #[test]
    fn deprel_lowercased_and_lemma_defaults_to_form() {
        let src = "1\tA\t_\tNOUN\t_\t_\t2\tNSUBJ\t_\t_\n2\tB\tb\tVERB\t_\t_\t0\tROOT\t_\t_\n";
        let t = &parse_conllu_str(src).unwrap()[0];
        assert_eq!(t.token(1).unwrap().deprel, "nsubj");
        assert_eq!(t.token(1).unwrap().lemma, "A");
    }

    #[test]
    fn round_trip() {
        let trees = parse_conllu_str(TWO_TOKENS).unwrap();
        let again = parse_conllu_str(&trees[0].to_conllu()).unwrap();
        assert_eq!(trees, again);
    }
}
