//! Error-detection instances: one JSON object per line.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::clause::ClauseOptions;
use crate::ingest::DependencyTree;

use super::GedError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Correct,
    Error,
}

impl Label {
    /// Output index: 0 for correct, 1 for error.
    pub fn index(self) -> usize {
        match self {
            Label::Correct => 0,
            Label::Error => 1,
        }
    }
}

/// One labelled verb occurrence. Offsets count characters from 0, end
/// exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GedInstance {
    /// Links the instance to its parse (`sent_id`); defaults to `g<line>`.
    #[serde(default)]
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<String>,
    pub verb: String,
    #[serde(rename = "begin-offset")]
    pub begin_offset: usize,
    #[serde(rename = "end-offset")]
    pub end_offset: usize,
    pub label: Label,
}

impl GedInstance {
    fn check(&self) -> Result<(), String> {
        let len = self.text.chars().count();
        if self.begin_offset >= self.end_offset || self.end_offset > len {
            return Err(format!(
                "offsets {}..{} outside text of {len} characters",
                self.begin_offset, self.end_offset
            ));
        }
        if self.verb.is_empty() {
            return Err("empty verb".into());
        }
        Ok(())
    }

    /// The characters between the offsets.
    pub fn span(&self) -> String {
        self.text
            .chars()
            .skip(self.begin_offset)
            .take(self.end_offset - self.begin_offset)
            .collect()
    }
}

pub fn load_dataset<R: BufRead>(input: R) -> Result<Vec<GedInstance>, GedError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| GedError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut inst: GedInstance = serde_json::from_str(&line).map_err(|e| GedError::Dataset {
            line: i + 1,
            message: e.to_string(),
        })?;
        if inst.id.is_empty() {
            inst.id = format!("g{}", i + 1);
        }
        inst.check().map_err(|message| GedError::Dataset { line: i + 1, message })?;
        out.push(inst);
    }
    Ok(out)
}

/// Finds the target verb token in the instance's parse: the verb token whose
/// character span overlaps the offsets, else the first verb token whose
/// lemma or form equals the verb.
pub fn locate_target(inst: &GedInstance, tree: &DependencyTree, opts: &ClauseOptions) -> Result<usize, GedError> {
    let chars: Vec<char> = inst.text.chars().collect();
    let mut cursor = 0;
    for tok in tree.tokens() {
        let form: Vec<char> = tok.form.chars().collect();
        let found = (cursor..=chars.len().saturating_sub(form.len()))
            .find(|&s| !form.is_empty() && chars[s..s + form.len()] == form[..]);
        let Some(start) = found else { continue };
        let end = start + form.len();
        cursor = end;
        if start < inst.end_offset && inst.begin_offset < end && opts.is_verb(tok) {
            return Ok(tok.id);
        }
    }
    tree.tokens()
        .iter()
        .find(|t| opts.is_verb(t) && (t.lemma == inst.verb || t.form == inst.verb))
        .map(|t| t.id)
        .ok_or_else(|| GedError::Target {
            id: inst.id.clone(),
            message: format!("no verb token for {:?}", inst.verb),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = r#"{"text":"上女子中学的人，大学毕业后会发生不知道怎么男性交往。","correction":"上女子中学的人，大学毕业后会不知道怎么跟男性交往。","verb":"交往","begin-offset":23,"end-offset":25,"label":"error"}"#;

    #[test]
    fn example_record() {
        let v = load_dataset(LINE.as_bytes()).unwrap();
        assert_eq!(v[0].id, "g1");
        assert_eq!(v[0].span(), "交往");
        assert_eq!(v[0].label, Label::Error);
    }

    #[test]
    fn bad_offsets() {
        let bad = LINE.replace("\"end-offset\":25", "\"end-offset\":99");
        assert!(matches!(load_dataset(bad.as_bytes()), Err(GedError::Dataset { line: 1, .. })));
    }
}
