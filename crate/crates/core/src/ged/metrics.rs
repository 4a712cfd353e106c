use serde::{Deserialize, Serialize};

use super::dataset::Label;
use super::GedError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold instances of the class.
    pub support: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub accuracy: f64,
    pub correct: ClassMetrics,
    pub error: ClassMetrics,
    pub total: usize,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn class_metrics(predicted: &[Label], gold: &[Label], class: Label) -> ClassMetrics {
    let mut tp = 0;
    let mut fp = 0;
    let mut fn_ = 0;
    for (p, g) in predicted.iter().zip(gold) {
        match (*p == class, *g == class) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        support: tp + fn_,
    }
}

/// Accuracy plus per-class precision, recall and F1.
pub fn evaluate(predicted: &[Label], gold: &[Label]) -> Result<Evaluation, GedError> {
    if predicted.len() != gold.len() {
        return Err(GedError::LengthMismatch {
            predicted: predicted.len(),
            gold: gold.len(),
        });
    }
    let hits = predicted.iter().zip(gold).filter(|(p, g)| p == g).count();
    Ok(Evaluation {
        accuracy: ratio(hits, gold.len()),
        correct: class_metrics(predicted, gold, Label::Correct),
        error: class_metrics(predicted, gold, Label::Error),
        total: gold.len(),
    })
}

impl Evaluation {
    /// Tab-separated table: overall accuracy, then precision, recall and
    /// F-score for correct usage and for usage errors.
    pub fn report(&self, system: &str) -> String {
        let c = &self.correct;
        let e = &self.error;
        format!(
            "\tOverall\tCorrect Verb Usage\t\t\tVerb Usage Errors\t\t\n\
             \tAccuracy\tPrecision\tRecall\tF-score\tPrecision\tRecall\tF-score\n\
             {system}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\n",
            self.accuracy, c.precision, c.recall, c.f1, e.precision, e.recall, e.f1
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        let g = [Label::Correct, Label::Error, Label::Error];
        let ev = evaluate(&g, &g).unwrap();
        assert_eq!(ev.accuracy, 1.0);
        assert_eq!(ev.correct.f1, 1.0);
        assert_eq!(ev.error.f1, 1.0);
        assert!(evaluate(&g[..1], &g).is_err());
    }
}
