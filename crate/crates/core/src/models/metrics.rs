use serde::{Deserialize, Serialize};

use crate::data::{predicted_label, Dataset, Label};
use crate::error::{Error, Result};
use crate::models::CorrectionModel;
use crate::rules::CorrectionRule;
use crate::scalar::Scalar;

const LOG_LOSS_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Accuracy,
    F1,
    LogLoss,
}

impl Objective {
    pub fn maximize(self) -> bool {
        !matches!(self, Objective::LogLoss)
    }

    /// Whether `candidate` is strictly better than `current`.
    pub fn improves(self, candidate: f64, current: f64) -> bool {
        if self.maximize() {
            candidate > current
        } else {
            candidate < current
        }
    }

    pub fn of(self, m: &Metrics) -> f64 {
        match self {
            Objective::Accuracy => m.accuracy,
            Objective::F1 => m.f1,
            Objective::LogLoss => m.log_loss,
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "accuracy" | "acc" => Ok(Objective::Accuracy),
            "f1" => Ok(Objective::F1),
            "log_loss" | "logloss" => Ok(Objective::LogLoss),
            _ => Err(Error::InvalidArgument(format!("unknown objective {s:?}"))),
        }
    }
}

/// Classification metrics; label 1 is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub log_loss: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Metrics of `scores` against `labels`. Log loss uses `p = (s + 1) / 2`
/// clipped to `[1e-12, 1 - 1e-12]`.
pub fn evaluate_scores<T: Scalar>(scores: &[T], labels: &[Label]) -> Result<Metrics> {
    assert_eq!(scores.len(), labels.len());
    if scores.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    let mut correct = 0;
    let mut loss = 0.0;
    for (&s, &y) in scores.iter().zip(labels) {
        let pred = predicted_label(s);
        correct += usize::from(pred == y);
        match (pred, y) {
            (Label::Positive, Label::Positive) => tp += 1,
            (Label::Positive, Label::Negative) => fp += 1,
            (Label::Negative, Label::Positive) => fn_ += 1,
            _ => {}
        }
        let p = ((s.to_f64().unwrap_or(0.0) + 1.0) / 2.0).clamp(LOG_LOSS_EPS, 1.0 - LOG_LOSS_EPS);
        loss -= match y {
            Label::Positive => p.ln(),
            Label::Negative => (1.0 - p).ln(),
        };
    }
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Metrics {
        accuracy: ratio(correct, scores.len()),
        precision,
        recall,
        f1,
        log_loss: loss / scores.len() as f64,
    })
}

/// Metrics of the raw scores, or of the scores corrected by `model`.
pub fn evaluate<T: Scalar>(dataset: &Dataset<T>, model: Option<&CorrectionModel<T>>) -> Result<Metrics> {
    let scores = match model {
        Some(m) => m.apply_dataset(dataset),
        None => dataset.scores(),
    };
    let labels: Vec<Label> = dataset.instances().iter().map(|i| i.label).collect();
    evaluate_scores(&scores, &labels)
}

/// Best overlap of a ground-truth hit set with any mined hit set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    /// `max_R |G ∩ R| / |G|`
    pub coverage: f64,
    /// `max_R |G ∩ R| / |G ∪ R|`
    pub jaccard: f64,
}

fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Coverage and Jaccard similarity per ground-truth set, over ascending
/// instance-index lists. Empty ground-truth sets score 0 with a warning.
pub fn coverage_jaccard_sets(ground_truth: &[Vec<usize>], mined: &[Vec<usize>]) -> Vec<Recovery> {
    ground_truth
        .iter()
        .enumerate()
        .map(|(g_id, g)| {
            if g.is_empty() {
                log::warn!("ground-truth region {g_id} hits no instance; scored 0");
                return Recovery { coverage: 0.0, jaccard: 0.0 };
            }
            let mut best = Recovery { coverage: 0.0, jaccard: 0.0 };
            for r in mined {
                let inter = intersection_len(g, r);
                best.coverage = best.coverage.max(ratio(inter, g.len()));
                best.jaccard = best.jaccard.max(ratio(inter, g.len() + r.len() - inter));
            }
            best
        })
        .collect()
}

/// [`coverage_jaccard_sets`] with the mined side given as rules hit-tested
/// on `dataset`.
pub fn coverage_jaccard<T: Scalar>(
    ground_truth: &[Vec<usize>],
    mined: &[CorrectionRule<T>],
    dataset: &Dataset<T>,
) -> Vec<Recovery> {
    let hits: Vec<Vec<usize>> = mined.iter().map(|r| dataset.hits(&r.itemset)).collect();
    coverage_jaccard_sets(ground_truth, &hits)
}
