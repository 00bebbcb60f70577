use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::Error;
use crate::rules::{support_confidence, CorrectionRule, Direction};
use crate::scalar::Scalar;

/// Rules kept by a filter, with their positions in the input.
#[derive(Debug, Clone)]
pub struct FilterOutcome<T> {
    pub rules: Vec<CorrectionRule<T>>,
    pub kept: Vec<usize>,
    /// Confidence of every input rule on the filtering dataset.
    pub confidences: Vec<T>,
    pub diagnostics: Vec<String>,
}

/// Confidence of each rule with its fixed `δ` on `dataset`. A direction
/// without misclassified instances yields confidence 0 and a diagnostic.
pub fn rule_confidences<T: Scalar>(rules: &[CorrectionRule<T>], dataset: &Dataset<T>) -> (Vec<T>, Vec<String>) {
    let confs: Vec<Result<T, Direction>> = rules
        .par_iter()
        .map(|r| match support_confidence(&r.itemset, r.delta, dataset) {
            Ok(stats) => Ok(stats.confidence),
            Err(Error::DirectionUnavailable(d)) => Err(d),
            Err(_) => Ok(T::zero()),
        })
        .collect();
    let mut diagnostics = Vec::new();
    for d in Direction::BOTH {
        let n = confs.iter().filter(|c| **c == Err(d)).count();
        if n > 0 {
            let msg = format!("{n} {d} rule(s) evaluated on a dataset without misclassified instances of that direction; confidence taken as 0");
            log::warn!("{msg}");
            diagnostics.push(msg);
        }
    }
    (confs.into_iter().map(|c| c.unwrap_or(T::zero())).collect(), diagnostics)
}

fn keep_where<T: Scalar>(
    rules: &[CorrectionRule<T>],
    dataset: &Dataset<T>,
    keep: impl Fn(T) -> bool,
) -> FilterOutcome<T> {
    let (confidences, diagnostics) = rule_confidences(rules, dataset);
    let kept: Vec<usize> = (0..rules.len()).filter(|&i| keep(confidences[i])).collect();
    FilterOutcome {
        rules: kept.iter().map(|&i| rules[i].clone()).collect(),
        kept,
        confidences,
        diagnostics,
    }
}

/// Keeps rules whose confidence on `validation` is at least `lambda_valid`.
pub fn denoise<T: Scalar>(rules: &[CorrectionRule<T>], validation: &Dataset<T>, lambda_valid: T) -> FilterOutcome<T> {
    keep_where(rules, validation, |c| c >= lambda_valid)
}

/// Keeps rules whose confidence on the old data is below `lambda_drift`:
/// corrections that would not have held before suggest a changed region.
pub fn drift_filter<T: Scalar>(rules: &[CorrectionRule<T>], old: &Dataset<T>, lambda_drift: T) -> FilterOutcome<T> {
    keep_where(rules, old, |c| c < lambda_drift)
}
