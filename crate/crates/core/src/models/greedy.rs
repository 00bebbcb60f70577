use rayon::prelude::*;

use crate::data::{Dataset, Label};
use crate::error::Result;
use crate::models::metrics::evaluate_scores;
use crate::models::{CorrectionModel, ModelKind, Objective};
use crate::rules::CorrectionRule;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct GreedyResult<T> {
    pub model: CorrectionModel<T>,
    /// Candidate ids in the order they were taken.
    pub chosen: Vec<usize>,
    /// Objective before any rule, then after each accepted rule.
    pub history: Vec<f64>,
    /// Number of tentative model evaluations.
    pub evaluations: u64,
}

/// Corrected scores of a model made of `rules` (given by their hit lists).
fn apply_with_hits<T: Scalar>(
    kind: ModelKind,
    base: &[T],
    rules: &[usize],
    deltas: &[T],
    hits: &[Vec<usize>],
) -> Vec<T> {
    match kind {
        ModelKind::List => {
            let mut out = base.to_vec();
            let mut matched = vec![false; base.len()];
            for &r in rules {
                for &i in &hits[r] {
                    if !matched[i] {
                        matched[i] = true;
                        out[i] = base[i] + deltas[r];
                    }
                }
            }
            out
        }
        ModelKind::Set => {
            let mut matched: Vec<Vec<T>> = vec![Vec::new(); base.len()];
            for &r in rules {
                for &i in &hits[r] {
                    matched[i].push(deltas[r]);
                }
            }
            base.iter()
                .zip(matched)
                .map(|(&s, mut d)| {
                    if d.is_empty() {
                        return s;
                    }
                    // same summation order as CorrectionRuleSet::apply
                    d.sort_by(|a, b| a.partial_cmp(b).expect("finite deltas"));
                    let n = T::from_count(d.len());
                    s + d.into_iter().fold(T::zero(), |acc, x| acc + x) / n
                })
                .collect()
        }
    }
}

/// Greedily adds the candidate whose insertion (appended, for lists) gives
/// the best objective on `dataset`, until `max_rules` is reached or no
/// candidate strictly improves it. Ties go to the lowest candidate id.
pub fn greedy_build<T: Scalar>(
    candidates: &[CorrectionRule<T>],
    dataset: &Dataset<T>,
    objective: Objective,
    max_rules: Option<usize>,
    kind: ModelKind,
) -> Result<GreedyResult<T>> {
    let base = dataset.scores();
    let labels: Vec<Label> = dataset.instances().iter().map(|i| i.label).collect();
    let hits: Vec<Vec<usize>> = candidates.par_iter().map(|r| dataset.hits(&r.itemset)).collect();
    let deltas: Vec<T> = candidates.iter().map(|r| r.delta).collect();
    let value = |scores: &[T]| -> Result<f64> { Ok(objective.of(&evaluate_scores(scores, &labels)?)) };

    let mut chosen: Vec<usize> = Vec::new();
    let mut current = value(&base)?;
    let mut history = vec![current];
    let mut evaluations = 0u64;
    let limit = max_rules.unwrap_or(usize::MAX);
    while chosen.len() < limit {
        let open: Vec<usize> = (0..candidates.len())
            .filter(|&c| {
                !chosen.iter().any(|&q| q == c || (candidates[q].itemset == candidates[c].itemset && deltas[q] == deltas[c]))
            })
            .collect();
        if open.is_empty() {
            break;
        }
        evaluations += open.len() as u64;
        let scored: Vec<(usize, f64)> = open
            .par_iter()
            .map(|&c| {
                let mut rules = chosen.clone();
                rules.push(c);
                let v = value(&apply_with_hits(kind, &base, &rules, &deltas, &hits)).expect("non-empty dataset");
                (c, v)
            })
            .collect();
        // `scored` is in ascending id order; keep the first strict best.
        let mut best: Option<(usize, f64)> = None;
        for (c, v) in scored {
            if best.is_none_or(|(_, b)| objective.improves(v, b)) {
                best = Some((c, v));
            }
        }
        let Some((c, v)) = best else { break };
        if !objective.improves(v, current) {
            break;
        }
        chosen.push(c);
        current = v;
        history.push(v);
    }
    let model = CorrectionModel::new(kind, chosen.iter().map(|&c| candidates[c].clone()).collect())?;
    Ok(GreedyResult {
        model,
        chosen,
        history,
        evaluations,
    })
}
