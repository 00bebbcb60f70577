//! Correction models built from mined rules: rule lists (first match
//! applies), rule sets (matching corrections averaged), greedy selection
//! and evaluation metrics.

mod greedy;
mod metrics;
mod model;

pub use greedy::{greedy_build, GreedyResult};
pub use metrics::{coverage_jaccard, coverage_jaccard_sets, evaluate, evaluate_scores, Metrics, Objective, Recovery};
pub use model::{crl_apply, crs_apply, CorrectionModel, CorrectionRuleList, CorrectionRuleSet, ModelKind};
