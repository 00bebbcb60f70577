//! Post-processing of mined rules: validation-based denoising, concept-drift
//! filtering against old data, and k-modes summarization.

mod filter;
mod kmodes;

pub use filter::{denoise, drift_filter, rule_confidences, FilterOutcome};
pub use kmodes::{hit_vectors, kmodes_summarize, ClusterConfig, DirectionSummary, HitVector, Summary};
