//! Mining of correction rules `X → δ` for binary classifiers.
//!
//! Given instances annotated with a model score `s ∈ (-1, 1)` and a true
//! label, a correction rule adds `δ` to the score of every instance whose
//! itemset contains `X`. This crate enumerates every rule meeting length,
//! support and confidence thresholds, post-processes the result and builds
//! rule-list / rule-set correction models from it.
//!
//! Numeric code is generic over [`Scalar`]; the `*64` / `*32` aliases below
//! fix the scalar type.

pub mod data;
mod error;
pub mod harness;
pub mod itemset;
pub mod miner;
pub mod models;
pub mod postprocess;
pub mod rules;
mod scalar;

pub use error::{Error, Result};
pub use itemset::{ItemBits, ItemId, Itemset};
pub use scalar::Scalar;

pub type Dataset64 = data::Dataset<f64>;
pub type Dataset32 = data::Dataset<f32>;
pub type CorrectionRule64 = rules::CorrectionRule<f64>;
pub type CorrectionRule32 = rules::CorrectionRule<f32>;
pub type MinerConfig64 = miner::MinerConfig<f64>;
pub type MinedRuleSet64 = miner::MinedRuleSet<f64>;
