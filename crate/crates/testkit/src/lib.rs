//! Test support for corrules: exhaustive reference implementations and
//! random fixtures. Nothing here is tuned for speed.

pub mod fixtures;
pub mod oracle;
pub mod scenarios;

pub use fixtures::{corpus, drift_base_scores, random_dataset, synthetic_drift_table, CorpusCase};
pub use oracle::{
    all_itemsets, brute_force_delta, brute_force_rules, frequent_itemsets, minimal_oracle, OracleRule,
};
pub use scenarios::{drift_run, mean_recovery, planted_run, DriftRun, PlantedRun};
