//! Synthetic evaluation scenarios: data-lacking splits, concept-drift
//! regions, rule-guided sampling and planted-rule fixtures.

mod drift;
mod planted;
mod split;

pub use drift::{gen_drift_scenario, DriftConfig, DriftRegion, DriftScenario};
pub use planted::{plant_rule_dataset, PlantedDataset};
pub use split::{
    gen_lack_splits, rule_guided_sample, rule_guided_sample_sets, stratified_take, GuidedSampleConfig, LackSplitSpec,
    LackSplits,
};
