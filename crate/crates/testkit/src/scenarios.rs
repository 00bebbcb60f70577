//! End-to-end runs over the synthetic scenarios.

use std::collections::HashMap;

use corrules_core::data::{encode, fit_discretization, DiscretizationOptions, ScoreTransform};
use corrules_core::harness::{gen_drift_scenario, plant_rule_dataset, stratified_take, DriftConfig, DriftScenario};
use corrules_core::miner::{mine, MinerConfig};
use corrules_core::models::{coverage_jaccard, evaluate, greedy_build, ModelKind, Objective, Recovery};
use corrules_core::postprocess::{denoise, drift_filter, kmodes_summarize, ClusterConfig};
use corrules_core::{Dataset64, Itemset};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fixtures::{drift_base_scores, synthetic_drift_table};

pub fn mean_recovery(v: &[Recovery]) -> (f64, f64) {
    let n = v.len().max(1) as f64;
    (
        v.iter().map(|r| r.coverage).sum::<f64>() / n,
        v.iter().map(|r| r.jaccard).sum::<f64>() / n,
    )
}

#[derive(Debug, Clone)]
pub struct DriftRun {
    pub scenario: DriftScenario,
    pub mined: usize,
    pub validated: usize,
    pub kept: usize,
    pub representatives: usize,
    /// Mean (coverage, jaccard) over regions on TST.
    pub full: (f64, f64),
    pub summarized: (f64, f64),
}

/// Drift pipeline on the synthetic table: minimal rules mined on 80% of
/// MNG, denoised on the other 20% (λ_valid = 0.7), drift-filtered against
/// TRN (λ_drift = 0.5), then summarized by k-modes (k = 50).
pub fn drift_run(n: usize, seed: u64) -> DriftRun {
    let mut table = synthetic_drift_table(n, seed);
    let scenario = gen_drift_scenario(&table, &DriftConfig::default(), seed).expect("scenario");
    scenario.check(&table.labels).expect("scenario invariants");
    table.scores = Some(drift_base_scores(&table, &scenario));
    let (spec, vocab) = fit_discretization(&table, DiscretizationOptions::default()).expect("fit");
    let full: Dataset64 = encode(&table, &spec, &vocab, ScoreTransform::Identity).expect("encode");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (valid_idx, mine_idx) = stratified_take(&scenario.mng, &table.labels, scenario.mng.len() / 5, &mut rng);
    let mng = full.subset(&mine_idx);
    let valid = full.subset(&valid_idx);
    let trn = full.subset(&scenario.trn);
    let tst = full.subset(&scenario.tst);

    let pos: HashMap<usize, usize> = scenario.tst.iter().enumerate().map(|(j, &i)| (i, j)).collect();
    let regions: Vec<Vec<usize>> = scenario
        .regions
        .iter()
        .map(|r| {
            let mut v: Vec<usize> = r.rows.iter().filter_map(|i| pos.get(i).copied()).collect();
            v.sort_unstable();
            v
        })
        .collect();

    let config = MinerConfig {
        minimal: true,
        ..Default::default()
    };
    let rules = mine(&mng, &config).expect("mine").into_rules();
    let validated = denoise(&rules, &valid, 0.7).rules;
    let kept = drift_filter(&validated, &trn, 0.5).rules;
    let full_rec = mean_recovery(&coverage_jaccard(&regions, &kept, &tst));
    let summary = kmodes_summarize(
        &kept,
        &mng,
        &ClusterConfig {
            k: 50,
            max_iter: 100,
            seed,
        },
    )
    .expect("summarize");
    let reps = summary.select(&kept);
    let sum_rec = mean_recovery(&coverage_jaccard(&regions, &reps, &tst));
    DriftRun {
        scenario,
        mined: rules.len(),
        validated: validated.len(),
        kept: kept.len(),
        representatives: reps.len(),
        full: full_rec,
        summarized: sum_rec,
    }
}

#[derive(Debug, Clone)]
pub struct PlantedRun {
    pub rules: usize,
    /// Best Jaccard of a mined rule's hit set with the planted hit set,
    /// both on the whole dataset.
    pub best_jaccard: f64,
    pub model_rules: usize,
    pub holdout_before: f64,
    pub holdout_after: f64,
}

/// Plants `{x0, x1}` in 20 items × 2000 instances (flip 0.9, noise 0.05),
/// mines the first half with default thresholds, builds a greedy rule set
/// on it and scores accuracy on the second half.
pub fn planted_run(seed: u64) -> PlantedRun {
    let planted = Itemset::new(vec![0, 1]);
    let p = plant_rule_dataset::<f64>(20, 2000, &planted, 0.9, 0.05, seed).expect("plant");
    let half = p.dataset.len() / 2;
    let mng = p.dataset.subset(&(0..half).collect::<Vec<_>>());
    let tst = p.dataset.subset(&(half..p.dataset.len()).collect::<Vec<_>>());
    let rules = mine(&mng, &MinerConfig::default()).expect("mine").into_rules();
    let best_jaccard = mean_recovery(&coverage_jaccard(&[p.hits.clone()], &rules, &p.dataset)).1;
    let built = greedy_build(&rules, &mng, Objective::Accuracy, None, ModelKind::Set).expect("build");
    PlantedRun {
        rules: rules.len(),
        best_jaccard,
        model_rules: built.model.rules().len(),
        holdout_before: evaluate(&tst, None).expect("eval").accuracy,
        holdout_after: evaluate(&tst, Some(&built.model)).expect("eval").accuracy,
    }
}
