use corrules_testkit::{planted_run, synthetic_drift_table};
use corrules_core::harness::{gen_drift_scenario, DriftConfig};

#[test]
fn drift_scenarios_are_valid_and_reproducible() {
    let table = synthetic_drift_table(4_000, 3);
    let a = gen_drift_scenario(&table, &DriftConfig::default(), 3).unwrap();
    a.check(&table.labels).unwrap();
    assert_eq!(a.regions.len(), 10);
    assert_eq!(a, gen_drift_scenario(&table, &DriftConfig::default(), 3).unwrap());
    assert_ne!(a.trn, gen_drift_scenario(&table, &DriftConfig::default(), 4).unwrap().trn);
}

#[test]
fn planted_rule_is_recovered() {
    let run = planted_run(0);
    assert!(run.best_jaccard >= 0.9, "{run:?}");
    assert!(run.holdout_after > run.holdout_before, "{run:?}");
}
