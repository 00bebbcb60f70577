use corrules_core::miner::{enumerate_lattices, mine, MinerConfig};
use corrules_core::rules::Direction;
use corrules_core::Itemset;
use corrules_testkit::{brute_force_rules, corpus, frequent_itemsets, minimal_oracle, OracleRule};

type Key = (Direction, Itemset);

fn key_oracle(rules: &[OracleRule]) -> Vec<(Key, f64, f64, f64)> {
    let mut v: Vec<_> = rules
        .iter()
        .map(|r| ((r.direction, r.itemset.clone()), r.delta, r.support, r.confidence))
        .collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

fn mined(case: &corrules_testkit::CorpusCase, minimal: bool) -> Vec<(Key, f64, f64, f64)> {
    let config = MinerConfig {
        max_len: case.max_len,
        min_support: case.theta,
        min_confidence: case.lambda,
        minimal,
        ..Default::default()
    };
    let out = mine(&case.dataset, &config).unwrap();
    let mut v: Vec<_> = out
        .rules()
        .map(|r| ((r.direction, r.itemset.clone()), r.delta, r.stats.support, r.stats.confidence))
        .collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

fn assert_same(case_id: usize, got: &[(Key, f64, f64, f64)], want: &[(Key, f64, f64, f64)]) {
    let gk: Vec<_> = got.iter().map(|g| &g.0).collect();
    let wk: Vec<_> = want.iter().map(|w| &w.0).collect();
    assert_eq!(gk, wk, "case {case_id}: rule keys differ");
    for (g, w) in got.iter().zip(want) {
        assert!((g.1 - w.1).abs() <= 1e-12, "case {case_id} {:?}: delta {} vs {}", g.0, g.1, w.1);
        assert_eq!((g.2, g.3), (w.2, w.3), "case {case_id} {:?}", g.0);
    }
}

#[test]
fn miner_matches_brute_force() {
    for case in corpus(120, 11) {
        let want = key_oracle(&brute_force_rules(&case.dataset, case.max_len, case.theta, case.lambda));
        assert_same(case.id, &mined(&case, false), &want);
    }
}

#[test]
fn minimal_mode_matches_filtered_brute_force() {
    for case in corpus(120, 12) {
        let all = brute_force_rules(&case.dataset, case.max_len, case.theta, case.lambda);
        let want = key_oracle(&minimal_oracle(&all));
        assert_same(case.id, &mined(&case, true), &want);
    }
}

#[test]
fn lattices_cover_frequent_itemsets_disjointly() {
    for case in corpus(80, 13) {
        let ds = &case.dataset;
        for d in Direction::BOTH {
            let Ok(lats) = enumerate_lattices(ds, d, case.theta, ds.n_items()) else {
                assert!(frequent_itemsets(ds, d, case.theta, ds.n_items()).is_empty());
                continue;
            };
            let mut members: Vec<Itemset> = lats.iter().flat_map(|l| l.members()).filter(|m| !m.is_empty()).collect();
            let n = members.len();
            members.sort();
            members.dedup();
            assert_eq!(n, members.len(), "case {}: overlapping lattices", case.id);
            assert_eq!(members, frequent_itemsets(ds, d, case.theta, ds.n_items()), "case {}", case.id);
        }
    }
}
