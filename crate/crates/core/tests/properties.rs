use corrules_core::data::Dataset;
use corrules_core::miner::{enumerate_lattices, mine, MinerConfig};
use corrules_core::models::{
    coverage_jaccard_sets, crl_apply, crs_apply, evaluate, greedy_build, CorrectionRuleList, CorrectionRuleSet,
    ModelKind, Objective,
};
use corrules_core::postprocess::{denoise, drift_filter, kmodes_summarize, ClusterConfig};
use corrules_core::rules::{optimize_delta, CorrectionRule, DeltaCandidates, Direction};
use corrules_core::Itemset;
use corrules_testkit::random_dataset;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dataset(seed: u64, max_items: usize, max_n: usize) -> Dataset<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_items = rng.gen_range(1..=max_items);
    let n = rng.gen_range(1..=max_n);
    random_dataset(&mut rng, n_items, n)
}

fn mined_rules(ds: &Dataset<f64>, theta: f64, lambda: f64) -> Vec<CorrectionRule<f64>> {
    let cfg = MinerConfig {
        max_len: 3,
        min_support: theta,
        min_confidence: lambda,
        ..Default::default()
    };
    mine(ds, &cfg).unwrap().into_rules()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn confidence_grows_towards_lattice_top(seed in any::<u64>(), theta in prop::sample::select(vec![0.0, 0.1, 0.3])) {
        let ds = dataset(seed, 8, 120);
        let cands = DeltaCandidates::for_dataset(&ds);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for d in Direction::BOTH {
            let Ok(lats) = enumerate_lattices(&ds, d, theta, 3) else { continue };
            for l in &lats {
                let members = l.members();
                for _ in 0..4 {
                    let z = members.choose(&mut rng).unwrap();
                    let y: Itemset = z.items().iter().copied().filter(|x| l.core.contains(*x) || rng.gen_bool(0.5)).collect();
                    if y.is_empty() { continue; }
                    let cy = optimize_delta(&y, d, &ds, &cands, theta).stats.confidence;
                    let cz = optimize_delta(z, d, &ds, &cands, theta).stats.confidence;
                    prop_assert!(cy <= cz, "{y} ⊆ {z}: {cy} > {cz}");
                }
            }
        }
    }

    #[test]
    fn pruning_and_workers_do_not_change_output(seed in any::<u64>(), lambda in prop::sample::select(vec![0.0, 0.5, 0.9])) {
        let ds = dataset(seed, 10, 150);
        let base = MinerConfig { max_len: 3, min_support: 0.1, min_confidence: lambda, ..Default::default() };
        let reference = mine(&ds, &base).unwrap();
        for (pruning, workers) in [(false, 1), (true, 1), (true, 4)] {
            let out = mine(&ds, &MinerConfig { pruning, workers, ..base.clone() }).unwrap();
            prop_assert_eq!(out.into_rules(), reference.clone().into_rules());
        }
    }

    #[test]
    fn filters_are_idempotent_subsets(seed in any::<u64>(), lv in 0.0..1.0f64) {
        let ds = dataset(seed, 8, 120);
        let other = dataset(seed.wrapping_add(1), 8, 120);
        if ds.n_items() != other.n_items() { return Ok(()); }
        let rules = mined_rules(&ds, 0.1, 0.0);
        for f in [denoise::<f64>, drift_filter::<f64>] {
            let once = f(&rules, &other, lv).rules;
            prop_assert!(once.iter().all(|r| rules.contains(r)));
            prop_assert_eq!(f(&once, &other, lv).rules, once.clone());
        }
    }

    #[test]
    fn crs_is_permutation_invariant_and_crl_first_match(seed in any::<u64>()) {
        let ds = dataset(seed, 8, 80);
        let rules = mined_rules(&ds, 0.0, 0.0);
        prop_assume!(!rules.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = CorrectionRuleSet::new(rules.clone()).unwrap();
        let list = CorrectionRuleList::new(rules.clone()).unwrap();
        let mut shuffled = rules.clone();
        shuffled.shuffle(&mut rng);
        let set2 = CorrectionRuleSet::new(shuffled).unwrap();
        for inst in ds.instances() {
            prop_assert_eq!(crs_apply(&set, inst), crs_apply(&set2, inst));
            let Some(i) = list.first_match(&inst.items) else { continue };
            let mut tail = rules[i + 1..].to_vec();
            tail.shuffle(&mut rng);
            let permuted = CorrectionRuleList::new([rules[..=i].to_vec(), tail].concat()).unwrap();
            prop_assert_eq!(crl_apply(&list, inst), crl_apply(&permuted, inst));
        }
    }

    #[test]
    fn greedy_history_strictly_improves(seed in any::<u64>(), kind in prop::sample::select(vec![ModelKind::List, ModelKind::Set])) {
        let ds = dataset(seed, 8, 120);
        let rules = mined_rules(&ds, 0.05, 0.5);
        for obj in [Objective::Accuracy, Objective::F1, Objective::LogLoss] {
            let g = greedy_build(&rules, &ds, obj, Some(5), kind).unwrap();
            prop_assert!(g.history.windows(2).all(|w| obj.improves(w[1], w[0])));
            prop_assert!(g.chosen.len() <= 5);
            let last = *g.history.last().unwrap();
            prop_assert_eq!(obj.of(&evaluate(&ds, Some(&g.model)).unwrap()), last);
        }
    }

    #[test]
    fn jaccard_never_exceeds_coverage(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut set = |n: usize| -> Vec<usize> { (0..n).filter(|_| rng.gen_bool(0.3)).collect() };
        let g: Vec<Vec<usize>> = (0..5).map(|_| set(50)).collect();
        let r: Vec<Vec<usize>> = (0..8).map(|_| set(50)).collect();
        for rec in coverage_jaccard_sets(&g, &r) {
            prop_assert!(rec.jaccard <= rec.coverage);
            prop_assert!((0.0..=1.0).contains(&rec.coverage));
        }
    }

    #[test]
    fn kmodes_representatives_are_input_rules(seed in any::<u64>(), k in 1usize..6) {
        let ds = dataset(seed, 8, 100);
        let rules = mined_rules(&ds, 0.0, 0.0);
        prop_assume!(!rules.is_empty());
        let cfg = ClusterConfig { k, max_iter: 30, seed };
        let s = kmodes_summarize(&rules, &ds, &cfg).unwrap();
        prop_assert!(s.representatives.iter().all(|&i| i < rules.len()));
        prop_assert!(s.representatives.len() <= 2 * k);
        for d in &s.directions {
            prop_assert!(d.objective.windows(2).all(|w| w[1] <= w[0]));
            prop_assert!(d.objective.len() <= 30);
            prop_assert!(d.nearest.iter().all(|&r| rules[r].direction == d.direction));
        }
        prop_assert_eq!(s, kmodes_summarize(&rules, &ds, &cfg).unwrap());
    }
}

#[test]
fn f32_mining_agrees_with_f64_on_exact_scores() {
    // scores that are exact in both widths
    let rows: Vec<(Vec<u32>, f64, _)> = (0..64)
        .map(|i| {
            let items = (0..4u32).filter(|b| (i >> b) & 1 == 1).collect();
            let score = ((i % 7) as f64 - 3.0) / 8.0;
            let label = if i % 3 == 0 { corrules_core::data::Label::Positive } else { corrules_core::data::Label::Negative };
            (items, score, label)
        })
        .collect();
    let d64 = Dataset::from_triples(4, rows.clone());
    let d32 = Dataset::from_triples(4, rows.into_iter().map(|(x, s, c)| (x, s as f32, c)));
    let c64 = MinerConfig { max_len: 3, min_support: 0.0, min_confidence: 0.5, ..Default::default() };
    let c32 = MinerConfig { max_len: 3, min_support: 0.0f32, min_confidence: 0.5f32, ..Default::default() };
    let r64: Vec<_> = mine(&d64, &c64).unwrap().into_rules();
    let r32: Vec<_> = mine(&d32, &c32).unwrap().into_rules();
    assert!(!r64.is_empty());
    assert_eq!(r64.len(), r32.len());
    for (a, b) in r64.iter().zip(&r32) {
        assert_eq!(a.itemset, b.itemset);
        assert_eq!(a.delta as f32, b.delta);
        assert_eq!(a.stats.n_true_changed, b.stats.n_true_changed);
    }
}
