use corrules_core::data::table::{Attribute, Column, RawTable};
use corrules_core::data::{Dataset, Label};
use corrules_core::harness::DriftScenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random dataset with duplicate-prone scores: half drawn from the grid
/// `k / 10`, half continuous. Item density varies per dataset.
pub fn random_dataset(rng: &mut ChaCha8Rng, n_items: usize, n_instances: usize) -> Dataset<f64> {
    let density = rng.gen_range(0.2..0.8);
    let p_pos = rng.gen_range(0.2..0.8);
    let rows: Vec<_> = (0..n_instances)
        .map(|_| {
            let items: Vec<u32> = (0..n_items as u32).filter(|_| rng.gen_bool(density)).collect();
            let score = if rng.gen_bool(0.5) {
                rng.gen_range(-9i32..=9) as f64 / 10.0
            } else {
                rng.gen_range(-0.99..0.99)
            };
            let label = if rng.gen_bool(p_pos) { Label::Positive } else { Label::Negative };
            (items, score, label)
        })
        .collect();
    Dataset::from_triples(n_items, rows)
}

#[derive(Debug, Clone)]
pub struct CorpusCase {
    pub id: usize,
    pub dataset: Dataset<f64>,
    pub max_len: usize,
    pub theta: f64,
    pub lambda: f64,
}

/// `n` small random mining problems cycling through every combination of
/// `θ ∈ {0, 0.1, 0.3}` and `λ ∈ {0, 0.5, 0.9}`.
pub fn corpus(n: usize, seed: u64) -> Vec<CorpusCase> {
    const THETAS: [f64; 3] = [0.0, 0.1, 0.3];
    const LAMBDAS: [f64; 3] = [0.0, 0.5, 0.9];
    (0..n)
        .map(|id| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(id as u64));
            let n_items = rng.gen_range(1..=12);
            let n_instances = rng.gen_range(1..=200);
            CorpusCase {
                id,
                dataset: random_dataset(&mut rng, n_items, n_instances),
                max_len: rng.gen_range(1..=3),
                theta: THETAS[id % 3],
                lambda: LAMBDAS[(id / 3) % 3],
            }
        })
        .collect()
}

fn true_probability(x0: f64, x1: f64) -> f64 {
    1.0 / (1.0 + (-20.0 * (x0 + x1 - 1.0)).exp())
}

/// `n` rows of ten uniform attributes `x0..x9`; the label is positive with
/// probability `1 / (1 + exp(-20 (x0 + x1 - 1)))`.
pub fn synthetic_drift_table(n: usize, seed: u64) -> RawTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols = vec![Vec::with_capacity(n); 10];
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        for c in cols.iter_mut() {
            c.push(rng.gen::<f64>());
        }
        let p = true_probability(cols[0].last().copied().unwrap(), cols[1].last().copied().unwrap());
        labels.push(if rng.gen_bool(p) { Label::Positive } else { Label::Negative });
    }
    RawTable {
        attributes: cols
            .into_iter()
            .enumerate()
            .map(|(j, v)| Attribute {
                name: format!("x{j}"),
                column: Column::Numeric(v),
            })
            .collect(),
        scores: None,
        labels,
        source_rows: (0..n).collect(),
        score_col: None,
        label_col: "label".into(),
    }
}

/// Scores of the Bayes-optimal classifier for the TRN distribution of a
/// drift scenario over [`synthetic_drift_table`]: inside each region the
/// odds of the shifted label are scaled by the TRN inclusion weight.
pub fn drift_base_scores(table: &RawTable, scenario: &DriftScenario) -> Vec<f64> {
    let col = |j: usize| match &table.attributes[j].column {
        Column::Numeric(v) => v,
        Column::Categorical(_) => panic!("synthetic table is numeric"),
    };
    let (x0, x1) = (col(0), col(1));
    let mut odds_scale = vec![1.0; table.len()];
    for r in &scenario.regions {
        let s = match r.shifted_label {
            Label::Positive => scenario.config.rho,
            Label::Negative => 1.0 / scenario.config.rho,
        };
        for &i in &r.rows {
            odds_scale[i] = s;
        }
    }
    (0..table.len())
        .map(|i| {
            let p = true_probability(x0[i], x1[i]).clamp(1e-9, 1.0 - 1e-9);
            let odds = p / (1.0 - p) * odds_scale[i];
            let q = odds / (1.0 + odds);
            (2.0 * q - 1.0).clamp(-1.0 + 1e-9, 1.0 - 1e-9)
        })
        .collect()
}
