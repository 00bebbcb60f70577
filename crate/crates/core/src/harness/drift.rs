//! Concept-drift scenarios: disjoint ground-truth regions found by random
//! axis-aligned partitioning, with one label per region made rare in the
//! training split.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::discretize::quantile_cuts;
use crate::data::table::{Column, RawTable};
use crate::data::{Label, Operator, Predicate};
use crate::error::{Error, Result};
use crate::harness::split::stratified_take;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftConfig {
    pub n_regions: usize,
    /// Region size bounds as fractions of all instances.
    pub min_frac: f64,
    pub max_frac: f64,
    /// Minimum share of each class inside a region.
    pub min_class_frac: f64,
    pub depth: usize,
    /// Numeric splits use the cut points of this many quantile bins.
    pub bins: usize,
    /// Inclusion weight in TRN for instances carrying their region's
    /// shifted label (others weigh 1).
    pub rho: f64,
    pub trn_frac: f64,
    pub mng_frac: f64,
    pub max_attempts: usize,
}

impl Default for DriftConfig {
    fn default() -> Self {
        DriftConfig {
            n_regions: 10,
            min_frac: 0.03,
            max_frac: 0.05,
            min_class_frac: 0.10,
            depth: 5,
            bins: 4,
            rho: 0.05,
            trn_frac: 0.4,
            mng_frac: 0.4,
            max_attempts: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftRegion {
    /// Conjunction of split conditions on the path to the region.
    pub conditions: Vec<Predicate>,
    pub rows: Vec<usize>,
    /// The label made rare in TRN inside this region.
    pub shifted_label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftScenario {
    pub seed: u64,
    pub config: DriftConfig,
    pub regions: Vec<DriftRegion>,
    pub trn: Vec<usize>,
    pub mng: Vec<usize>,
    pub tst: Vec<usize>,
    /// Partitions tried before enough regions were found.
    pub attempts: usize,
}

impl DriftScenario {
    /// Checks region disjointness, size and class balance, and that the
    /// splits partition all `labels.len()` instances.
    pub fn check(&self, labels: &[Label]) -> Result<()> {
        let n = labels.len();
        let c = &self.config;
        let fail = |m: String| Err(Error::Scenario(m));
        if self.regions.len() != c.n_regions {
            return fail(format!("{} regions instead of {}", self.regions.len(), c.n_regions));
        }
        let mut owner = vec![usize::MAX; n];
        for (r, region) in self.regions.iter().enumerate() {
            if !region_ok(&region.rows, labels, c) {
                return fail(format!("region {r} violates the size or class-balance bounds"));
            }
            for &i in &region.rows {
                if owner[i] != usize::MAX {
                    return fail(format!("regions {} and {r} overlap", owner[i]));
                }
                owner[i] = r;
            }
        }
        let mut seen = vec![false; n];
        for &i in self.trn.iter().chain(&self.mng).chain(&self.tst) {
            if seen[i] {
                return fail(format!("instance {i} is in two splits"));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return fail("splits do not cover every instance".into());
        }
        Ok(())
    }
}

fn region_ok(rows: &[usize], labels: &[Label], c: &DriftConfig) -> bool {
    let n = labels.len() as f64;
    let len = rows.len() as f64;
    let pos = rows.iter().filter(|&&i| labels[i] == Label::Positive).count() as f64;
    len >= c.min_frac * n
        && len <= c.max_frac * n
        && pos >= c.min_class_frac * len
        && len - pos >= c.min_class_frac * len
}

struct Node {
    conditions: Vec<Predicate>,
    rows: Vec<usize>,
}

fn partition(
    table: &RawTable,
    cuts: &[Vec<f64>],
    node: Node,
    depth: usize,
    max_depth: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Node>,
) {
    if depth < max_depth && node.rows.len() >= 2 {
        let a = rng.gen_range(0..table.attributes.len());
        let attr = &table.attributes[a];
        let split = match &attr.column {
            Column::Numeric(v) if !cuts[a].is_empty() => {
                let c = cuts[a][rng.gen_range(0..cuts[a].len())];
                let (l, r): (Vec<usize>, Vec<usize>) = node.rows.iter().partition(|&&i| v[i] < c);
                Some((
                    Predicate::numeric(&attr.name, Operator::Lt, c),
                    l,
                    Predicate::numeric(&attr.name, Operator::Ge, c),
                    r,
                ))
            }
            Column::Categorical(v) => {
                let mut present: Vec<&String> = node.rows.iter().map(|&i| &v[i]).collect();
                present.sort();
                present.dedup();
                let cat = present[rng.gen_range(0..present.len())].clone();
                let (l, r): (Vec<usize>, Vec<usize>) = node.rows.iter().partition(|&&i| v[i] == cat);
                Some((
                    Predicate::categorical(&attr.name, Operator::Eq, cat.clone()),
                    l,
                    Predicate::categorical(&attr.name, Operator::Ne, cat),
                    r,
                ))
            }
            Column::Numeric(_) => None,
        };
        if let Some((pl, l, pr, r)) = split {
            for (p, rows) in [(pl, l), (pr, r)] {
                if rows.is_empty() {
                    continue;
                }
                let mut conditions = node.conditions.clone();
                conditions.push(p);
                partition(table, cuts, Node { conditions, rows }, depth + 1, max_depth, rng, out);
            }
        }
    }
    if depth > 0 {
        out.push(node);
    }
}

/// Builds a drift scenario over `table` (scores are not used).
pub fn gen_drift_scenario(table: &RawTable, config: &DriftConfig, seed: u64) -> Result<DriftScenario> {
    let n = table.len();
    if n == 0 || table.attributes.is_empty() {
        return Err(Error::Scenario("table has no rows or no attributes".into()));
    }
    let labels = &table.labels;
    let cuts: Vec<Vec<f64>> = table
        .attributes
        .iter()
        .map(|a| match &a.column {
            Column::Numeric(v) => quantile_cuts(v, config.bins),
            Column::Categorical(_) => Vec::new(),
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut regions = None;
    let mut attempts = 0;
    let mut best_found = 0;
    while attempts < config.max_attempts {
        attempts += 1;
        let mut nodes = Vec::new();
        let root = Node {
            conditions: Vec::new(),
            rows: (0..n).collect(),
        };
        partition(table, &cuts, root, 0, config.depth, &mut rng, &mut nodes);
        let mut candidates: Vec<Node> = nodes.into_iter().filter(|nd| region_ok(&nd.rows, labels, config)).collect();
        candidates.shuffle(&mut rng);
        let mut used = vec![false; n];
        let mut picked = Vec::new();
        for nd in candidates {
            if picked.len() == config.n_regions {
                break;
            }
            if nd.rows.iter().any(|&i| used[i]) {
                continue;
            }
            for &i in &nd.rows {
                used[i] = true;
            }
            picked.push(nd);
        }
        best_found = best_found.max(picked.len());
        if picked.len() == config.n_regions {
            regions = Some(picked);
            break;
        }
    }
    let Some(nodes) = regions else {
        return Err(Error::Scenario(format!(
            "no {} disjoint regions after {attempts} partitions (best attempt found {best_found})",
            config.n_regions
        )));
    };
    let regions: Vec<DriftRegion> = nodes
        .into_iter()
        .map(|nd| DriftRegion {
            conditions: nd.conditions,
            rows: nd.rows,
            shifted_label: if rng.gen_bool(0.5) { Label::Positive } else { Label::Negative },
        })
        .collect();

    // Weighted sampling without replacement: largest ln(u) / w wins.
    let mut weight = vec![1.0; n];
    for r in &regions {
        for &i in &r.rows {
            if labels[i] == r.shifted_label {
                weight[i] = config.rho;
            }
        }
    }
    let mut keyed: Vec<(f64, usize)> = (0..n).map(|i| (rng.gen::<f64>().ln() / weight[i], i)).collect();
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let n_trn = ((config.trn_frac * n as f64).round() as usize).min(n);
    let mut trn: Vec<usize> = keyed[..n_trn].iter().map(|&(_, i)| i).collect();
    let mut rest: Vec<usize> = keyed[n_trn..].iter().map(|&(_, i)| i).collect();
    trn.sort_unstable();
    rest.sort_unstable();
    let n_mng = (config.mng_frac * n as f64).round() as usize;
    let (mng, tst) = stratified_take(&rest, labels, n_mng, &mut rng);

    let scenario = DriftScenario {
        seed,
        config: config.clone(),
        regions,
        trn,
        mng,
        tst,
        attempts,
    };
    scenario.check(labels)?;
    Ok(scenario)
}
