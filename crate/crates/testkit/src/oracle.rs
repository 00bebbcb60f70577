//! Exhaustive enumeration straight from the definitions: every itemset up
//! to the length limit, every candidate amount, flips checked by applying
//! the correction and comparing labels.

use corrules_core::data::{predicted_label, Dataset, Outcome};
use corrules_core::rules::Direction;
use corrules_core::{ItemId, Itemset};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRule {
    pub itemset: Itemset,
    pub direction: Direction,
    pub delta: f64,
    pub support: f64,
    pub confidence: f64,
    /// Hit instances misclassified in the rule's direction.
    pub false_hits: Vec<usize>,
}

/// Every non-empty itemset over `n_items` items with at most `max_len`
/// items, in lexicographic order.
pub fn all_itemsets(n_items: usize, max_len: usize) -> Vec<Itemset> {
    fn rec(start: u32, n: u32, cur: &mut Vec<ItemId>, max_len: usize, out: &mut Vec<Itemset>) {
        for x in start..n {
            cur.push(x);
            out.push(Itemset::new(cur.clone()));
            if cur.len() < max_len {
                rec(x + 1, n, cur, max_len, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n_items as u32, &mut Vec::new(), max_len, &mut out);
    out.sort();
    out
}

fn false_outcome(d: Direction) -> Outcome {
    match d {
        Direction::Positive => Outcome::FalseNegative,
        Direction::Negative => Outcome::FalsePositive,
    }
}

fn is_false(ds: &Dataset<f64>, i: usize, d: Direction) -> bool {
    ds.instances()[i].outcome() == false_outcome(d)
}

/// All `-(pᵢ + pᵢ₊₁) / 2` for the padded distinct scores, of `d`'s sign.
fn candidates(ds: &Dataset<f64>, d: Direction) -> Vec<f64> {
    let mut p: Vec<f64> = ds.instances().iter().map(|i| i.score).collect();
    p.push(-1.0);
    p.push(1.0);
    p.sort_by(f64::total_cmp);
    p.dedup();
    p.windows(2)
        .map(|w| -(w[0] + w[1]) / 2.0)
        .filter(|&x| match d {
            Direction::Positive => x > 0.0,
            Direction::Negative => x < 0.0,
        })
        .collect()
}

/// `(δ*, supp, conf)` or `None` when no candidate reaches `theta`.
pub fn brute_force_delta(ds: &Dataset<f64>, itemset: &Itemset, d: Direction, theta: f64) -> Option<(f64, f64, f64)> {
    let n_false = (0..ds.len()).filter(|&i| is_false(ds, i, d)).count();
    if n_false == 0 {
        return None;
    }
    let hit: Vec<usize> = (0..ds.len())
        .filter(|&i| itemset.items().iter().all(|&x| ds.instances()[i].items.contains(x)))
        .collect();
    let mut best: Option<(f64, f64, f64)> = None;
    for delta in candidates(ds, d) {
        let (mut ct, mut cf) = (0usize, 0usize);
        for &i in &hit {
            let inst = &ds.instances()[i];
            let before = predicted_label(inst.score) == inst.label;
            let after = predicted_label(inst.score + delta) == inst.label;
            if !before && after {
                ct += 1;
            }
            if before && !after {
                cf += 1;
            }
        }
        let supp = ct as f64 / n_false as f64;
        let conf = if ct + cf == 0 { 0.0 } else { ct as f64 / (ct + cf) as f64 };
        if supp < theta {
            continue;
        }
        let better = match best {
            None => true,
            Some((bd, bs, bc)) => {
                conf > bc || (conf == bc && (supp > bs || (supp == bs && delta.abs() < bd.abs())))
            }
        };
        if better {
            best = Some((delta, supp, conf));
        }
    }
    best
}

/// Every acceptable rule: length ≤ `max_len`, `δ* ≠ 0`, support ≥ `theta`,
/// confidence ≥ `lambda`. Sorted by (direction, itemset).
pub fn brute_force_rules(ds: &Dataset<f64>, max_len: usize, theta: f64, lambda: f64) -> Vec<OracleRule> {
    let mut out = Vec::new();
    for d in [Direction::Positive, Direction::Negative] {
        for x in all_itemsets(ds.n_items(), max_len) {
            let Some((delta, support, confidence)) = brute_force_delta(ds, &x, d, theta) else {
                continue;
            };
            if confidence < lambda {
                continue;
            }
            let false_hits = (0..ds.len())
                .filter(|&i| is_false(ds, i, d) && x.items().iter().all(|&e| ds.instances()[i].items.contains(e)))
                .collect();
            out.push(OracleRule {
                itemset: x,
                direction: d,
                delta,
                support,
                confidence,
                false_hits,
            });
        }
    }
    out
}

/// Drops every rule that has a strict-subset rule with the same direction
/// and the same false hits.
pub fn minimal_oracle(rules: &[OracleRule]) -> Vec<OracleRule> {
    rules
        .iter()
        .filter(|r| {
            !rules.iter().any(|q| {
                q.direction == r.direction
                    && q.false_hits == r.false_hits
                    && q.itemset.len() < r.itemset.len()
                    && q.itemset.is_subset_of(&r.itemset)
            })
        })
        .cloned()
        .collect()
}

/// Non-empty itemsets with `|Dᶠ(X)| / |Dᶠ| ≥ theta` on direction `d`.
pub fn frequent_itemsets(ds: &Dataset<f64>, d: Direction, theta: f64, max_len: usize) -> Vec<Itemset> {
    let false_rows: Vec<usize> = (0..ds.len()).filter(|&i| is_false(ds, i, d)).collect();
    if false_rows.is_empty() {
        return Vec::new();
    }
    all_itemsets(ds.n_items(), max_len)
        .into_iter()
        .filter(|x| {
            let c = false_rows
                .iter()
                .filter(|&&i| x.items().iter().all(|&e| ds.instances()[i].items.contains(e)))
                .count();
            c as f64 / false_rows.len() as f64 >= theta
        })
        .collect()
}
