use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::miner::MinedRule;
use crate::rules::Direction;

/// Identity of a false-hit set `Dᶠ(X)`: a 64-bit fingerprint for hashing
/// plus the full id list, which decides equality.
#[derive(Debug, Clone)]
pub struct HitKey {
    fingerprint: u64,
    hits: Arc<[u32]>,
}

impl HitKey {
    pub fn new(hits: impl Into<Arc<[u32]>>) -> Self {
        let hits = hits.into();
        HitKey {
            fingerprint: fnv1a(&hits),
            hits,
        }
    }

    /// A key with a caller-chosen fingerprint.
    pub fn with_fingerprint(fingerprint: u64, hits: impl Into<Arc<[u32]>>) -> Self {
        HitKey {
            fingerprint,
            hits: hits.into(),
        }
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn hits(&self) -> &[u32] {
        &self.hits
    }
}

impl PartialEq for HitKey {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint && (Arc::ptr_eq(&self.hits, &other.hits) || self.hits == other.hits)
    }
}

impl Eq for HitKey {}

impl Hash for HitKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.fingerprint.hash(state);
    }
}

fn fnv1a(ids: &[u32]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &x in ids {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Keeps, among rules with the same direction and the same false-hit set,
/// only those whose itemset has no strict subset in that group. Input order
/// is preserved.
pub fn minimal_filter<T>(rules: Vec<MinedRule<T>>) -> Vec<MinedRule<T>> {
    let mut groups: HashMap<(Direction, &HitKey), Vec<usize>> = HashMap::new();
    for (i, r) in rules.iter().enumerate() {
        groups.entry((r.rule.direction, &r.false_hits)).or_default().push(i);
    }
    let mut keep = vec![true; rules.len()];
    for members in groups.values() {
        for &i in members {
            let dominated = members
                .iter()
                .any(|&j| j != i && rules[j].rule.itemset.is_strict_subset_of(&rules[i].rule.itemset));
            if dominated {
                keep[i] = false;
            }
        }
    }
    rules
        .into_iter()
        .zip(keep)
        .filter_map(|(r, k)| k.then_some(r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itemset::Itemset;
    use crate::rules::{CorrectionRule, RuleStats};

    fn rule(items: &[u32], key: HitKey) -> MinedRule<f64> {
        MinedRule {
            rule: CorrectionRule {
                itemset: Itemset::new(items.to_vec()),
                delta: 0.5,
                direction: Direction::Positive,
                stats: RuleStats::zero(),
            },
            lattice: 0,
            false_hits: key,
        }
    }

    fn itemsets(rules: &[MinedRule<f64>]) -> Vec<Vec<u32>> {
        rules.iter().map(|r| r.rule.itemset.items().to_vec()).collect()
    }

    #[test]
    fn superset_with_same_hits_is_dropped() {
        let k = HitKey::new(vec![1, 2]);
        let out = minimal_filter(vec![rule(&[1], k.clone()), rule(&[1, 2], k)]);
        assert_eq!(itemsets(&out), vec![vec![1]]);
    }

    #[test]
    fn incomparable_itemsets_are_both_kept() {
        let k = HitKey::new(vec![1, 2]);
        let out = minimal_filter(vec![rule(&[1, 2], k.clone()), rule(&[1, 3], k)]);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn different_hit_sets_are_separate_groups() {
        let out = minimal_filter(vec![
            rule(&[1], HitKey::new(vec![1])),
            rule(&[1, 2], HitKey::new(vec![2])),
        ]);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn fingerprint_collisions_are_not_merged() {
        let a = HitKey::with_fingerprint(7, vec![1, 2]);
        let b = HitKey::with_fingerprint(7, vec![3]);
        assert_ne!(a, b);
        let out = minimal_filter(vec![rule(&[1], a), rule(&[1, 2], b)]);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn directions_are_grouped_separately() {
        let k = HitKey::new(vec![1]);
        let mut neg = rule(&[1, 2], k.clone());
        neg.rule.direction = Direction::Negative;
        let out = minimal_filter(vec![rule(&[1], k), neg]);
        assert_eq!(out.len(), 2);
    }
}
