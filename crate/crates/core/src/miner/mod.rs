//! Enumeration of all acceptable correction rules.
//!
//! Per direction, frequent itemsets on the direction's false dataset are
//! enumerated as disjoint equivalent lattices ([`lattice`]). Members of one
//! lattice hit the same false instances, so confidence of the optimized rule
//! can only grow towards the lattice top; a lattice whose top misses the
//! confidence threshold is skipped without scanning. Surviving lattices are
//! scanned depth first up to the length limit.

mod context;
mod lattice;
mod minimal;
mod order;
mod scan;

use std::sync::Arc;

use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rules::{CorrectionRule, DeltaCandidates, DeltaChoice, Direction};
use crate::scalar::Scalar;

pub use context::MiningContext;
pub use lattice::EquivalentLattice;
pub use minimal::{minimal_filter, HitKey};
pub use order::{reorder_items, MiningOrder};
pub use scan::PruneDecision;

use lattice::{LatticeRef, Node};

#[derive(Debug, Clone, PartialEq)]
pub struct MinerConfig<T> {
    /// `K`: maximum itemset length.
    pub max_len: usize,
    /// `θ`: support threshold.
    pub min_support: T,
    /// `λ`: confidence threshold.
    pub min_confidence: T,
    /// Enumerate minimal rules only.
    pub minimal: bool,
    pub directions: Vec<Direction>,
    /// Skip lattices whose top rule misses `λ`. Never changes the output.
    pub pruning: bool,
    /// Worker threads for lattice scanning; 0 uses the global pool.
    pub workers: usize,
}

impl<T: Scalar> Default for MinerConfig<T> {
    fn default() -> Self {
        MinerConfig {
            max_len: 5,
            min_support: T::lit(0.05),
            min_confidence: T::lit(0.9),
            minimal: false,
            directions: Direction::BOTH.to_vec(),
            pruning: true,
            workers: 0,
        }
    }
}

impl<T: Scalar> MinerConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if self.max_len < 1 {
            return Err(Error::InvalidArgument("maximum itemset length must be >= 1".into()));
        }
        if !unit(self.min_support) || !unit(self.min_confidence) {
            return Err(Error::InvalidArgument(
                "support and confidence thresholds must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }

    /// Length, support and confidence conditions for an optimized amount.
    #[inline]
    pub fn accepts(&self, len: usize, choice: &DeltaChoice<T>) -> bool {
        !choice.is_none()
            && len <= self.max_len
            && choice.stats.support >= self.min_support
            && choice.stats.confidence >= self.min_confidence
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MinerCounters {
    pub lattices_enumerated: u64,
    pub lattices_pruned: u64,
    pub itemsets_scanned: u64,
}

impl MinerCounters {
    fn add(&mut self, o: &MinerCounters) {
        self.lattices_enumerated += o.lattices_enumerated;
        self.lattices_pruned += o.lattices_pruned;
        self.itemsets_scanned += o.itemsets_scanned;
    }
}

/// A mined rule with the lattice it came from and its false-hit set.
#[derive(Debug, Clone)]
pub struct MinedRule<T> {
    pub rule: CorrectionRule<T>,
    pub lattice: usize,
    pub false_hits: HitKey,
}

#[derive(Debug, Clone, Default)]
pub struct MinedRuleSet<T> {
    pub rules: Vec<MinedRule<T>>,
    pub counters: MinerCounters,
    pub per_direction: Vec<(Direction, MinerCounters)>,
    pub diagnostics: Vec<String>,
}

impl<T: Clone> MinedRuleSet<T> {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = &CorrectionRule<T>> {
        self.rules.iter().map(|r| &r.rule)
    }

    pub fn provenance(&self) -> Vec<usize> {
        self.rules.iter().map(|r| r.lattice).collect()
    }

    pub fn into_rules(self) -> Vec<CorrectionRule<T>> {
        self.rules.into_iter().map(|r| r.rule).collect()
    }
}

#[derive(Default)]
struct BranchResult<T> {
    lattices: usize,
    counters: MinerCounters,
    /// (lattice index within the branch, rule, false hits)
    rules: Vec<(usize, CorrectionRule<T>, HitKey)>,
}

impl<T: Scalar> MiningContext<'_, T> {
    fn process(&self, l: LatticeRef<'_>, config: &MinerConfig<T>, acc: &mut BranchResult<T>) {
        let index = acc.lattices;
        acc.lattices += 1;
        acc.counters.lattices_enumerated += 1;
        if config.pruning {
            let (decision, _) = self.prune_check_ref(&l, config.min_support, config.min_confidence);
            if decision == PruneDecision::Skip {
                acc.counters.lattices_pruned += 1;
                return;
            }
        }
        let mut found = Vec::new();
        self.scan_ref(&l, config, &mut acc.counters, &mut found);
        if found.is_empty() {
            return;
        }
        let key = HitKey::new(Arc::<[u32]>::from(l.occ));
        let mut rules: Vec<CorrectionRule<T>> = found.into_iter().map(|f| self.to_rule(f)).collect();
        rules.sort_by(|a, b| a.itemset.cmp(&b.itemset));
        acc.rules
            .extend(rules.into_iter().map(|r| (index, r, key.clone())));
    }

    /// Enumerates and scans every lattice of this direction. Lattice ids
    /// start at `first_lattice` and follow discovery order.
    fn mine_direction(&self, config: &MinerConfig<T>, first_lattice: usize) -> (Vec<MinedRule<T>>, MinerCounters, usize) {
        let theta = config.min_support;
        let root = Node::root(self.all_false.clone(), self.all_true.clone());
        let (tail, children) = self.open(&root, theta, config.max_len);
        let mut head = BranchResult::default();
        if !tail.is_empty() {
            self.process(
                LatticeRef {
                    core: &root.core,
                    tail: &tail,
                    occ: &root.occ,
                    core_true: &root.core_true,
                },
                config,
                &mut head,
            );
        }
        let branches: Vec<BranchResult<T>> = children
            .into_par_iter()
            .map(|child| {
                let mut acc = BranchResult::default();
                self.walk(child, theta, config.max_len, &mut |l| self.process(l, config, &mut acc));
                acc
            })
            .collect();

        let mut rules = Vec::new();
        let mut counters = MinerCounters::default();
        let mut offset = first_lattice;
        for b in std::iter::once(head).chain(branches) {
            counters.add(&b.counters);
            rules.extend(b.rules.into_iter().map(|(i, rule, false_hits)| MinedRule {
                rule,
                lattice: offset + i,
                false_hits,
            }));
            offset += b.lattices;
        }
        (rules, counters, offset - first_lattice)
    }
}

/// Mines all acceptable rules of `dataset` under `config`.
pub fn mine<T: Scalar>(dataset: &Dataset<T>, config: &MinerConfig<T>) -> Result<MinedRuleSet<T>> {
    config.validate()?;
    let run = || mine_inner(dataset, config);
    if config.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(run)
    } else {
        run()
    }
}

fn mine_inner<T: Scalar>(dataset: &Dataset<T>, config: &MinerConfig<T>) -> Result<MinedRuleSet<T>> {
    let mut out = MinedRuleSet::default();
    if dataset.is_empty() {
        out.diagnostics.push("empty dataset: nothing to mine".into());
        return Ok(out);
    }
    let candidates = DeltaCandidates::for_dataset(dataset);
    let mut directions = config.directions.clone();
    directions.sort();
    directions.dedup();
    let mut next_lattice = 0;
    for direction in directions {
        let ctx = match MiningContext::new(dataset, &candidates, direction) {
            Ok(ctx) => ctx,
            Err(Error::DirectionUnavailable(d)) => {
                let msg = format!("no misclassified instances for the {d} direction; skipped");
                log::warn!("{msg}");
                out.diagnostics.push(msg);
                continue;
            }
            Err(e) => return Err(e),
        };
        let (rules, counters, n_lattices) = ctx.mine_direction(config, next_lattice);
        next_lattice += n_lattices;
        out.counters.add(&counters);
        out.per_direction.push((direction, counters));
        out.rules.extend(rules);
    }
    if out.per_direction.is_empty() {
        out.diagnostics
            .push("no misclassified instances in any requested direction".into());
    }
    if config.minimal {
        out.rules = minimal_filter(out.rules);
    }
    Ok(out)
}

/// Lattices of one direction's false dataset (see [`MiningContext::lattices`]).
pub fn enumerate_lattices<T: Scalar>(
    dataset: &Dataset<T>,
    direction: Direction,
    theta: T,
    max_core: usize,
) -> Result<Vec<EquivalentLattice>> {
    let candidates = DeltaCandidates::for_dataset(dataset);
    let ctx = MiningContext::new(dataset, &candidates, direction)?;
    Ok(ctx.lattices(theta, max_core))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;
    use crate::itemset::Itemset;

    fn cfg(k: usize, theta: f64, lambda: f64) -> MinerConfig<f64> {
        MinerConfig {
            max_len: k,
            min_support: theta,
            min_confidence: lambda,
            ..Default::default()
        }
    }

    #[test]
    fn single_false_negative_yields_one_flip_rule() {
        let ds = Dataset::from_triples(
            2,
            vec![
                (vec![0], -0.4, Label::Positive),
                (vec![1], 0.6, Label::Positive),
                (vec![1], -0.6, Label::Negative),
            ],
        );
        let out = mine(&ds, &cfg(1, 1.0, 1.0)).unwrap();
        let rules: Vec<_> = out.rules().collect();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].itemset, Itemset::new(vec![0]));
        assert_eq!(rules[0].direction, Direction::Positive);
        assert!(rules[0].delta > 0.4);
        assert_eq!(rules[0].stats.confidence, 1.0);
    }

    #[test]
    fn all_correct_yields_nothing() {
        let ds = Dataset::from_triples(
            1,
            vec![(vec![0], 0.4, Label::Positive), (vec![0], -0.4, Label::Negative)],
        );
        let out = mine(&ds, &cfg(3, 0.0, 0.0)).unwrap();
        assert!(out.is_empty());
        assert!(!out.diagnostics.is_empty());
    }

    #[test]
    fn wrong_direction_yields_nothing() {
        let ds = Dataset::from_triples(1, vec![(vec![0], 0.4, Label::Negative)]);
        let mut c = cfg(3, 0.0, 0.0);
        c.directions = vec![Direction::Positive];
        assert!(mine(&ds, &c).unwrap().is_empty());
    }

    #[test]
    fn invalid_config_is_rejected() {
        let ds = Dataset::from_triples(1, vec![(vec![0], 0.4, Label::Negative)]);
        assert!(mine(&ds, &cfg(0, 0.1, 0.1)).is_err());
        assert!(mine(&ds, &cfg(2, 1.5, 0.1)).is_err());
    }

    #[test]
    fn length_cut_in_scan() {
        // lattice L({x0}, {x1}) with K = 1: only {x0} is evaluated
        let ds = Dataset::from_triples(
            2,
            vec![
                (vec![0, 1], -0.4, Label::Positive),
                (vec![0], -0.3, Label::Positive),
                (vec![0, 1], -0.3, Label::Positive),
            ],
        );
        let out = mine(&ds, &cfg(1, 0.0, 0.0)).unwrap();
        assert!(out.rules().all(|r| r.itemset.len() == 1));
    }

    #[test]
    fn minimal_mode_backtracks_early() {
        // x0 and x1 always together on the false side: L(∅, {x0, x1})
        let ds = Dataset::from_triples(
            2,
            vec![
                (vec![0, 1], -0.4, Label::Positive),
                (vec![0, 1], -0.3, Label::Positive),
            ],
        );
        let mut c = cfg(2, 0.0, 0.0);
        c.minimal = true;
        let out = mine(&ds, &c).unwrap();
        let sets: Vec<_> = out.rules().map(|r| r.itemset.items().to_vec()).collect();
        assert_eq!(sets, vec![vec![0], vec![1]]);
        assert_eq!(out.counters.itemsets_scanned, 2);
    }
}
