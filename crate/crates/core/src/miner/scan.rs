use crate::miner::context::{and, and_assign, MiningContext};
use crate::miner::lattice::{EquivalentLattice, LatticeRef};
use crate::miner::{MinerConfig, MinerCounters};
use crate::rules::{CorrectionRule, DeltaChoice};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneDecision {
    Scan,
    Skip,
}

/// A rule found while scanning, still in rank space.
pub(crate) struct Found<T> {
    pub ranks: Vec<u32>,
    pub choice: DeltaChoice<T>,
}

impl<T: Scalar> MiningContext<'_, T> {
    /// `conf(X ∪ S → δ*(X ∪ S)) < λ` means no member can reach `λ`.
    pub(crate) fn prune_check_ref(&self, l: &LatticeRef<'_>, theta: T, lambda: T) -> (PruneDecision, DeltaChoice<T>) {
        let mut true_hits = l.core_true.to_vec();
        for &r in l.tail {
            and_assign(&mut true_hits, &self.true_bits[r as usize]);
        }
        let choice = self.optimize(l.occ, &true_hits, theta);
        let decision = if choice.stats.confidence < lambda {
            PruneDecision::Skip
        } else {
            PruneDecision::Scan
        };
        (decision, choice)
    }

    pub(crate) fn scan_ref(
        &self,
        l: &LatticeRef<'_>,
        config: &MinerConfig<T>,
        counters: &mut MinerCounters,
        out: &mut Vec<Found<T>>,
    ) {
        let mut itemset = l.core.to_vec();
        self.scan_rec(&mut itemset, l.tail, 0, l.core_true, l.occ, config, counters, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn scan_rec(
        &self,
        itemset: &mut Vec<u32>,
        tail: &[u32],
        start: usize,
        true_hits: &[u64],
        false_hits: &[u32],
        config: &MinerConfig<T>,
        counters: &mut MinerCounters,
        out: &mut Vec<Found<T>>,
    ) {
        if !itemset.is_empty() {
            counters.itemsets_scanned += 1;
            let choice = self.optimize(false_hits, true_hits, config.min_support);
            if config.accepts(itemset.len(), &choice) {
                out.push(Found {
                    ranks: itemset.clone(),
                    choice,
                });
                if config.minimal {
                    return;
                }
            }
        }
        if itemset.len() >= config.max_len {
            return;
        }
        for j in start..tail.len() {
            let x = tail[j];
            let next = and(true_hits, &self.true_bits[x as usize]);
            itemset.push(x);
            self.scan_rec(itemset, tail, j + 1, &next, false_hits, config, counters, out);
            itemset.pop();
        }
    }

    fn lattice_ref<'l>(
        &self,
        lattice: &'l EquivalentLattice,
        core: &'l [u32],
        tail: &'l [u32],
        core_true: &'l [u64],
    ) -> LatticeRef<'l> {
        LatticeRef {
            core,
            tail,
            occ: &lattice.false_hits,
            core_true,
        }
    }

    /// Decides whether `lattice` can contain an acceptable rule.
    pub fn lattice_prune_check(&self, lattice: &EquivalentLattice, theta: T, lambda: T) -> PruneDecision {
        let core = self.to_ranks(lattice.core.items());
        let tail = self.to_ranks(&lattice.tail);
        let core_true = self.true_hits(&core);
        self.prune_check_ref(&self.lattice_ref(lattice, &core, &tail, &core_true), theta, lambda).0
    }

    /// Depth-first scan of the members of `lattice` (no pruning check).
    pub fn scan_lattice(&self, lattice: &EquivalentLattice, config: &MinerConfig<T>) -> Vec<CorrectionRule<T>> {
        let mut core = self.to_ranks(lattice.core.items());
        core.sort_unstable();
        let tail = self.to_ranks(&lattice.tail);
        let core_true = self.true_hits(&core);
        let mut found = Vec::new();
        let mut counters = MinerCounters::default();
        self.scan_ref(&self.lattice_ref(lattice, &core, &tail, &core_true), config, &mut counters, &mut found);
        let mut rules: Vec<CorrectionRule<T>> = found.into_iter().map(|f| self.to_rule(f)).collect();
        rules.sort_by(|a, b| a.itemset.cmp(&b.itemset));
        rules
    }

    pub(crate) fn to_rule(&self, f: Found<T>) -> CorrectionRule<T> {
        CorrectionRule {
            itemset: self.to_itemset(&f.ranks),
            delta: f.choice.delta,
            direction: self.direction,
            stats: f.choice.stats,
        }
    }
}
