//! Frequent-itemset enumeration as disjoint equivalent lattices.
//!
//! Depth-first prefix extension in mining order with occurrence delivery.
//! At each node, the items above the last extension that occur in every
//! transaction of the node's occurrence set join the tail; they stay in the
//! tail of every descendant and are never branched on below the node, which
//! makes the emitted lattices `L(core, tail)` pairwise disjoint while their
//! union is exactly the set of frequent itemsets.

use crate::itemset::{ItemId, Itemset};
use crate::miner::context::{and, MiningContext};
use crate::scalar::Scalar;

/// `L(X, S) = { Y | X ⊆ Y ⊆ X ∪ S }` with `Dᶠ(Y) = Dᶠ(X)` for all members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalentLattice {
    pub core: Itemset,
    /// Tail items in mining order.
    pub tail: Vec<ItemId>,
    /// Local false ids hit by every member.
    pub false_hits: Vec<u32>,
}

impl EquivalentLattice {
    /// Every member itemset (exponential in the tail size; for tests and
    /// small inspections).
    pub fn members(&self) -> Vec<Itemset> {
        let mut out = Vec::with_capacity(1 << self.tail.len().min(20));
        for mask in 0u64..(1u64 << self.tail.len()) {
            let mut items = self.core.items().to_vec();
            for (j, &x) in self.tail.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    items.push(x);
                }
            }
            out.push(Itemset::new(items));
        }
        out
    }

    pub fn top(&self) -> Itemset {
        self.core.union(&self.tail.iter().copied().collect())
    }
}

/// A lattice in rank space, borrowed from the enumeration stack.
pub(crate) struct LatticeRef<'n> {
    pub core: &'n [u32],
    pub tail: &'n [u32],
    pub occ: &'n [u32],
    /// Bitset of local true ids hit by the core.
    pub core_true: &'n [u64],
}

pub(crate) struct Node {
    pub core: Vec<u32>,
    pub last: Option<u32>,
    pub occ: Vec<u32>,
    pub inherited: Vec<u32>,
    pub core_true: Vec<u64>,
}

impl Node {
    pub fn root(occ: Vec<u32>, core_true: Vec<u64>) -> Node {
        Node {
            core: Vec::new(),
            last: None,
            occ,
            inherited: Vec::new(),
            core_true,
        }
    }
}

impl<T: Scalar> MiningContext<'_, T> {
    /// Computes the node's tail and its frequent children.
    pub(crate) fn open(&self, node: &Node, theta: T, max_core: usize) -> (Vec<u32>, Vec<Node>) {
        let n = self.order.len();
        let start = node.last.map_or(0, |l| l as usize + 1);
        let width = n.saturating_sub(start);
        let mut counts = vec![0u32; width];
        for &tid in &node.occ {
            let tx = &self.false_tx[tid as usize];
            let from = tx.partition_point(|&r| (r as usize) < start);
            for &r in &tx[from..] {
                counts[r as usize - start] += 1;
            }
        }
        let mut in_tail = vec![false; width];
        for &r in &node.inherited {
            if r as usize >= start {
                in_tail[r as usize - start] = true;
            }
        }
        let full = node.occ.len() as u32;
        let mut tail = node.inherited.clone();
        for j in 0..width {
            if !in_tail[j] && counts[j] == full {
                tail.push((start + j) as u32);
                in_tail[j] = true;
            }
        }
        tail.sort_unstable();

        let mut children = Vec::new();
        if node.core.len() < max_core {
            // slot of each child item in `buckets`, or usize::MAX
            let mut slot = vec![usize::MAX; width];
            let mut items = Vec::new();
            for j in 0..width {
                if !in_tail[j] && self.is_frequent(counts[j] as usize, theta) {
                    slot[j] = items.len();
                    items.push(j);
                }
            }
            if items.is_empty() {
                return (tail, children);
            }
            let mut buckets: Vec<Vec<u32>> = items.iter().map(|&j| Vec::with_capacity(counts[j] as usize)).collect();
            for &tid in &node.occ {
                let tx = &self.false_tx[tid as usize];
                let from = tx.partition_point(|&r| (r as usize) < start);
                for &r in &tx[from..] {
                    let s = slot[r as usize - start];
                    if s != usize::MAX {
                        buckets[s].push(tid);
                    }
                }
            }
            for (j, occ) in items.into_iter().zip(buckets) {
                let e = (start + j) as u32;
                let mut core = node.core.clone();
                core.push(e);
                children.push(Node {
                    core,
                    last: Some(e),
                    occ,
                    inherited: tail.clone(),
                    core_true: and(&node.core_true, &self.true_bits[e as usize]),
                });
            }
        }
        (tail, children)
    }

    /// Emits the node's lattice, then its descendants, depth first.
    pub(crate) fn walk<F>(&self, node: Node, theta: T, max_core: usize, visit: &mut F)
    where
        F: FnMut(LatticeRef<'_>),
    {
        let (tail, children) = self.open(&node, theta, max_core);
        if !(node.core.is_empty() && tail.is_empty()) {
            visit(LatticeRef {
                core: &node.core,
                tail: &tail,
                occ: &node.occ,
                core_true: &node.core_true,
            });
        }
        for child in children {
            self.walk(child, theta, max_core, visit);
        }
    }

    pub(crate) fn to_lattice(&self, l: &LatticeRef<'_>) -> EquivalentLattice {
        EquivalentLattice {
            core: self.to_itemset(l.core),
            tail: l.tail.iter().map(|&r| self.order.item_at(r)).collect(),
            false_hits: l.occ.to_vec(),
        }
    }

    /// All lattices whose core has at most `max_core` items, covering the
    /// frequent itemsets (threshold `theta` on this direction's false
    /// dataset) in discovery order. The lattice holding only `∅` is omitted.
    pub fn lattices(&self, theta: T, max_core: usize) -> Vec<EquivalentLattice> {
        let mut out = Vec::new();
        let root = Node::root(self.all_false.clone(), self.all_true.clone());
        self.walk(root, theta, max_core, &mut |l| out.push(self.to_lattice(&l)));
        out
    }
}
