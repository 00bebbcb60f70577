use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::itemset::{ItemId, Itemset};
use crate::miner::order::{reorder_items, MiningOrder};
use crate::rules::{optimize_sorted, DeltaCandidates, DeltaChoice, Direction, ScoreKey, SortedHits};
use crate::scalar::Scalar;

/// Vertical (item → instances) and horizontal (instance → items) views of
/// one direction's false and true datasets, in mining order.
///
/// Local instance ids are assigned in ascending score order, so every
/// occurrence list is also sorted by score.
pub struct MiningContext<'a, T> {
    pub(crate) direction: Direction,
    pub(crate) dataset: &'a Dataset<T>,
    pub(crate) candidates: &'a DeltaCandidates<T>,
    pub(crate) order: MiningOrder,
    pub(crate) false_rows: Vec<usize>,
    pub(crate) false_keys: Vec<ScoreKey<T>>,
    pub(crate) true_keys: Vec<ScoreKey<T>>,
    /// Per local false instance, its items as ascending ranks.
    pub(crate) false_tx: Vec<Vec<u32>>,
    /// Per rank, bitset over local true ids containing the item.
    pub(crate) true_bits: Vec<Vec<u64>>,
    pub(crate) all_false: Vec<u32>,
    pub(crate) all_true: Vec<u64>,
}

impl<'a, T: Scalar> MiningContext<'a, T> {
    pub fn new(
        dataset: &'a Dataset<T>,
        candidates: &'a DeltaCandidates<T>,
        direction: Direction,
    ) -> Result<Self> {
        let parts = dataset.partitions();
        let mut false_rows = parts.get(direction.false_outcome()).to_vec();
        if false_rows.is_empty() {
            return Err(Error::DirectionUnavailable(direction));
        }
        let mut true_rows = parts.get(direction.true_outcome()).to_vec();
        let key = |i: usize| {
            let s = dataset.instances()[i].score;
            ScoreKey {
                score: s,
                rank: candidates
                    .rank_of(s)
                    .expect("candidates built from the mining dataset"),
            }
        };
        false_rows.sort_by_key(|&i| (key(i).rank, i));
        true_rows.sort_by_key(|&i| (key(i).rank, i));

        let order = reorder_items(dataset, &false_rows);
        let n = order.len();
        let ranks = |i: usize| -> Vec<u32> {
            let mut r: Vec<u32> = dataset.instances()[i]
                .items
                .iter()
                .filter(|&x| (x as usize) < n)
                .map(|x| order.rank_of(x))
                .collect();
            r.sort_unstable();
            r
        };
        let false_tx: Vec<Vec<u32>> = false_rows.iter().map(|&i| ranks(i)).collect();
        let words = true_rows.len().div_ceil(64);
        let mut true_bits = vec![vec![0u64; words]; n];
        let mut all_true = vec![0u64; words];
        for (local, &i) in true_rows.iter().enumerate() {
            set_bit(&mut all_true, local);
            for r in ranks(i) {
                set_bit(&mut true_bits[r as usize], local);
            }
        }
        Ok(MiningContext {
            direction,
            dataset,
            candidates,
            false_keys: false_rows.iter().map(|&i| key(i)).collect(),
            true_keys: true_rows.iter().map(|&i| key(i)).collect(),
            all_false: (0..false_rows.len() as u32).collect(),
            all_true,
            false_rows,
            order,
            false_tx,
            true_bits,
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn dataset(&self) -> &'a Dataset<T> {
        self.dataset
    }

    pub fn order(&self) -> &MiningOrder {
        &self.order
    }

    pub fn n_false(&self) -> usize {
        self.false_rows.len()
    }

    /// Dataset index of a local false id.
    pub fn false_row(&self, local: u32) -> usize {
        self.false_rows[local as usize]
    }

    /// `|Dᶠ(X)| / |Dᶠ| >= θ`.
    #[inline]
    pub(crate) fn is_frequent(&self, count: usize, theta: T) -> bool {
        T::ratio(count, self.n_false()) >= theta
    }

    pub(crate) fn to_itemset(&self, ranks: &[u32]) -> Itemset {
        ranks.iter().map(|&r| self.order.item_at(r)).collect()
    }

    pub(crate) fn to_ranks(&self, items: &[ItemId]) -> Vec<u32> {
        items.iter().map(|&x| self.order.rank_of(x)).collect()
    }

    /// Bitset of local true ids containing every item in `ranks`.
    pub(crate) fn true_hits(&self, ranks: &[u32]) -> Vec<u64> {
        let mut acc = self.all_true.clone();
        for &r in ranks {
            and_assign(&mut acc, &self.true_bits[r as usize]);
        }
        acc
    }

    pub(crate) fn optimize(&self, false_hits: &[u32], true_hits: &[u64], theta: T) -> DeltaChoice<T> {
        let true_ids = bit_ids(true_hits);
        optimize_sorted(
            self.direction,
            self.candidates,
            self.n_false(),
            theta,
            SortedHits {
                ids: false_hits,
                keys: &self.false_keys,
            },
            SortedHits {
                ids: &true_ids,
                keys: &self.true_keys,
            },
        )
    }
}

#[inline]
fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

#[inline]
pub(crate) fn and_assign(acc: &mut [u64], other: &[u64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a &= b;
    }
}

pub(crate) fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

/// Set bit positions, ascending.
pub(crate) fn bit_ids(bits: &[u64]) -> Vec<u32> {
    let mut out = Vec::with_capacity(bits.iter().map(|w| w.count_ones() as usize).sum());
    for (w, &word) in bits.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            out.push((w * 64) as u32 + x.trailing_zeros());
            x &= x - 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitset_ids() {
        let mut b = vec![0u64; 2];
        for i in [0, 5, 63, 64, 100] {
            set_bit(&mut b, i);
        }
        assert_eq!(bit_ids(&b), vec![0, 5, 63, 64, 100]);
        assert_eq!(bit_ids(&and(&b, &[1, 0])), vec![0]);
    }
}
