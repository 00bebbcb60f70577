use crate::data::Dataset;
use crate::itemset::ItemId;
use crate::scalar::Scalar;

/// Permutation of item ids used as the extension order during mining.
/// Rank `r` is the `r`-th item in mining order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningOrder {
    item_at: Vec<ItemId>,
    rank_of: Vec<u32>,
}

impl MiningOrder {
    pub fn identity(n_items: usize) -> Self {
        let ids: Vec<ItemId> = (0..n_items as ItemId).collect();
        MiningOrder {
            rank_of: ids.clone(),
            item_at: ids,
        }
    }

    /// Ascending occurrence count, ties by original id.
    pub fn by_ascending_count(counts: &[usize]) -> Self {
        let mut item_at: Vec<ItemId> = (0..counts.len() as ItemId).collect();
        item_at.sort_by_key(|&i| (counts[i as usize], i));
        let mut rank_of = vec![0u32; counts.len()];
        for (r, &i) in item_at.iter().enumerate() {
            rank_of[i as usize] = r as u32;
        }
        MiningOrder { item_at, rank_of }
    }

    pub fn len(&self) -> usize {
        self.item_at.len()
    }

    pub fn is_empty(&self) -> bool {
        self.item_at.is_empty()
    }

    #[inline]
    pub fn item_at(&self, rank: u32) -> ItemId {
        self.item_at[rank as usize]
    }

    #[inline]
    pub fn rank_of(&self, item: ItemId) -> u32 {
        self.rank_of[item as usize]
    }

    /// Items in mining order.
    pub fn items(&self) -> &[ItemId] {
        &self.item_at
    }
}

/// Mining order for the instances `false_rows` of `dataset`: items sorted
/// by ascending number of those instances containing them.
pub fn reorder_items<T: Scalar>(dataset: &Dataset<T>, false_rows: &[usize]) -> MiningOrder {
    let mut counts = vec![0usize; dataset.n_items()];
    for &i in false_rows {
        for x in dataset.instances()[i].items.iter() {
            if let Some(c) = counts.get_mut(x as usize) {
                *c += 1;
            }
        }
    }
    MiningOrder::by_ascending_count(&counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;

    #[test]
    fn rarer_items_come_first() {
        let o = MiningOrder::by_ascending_count(&[5, 2]);
        assert_eq!(o.items(), &[1, 0]);
        assert_eq!(o.rank_of(1), 0);
    }

    #[test]
    fn ties_keep_original_order() {
        let o = MiningOrder::by_ascending_count(&[3, 3, 3]);
        assert_eq!(o.items(), &[0, 1, 2]);
    }

    #[test]
    fn unused_items_lead() {
        let ds = Dataset::from_triples(
            3,
            vec![
                (vec![0, 1], -0.5, Label::Positive),
                (vec![0], -0.5, Label::Positive),
            ],
        );
        let o = reorder_items(&ds, &[0, 1]);
        assert_eq!(o.items(), &[2, 1, 0]);
        for r in 0..3 {
            assert_eq!(o.rank_of(o.item_at(r)), r);
        }
    }
}
