//! Itemsets and per-instance item bitsets.

use std::fmt;

/// Index of an item in an [`ItemVocabulary`](crate::data::ItemVocabulary).
pub type ItemId = u32;

/// A set of items kept as a sorted, duplicate-free list of ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itemset(Vec<ItemId>);

impl Itemset {
    pub fn empty() -> Self {
        Itemset(Vec::new())
    }

    pub fn new(mut items: Vec<ItemId>) -> Self {
        items.sort_unstable();
        items.dedup();
        Itemset(items)
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut rest = other.0.iter();
        'outer: for &x in &self.0 {
            for &y in rest.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_strict_subset_of(&self, other: &Itemset) -> bool {
        self.0.len() < other.0.len() && self.is_subset_of(other)
    }

    pub fn with(&self, item: ItemId) -> Itemset {
        let mut items = self.0.clone();
        if let Err(pos) = items.binary_search(&item) {
            items.insert(pos, item);
        }
        Itemset(items)
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        let mut items = self.0.clone();
        items.extend_from_slice(&other.0);
        Itemset::new(items)
    }

    pub fn into_vec(self) -> Vec<ItemId> {
        self.0
    }
}

impl FromIterator<ItemId> for Itemset {
    fn from_iter<I: IntoIterator<Item = ItemId>>(iter: I) -> Self {
        Itemset::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Fixed-width bitset over item ids; the itemset `t` of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ItemBits {
    words: Vec<u64>,
}

impl ItemBits {
    pub fn with_capacity(n_items: usize) -> Self {
        ItemBits {
            words: vec![0; n_items.div_ceil(64)],
        }
    }

    pub fn from_items(n_items: usize, items: impl IntoIterator<Item = ItemId>) -> Self {
        let mut bits = Self::with_capacity(n_items);
        for x in items {
            bits.insert(x);
        }
        bits
    }

    pub fn insert(&mut self, item: ItemId) {
        let i = item as usize;
        if i / 64 >= self.words.len() {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, item: ItemId) -> bool {
        let i = item as usize;
        self.words
            .get(i / 64)
            .is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    /// `X ⊆ t`.
    #[inline]
    pub fn contains_all(&self, itemset: &Itemset) -> bool {
        itemset.items().iter().all(|&x| self.contains(x))
    }

    pub fn iter(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((wi * 64) as ItemId + b)
            })
        })
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_itemset(&self) -> Itemset {
        Itemset(self.iter().collect())
    }
}
