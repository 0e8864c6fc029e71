//! Ordered set of distinct keys stored as a list of sorted blocks, with a
//! Fenwick tree over block lengths for logarithmic rank and select.

use crate::fenwick::Fenwick;

const LOAD: usize = 512;

#[derive(Clone, Debug)]
pub struct SortedBlocks<K> {
    blocks: Vec<Vec<K>>,
    maxes: Vec<K>,
    lens: Fenwick,
    len: usize,
}

impl<K: Ord + Copy> Default for SortedBlocks<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Copy> SortedBlocks<K> {
    pub fn new() -> Self {
        Self {
            blocks: Vec::new(),
            maxes: Vec::new(),
            lens: Fenwick::new(0),
            len: 0,
        }
    }

    /// Builds from keys that are already strictly increasing.
    pub fn from_sorted(keys: impl IntoIterator<Item = K>) -> Self {
        let mut blocks = Vec::new();
        let mut current = Vec::with_capacity(LOAD);
        for key in keys {
            debug_assert!(current.last().is_none_or(|&last| last < key));
            current.push(key);
            if current.len() == LOAD {
                blocks.push(std::mem::replace(&mut current, Vec::with_capacity(LOAD)));
            }
        }
        if !current.is_empty() {
            blocks.push(current);
        }
        let mut out = Self {
            blocks,
            maxes: Vec::new(),
            lens: Fenwick::new(0),
            len: 0,
        };
        out.reindex();
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn reindex(&mut self) {
        self.maxes = self.blocks.iter().map(|b| *b.last().unwrap()).collect();
        let counts: Vec<u64> = self.blocks.iter().map(|b| b.len() as u64).collect();
        self.lens = Fenwick::from_counts(&counts);
        self.len = counts.iter().sum::<u64>() as usize;
    }

    fn block_for(&self, key: &K) -> usize {
        self.maxes.partition_point(|m| m < key)
    }

    /// Inserts `key`; returns false if it was already present.
    pub fn insert(&mut self, key: K) -> bool {
        if self.blocks.is_empty() {
            self.blocks.push(vec![key]);
            self.reindex();
            return true;
        }
        let b = self.block_for(&key).min(self.blocks.len() - 1);
        let block = &mut self.blocks[b];
        match block.binary_search(&key) {
            Ok(_) => return false,
            Err(at) => block.insert(at, key),
        }
        self.len += 1;
        if block.len() > 2 * LOAD {
            let tail = block.split_off(LOAD);
            self.blocks.insert(b + 1, tail);
            self.reindex();
        } else {
            self.maxes[b] = *block.last().unwrap();
            self.lens.add(b, 1);
        }
        true
    }

    /// Removes `key`; returns false if it was absent.
    pub fn remove(&mut self, key: &K) -> bool {
        let b = self.block_for(key);
        if b == self.blocks.len() {
            return false;
        }
        let block = &mut self.blocks[b];
        let Ok(at) = block.binary_search(key) else {
            return false;
        };
        block.remove(at);
        let remaining = block.len();
        self.len -= 1;
        if remaining == 0 {
            self.blocks.remove(b);
            self.reindex();
        } else if remaining < LOAD / 4 && b + 1 < self.blocks.len() {
            let next = self.blocks.remove(b + 1);
            self.blocks[b].extend(next);
            if self.blocks[b].len() > 2 * LOAD {
                let tail = self.blocks[b].split_off(LOAD);
                self.blocks.insert(b + 1, tail);
            }
            self.reindex();
        } else {
            self.maxes[b] = *self.blocks[b].last().unwrap();
            self.lens.sub(b, 1);
        }
        true
    }

    /// The key of 0-based rank `rank`.
    pub fn select(&self, rank: usize) -> Option<K> {
        let b = self.lens.select(rank as u64)?;
        let offset = rank - self.lens.prefix(b) as usize;
        Some(self.blocks[b][offset])
    }

    /// Number of stored keys strictly less than `key`.
    pub fn rank(&self, key: &K) -> usize {
        let b = self.block_for(key);
        if b == self.blocks.len() {
            return self.len;
        }
        self.lens.prefix(b) as usize + self.blocks[b].partition_point(|k| k < key)
    }

    pub fn contains(&self, key: &K) -> bool {
        let b = self.block_for(key);
        b < self.blocks.len() && self.blocks[b].binary_search(key).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &K> + '_ {
        self.blocks.iter().flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    proptest! {
        #[test]
        fn matches_btreeset(ops in prop::collection::vec((any::<bool>(), 0u32..3000), 0..4000)) {
            let mut ours = SortedBlocks::new();
            let mut reference = BTreeSet::new();
            for (insert, key) in ops {
                if insert {
                    prop_assert_eq!(ours.insert(key), reference.insert(key));
                } else {
                    prop_assert_eq!(ours.remove(&key), reference.remove(&key));
                }
            }
            prop_assert_eq!(ours.len(), reference.len());
            let flat: Vec<u32> = reference.iter().copied().collect();
            for (i, k) in flat.iter().enumerate() {
                prop_assert_eq!(ours.select(i), Some(*k));
                prop_assert_eq!(ours.rank(k), i);
            }
            prop_assert_eq!(ours.select(flat.len()), None);
            prop_assert_eq!(ours.rank(&u32::MAX), flat.len());
        }
    }

    #[test]
    fn bulk_build_then_edit() {
        let mut s = SortedBlocks::from_sorted((0..5000u64).map(|x| 2 * x));
        assert_eq!(s.len(), 5000);
        assert_eq!(s.select(1234), Some(2468));
        assert!(s.insert(2469));
        assert_eq!(s.rank(&2470), 1236);
        for x in 0..2500u64 {
            assert!(s.remove(&(4 * x)));
        }
        assert_eq!(s.len(), 2501);
        assert!(s.contains(&2469));
        assert!(!s.contains(&4));
    }
}
