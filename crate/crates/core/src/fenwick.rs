//! Fenwick (binary indexed) tree over non-negative counts with prefix sums and
//! rank descent.

#[derive(Clone, Debug)]
pub struct Fenwick {
    tree: Vec<u64>,
    total: u64,
}

impl Fenwick {
    /// A tree over positions `0..len`, all zero.
    pub fn new(len: usize) -> Self {
        Self {
            tree: vec![0; len + 1],
            total: 0,
        }
    }

    /// Builds in O(len) from explicit per-position counts.
    pub fn from_counts(counts: &[u64]) -> Self {
        let mut tree = vec![0; counts.len() + 1];
        tree[1..].copy_from_slice(counts);
        for i in 1..tree.len() {
            let j = i + (i & i.wrapping_neg());
            if j < tree.len() {
                tree[j] += tree[i];
            }
        }
        Self {
            tree,
            total: counts.iter().sum(),
        }
    }

    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn add(&mut self, pos: usize, delta: u64) {
        debug_assert!(pos < self.len());
        self.total += delta;
        let mut i = pos + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Subtracts `delta`; the count at `pos` must stay non-negative.
    pub fn sub(&mut self, pos: usize, delta: u64) {
        debug_assert!(pos < self.len());
        self.total -= delta;
        let mut i = pos + 1;
        while i < self.tree.len() {
            self.tree[i] -= delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of counts at positions `0..end`.
    pub fn prefix(&self, end: usize) -> u64 {
        let mut i = end.min(self.len());
        let mut acc = 0;
        while i > 0 {
            acc += self.tree[i];
            i &= i - 1;
        }
        acc
    }

    /// Smallest position `p` with `prefix(p + 1) > rank`, i.e. the position
    /// holding the element of 0-based rank `rank`. `None` if `rank >= total`.
    pub fn select(&self, rank: u64) -> Option<usize> {
        if rank >= self.total {
            return None;
        }
        let mut pos = 0;
        let mut remaining = rank;
        let mut step = usize::BITS - 1 - self.len().leading_zeros();
        loop {
            let next = pos + (1usize << step);
            if next < self.tree.len() && self.tree[next] <= remaining {
                pos = next;
                remaining -= self.tree[next];
            }
            if step == 0 {
                break;
            }
            step -= 1;
        }
        Some(pos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_and_select_agree_with_scan() {
        let counts = [0u64, 3, 0, 1, 5, 0, 0, 2, 1];
        let fw = Fenwick::from_counts(&counts);
        let mut incremental = Fenwick::new(counts.len());
        for (i, &c) in counts.iter().enumerate() {
            incremental.add(i, c);
        }
        for end in 0..=counts.len() {
            let expect: u64 = counts[..end].iter().sum();
            assert_eq!(fw.prefix(end), expect);
            assert_eq!(incremental.prefix(end), expect);
        }
        let mut flat = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            flat.extend(std::iter::repeat_n(i, c as usize));
        }
        for (rank, &pos) in flat.iter().enumerate() {
            assert_eq!(fw.select(rank as u64), Some(pos));
        }
        assert_eq!(fw.select(flat.len() as u64), None);
    }

    #[test]
    fn sub_undoes_add() {
        let mut fw = Fenwick::new(5);
        fw.add(2, 4);
        fw.add(4, 1);
        fw.sub(2, 4);
        assert_eq!(fw.total(), 1);
        assert_eq!(fw.select(0), Some(4));
    }
}
