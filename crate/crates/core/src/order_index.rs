//! Incremental index over the vertex ordering by (component size, label).
//!
//! The restricted set is the first `floor(beta * n)` vertices of that ordering.
//! The index answers `select(rank)` over it and reports `alpha`, the size of
//! the component containing the last restricted vertex.
//!
//! Layout:
//! - a Fenwick tree over size classes holds the number of vertices in
//!   components of each size, which locates the boundary class and `alpha`;
//! - components of size at most `alpha` have their vertices in an ordered key
//!   set, keyed by (size, label). Larger components cannot intersect the
//!   restricted set and are only tracked per size class, to be inserted when
//!   `alpha` reaches them;
//! - the largest component, once it passes [`BIG_THRESHOLD`], is kept out of
//!   the key set and mirrored in a Fenwick tree over labels. It grows by
//!   absorbing smaller components, so its vertices are inserted once instead
//!   of being re-keyed on every merge.

use crate::dsu::{MergeOutcome, Partition, VertexId};
use crate::error::{Error, Result};
use crate::fenwick::Fenwick;
use crate::sorted_blocks::SortedBlocks;

/// Largest-component size above which it gets the dedicated label structure.
pub const BIG_THRESHOLD: u32 = 64;

const NIL: u32 = u32::MAX;

/// How vertices in equally sized components are ordered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TieBreak {
    /// Ascending vertex label.
    #[default]
    Lexicographic,
    /// Components ordered by their smallest label, then labels within a
    /// component. Coarser than the lexicographic order and not the default.
    ComponentGrouped,
}

/// A rank into the restricted set, `0 <= rank < restricted_size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankDraw(pub u64);

/// `floor(beta * n)`, rejecting beta outside `(0, 1]` and an empty result.
pub fn restricted_size(n: usize, beta: f64) -> Result<u64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidBeta(beta));
    }
    let m = (beta * n as f64).floor() as u64;
    if m == 0 {
        return Err(Error::EmptyRestrictedSet { beta, n });
    }
    Ok(m.min(n as u64))
}

#[inline]
fn key(tie_break: TieBreak, size: u32, min_label: u32, label: u32) -> u128 {
    let group = match tie_break {
        TieBreak::Lexicographic => 0,
        TieBreak::ComponentGrouped => min_label as u128,
    };
    ((size as u128) << 64) | (group << 32) | label as u128
}

#[inline]
fn key_label(key: u128) -> u32 {
    key as u32
}

#[derive(Clone, Debug)]
pub struct OrderIndex {
    n: usize,
    beta: f64,
    restricted: u64,
    tie_break: TieBreak,
    alpha: u32,
    /// Position `s - 1` counts vertices in components of size `s`.
    class_counts: Fenwick,
    // Per vertex index; size and min label are meaningful at roots only.
    comp_size: Vec<u32>,
    min_label: Vec<u32>,
    next_member: Vec<u32>,
    in_keys: Vec<bool>,
    // Intrusive doubly linked lists of roots per component size.
    size_head: Vec<u32>,
    size_next: Vec<u32>,
    size_prev: Vec<u32>,
    keys: SortedBlocks<u128>,
    big: Option<u32>,
    big_labels: Fenwick,
}

impl OrderIndex {
    pub fn build(p: &Partition, beta: f64) -> Result<Self> {
        Self::build_with(p, beta, TieBreak::Lexicographic)
    }

    pub fn build_with(p: &Partition, beta: f64, tie_break: TieBreak) -> Result<Self> {
        let n = p.n();
        let restricted = restricted_size(n, beta)?;
        let roots = p.roots();

        let mut comp_size = vec![0u32; n];
        let mut min_label = vec![u32::MAX; n];
        let mut next_member: Vec<u32> = (0..n as u32).collect();
        for (i, &r) in roots.iter().enumerate() {
            let r = r as usize;
            if r == i {
                comp_size[i] = p.size_of_root(i);
            } else {
                next_member[i] = next_member[r];
                next_member[r] = i as u32;
            }
            min_label[r] = min_label[r].min(i as u32 + 1);
        }

        let mut counts = vec![0u64; n];
        for i in 0..n {
            if comp_size[i] > 0 {
                counts[comp_size[i] as usize - 1] += comp_size[i] as u64;
            }
        }
        let class_counts = Fenwick::from_counts(&counts);

        let mut index = Self {
            n,
            beta,
            restricted,
            tie_break,
            alpha: 1,
            class_counts,
            comp_size,
            min_label,
            next_member,
            in_keys: vec![false; n],
            size_head: vec![NIL; n + 1],
            size_next: vec![NIL; n],
            size_prev: vec![NIL; n],
            keys: SortedBlocks::new(),
            big: None,
            big_labels: Fenwick::new(0),
        };
        for r in (0..n).rev() {
            if index.comp_size[r] > 0 {
                index.link_size(r);
            }
        }
        index.alpha = index.boundary_class();

        let largest = (0..n)
            .filter(|&r| index.comp_size[r] > 0)
            .max_by_key(|&r| (index.comp_size[r], std::cmp::Reverse(r)));
        if let Some(r) = largest {
            if index.comp_size[r] >= BIG_THRESHOLD {
                index.big_labels = Fenwick::new(n);
                index.big = Some(r as u32);
                index.add_big_labels(r);
            }
        }

        let mut initial = Vec::new();
        for r in 0..n {
            if index.wants_keys(r) {
                index.in_keys[r] = true;
                let (size, min) = (index.comp_size[r], index.min_label[r]);
                for v in index.members(r) {
                    initial.push(key(tie_break, size, min, v as u32 + 1));
                }
            }
        }
        initial.sort_unstable();
        index.keys = SortedBlocks::from_sorted(initial);
        Ok(index)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    /// `floor(beta * n)`.
    pub fn restricted_size(&self) -> u64 {
        self.restricted
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Number of vertices in components of size exactly `s`.
    pub fn class_count(&self, s: u32) -> u64 {
        if s == 0 || s as usize > self.n {
            return 0;
        }
        let s = s as usize;
        self.class_counts.prefix(s) - self.class_counts.prefix(s - 1)
    }

    fn boundary_class(&self) -> u32 {
        self.class_counts
            .select(self.restricted - 1)
            .expect("class counts sum to n") as u32
            + 1
    }

    fn wants_keys(&self, root: usize) -> bool {
        let size = self.comp_size[root];
        size > 0 && size <= self.alpha && self.big != Some(root as u32)
    }

    fn members(&self, root: usize) -> Members<'_> {
        Members {
            next: &self.next_member,
            start: root as u32,
            cur: Some(root as u32),
        }
    }

    fn link_size(&mut self, root: usize) {
        let s = self.comp_size[root] as usize;
        let head = self.size_head[s];
        self.size_next[root] = head;
        self.size_prev[root] = NIL;
        if head != NIL {
            self.size_prev[head as usize] = root as u32;
        }
        self.size_head[s] = root as u32;
    }

    fn unlink_size(&mut self, root: usize) {
        let s = self.comp_size[root] as usize;
        let (prev, next) = (self.size_prev[root], self.size_next[root]);
        if prev == NIL {
            self.size_head[s] = next;
        } else {
            self.size_next[prev as usize] = next;
        }
        if next != NIL {
            self.size_prev[next as usize] = prev;
        }
        self.size_next[root] = NIL;
        self.size_prev[root] = NIL;
    }

    fn set_keys(&mut self, root: usize, present: bool) {
        if self.in_keys[root] == present {
            return;
        }
        let (size, min, tb) = (self.comp_size[root], self.min_label[root], self.tie_break);
        let mut cur = root;
        loop {
            let k = key(tb, size, min, cur as u32 + 1);
            if present {
                self.keys.insert(k);
            } else {
                self.keys.remove(&k);
            }
            cur = self.next_member[cur] as usize;
            if cur == root {
                break;
            }
        }
        self.in_keys[root] = present;
    }

    fn sync(&mut self, root: usize) {
        let want = self.wants_keys(root);
        self.set_keys(root, want);
    }

    fn add_big_labels(&mut self, root: usize) {
        let mut cur = root;
        loop {
            self.big_labels.add(cur, 1);
            cur = self.next_member[cur] as usize;
            if cur == root {
                break;
            }
        }
    }

    fn remove_big_labels(&mut self, root: usize) {
        let mut cur = root;
        loop {
            self.big_labels.sub(cur, 1);
            cur = self.next_member[cur] as usize;
            if cur == root {
                break;
            }
        }
    }

    /// Brings the index in line with a merge just applied to the partition.
    pub fn apply_merge(&mut self, m: &MergeOutcome) -> Result<()> {
        if !m.merged {
            return Err(Error::StaleMerge("outcome is not a merge".into()));
        }
        let (ra, rb) = (m.root_a.index(), m.root_b.index());
        if ra >= self.n || rb >= self.n || ra == rb {
            return Err(Error::StaleMerge(format!(
                "roots {} and {} are not two distinct vertices",
                m.root_a, m.root_b
            )));
        }
        if self.comp_size[ra] != m.size_a || self.comp_size[rb] != m.size_b {
            return Err(Error::StaleMerge(format!(
                "index has sizes ({}, {}) for roots ({}, {}), outcome says ({}, {})",
                self.comp_size[ra], self.comp_size[rb], m.root_a, m.root_b, m.size_a, m.size_b
            )));
        }
        let winner = m.new_root.index();
        let new_size = m.size_a + m.size_b;
        if (winner != ra && winner != rb) || m.new_size != new_size {
            return Err(Error::StaleMerge(format!(
                "new root {} / size {} inconsistent with the merged roots",
                m.new_root, m.new_size
            )));
        }
        let loser = if winner == ra { rb } else { ra };

        self.set_keys(ra, false);
        self.set_keys(rb, false);
        self.unlink_size(ra);
        self.unlink_size(rb);
        self.class_counts
            .sub(m.size_a as usize - 1, m.size_a as u64);
        self.class_counts
            .sub(m.size_b as usize - 1, m.size_b as u64);
        self.class_counts
            .add(new_size as usize - 1, new_size as u64);

        // Big-component bookkeeping needs the pre-merge member lists.
        let mut released = None;
        match self.big {
            Some(b) if b as usize == ra || b as usize == rb => {
                let other = if b as usize == ra { rb } else { ra };
                self.add_big_labels(other);
                self.big = Some(winner as u32);
            }
            Some(b) if new_size > self.comp_size[b as usize] => {
                self.remove_big_labels(b as usize);
                self.add_big_labels(ra);
                self.add_big_labels(rb);
                self.big = Some(winner as u32);
                released = Some(b as usize);
            }
            None if new_size >= BIG_THRESHOLD => {
                if self.big_labels.is_empty() {
                    self.big_labels = Fenwick::new(self.n);
                }
                self.add_big_labels(ra);
                self.add_big_labels(rb);
                self.big = Some(winner as u32);
            }
            _ => {}
        }

        self.next_member.swap(ra, rb);
        self.min_label[winner] = self.min_label[ra].min(self.min_label[rb]);
        self.comp_size[loser] = 0;
        self.comp_size[winner] = new_size;
        self.link_size(winner);

        let old_alpha = self.alpha;
        self.alpha = self.boundary_class();
        debug_assert!(self.alpha >= old_alpha);
        for s in old_alpha as usize + 1..=self.alpha as usize {
            let mut r = self.size_head[s];
            while r != NIL {
                self.sync(r as usize);
                r = self.size_next[r as usize];
            }
        }
        if let Some(b) = released {
            self.sync(b);
        }
        self.sync(winner);
        Ok(())
    }

    /// The vertex of 0-based rank `r` in the (size, label) ordering, for
    /// ranks inside the restricted set.
    pub fn select(&self, r: RankDraw) -> Result<VertexId> {
        let rank = r.0;
        if rank >= self.restricted {
            return Err(Error::RankOutOfRange {
                rank,
                len: self.restricted,
            });
        }
        let alpha = self.alpha;
        let below = self.class_counts.prefix(alpha as usize - 1);
        let label = match self.big {
            Some(b) if rank >= below && self.comp_size[b as usize] == alpha => {
                self.select_in_big_class(b as usize, below, rank - below)
            }
            _ => key_label(self.keys.select(rank as usize).expect("rank within keys")),
        };
        Ok(VertexId::new(label))
    }

    /// Offset `j` within the boundary class when the big component is in it.
    fn select_in_big_class(&self, big: usize, below: u64, j: u64) -> u32 {
        let others = self.keys.len() as u64 - below;
        let from_big = |j: u64| self.big_labels.select(j).expect("offset within big") as u32 + 1;
        if others == 0 {
            return from_big(j);
        }
        let alpha = self.alpha;
        match self.tie_break {
            TieBreak::ComponentGrouped => {
                let start = key(self.tie_break, alpha, self.min_label[big], 0);
                let before = self.keys.rank(&start) as u64 - below;
                let big_size = self.comp_size[big] as u64;
                if j < before {
                    key_label(self.keys.select((below + j) as usize).unwrap())
                } else if j < before + big_size {
                    from_big(j - before)
                } else {
                    key_label(self.keys.select((below + j - big_size) as usize).unwrap())
                }
            }
            TieBreak::Lexicographic => {
                // Smallest label x with more than j class members <= x.
                let count_le = |x: u32| {
                    let tied = self.keys.rank(&key(self.tie_break, alpha, 0, x + 1)) as u64 - below;
                    tied + self.big_labels.prefix(x as usize)
                };
                let (mut lo, mut hi) = (1u32, self.n as u32);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if count_le(mid) > j {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                lo
            }
        }
    }
}

struct Members<'a> {
    next: &'a [u32],
    start: u32,
    cur: Option<u32>,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let cur = self.cur?;
        let next = self.next[cur as usize];
        self.cur = (next != self.start).then_some(next);
        Some(cur as usize)
    }
}

/// Test oracle: sorts all `n` keys and picks rank `r`. O(n log n) per call.
pub fn reference_select(p: &Partition, beta: f64, r: RankDraw) -> Result<VertexId> {
    reference_select_with(p, beta, r, TieBreak::Lexicographic)
}

pub fn reference_select_with(
    p: &Partition,
    beta: f64,
    r: RankDraw,
    tie_break: TieBreak,
) -> Result<VertexId> {
    let m = restricted_size(p.n(), beta)?;
    if r.0 >= m {
        return Err(Error::RankOutOfRange { rank: r.0, len: m });
    }
    let order = reference_order(p, tie_break);
    Ok(order[r.0 as usize])
}

/// Every vertex, sorted by the ordering key.
pub fn reference_order(p: &Partition, tie_break: TieBreak) -> Vec<VertexId> {
    let roots = p.roots();
    let mut min_label = vec![u32::MAX; p.n()];
    for (i, &r) in roots.iter().enumerate() {
        let slot = &mut min_label[r as usize];
        *slot = (*slot).min(i as u32 + 1);
    }
    let mut keys: Vec<(u32, u32, u32)> = (0..p.n())
        .map(|i| {
            let r = roots[i] as usize;
            let group = match tie_break {
                TieBreak::Lexicographic => 0,
                TieBreak::ComponentGrouped => min_label[r],
            };
            (p.size_of_root(r), group, i as u32 + 1)
        })
        .collect();
    keys.sort_unstable();
    keys.into_iter().map(|(_, _, l)| VertexId::new(l)).collect()
}
