//! Union-find over the vertex set `{1, ..., n}` with component-size
//! bookkeeping and merge reporting.
//!
//! Union is by size with path compression. When two components of equal size
//! merge, the root with the smaller label survives, so the root of every
//! component is a deterministic function of the merge history.

use std::fmt;

use crate::error::{Error, Result};

/// A vertex label in `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    /// Wraps a label without checking it against any particular `n`.
    pub const fn new(label: u32) -> Self {
        Self(label)
    }

    pub const fn label(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    #[inline]
    pub(crate) fn from_index(i: usize) -> Self {
        Self(i as u32 + 1)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Result of a union. Roots and sizes are those before the merge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    pub merged: bool,
    pub root_a: VertexId,
    pub root_b: VertexId,
    pub size_a: u32,
    pub size_b: u32,
    pub new_root: VertexId,
    pub new_size: u32,
}

#[derive(Clone, Debug)]
pub struct Partition {
    parent: Vec<u32>,
    // Only meaningful at roots.
    size: Vec<u32>,
    component_count: usize,
    largest: u32,
    edge_count: u64,
}

impl Partition {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        if n >= u32::MAX as usize {
            return Err(Error::TooManyVertices(n));
        }
        Ok(Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            component_count: n,
            largest: 1,
            edge_count: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// Validates a raw label against this partition.
    pub fn vertex(&self, label: u32) -> Result<VertexId> {
        if label == 0 || label as usize > self.n() {
            return Err(Error::VertexOutOfRange { label, n: self.n() });
        }
        Ok(VertexId(label))
    }

    fn check(&self, v: VertexId) -> Result<usize> {
        self.vertex(v.0).map(VertexId::index)
    }

    /// Root of `v`'s component, compressing the path behind it.
    pub fn find(&mut self, v: VertexId) -> Result<VertexId> {
        let i = self.check(v)?;
        Ok(VertexId::from_index(self.find_index(i)))
    }

    #[inline]
    pub(crate) fn find_index(&mut self, mut i: usize) -> usize {
        let mut root = i;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        while self.parent[i] as usize != root {
            let next = self.parent[i] as usize;
            self.parent[i] = root as u32;
            i = next;
        }
        root
    }

    /// Root lookup without path compression.
    pub fn root_of(&self, v: VertexId) -> Result<VertexId> {
        let i = self.check(v)?;
        Ok(VertexId::from_index(self.root_index(i)))
    }

    #[inline]
    pub(crate) fn root_index(&self, mut i: usize) -> usize {
        while self.parent[i] as usize != i {
            i = self.parent[i] as usize;
        }
        i
    }

    pub fn union(&mut self, u: VertexId, v: VertexId) -> Result<MergeOutcome> {
        let (iu, iv) = (self.check(u)?, self.check(v)?);
        Ok(self.union_index(iu, iv))
    }

    pub(crate) fn union_index(&mut self, iu: usize, iv: usize) -> MergeOutcome {
        let ra = self.find_index(iu);
        let rb = self.find_index(iv);
        let (size_a, size_b) = (self.size[ra], self.size[rb]);
        if ra == rb {
            return MergeOutcome {
                merged: false,
                root_a: VertexId::from_index(ra),
                root_b: VertexId::from_index(rb),
                size_a,
                size_b,
                new_root: VertexId::from_index(ra),
                new_size: size_a,
            };
        }
        let (winner, loser) = if size_a > size_b || (size_a == size_b && ra < rb) {
            (ra, rb)
        } else {
            (rb, ra)
        };
        let new_size = size_a + size_b;
        self.parent[loser] = winner as u32;
        self.size[winner] = new_size;
        self.component_count -= 1;
        self.largest = self.largest.max(new_size);
        self.edge_count += 1;
        MergeOutcome {
            merged: true,
            root_a: VertexId::from_index(ra),
            root_b: VertexId::from_index(rb),
            size_a,
            size_b,
            new_root: VertexId::from_index(winner),
            new_size,
        }
    }

    /// Counts an edge inserted inside an existing component.
    pub fn record_internal_edge(&mut self) {
        self.edge_count += 1;
    }

    pub fn component_size(&self, v: VertexId) -> Result<u32> {
        let i = self.check(v)?;
        Ok(self.size[self.root_index(i)])
    }

    #[inline]
    pub(crate) fn size_of_root(&self, root: usize) -> u32 {
        self.size[root]
    }

    pub fn largest_size(&self) -> u32 {
        self.largest
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Root index of every vertex, by index.
    pub(crate) fn roots(&self) -> Vec<u32> {
        (0..self.n()).map(|i| self.root_index(i) as u32).collect()
    }

    /// Component sizes keyed by vertex index.
    pub fn sizes_by_vertex(&self) -> Vec<u32> {
        (0..self.n())
            .map(|i| self.size[self.root_index(i)])
            .collect()
    }
}
