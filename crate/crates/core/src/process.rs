//! Step functions for the Erdos-Renyi, half-restricted and Achlioptas
//! (min-product / min-sum) processes.
//!
//! Every step consumes randomness only from the generator it is handed, so a
//! run is a pure function of its seed. The draw-consuming functions are thin
//! wrappers over `*_apply` functions that take the draws explicitly.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use crate::dsu::{MergeOutcome, Partition, VertexId};
use crate::error::{Error, Result};
use crate::order_index::{restricted_size, OrderIndex, RankDraw, TieBreak};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AchlioptasRule {
    MinProduct,
    MinSum,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProcessKind {
    ErdosRenyi,
    HalfRestricted { beta: f64 },
    Achlioptas(AchlioptasRule),
}

impl ProcessKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ProcessKind::HalfRestricted { beta } if !(beta > 0.0 && beta <= 1.0) => {
                Err(Error::InvalidBeta(beta))
            }
            _ => Ok(()),
        }
    }

    /// Short name used in file names and logs.
    pub fn label(&self) -> String {
        match self {
            ProcessKind::ErdosRenyi => "er".into(),
            ProcessKind::HalfRestricted { beta } => format!("half-restricted-{beta}"),
            ProcessKind::Achlioptas(AchlioptasRule::MinProduct) => "min-product".into(),
            ProcessKind::Achlioptas(AchlioptasRule::MinSum) => "min-sum".into(),
        }
    }

    pub fn min_vertices(&self) -> usize {
        match self {
            ProcessKind::ErdosRenyi => 2,
            ProcessKind::HalfRestricted { .. } => 1,
            ProcessKind::Achlioptas(_) => 4,
        }
    }
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProcessOptions {
    pub tie_break: TieBreak,
    /// Achlioptas candidates are rejected until both are non-edges.
    pub strict_achlioptas: bool,
    /// Equal rule scores are broken by a fair coin instead of taking the first.
    pub random_rule_ties: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    First,
    Second,
}

/// Picks the candidate with the smaller product (or sum) of component sizes;
/// ties go to the first.
pub fn rule_choose(first: (u32, u32), second: (u32, u32), rule: AchlioptasRule) -> Choice {
    match rule_cmp(first, second, rule) {
        std::cmp::Ordering::Greater => Choice::Second,
        _ => Choice::First,
    }
}

fn rule_cmp(first: (u32, u32), second: (u32, u32), rule: AchlioptasRule) -> std::cmp::Ordering {
    let score = |(s, t): (u32, u32)| match rule {
        AchlioptasRule::MinProduct => s as u64 * t as u64,
        AchlioptasRule::MinSum => s as u64 + t as u64,
    };
    score(first).cmp(&score(second))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub u: VertexId,
    pub v: VertexId,
    pub sizes: (u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub step: u64,
    pub u: VertexId,
    pub v: VertexId,
    /// A new edge was added to the graph.
    pub inserted: bool,
    /// Present iff the edge joined two components.
    pub merge: Option<MergeOutcome>,
    pub candidates: Option<[Candidate; 2]>,
    pub chosen: Option<Choice>,
}

impl StepRecord {
    pub fn merged(&self) -> bool {
        self.merge.is_some()
    }
}

#[inline]
fn pack(a: usize, b: usize) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    ((lo as u64) << 32) | hi as u64
}

/// The evolving graph: component structure, the set of inserted edges and the
/// step counter.
#[derive(Clone, Debug)]
pub struct Graph {
    partition: Partition,
    edges: FxHashSet<u64>,
    steps: u64,
}

impl Graph {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            partition: Partition::new(n)?,
            edges: FxHashSet::default(),
            steps: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains(&pack(u.index(), v.index()))
    }

    fn max_edges(&self) -> u64 {
        let n = self.n() as u64;
        n * (n - 1) / 2
    }

    /// Adds `{u, v}` unless it is a loop or already present.
    fn insert(&mut self, u: VertexId, v: VertexId) -> (bool, Option<MergeOutcome>) {
        let (iu, iv) = (u.index(), v.index());
        if iu == iv || !self.edges.insert(pack(iu, iv)) {
            return (false, None);
        }
        let m = self.partition.union_index(iu, iv);
        if m.merged {
            (true, Some(m))
        } else {
            self.partition.record_internal_edge();
            (true, None)
        }
    }

    fn record(
        &mut self,
        u: VertexId,
        v: VertexId,
        inserted: bool,
        merge: Option<MergeOutcome>,
    ) -> StepRecord {
        self.steps += 1;
        StepRecord {
            step: self.steps,
            u,
            v,
            inserted,
            merge,
            candidates: None,
            chosen: None,
        }
    }
}

fn uniform_vertex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> VertexId {
    VertexId::from_index(rng.gen_range(0..n))
}

fn uniform_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (VertexId, VertexId) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (VertexId::from_index(a), VertexId::from_index(b))
}

fn same_pair(x: (VertexId, VertexId), y: (VertexId, VertexId)) -> bool {
    x == y || (x.0 == y.1 && x.1 == y.0)
}

/// One half-restricted step with explicit draws: `v1` uniform over all
/// vertices, `rank` uniform over the restricted set.
pub fn half_restricted_apply(
    g: &mut Graph,
    idx: &mut OrderIndex,
    v1: VertexId,
    rank: RankDraw,
) -> Result<StepRecord> {
    g.partition.vertex(v1.label())?;
    let v2 = idx.select(rank)?;
    let (inserted, merge) = g.insert(v1, v2);
    if let Some(m) = &merge {
        idx.apply_merge(m)?;
    }
    Ok(g.record(v1, v2, inserted, merge))
}

pub fn half_restricted_step<R: Rng + ?Sized>(
    g: &mut Graph,
    idx: &mut OrderIndex,
    rng: &mut R,
) -> Result<StepRecord> {
    let v1 = uniform_vertex(g.n(), rng);
    let rank = RankDraw(rng.gen_range(0..idx.restricted_size()));
    half_restricted_apply(g, idx, v1, rank)
}

/// Inserts a uniformly random non-edge.
pub fn er_step<R: Rng + ?Sized>(g: &mut Graph, rng: &mut R) -> Result<StepRecord> {
    if g.n() < 2 {
        return Err(Error::InvalidConfig(
            "the Erdos-Renyi process needs n >= 2".into(),
        ));
    }
    if g.edges.len() as u64 >= g.max_edges() {
        return Err(Error::InvalidConfig(
            "graph is complete; no non-edge left".into(),
        ));
    }
    loop {
        let (u, v) = uniform_pair(g.n(), rng);
        if !g.has_edge(u, v) {
            let (inserted, merge) = g.insert(u, v);
            debug_assert!(inserted);
            return Ok(g.record(u, v, inserted, merge));
        }
    }
}

/// One Achlioptas step with explicit candidate pairs and an optional coin
/// for rule ties (`true` selects the second candidate).
pub fn achlioptas_apply(
    g: &mut Graph,
    first: (VertexId, VertexId),
    second: (VertexId, VertexId),
    rule: AchlioptasRule,
    tie_coin: Option<bool>,
) -> Result<StepRecord> {
    let p = &g.partition;
    let candidate = |(u, v): (VertexId, VertexId)| -> Result<Candidate> {
        Ok(Candidate {
            u,
            v,
            sizes: (p.component_size(u)?, p.component_size(v)?),
        })
    };
    let cands = [candidate(first)?, candidate(second)?];
    let chosen = match rule_cmp(cands[0].sizes, cands[1].sizes, rule) {
        std::cmp::Ordering::Less => Choice::First,
        std::cmp::Ordering::Greater => Choice::Second,
        std::cmp::Ordering::Equal => match tie_coin {
            Some(true) => Choice::Second,
            _ => Choice::First,
        },
    };
    let pick = match chosen {
        Choice::First => cands[0],
        Choice::Second => cands[1],
    };
    let (inserted, merge) = g.insert(pick.u, pick.v);
    let mut rec = g.record(pick.u, pick.v, inserted, merge);
    rec.candidates = Some(cands);
    rec.chosen = Some(chosen);
    Ok(rec)
}

pub fn achlioptas_step<R: Rng + ?Sized>(
    g: &mut Graph,
    rng: &mut R,
    rule: AchlioptasRule,
    options: &ProcessOptions,
) -> Result<StepRecord> {
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidConfig(
            "Achlioptas processes need n >= 4".into(),
        ));
    }
    let draw = |g: &Graph, rng: &mut R| loop {
        let pair = uniform_pair(n, rng);
        if !options.strict_achlioptas || !g.has_edge(pair.0, pair.1) {
            return pair;
        }
    };
    if options.strict_achlioptas && (g.edges.len() as u64) + 2 > g.max_edges() {
        return Err(Error::InvalidConfig("fewer than two non-edges left".into()));
    }
    let first = draw(g, rng);
    let second = loop {
        let pair = draw(g, rng);
        if !same_pair(first, pair) {
            break pair;
        }
    };
    let tie_coin = if options.random_rule_ties {
        let p = &g.partition;
        let s1 = (p.component_size(first.0)?, p.component_size(first.1)?);
        let s2 = (p.component_size(second.0)?, p.component_size(second.1)?);
        (rule_cmp(s1, s2, rule) == std::cmp::Ordering::Equal).then(|| rng.gen_bool(0.5))
    } else {
        None
    };
    achlioptas_apply(g, first, second, rule, tie_coin)
}

/// A process instance: graph, optional order index and its own generator.
#[derive(Clone, Debug)]
pub struct Process {
    kind: ProcessKind,
    options: ProcessOptions,
    graph: Graph,
    index: Option<OrderIndex>,
    rng: ChaCha8Rng,
}

impl Process {
    pub fn new(kind: ProcessKind, n: usize, seed: u64, options: ProcessOptions) -> Result<Self> {
        kind.validate()?;
        if n < kind.min_vertices() {
            return Err(Error::InvalidConfig(format!(
                "{kind} needs n >= {}, got {n}",
                kind.min_vertices()
            )));
        }
        let graph = Graph::new(n)?;
        let index = match kind {
            ProcessKind::HalfRestricted { beta } => {
                restricted_size(n, beta)?;
                Some(OrderIndex::build_with(
                    graph.partition(),
                    beta,
                    options.tie_break,
                )?)
            }
            _ => None,
        };
        Ok(Self {
            kind,
            options,
            graph,
            index,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn kind(&self) -> ProcessKind {
        self.kind
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn partition(&self) -> &Partition {
        self.graph.partition()
    }

    pub fn index(&self) -> Option<&OrderIndex> {
        self.index.as_ref()
    }

    /// Largest component size a restricted endpoint may currently come from.
    /// Without a restriction every vertex is eligible, so this is L1.
    pub fn alpha(&self) -> u32 {
        match &self.index {
            Some(idx) => idx.alpha(),
            None => self.partition().largest_size(),
        }
    }

    /// Advances one step.
    pub fn step(&mut self) -> Result<StepRecord> {
        match self.kind {
            ProcessKind::ErdosRenyi => er_step(&mut self.graph, &mut self.rng),
            ProcessKind::HalfRestricted { .. } => {
                let idx = self
                    .index
                    .as_mut()
                    .expect("half-restricted process has an index");
                half_restricted_step(&mut self.graph, idx, &mut self.rng)
            }
            ProcessKind::Achlioptas(rule) => {
                achlioptas_step(&mut self.graph, &mut self.rng, rule, &self.options)
            }
        }
    }
}
