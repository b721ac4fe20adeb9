//! Simple graphs and digraphs on `0..n`, plus vertex sets over the same universe.

use crate::error::{check_cap, domain, LabError, Result};
use crate::rational::Rational;
use fixedbitset::FixedBitSet;
use std::fmt;

/// Largest vertex count accepted by the text readers unless raised explicitly.
pub const DEFAULT_MAX_VERTICES: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn range(universe: usize, r: std::ops::Range<usize>) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(r);
        VertexSet { bits }
    }

    pub fn from_vertices(universe: usize, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::new(universe);
        for v in vertices {
            if v >= universe {
                return Err(LabError::VertexOutOfRange { vertex: v, n: universe });
            }
            s.bits.insert(v);
        }
        Ok(s)
    }

    pub fn from_bitset(bits: FixedBitSet) -> Self {
        VertexSet { bits }
    }

    /// Builds a set from the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        let mut s = Self::new(universe);
        for v in 0..universe.min(64) {
            if mask >> v & 1 == 1 {
                s.bits.insert(v);
            }
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.bits.len() && self.bits.contains(v)
    }

    pub fn insert(&mut self, v: usize) {
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.bits.len() {
            self.bits.set(v, false);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        VertexSet { bits }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        VertexSet { bits }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        VertexSet { bits }
    }

    pub fn complement(&self) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        VertexSet { bits }
    }

    pub fn intersection_count(&self, other: &FixedBitSet) -> usize {
        self.bits.intersection_count(other)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Bit `i` of the mask is set when the `i`-th smallest member of `order` lies in the set.
    pub fn local_mask(&self, order: &[usize]) -> u64 {
        order.iter().enumerate().filter(|(_, &v)| self.contains(v)).fold(0, |m, (i, _)| m | 1 << i)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v >= n {
        Err(LabError::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

/// Undirected simple graph stored as adjacency bit rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![FixedBitSet::with_capacity(n); n] }
    }

    /// Like [`Graph::new`] but refuses sizes beyond `cap`.
    pub fn with_cap(n: usize, cap: usize) -> Result<Self> {
        check_cap("vertex count", n, cap)?;
        Ok(Self::new(n))
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        check_vertex(u, n)?;
        check_vertex(v, n)?;
        if u == v {
            return Err(LabError::SelfLoop(u));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    /// Panics on loops or out-of-range endpoints; for internal construction.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at {u}");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].set(v, false);
        self.adj[v].set(u, false);
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbours(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn degree_into(&self, v: usize, set: &VertexSet) -> usize {
        self.adj[v].intersection_count(set.bits())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.adj[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Degrees sorted into non-decreasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Induced subgraph on `vertices` (taken in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Disjoint union, with `other` relabelled to follow `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut g = Graph::new(off + other.n());
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + off, v + off);
        }
        g
    }

    /// `e(A, B)`: ordered pairs `(a, b)` with `a` in `A`, `b` in `B` and `ab` an edge.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        a.iter().map(|u| self.degree_into(u, b)).sum()
    }

    /// `d(A, B) = e(A, B) / (|A||B|)`.
    pub fn density(&self, a: &VertexSet, b: &VertexSet) -> Result<Rational> {
        let (sa, sb) = (a.len(), b.len());
        if sa == 0 || sb == 0 {
            return domain("density of an empty vertex set is undefined");
        }
        Ok(Rational::new(self.edges_between(a, b) as i64, (sa * sb) as i64))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = FixedBitSet::with_capacity(n);
        let mut stack = vec![0];
        seen.insert(0);
        while let Some(u) = stack.pop() {
            for v in self.adj[u].ones() {
                if !seen.put(v) {
                    stack.push(v);
                }
            }
        }
        seen.count_ones(..) == n
    }

    /// Adjacency rows as `u64` masks; requires `n <= 64`.
    pub fn masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64);
        self.adj.iter().map(|r| r.ones().fold(0u64, |m, v| m | 1 << v)).collect()
    }

    pub fn from_masks(masks: &[u64]) -> Graph {
        let n = masks.len();
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if masks[u] >> v & 1 == 1 {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Applies `perm`, sending vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// The digraph with both orientations of every edge.
    pub fn to_digraph(&self) -> Digraph {
        let mut d = Digraph::new(self.n());
        for (u, v) in self.edges() {
            d.add_arc(u, v);
            d.add_arc(v, u);
        }
        d
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges().collect::<Vec<_>>())
    }
}

/// Directed graph without loops; antiparallel pairs (2-cycles) are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    out: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { out: vec![FixedBitSet::with_capacity(n); n], inn: vec![FixedBitSet::with_capacity(n); n] }
    }

    pub fn with_cap(n: usize, cap: usize) -> Result<Self> {
        check_cap("vertex count", n, cap)?;
        Ok(Self::new(n))
    }

    pub fn complete(n: usize) -> Self {
        let mut d = Self::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    d.add_arc(u, v);
                }
            }
        }
        d
    }

    /// The directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn directed_cycle(n: usize) -> Self {
        let mut d = Self::new(n);
        for i in 0..n {
            d.add_arc(i, (i + 1) % n);
        }
        d
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut d = Self::new(n);
        for &(u, v) in arcs {
            d.try_add_arc(u, v)?;
        }
        Ok(d)
    }

    pub fn try_add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        check_vertex(u, n)?;
        check_vertex(v, n)?;
        if u == v {
            return Err(LabError::SelfLoop(u));
        }
        self.add_arc(u, v);
        Ok(())
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at {u}");
        self.out[u].insert(v);
        self.inn[v].insert(u);
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) {
        self.out[u].set(v, false);
        self.inn[v].set(u, false);
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn out_neighbours(&self, v: usize) -> &FixedBitSet {
        &self.out[v]
    }

    pub fn in_neighbours(&self, v: usize) -> &FixedBitSet {
        &self.inn[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones(..)
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].count_ones(..)
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.out[u].ones().map(move |v| (u, v)))
    }

    /// Minimum semidegree `min(δ⁺, δ⁻)`.
    pub fn min_semidegree(&self) -> usize {
        (0..self.n()).map(|v| self.out_degree(v).min(self.in_degree(v))).min().unwrap_or(0)
    }

    /// Sorted out- and in-degree sequences.
    pub fn degree_sequences(&self) -> (Vec<usize>, Vec<usize>) {
        let mut o: Vec<usize> = (0..self.n()).map(|v| self.out_degree(v)).collect();
        let mut i: Vec<usize> = (0..self.n()).map(|v| self.in_degree(v)).collect();
        o.sort_unstable();
        i.sort_unstable();
        (o, i)
    }

    pub fn has_two_cycle(&self) -> bool {
        self.arcs().any(|(u, v)| self.has_arc(v, u))
    }

    /// Oriented graph: no 2-cycles.
    pub fn is_oriented(&self) -> bool {
        !self.has_two_cycle()
    }

    pub fn is_tournament(&self) -> bool {
        let n = self.n();
        (0..n).all(|u| (u + 1..n).all(|v| self.has_arc(u, v) ^ self.has_arc(v, u)))
    }

    pub fn reverse(&self) -> Digraph {
        Digraph { out: self.inn.clone(), inn: self.out.clone() }
    }

    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut d = Digraph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if i != j && self.has_arc(u, v) {
                    d.add_arc(i, j);
                }
            }
        }
        d
    }

    /// Arcs from `A` to `B`.
    pub fn arcs_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        a.iter().map(|u| self.out[u].intersection_count(b.bits())).sum()
    }

    /// `d(A, B)` counting only arcs directed from `A` to `B`.
    pub fn density(&self, a: &VertexSet, b: &VertexSet) -> Result<Rational> {
        let (sa, sb) = (a.len(), b.len());
        if sa == 0 || sb == 0 {
            return domain("density of an empty vertex set is undefined");
        }
        Ok(Rational::new(self.arcs_between(a, b) as i64, (sa * sb) as i64))
    }

    pub fn out_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64);
        self.out.iter().map(|r| r.ones().fold(0u64, |m, v| m | 1 << v)).collect()
    }

    pub fn in_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64);
        self.inn.iter().map(|r| r.ones().fold(0u64, |m, v| m | 1 << v)).collect()
    }

    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        let mut d = Digraph::new(self.n());
        for (u, v) in self.arcs() {
            d.add_arc(perm[u], perm[v]);
        }
        d
    }

    /// Underlying simple graph: `uv` is an edge when either orientation is present.
    pub fn underlying(&self) -> Graph {
        let mut g = Graph::new(self.n());
        for (u, v) in self.arcs() {
            g.add_edge(u, v);
        }
        g
    }

    /// Strong connectivity by forward and backward reachability from vertex 0.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let reach = |rows: &Vec<FixedBitSet>| {
            let mut seen = FixedBitSet::with_capacity(n);
            let mut stack = vec![0];
            seen.insert(0);
            while let Some(u) = stack.pop() {
                for v in rows[u].ones() {
                    if !seen.put(v) {
                        stack.push(v);
                    }
                }
            }
            seen.count_ones(..) == n
        };
        reach(&self.out) && reach(&self.inn)
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n(), self.arcs().collect::<Vec<_>>())
    }
}

/// Either kind of graph, for operations defined on both.
#[derive(Debug, Clone, Copy)]
pub enum AnyGraph<'a> {
    Graph(&'a Graph),
    Digraph(&'a Digraph),
}

impl AnyGraph<'_> {
    pub fn n(&self) -> usize {
        match self {
            AnyGraph::Graph(g) => g.n(),
            AnyGraph::Digraph(d) => d.n(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AnyGraph::Graph(_) => "graph",
            AnyGraph::Digraph(_) => "digraph",
        }
    }
}
