//! Simple undirected graphs stored as per-vertex bit rows.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid order {n} for {kind}")]
    InvalidOrder { kind: &'static str, n: usize },
    #[error("vertex {v} out of range for order {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("no edge between {0} and {1}")]
    MissingEdge(usize, usize),
    #[error("graph has no vertices")]
    EmptyGraph,
}

/// A subset of `[0, n)` stored as a bitset over the same word layout as
/// [`Graph`] rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            bits: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_members(n: usize, members: &[usize]) -> Result<Self, GraphError> {
        let mut s = Self::new(n);
        for &v in members {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Builds a set over `n ≤ 64` vertices from a mask.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= WORD, "from_mask needs n <= 64");
        let mut s = Self::new(n);
        if n > 0 {
            let keep = if n == WORD { u64::MAX } else { (1u64 << n) - 1 };
            s.bits[0] = mask & keep;
        }
        s
    }

    pub(crate) fn from_words(n: usize, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), words_for(n));
        Self { n, bits }
    }

    /// Size of the ambient vertex range.
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.bits[v / WORD] >> (v % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} out of range {}", self.n);
        self.bits[v / WORD] |= 1 << (v % WORD);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.bits[v / WORD] &= !(1 << (v % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, &b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The standard families built by [`Graph::family`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Complete,
    Star,
    Path,
    Cycle,
    Empty,
}

impl FamilyKind {
    fn name(self) -> &'static str {
        match self {
            FamilyKind::Complete => "complete",
            FamilyKind::Star => "star",
            FamilyKind::Path => "path",
            FamilyKind::Cycle => "cycle",
            FamilyKind::Empty => "empty",
        }
    }
}

/// Degree summary returned by [`Graph::degree_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeStats {
    pub min_degree: usize,
    pub max_degree: usize,
    pub connected: bool,
    pub components: usize,
}

/// A simple undirected graph on vertices `0..n`.
///
/// Row `v` is the neighbourhood `N(v)` as a bitset, so tests such as
/// `N(v) ⊆ S` run one word at a time. Values are immutable once built; every
/// operation returns a new graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices (`n = 0` allowed).
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Self {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    /// `K_{1,n−1}` with centre 0.
    pub fn star(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            g.set_edge(0, v, true);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            g.set_edge(v - 1, v, true);
        }
        g
    }

    /// `C_n`; panics for `n < 3`, use [`Graph::family`] for a checked version.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Self::path(n);
        g.set_edge(n - 1, 0, true);
        g
    }

    pub fn family(kind: FamilyKind, n: usize) -> Result<Self, GraphError> {
        let min = if kind == FamilyKind::Cycle { 3 } else { 1 };
        if n < min {
            return Err(GraphError::InvalidOrder {
                kind: kind.name(),
                n,
            });
        }
        Ok(match kind {
            FamilyKind::Complete => Self::complete(n),
            FamilyKind::Star => Self::star(n),
            FamilyKind::Path => Self::path(n),
            FamilyKind::Cycle => Self::cycle(n),
            FamilyKind::Empty => Self::empty(n),
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.row(u)[v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Neighbourhood of `v` as raw words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Number of 64-bit words per row.
    pub fn row_words(&self) -> usize {
        self.words
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// `δ(G)`, or `None` for the graph on zero vertices.
    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).max()
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u).iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// `G₁ ∨ G₂`: vertices of `self` keep `[0, n₁)`, those of `other` are
    /// shifted by `n₁`, and every cross pair becomes an edge.
    pub fn join(&self, other: &Graph) -> Graph {
        let mut g = self.disjoint_union(other);
        let n1 = self.n;
        for u in 0..n1 {
            for v in n1..g.n {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n1 = self.n;
        let mut g = Graph::empty(n1 + other.n);
        for (u, v) in self.edges() {
            g.set_edge(u, v, true);
        }
        for (u, v) in other.edges() {
            g.set_edge(u + n1, v + n1, true);
        }
        g
    }

    /// `G − S`, reindexing the survivors in increasing order.
    pub fn delete_vertices(&self, s: &VertexSet) -> Result<Graph, GraphError> {
        if s.universe() > self.n {
            if let Some(v) = s.iter().find(|&v| v >= self.n) {
                return Err(GraphError::VertexOutOfRange { v, n: self.n });
            }
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !s.contains(v)).collect();
        Ok(self.induced_subgraph(&keep))
    }

    /// Induced subgraph on `vertices`, relabelled `0..len` in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j, true);
                }
            }
        }
        g
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v], true);
        }
        g
    }

    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        let mut g = self.clone();
        g.set_edge(u, v, false);
        Ok(g)
    }

    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let mut g = self.clone();
        g.set_edge(u, v, true);
        Ok(g)
    }

    /// `i(G)`.
    pub fn isolated_count(&self) -> usize {
        (0..self.n).filter(|&v| self.degree(v) == 0).count()
    }

    /// Vertices outside `s` whose whole neighbourhood lies inside `s`, i.e.
    /// the isolated vertices of `G − S` in original labels.
    pub fn isolated_after_removal(&self, s: &VertexSet) -> VertexSet {
        let sw = s.words();
        let mut out = VertexSet::new(self.n);
        for v in 0..self.n {
            if s.contains(v) {
                continue;
            }
            if self.row(v).iter().zip(sw).all(|(&nv, &sv)| nv & !sv == 0) {
                out.insert(v);
            }
        }
        out
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for w in self.neighbors(u).iter() {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }

    pub fn degree_stats(&self) -> Result<DegreeStats, GraphError> {
        if self.n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let degrees = self.degrees();
        let components = self.components().len();
        Ok(DegreeStats {
            min_degree: *degrees.iter().min().unwrap(),
            max_degree: *degrees.iter().max().unwrap(),
            connected: components == 1,
            components,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * self.n.saturating_sub(1) / 2
    }

    /// `K_{1,n−1}` up to relabelling, for `n ≥ 2`.
    pub fn is_star(&self) -> bool {
        if self.n < 2 || self.edge_count() != self.n - 1 {
            return false;
        }
        (0..self.n).any(|v| self.degree(v) == self.n - 1)
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edge_count() == self.n - 1 && self.is_connected()
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { v, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let (wu, bu) = (u / WORD, 1u64 << (u % WORD));
        let (wv, bv) = (v / WORD, 1u64 << (v % WORD));
        if present {
            self.rows[u * self.words + wv] |= bv;
            self.rows[v * self.words + wu] |= bu;
        } else {
            self.rows[u * self.words + wv] &= !bv;
            self.rows[v * self.words + wu] &= !bu;
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degree_sequence(g: &Graph) -> Vec<usize> {
        let mut d = g.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    #[test]
    fn families() {
        let k4 = Graph::family(FamilyKind::Complete, 4).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.min_degree(), Some(3));

        let s4 = Graph::family(FamilyKind::Star, 4).unwrap();
        assert_eq!(s4.edge_count(), 3);
        assert_eq!(degree_sequence(&s4), vec![3, 1, 1, 1]);
        assert_eq!(s4.degree(0), 3);

        let c5 = Graph::family(FamilyKind::Cycle, 5).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert!(c5.degrees().iter().all(|&d| d == 2));

        assert!(Graph::family(FamilyKind::Cycle, 2).is_err());
        assert!(Graph::family(FamilyKind::Path, 0).is_err());
        assert_eq!(Graph::family(FamilyKind::Empty, 3).unwrap().edge_count(), 0);
    }

    #[test]
    fn join_examples() {
        let p3 = Graph::complete(1).join(&Graph::empty(2));
        assert_eq!(p3, Graph::star(3));
        assert_eq!(Graph::complete(2).join(&Graph::complete(2)), Graph::complete(4));

        let g = Graph::complete(1).join(&Graph::complete(11).disjoint_union(&Graph::empty(3)));
        assert_eq!(g.order(), 15);
        assert_eq!(g.edge_count(), 69);
    }

    #[test]
    fn union_examples() {
        let g = Graph::complete(3).disjoint_union(&Graph::complete(3));
        assert_eq!((g.order(), g.edge_count()), (6, 6));
        assert!(!g.is_connected());

        let c5 = Graph::cycle(5);
        assert_eq!(Graph::empty(0).disjoint_union(&c5), c5);

        let g = Graph::complete(10).disjoint_union(&Graph::empty(4));
        assert_eq!((g.order(), g.edge_count(), g.isolated_count()), (14, 45, 4));
    }

    #[test]
    fn vertex_deletion() {
        let s = Graph::star(4);
        let center = VertexSet::from_members(4, &[0]).unwrap();
        let rest = s.delete_vertices(&center).unwrap();
        assert_eq!(rest, Graph::empty(3));
        assert_eq!(rest.isolated_count(), 3);

        let c5 = Graph::cycle(5);
        assert_eq!(c5.delete_vertices(&VertexSet::new(5)).unwrap(), c5);

        let p4 = Graph::path(4);
        let g = p4.delete_vertices(&VertexSet::from_members(4, &[2]).unwrap()).unwrap();
        assert_eq!(g, Graph::complete(2).disjoint_union(&Graph::empty(1)));

        let bad = VertexSet::from_members(6, &[5]).unwrap();
        assert!(matches!(
            c5.delete_vertices(&bad),
            Err(GraphError::VertexOutOfRange { v: 5, n: 5 })
        ));
        assert!(VertexSet::from_members(3, &[3]).is_err());
    }

    #[test]
    fn edge_deletion() {
        assert_eq!(Graph::complete(2).delete_edge(0, 1).unwrap(), Graph::empty(2));
        let p = Graph::complete(3).delete_edge(0, 2).unwrap();
        assert_eq!(p, Graph::path(3));
        let g = Graph::path(4).delete_edge(1, 2).unwrap();
        assert_eq!(g, Graph::complete(2).disjoint_union(&Graph::complete(2)));
        assert_eq!(Graph::path(4).delete_edge(0, 2), Err(GraphError::MissingEdge(0, 2)));
    }

    #[test]
    fn isolated_counts() {
        assert_eq!(Graph::cycle(5).isolated_count(), 0);
        let s = VertexSet::from_members(4, &[0]).unwrap();
        assert_eq!(Graph::star(4).isolated_after_removal(&s).to_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn stats() {
        let st = Graph::cycle(6).degree_stats().unwrap();
        assert_eq!(st, DegreeStats { min_degree: 2, max_degree: 2, connected: true, components: 1 });

        let st = Graph::complete(10).disjoint_union(&Graph::empty(4)).degree_stats().unwrap();
        assert_eq!(st, DegreeStats { min_degree: 0, max_degree: 9, connected: false, components: 5 });

        let g = Graph::complete(1).join(&Graph::complete(11).disjoint_union(&Graph::empty(3)));
        let st = g.degree_stats().unwrap();
        assert_eq!(st, DegreeStats { min_degree: 1, max_degree: 14, connected: true, components: 1 });

        assert_eq!(Graph::empty(0).degree_stats(), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn wide_rows() {
        // rows spanning several words
        let g = Graph::complete(130);
        assert_eq!(g.edge_count(), 130 * 129 / 2);
        assert_eq!(g.degree(129), 129);
        let s = VertexSet::from_members(130, &(1..130).collect::<Vec<_>>()).unwrap();
        assert_eq!(g.isolated_after_removal(&s).to_vec(), vec![0]);
    }

    #[test]
    fn shape_predicates() {
        assert!(Graph::star(5).is_star());
        assert!(Graph::complete(2).is_star());
        assert!(!Graph::path(4).is_star());
        assert!(Graph::complete(5).is_complete());
        assert!(Graph::path(6).is_tree());
        assert!(!Graph::cycle(6).is_tree());
    }
}
