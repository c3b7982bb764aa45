//! Exhaustive factor search on small graphs.
//!
//! A vertex subset is an admissible block when its induced subgraph has a
//! Hamiltonian cycle of an allowed odd length, or has a spanning tree in
//! `T_{k/r}`. Blocks are memoised per bitmask and an exact cover is found by
//! a subset dynamic program keyed on the lowest uncovered vertex.

use std::collections::HashMap;

use crate::factor::{FactorError, FamilyParams};
use crate::graph::Graph;
use crate::trees::{canonical_code, in_tree_family, TreeError};

pub const BRUTE_FORCE_MAX_ORDER: usize = 10;
/// Spanning trees inspected per block before the search gives up.
pub const TREE_ENUMERATION_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    /// Vertices of the block in cycle order.
    Cycle { order: Vec<usize> },
    /// Edges of a spanning tree of the block, in the labels of `G`.
    Tree { edges: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Sorted vertices of `G`.
    pub vertices: Vec<usize>,
    pub kind: BlockKind,
}

/// A spanning subgraph whose components are allowed odd cycles or trees of
/// `T_{k/r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorWitness {
    pub blocks: Vec<Block>,
}

impl FactorWitness {
    /// Re-checks the witness from scratch: the blocks partition `V(G)`, cycle
    /// edges exist and the length is allowed, tree edges exist and span the
    /// block, and each tree passes the membership test.
    pub fn validate(&self, g: &Graph, p: FamilyParams) -> Result<(), String> {
        let n = g.order();
        let mut seen = vec![false; n];
        for block in &self.blocks {
            for &v in &block.vertices {
                if v >= n || seen[v] {
                    return Err(format!("vertex {v} repeated or out of range"));
                }
                seen[v] = true;
            }
            match &block.kind {
                BlockKind::Cycle { order } => {
                    let mut sorted = order.clone();
                    sorted.sort_unstable();
                    if sorted != block.vertices {
                        return Err("cycle does not cover its block".into());
                    }
                    if !p.allowed_cycle_lengths().contains(&order.len()) {
                        return Err(format!("cycle length {} not allowed", order.len()));
                    }
                    for i in 0..order.len() {
                        let (a, b) = (order[i], order[(i + 1) % order.len()]);
                        if !g.has_edge(a, b) {
                            return Err(format!("cycle edge {a}-{b} missing"));
                        }
                    }
                }
                BlockKind::Tree { edges } => {
                    let local = |v: usize| block.vertices.binary_search(&v).ok();
                    let mut mapped = Vec::with_capacity(edges.len());
                    for &(a, b) in edges {
                        if !g.has_edge(a, b) {
                            return Err(format!("tree edge {a}-{b} missing"));
                        }
                        match (local(a), local(b)) {
                            (Some(x), Some(y)) => mapped.push((x, y)),
                            _ => return Err(format!("tree edge {a}-{b} leaves its block")),
                        }
                    }
                    let tree = Graph::from_edges(block.vertices.len(), &mapped)
                        .map_err(|e| e.to_string())?;
                    if !tree.is_tree() {
                        return Err("tree block edges do not form a spanning tree".into());
                    }
                    let class = in_tree_family(&tree, p).map_err(|e| e.to_string())?;
                    if !class.member {
                        return Err(format!("tree on {:?} not in the family", block.vertices));
                    }
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err("blocks do not cover every vertex".into())
        }
    }
}

/// Reusable search state. The tree-membership cache is keyed on canonical
/// tree codes and is valid for one `FamilyParams`, so it can be shared across
/// many graphs.
#[derive(Debug)]
pub struct WitnessSearch {
    params: FamilyParams,
    cycle_lengths: Vec<usize>,
    membership: HashMap<Vec<u8>, bool>,
}

impl WitnessSearch {
    pub fn new(params: FamilyParams) -> Self {
        Self {
            params,
            cycle_lengths: params.allowed_cycle_lengths(),
            membership: HashMap::new(),
        }
    }

    pub fn params(&self) -> FamilyParams {
        self.params
    }

    pub fn find(&mut self, g: &Graph) -> Result<Option<FactorWitness>, FactorError> {
        let n = g.order();
        if n > BRUTE_FORCE_MAX_ORDER {
            return Err(FactorError::SizeLimit {
                n,
                cap: BRUTE_FORCE_MAX_ORDER,
            });
        }
        let rows: Vec<u64> = (0..n).map(|v| g.row(v).first().copied().unwrap_or(0)).collect();
        let full = (1u64 << n) - 1;
        let mut run = Run {
            search: self,
            g,
            rows: &rows,
            blocks: HashMap::new(),
            cover: HashMap::new(),
        };
        if !run.coverable(full)? {
            return Ok(None);
        }
        let mut blocks = Vec::new();
        let mut rest = full;
        while rest != 0 {
            let chosen = run.cover[&rest].expect("coverable mask records its block");
            blocks.push(run.blocks[&chosen].clone().expect("chosen block is admissible"));
            rest &= !chosen;
        }
        Ok(Some(FactorWitness { blocks }))
    }

    fn tree_is_member(&mut self, tree: &Graph) -> Result<bool, FactorError> {
        let code = canonical_code(tree).expect("enumerated spanning tree");
        if let Some(&m) = self.membership.get(&code) {
            return Ok(m);
        }
        let member = match in_tree_family(tree, self.params) {
            Ok(c) => c.member,
            Err(TreeError::Factor(e)) => return Err(e),
            Err(e) => unreachable!("spanning tree rejected: {e}"),
        };
        self.membership.insert(code, member);
        Ok(member)
    }
}

/// One-shot [`WitnessSearch`].
pub fn brute_force_factor(
    g: &Graph,
    p: FamilyParams,
) -> Result<Option<FactorWitness>, FactorError> {
    WitnessSearch::new(p).find(g)
}

struct Run<'a> {
    search: &'a mut WitnessSearch,
    g: &'a Graph,
    rows: &'a [u64],
    blocks: HashMap<u64, Option<Block>>,
    /// For each coverable mask, the block containing its lowest vertex.
    cover: HashMap<u64, Option<u64>>,
}

fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

impl Run<'_> {
    fn coverable(&mut self, mask: u64) -> Result<bool, FactorError> {
        if mask == 0 {
            return Ok(true);
        }
        if let Some(c) = self.cover.get(&mask) {
            return Ok(c.is_some());
        }
        let low = mask & mask.wrapping_neg();
        let others = mask & !low;
        let mut sub = others;
        let mut found = None;
        // submasks of `others`, each joined with the lowest vertex
        loop {
            let block = sub | low;
            if self.admissible(block)? && self.coverable(mask & !block)? {
                found = Some(block);
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
        self.cover.insert(mask, found);
        Ok(found.is_some())
    }

    fn admissible(&mut self, mask: u64) -> Result<bool, FactorError> {
        if let Some(b) = self.blocks.get(&mask) {
            return Ok(b.is_some());
        }
        let vertices = members(mask);
        let block = if vertices.len() < 2 {
            None
        } else {
            match self.cycle_block(&vertices) {
                Some(b) => Some(b),
                None => self.tree_block(&vertices)?,
            }
        };
        let ok = block.is_some();
        self.blocks.insert(mask, block);
        Ok(ok)
    }

    fn cycle_block(&self, vertices: &[usize]) -> Option<Block> {
        if !self.search.cycle_lengths.contains(&vertices.len()) {
            return None;
        }
        let mask: u64 = vertices.iter().map(|&v| 1u64 << v).sum();
        let start = vertices[0];
        let mut path = vec![start];
        if self.hamiltonian(mask, start, 1u64 << start, &mut path) {
            Some(Block {
                vertices: vertices.to_vec(),
                kind: BlockKind::Cycle { order: path },
            })
        } else {
            None
        }
    }

    fn hamiltonian(&self, mask: u64, start: usize, used: u64, path: &mut Vec<usize>) -> bool {
        let last = *path.last().unwrap();
        if used == mask {
            return self.rows[last] >> start & 1 == 1;
        }
        let mut options = self.rows[last] & mask & !used;
        while options != 0 {
            let v = options.trailing_zeros() as usize;
            options &= options - 1;
            path.push(v);
            if self.hamiltonian(mask, start, used | 1 << v, path) {
                return true;
            }
            path.pop();
        }
        false
    }

    fn tree_block(&mut self, vertices: &[usize]) -> Result<Option<Block>, FactorError> {
        let sub = self.g.induced_subgraph(vertices);
        if !sub.is_connected() {
            return Ok(None);
        }
        let edges = sub.edges();
        let size = vertices.len();
        let mut enumerator = SpanningTrees::new(size, &edges);
        let mut inspected = 0;
        while let Some(tree_edges) = enumerator.next_tree() {
            inspected += 1;
            if inspected > TREE_ENUMERATION_CAP {
                return Err(FactorError::Indeterminate {
                    block: vertices.to_vec(),
                    cap: TREE_ENUMERATION_CAP,
                });
            }
            let tree = Graph::from_edges(size, &tree_edges).expect("local labels");
            if self.search.tree_is_member(&tree)? {
                let edges = tree_edges
                    .iter()
                    .map(|&(a, b)| (vertices[a], vertices[b]))
                    .collect();
                return Ok(Some(Block {
                    vertices: vertices.to_vec(),
                    kind: BlockKind::Tree { edges },
                }));
            }
        }
        Ok(None)
    }
}

/// Enumerates the spanning trees of a connected graph by include/exclude
/// branching over its edge list. An edge is only excluded when the remaining
/// edges still connect the graph, so every leaf of the search is a tree.
struct SpanningTrees<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    stack: Vec<Frame>,
}

struct Frame {
    idx: usize,
    chosen: Vec<usize>,
    /// 0 = try include next, 1 = try exclude next, 2 = done
    state: u8,
}

impl<'a> SpanningTrees<'a> {
    fn new(n: usize, edges: &'a [(usize, usize)]) -> Self {
        Self {
            n,
            edges,
            stack: vec![Frame {
                idx: 0,
                chosen: Vec::new(),
                state: 0,
            }],
        }
    }

    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }

    fn forest_of(&self, chosen: &[usize]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        for &e in chosen {
            let (a, b) = self.edges[e];
            let (ra, rb) = (Self::find(&mut parent, a), Self::find(&mut parent, b));
            parent[ra] = rb;
        }
        parent
    }

    /// Whether `chosen` plus the edges from `from` onwards connect all vertices.
    fn still_spanning(&self, chosen: &[usize], from: usize) -> bool {
        let mut parent = self.forest_of(chosen);
        let mut comps = self.n - chosen.len();
        for &(a, b) in &self.edges[from..] {
            let (ra, rb) = (Self::find(&mut parent, a), Self::find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                comps -= 1;
            }
        }
        comps == 1
    }

    fn next_tree(&mut self) -> Option<Vec<(usize, usize)>> {
        while let Some(top) = self.stack.last_mut() {
            if top.chosen.len() == self.n - 1 {
                let tree = top.chosen.iter().map(|&e| self.edges[e]).collect();
                self.stack.pop();
                return Some(tree);
            }
            if top.idx >= self.edges.len() || top.state == 2 {
                self.stack.pop();
                continue;
            }
            let idx = top.idx;
            let chosen = top.chosen.clone();
            if top.state == 0 {
                top.state = 1;
                let (a, b) = self.edges[idx];
                let mut parent = self.forest_of(&chosen);
                if Self::find(&mut parent, a) != Self::find(&mut parent, b) {
                    let mut next = chosen;
                    next.push(idx);
                    self.stack.push(Frame {
                        idx: idx + 1,
                        chosen: next,
                        state: 0,
                    });
                }
            } else {
                top.state = 2;
                if self.still_spanning(&chosen, idx + 1) {
                    self.stack.push(Frame {
                        idx: idx + 1,
                        chosen,
                        state: 0,
                    });
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: u64, r: u64) -> FamilyParams {
        FamilyParams::new(k, r).unwrap()
    }

    fn count_trees(g: &Graph) -> usize {
        let edges = g.edges();
        let mut it = SpanningTrees::new(g.order(), &edges);
        let mut count = 0;
        while let Some(t) = it.next_tree() {
            assert!(Graph::from_edges(g.order(), &t).unwrap().is_tree());
            count += 1;
        }
        count
    }

    #[test]
    fn spanning_tree_counts() {
        // Cayley: n^(n-2)
        assert_eq!(count_trees(&Graph::complete(4)), 16);
        assert_eq!(count_trees(&Graph::complete(5)), 125);
        assert_eq!(count_trees(&Graph::cycle(6)), 6);
        assert_eq!(count_trees(&Graph::path(5)), 1);
        assert_eq!(count_trees(&Graph::complete(1)), 1);
    }

    #[test]
    fn k2_tree_block() {
        let w = brute_force_factor(&Graph::complete(2), p(2, 1)).unwrap().unwrap();
        assert_eq!(w.blocks.len(), 1);
        assert_eq!(w.blocks[0].kind, BlockKind::Tree { edges: vec![(0, 1)] });
        w.validate(&Graph::complete(2), p(2, 1)).unwrap();
    }

    #[test]
    fn triangle_cycle_block() {
        let g = Graph::cycle(3);
        let w = brute_force_factor(&g, p(3, 2)).unwrap().unwrap();
        assert_eq!(w.blocks.len(), 1);
        assert!(matches!(&w.blocks[0].kind, BlockKind::Cycle { order } if order.len() == 3));
        w.validate(&g, p(3, 2)).unwrap();
    }

    #[test]
    fn claw_has_none() {
        assert_eq!(brute_force_factor(&Graph::star(4), p(2, 1)).unwrap(), None);
    }

    #[test]
    fn size_cap() {
        assert_eq!(
            brute_force_factor(&Graph::empty(11), p(2, 1)),
            Err(FactorError::SizeLimit { n: 11, cap: BRUTE_FORCE_MAX_ORDER })
        );
    }

    #[test]
    fn two_component_witness() {
        let g = Graph::path(4);
        let w = brute_force_factor(&g, p(2, 1)).unwrap().unwrap();
        w.validate(&g, p(2, 1)).unwrap();
        let bad = FactorWitness {
            blocks: vec![Block {
                vertices: vec![0, 1, 2, 3],
                kind: BlockKind::Tree { edges: vec![(0, 1), (1, 2), (2, 3)] },
            }],
        };
        assert!(bad.validate(&g, p(2, 1)).is_err());
    }
}
