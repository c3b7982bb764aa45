//! Free trees: enumeration up to isomorphism and membership in `T_{k/r}`.
//!
//! `T_{k/r}` is the set of trees `T` with `r·i(T−S) ≤ k·|S|` for every proper
//! `S ⊂ V(T)` (condition a) such that deleting any edge `e` creates some
//! `S*` with `r·i((T−e)−S*) > k·|S*|` (condition b). Both quantifiers range
//! over proper subsets including `∅`.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::factor::{find_violation, FactorError, FamilyParams, Strategy};
use crate::graph::{Graph, VertexSet};
use crate::graph6::to_graph6;

/// Order cap for [`enumerate_trees`].
pub const MAX_TREE_ORDER: usize = 12;
/// Order cap for the Prüfer generator (`n^(n−2)` sequences).
pub const PRUFER_MAX_ORDER: usize = 10;
/// Order cap for [`in_tree_family`].
pub const MEMBERSHIP_MAX_ORDER: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("input is not a tree")]
    NotATree,
    #[error("order {n} exceeds cap {cap}")]
    SizeLimit { n: usize, cap: usize },
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// Result of [`in_tree_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeClassification {
    pub member: bool,
    /// Canonical `S` with `r·i(T−S) > k·|S|`, when condition (a) fails.
    pub violation_a: Option<VertexSet>,
    /// First edge (row-major order) whose deletion creates no violating set.
    pub nonwitnessed_edge: Option<(usize, usize)>,
    /// One `S*` per edge for which one exists, in edge order.
    pub edge_witnesses: Vec<((usize, usize), VertexSet)>,
}

/// Classifies a tree against `T_{k/r}`.
pub fn in_tree_family(t: &Graph, p: FamilyParams) -> Result<TreeClassification, TreeError> {
    if !t.is_tree() {
        return Err(TreeError::NotATree);
    }
    if t.order() > MEMBERSHIP_MAX_ORDER {
        return Err(TreeError::SizeLimit {
            n: t.order(),
            cap: MEMBERSHIP_MAX_ORDER,
        });
    }
    let violation_a = find_violation(t, p, Strategy::Pruned)?.map(|c| c.s);
    let mut nonwitnessed_edge = None;
    let mut edge_witnesses = Vec::new();
    for (u, v) in t.edges() {
        let forest = t.delete_edge(u, v).expect("edge of t");
        match find_violation(&forest, p, Strategy::Pruned)? {
            Some(c) => edge_witnesses.push(((u, v), c.s)),
            None => {
                nonwitnessed_edge.get_or_insert((u, v));
            }
        }
    }
    Ok(TreeClassification {
        member: violation_a.is_none() && nonwitnessed_edge.is_none(),
        violation_a,
        nonwitnessed_edge,
        edge_witnesses,
    })
}

/// One representative per isomorphism class of trees on `n` vertices, via
/// canonical level-sequence successors (Wright, Richmond, Odlyzko, McKay).
/// Representatives are canonically labelled and sorted by [`tree_order_key`].
pub fn enumerate_trees(n: usize) -> Result<Vec<Graph>, TreeError> {
    if n == 0 || n > MAX_TREE_ORDER {
        return Err(TreeError::SizeLimit {
            n,
            cap: MAX_TREE_ORDER,
        });
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(Graph::empty(1));
    } else {
        let mut layout: Vec<usize> = (0..=n / 2).chain(1..n.div_ceil(2)).collect();
        loop {
            layout = match next_tree(layout) {
                Some(l) => l,
                None => break,
            };
            out.push(canonical_tree(&layout_to_graph(&layout)));
            layout = match next_rooted_tree(&layout, None) {
                Some(l) => l,
                None => break,
            };
        }
    }
    sort_trees(&mut out);
    Ok(out)
}

/// Same classes as [`enumerate_trees`], obtained independently by decoding
/// Prüfer sequences and deduplicating on a packed canonical code.
pub fn enumerate_trees_prufer(n: usize) -> Result<Vec<Graph>, TreeError> {
    if n == 0 || n > PRUFER_MAX_ORDER {
        return Err(TreeError::SizeLimit {
            n,
            cap: PRUFER_MAX_ORDER,
        });
    }
    if n <= 2 {
        return Ok(vec![Graph::complete(n)]);
    }
    let len = n - 2;
    // Every tree on n ≥ 3 vertices has two leaves, and some labelling makes
    // them n − 2 and n − 1. Those labels are exactly the symbols missing from
    // the Prüfer sequence, so sequences over [0, n − 2) reach every class.
    let alphabet = n - 2;
    let codes: HashSet<u64> = (0..alphabet)
        .into_par_iter()
        .map(|first| {
            let mut local = HashSet::new();
            let mut seq = [0usize; PRUFER_MAX_ORDER];
            seq[0] = first;
            let mut rows = [0u32; PRUFER_MAX_ORDER];
            loop {
                prufer_decode(&seq[..len], &mut rows[..n]);
                local.insert(packed_code(&rows[..n]));
                // odometer over positions 1..len
                let mut i = len;
                loop {
                    if i == 1 {
                        return local;
                    }
                    i -= 1;
                    seq[i] += 1;
                    if seq[i] < alphabet {
                        break;
                    }
                    seq[i] = 0;
                }
            }
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let mut out: Vec<Graph> = codes
        .into_iter()
        .map(|c| canonical_tree(&tree_from_packed(c, n)))
        .collect();
    sort_trees(&mut out);
    Ok(out)
}

/// Sort key: degree sequence (non-increasing), then graph6 of the labelled
/// tree.
pub fn tree_order_key(t: &Graph) -> (Vec<usize>, String) {
    let mut degrees = t.degrees();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    (degrees, to_graph6(t).expect("small order"))
}

fn sort_trees(trees: &mut [Graph]) {
    trees.sort_by_cached_key(tree_order_key);
}

/// Decodes a Prüfer sequence into neighbourhood bit rows.
fn prufer_decode(seq: &[usize], rows: &mut [u32]) {
    let n = rows.len();
    let mut degree = [1u8; PRUFER_MAX_ORDER];
    for &s in seq {
        degree[s] += 1;
    }
    rows.iter_mut().for_each(|r| *r = 0);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        rows[leaf] |= 1 << s;
        rows[s] |= 1 << leaf;
        degree[leaf] = 0;
        degree[s] -= 1;
    }
    let mut rest = (0..n).filter(|&v| degree[v] == 1);
    let a = rest.next().expect("two vertices remain");
    let b = rest.next().expect("two vertices remain");
    rows[a] |= 1 << b;
    rows[b] |= 1 << a;
}

/// Parenthesis code packed into bits (`1` opens, `0` closes) with children
/// ordered by `(length, bits)`. Any fixed order on child codes gives an
/// isomorphism invariant; this one avoids allocation. Needs `n ≤ 32`.
fn packed_rooted(rows: &[u32], v: usize, parent: usize) -> (u32, u64) {
    let mut kids = [(0u32, 0u64); 32];
    let mut count = 0;
    let mut nb = rows[v];
    while nb != 0 {
        let u = nb.trailing_zeros() as usize;
        nb &= nb - 1;
        if u != parent {
            kids[count] = packed_rooted(rows, u, v);
            count += 1;
        }
    }
    let kids = &mut kids[..count];
    kids.sort_unstable();
    let mut len = 1;
    let mut bits = 1u64;
    for &(l, b) in kids.iter() {
        bits = (bits << l) | b;
        len += l;
    }
    (len + 1, bits << 1)
}

fn packed_code(rows: &[u32]) -> u64 {
    let n = rows.len();
    let mut degree = [0u32; 32];
    for v in 0..n {
        degree[v] = rows[v].count_ones();
    }
    // peel leaves down to the centre(s)
    let mut alive: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut remaining = n;
    while remaining > 2 {
        let mut leaves = 0u32;
        for v in 0..n {
            if alive >> v & 1 == 1 && degree[v] <= 1 {
                leaves |= 1 << v;
            }
        }
        alive &= !leaves;
        remaining -= leaves.count_ones() as usize;
        let mut l = leaves;
        while l != 0 {
            let v = l.trailing_zeros() as usize;
            l &= l - 1;
            let mut nb = rows[v] & alive;
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                degree[u] -= 1;
            }
        }
    }
    let mut best = (u32::MAX, u64::MAX);
    let mut c = alive;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        best = best.min(packed_rooted(rows, v, usize::MAX));
    }
    best.1
}

fn tree_from_packed(code: u64, n: usize) -> Graph {
    let bytes: Vec<u8> = (0..2 * n)
        .rev()
        .map(|i| if code >> i & 1 == 1 { b'(' } else { b')' })
        .collect();
    tree_from_code(&bytes)
}

fn adjacency_from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            degree[leaf] = 0;
            for &u in &adj[leaf] {
                if degree[u] > 0 {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    let mut c = layer;
    c.sort_unstable();
    c
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> Vec<u8> {
    let mut children: Vec<Vec<u8>> = adj[v]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| rooted_code(adj, u, v))
        .collect();
    children.sort_unstable();
    let mut code = Vec::with_capacity(2 + children.iter().map(Vec::len).sum::<usize>());
    code.push(b'(');
    for c in children {
        code.extend(c);
    }
    code.push(b')');
    code
}

fn edge_list_code(n: usize, edges: &[(usize, usize)]) -> Vec<u8> {
    let adj = adjacency_from_edges(n, edges);
    centers(&adj)
        .into_iter()
        .map(|c| rooted_code(&adj, c, usize::MAX))
        .min()
        .expect("nonempty tree")
}

/// Isomorphism-invariant code of a tree: the smallest parenthesis string of
/// the tree rooted at one of its centres, children sorted.
pub fn canonical_code(t: &Graph) -> Result<Vec<u8>, TreeError> {
    if !t.is_tree() {
        return Err(TreeError::NotATree);
    }
    Ok(edge_list_code(t.order(), &t.edges()))
}

/// Rebuilds the canonically labelled tree from its code: preorder labels,
/// root 0.
pub fn tree_from_code(code: &[u8]) -> Graph {
    let n = code.len() / 2;
    let mut g = Graph::empty(n);
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0;
    for &b in code {
        if b == b'(' {
            if let Some(&parent) = stack.last() {
                g.set_edge(parent, next, true);
            }
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
        }
    }
    g
}

/// Relabels a tree so that isomorphic trees become equal graphs.
pub fn canonical_tree(t: &Graph) -> Graph {
    tree_from_code(&canonical_code(t).expect("canonical_tree needs a tree"))
}

fn layout_to_graph(layout: &[usize]) -> Graph {
    let mut g = Graph::empty(layout.len());
    let mut stack: Vec<usize> = Vec::new();
    for (i, &level) in layout.iter().enumerate() {
        while let Some(&j) = stack.last() {
            if layout[j] >= level {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&j) = stack.last() {
            g.set_edge(i, j, true);
        }
        stack.push(i);
    }
    g
}

fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut result = pred.to_vec();
    for i in p..result.len() {
        result[i] = result[i - p + q];
    }
    Some(result)
}

fn split_tree(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = layout
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == 1)
        .nth(1)
        .map_or(layout.len(), |(i, _)| i);
    let left = layout[1..m].iter().map(|&l| l - 1).collect();
    let rest = std::iter::once(0).chain(layout[m..].iter().copied()).collect();
    (left, rest)
}

/// Advances `candidate` to the next level sequence that is canonical for a
/// free tree, or `None` when exhausted.
fn next_tree(candidate: Vec<usize>) -> Option<Vec<usize>> {
    let (left, rest) = split_tree(&candidate);
    let left_height = left.iter().copied().max().unwrap_or(0);
    let rest_height = rest.iter().copied().max().unwrap_or(0);
    let mut valid = rest_height >= left_height;
    if valid
        && rest_height == left_height
        && (left.len() > rest.len() || (left.len() == rest.len() && left > rest))
    {
        valid = false;
    }
    if valid {
        return Some(candidate);
    }
    let p = left.len();
    let mut next = next_rooted_tree(&candidate, Some(p))?;
    if candidate[p] > 2 {
        let (new_left, _) = split_tree(&next);
        let h = new_left.iter().copied().max().unwrap_or(0);
        let len = next.len();
        for (i, level) in (1..=h + 1).enumerate() {
            next[len - (h + 1) + i] = level;
        }
    }
    Some(next)
}
