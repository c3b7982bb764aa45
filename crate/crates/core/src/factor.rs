//! Existence of `{C_{2i+1}, T : 1 ≤ i < r/(k−r), T ∈ T_{k/r}}`-factors.
//!
//! A graph has such a factor iff `r·i(G−S) ≤ k·|S|` for every vertex set `S`.
//! [`find_violation`] searches for an `S` breaking that inequality and
//! returns it as a [`Certificate`]; [`brute_force_factor`] searches for the
//! factor itself and serves as an independent oracle on small graphs.

mod witness;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

pub use witness::{
    brute_force_factor, Block, BlockKind, FactorWitness, WitnessSearch, BRUTE_FORCE_MAX_ORDER,
    TREE_ENUMERATION_CAP,
};

/// Largest order accepted by the `2^n` subset enumeration.
pub const NAIVE_MAX_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("family parameters need 0 < r < k, got k = {k}, r = {r}")]
    InvalidParams { k: u64, r: u64 },
    #[error("order {n} exceeds the cap {cap} of this search")]
    SizeLimit { n: usize, cap: usize },
    #[error("block {block:?} has more than {cap} spanning trees, membership undecided")]
    Indeterminate { block: Vec<usize>, cap: usize },
}

/// The pair `(k, r)` with `0 < r < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyParams {
    k: u64,
    r: u64,
}

impl FamilyParams {
    pub fn new(k: u64, r: u64) -> Result<Self, FactorError> {
        if r == 0 || r >= k {
            return Err(FactorError::InvalidParams { k, r });
        }
        Ok(Self { k, r })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// Odd cycle lengths `2i + 1` with `1 ≤ i` and `i·(k − r) < r`.
    pub fn allowed_cycle_lengths(&self) -> Vec<usize> {
        (1u64..)
            .take_while(|i| i * (self.k - self.r) < self.r)
            .map(|i| (2 * i + 1) as usize)
            .collect()
    }

    /// `r·isolated > k·separator`, the violated form of the criterion.
    #[inline]
    pub fn violates(&self, isolated: usize, separator: usize) -> bool {
        self.r * isolated as u64 > self.k * separator as u64
    }
}

/// A vertex set `S` with `r·i(G−S) > k·|S|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub s: VertexSet,
    /// Isolated vertices of `G − S`, in the labels of `G`.
    pub isolated: VertexSet,
    /// `r·|isolated|`
    pub lhs: u64,
    /// `k·|S|`
    pub rhs: u64,
}

impl Certificate {
    fn build(g: &Graph, p: FamilyParams, s: VertexSet) -> Self {
        let isolated = g.isolated_after_removal(&s);
        let lhs = p.r * isolated.len() as u64;
        let rhs = p.k * s.len() as u64;
        Self { s, isolated, lhs, rhs }
    }

    /// Recomputes `i(G − S)` from scratch on the induced subgraph and checks
    /// every stored field against it.
    pub fn validate(&self, g: &Graph, p: FamilyParams) -> bool {
        let n = g.order();
        if self.s.universe() != n || self.isolated.universe() != n {
            return false;
        }
        let Ok(rest) = g.delete_vertices(&self.s) else {
            return false;
        };
        let fresh = rest.isolated_count();
        let members_ok = self.isolated.iter().all(|v| {
            !self.s.contains(v) && g.neighbors(v).iter().all(|u| self.s.contains(u))
        });
        members_ok
            && fresh == self.isolated.len()
            && self.lhs == p.r * fresh as u64
            && self.rhs == p.k * self.s.len() as u64
            && self.lhs > self.rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// All `2^n` vertex subsets.
    Naive,
    /// Neighbourhoods of independent sets, with a branch bound.
    #[default]
    Pruned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    HasFactor,
    NoFactor(Certificate),
}

impl Verdict {
    pub fn has_factor(&self) -> bool {
        matches!(self, Verdict::HasFactor)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::HasFactor => None,
            Verdict::NoFactor(c) => Some(c),
        }
    }
}

/// Ordering for reported certificates: smaller `|S|` first, then the
/// lexicographically smaller sorted member list.
fn better(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// Finds a vertex set `S` with `r·i(G−S) > k·|S|`, if any.
///
/// `S = ∅` is searched (it violates iff `G` has isolated vertices); `S = V(G)`
/// never violates and is skipped. Both strategies return the same canonical
/// certificate: minimum `|S|`, ties broken lexicographically.
pub fn find_violation(
    g: &Graph,
    p: FamilyParams,
    strategy: Strategy,
) -> Result<Option<Certificate>, FactorError> {
    let best = match strategy {
        Strategy::Naive => naive_search(g, p)?,
        Strategy::Pruned => pruned_search(g, p),
    };
    Ok(best.map(|members| {
        let s = VertexSet::from_members(g.order(), &members).expect("members in range");
        Certificate::build(g, p, s)
    }))
}

/// Decides factor existence with the pruned search.
pub fn has_factor(g: &Graph, p: FamilyParams) -> Result<Verdict, FactorError> {
    has_factor_with(g, p, Strategy::Pruned)
}

pub fn has_factor_with(
    g: &Graph,
    p: FamilyParams,
    strategy: Strategy,
) -> Result<Verdict, FactorError> {
    Ok(match find_violation(g, p, strategy)? {
        None => Verdict::HasFactor,
        Some(c) => Verdict::NoFactor(c),
    })
}

fn naive_search(g: &Graph, p: FamilyParams) -> Result<Option<Vec<usize>>, FactorError> {
    let n = g.order();
    if n > NAIVE_MAX_ORDER {
        return Err(FactorError::SizeLimit {
            n,
            cap: NAIVE_MAX_ORDER,
        });
    }
    let rows: Vec<u64> = (0..n).map(|v| g.row(v).first().copied().unwrap_or(0)).collect();
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mut best: Option<Vec<usize>> = None;
    for mask in 0..full {
        let size = mask.count_ones() as usize;
        if best.as_ref().is_some_and(|b| b.len() < size) {
            continue;
        }
        let isolated = (0..n)
            .filter(|&v| mask >> v & 1 == 0 && rows[v] & !mask == 0)
            .count();
        if p.violates(isolated, size) {
            let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if best.as_ref().is_none_or(|b| better(&members, b)) {
                best = Some(members);
            }
        }
    }
    Ok(best)
}

/// Every violating `S` contains `N(I)` for the independent set `I` of
/// isolated vertices of `G − S`, and `N(I)` violates as well. So it is enough
/// to try `S = N(I)` over nonempty independent `I`.
fn pruned_search(g: &Graph, p: FamilyParams) -> Option<Vec<usize>> {
    let n = g.order();
    let mut state = PrunedState {
        g,
        p,
        best: None,
    };
    let candidates: Vec<usize> = (0..n).collect();
    let mut nbhd = VertexSet::new(n);
    state.extend(0, &candidates, &mut nbhd);
    state.best
}

struct PrunedState<'a> {
    g: &'a Graph,
    p: FamilyParams,
    best: Option<Vec<usize>>,
}

impl PrunedState<'_> {
    /// `candidates`: vertices above the last chosen one that are neither in
    /// `I` nor adjacent to it. `nbhd` is `N(I)` on entry and is restored.
    fn extend(&mut self, size: usize, candidates: &[usize], nbhd: &mut VertexSet) {
        for (idx, &v) in candidates.iter().enumerate() {
            let saved = nbhd.clone();
            nbhd.union_with(&self.g.neighbors(v));
            let new_size = size + 1;

            let isolated = self.g.isolated_after_removal(nbhd);
            if self.p.violates(isolated.len(), nbhd.len()) {
                let members = nbhd.to_vec();
                if self.best.as_ref().is_none_or(|b| better(&members, b)) {
                    self.best = Some(members);
                }
            }

            let rest: Vec<usize> = candidates[idx + 1..]
                .iter()
                .copied()
                .filter(|&u| !nbhd.contains(u))
                .collect();
            // an extension I' ⊇ I has |I'| ≤ |I| + |rest| and |N(I')| ≥ |N(I)|
            let hopeless = self.p.k * nbhd.len() as u64 >= self.p.r * (new_size + rest.len()) as u64;
            let too_big = self
                .best
                .as_ref()
                .is_some_and(|b| b.len() < nbhd.len());
            if !rest.is_empty() && !hopeless && !too_big {
                self.extend(new_size, &rest, nbhd);
            }
            *nbhd = saved;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: u64, r: u64) -> FamilyParams {
        FamilyParams::new(k, r).unwrap()
    }

    #[test]
    fn params() {
        assert!(FamilyParams::new(2, 2).is_err());
        assert!(FamilyParams::new(3, 0).is_err());
        assert!(p(2, 1).allowed_cycle_lengths().is_empty());
        assert_eq!(p(3, 2).allowed_cycle_lengths(), vec![3]);
        assert_eq!(p(5, 4).allowed_cycle_lengths(), vec![3, 5, 7]);
        assert!(p(4, 2).allowed_cycle_lengths().is_empty());
        assert_eq!(p(4, 3).allowed_cycle_lengths(), vec![3, 5]);
    }

    #[test]
    fn star_certificate() {
        for strategy in [Strategy::Naive, Strategy::Pruned] {
            let c = find_violation(&Graph::star(4), p(2, 1), strategy).unwrap().unwrap();
            assert_eq!(c.s.to_vec(), vec![0]);
            assert_eq!(c.isolated.to_vec(), vec![1, 2, 3]);
            assert_eq!((c.lhs, c.rhs), (3, 2));
            assert!(c.validate(&Graph::star(4), p(2, 1)));
        }
    }

    #[test]
    fn no_violations() {
        for strategy in [Strategy::Naive, Strategy::Pruned] {
            assert_eq!(find_violation(&Graph::complete(4), p(2, 1), strategy).unwrap(), None);
            assert_eq!(find_violation(&Graph::cycle(5), p(3, 2), strategy).unwrap(), None);
        }
    }

    #[test]
    fn verdicts() {
        assert_eq!(has_factor(&Graph::complete(2), p(2, 1)).unwrap(), Verdict::HasFactor);
        let v = has_factor(&Graph::star(4), p(2, 1)).unwrap();
        assert_eq!(v.certificate().unwrap().s.to_vec(), vec![0]);

        let g = Graph::complete(1).join(&Graph::complete(11).disjoint_union(&Graph::empty(3)));
        let c = has_factor(&g, p(2, 1)).unwrap().certificate().cloned().unwrap();
        assert_eq!(c.s.to_vec(), vec![0]);
        assert_eq!((c.lhs, c.rhs), (3, 2));
    }

    #[test]
    fn isolated_vertex_violates_with_empty_separator() {
        let g = Graph::complete(3).disjoint_union(&Graph::empty(1));
        for strategy in [Strategy::Naive, Strategy::Pruned] {
            let c = find_violation(&g, p(2, 1), strategy).unwrap().unwrap();
            assert!(c.s.is_empty());
            assert_eq!(c.isolated.to_vec(), vec![3]);
        }
        // the single vertex graph has no factor either
        assert!(!has_factor(&Graph::empty(1), p(3, 2)).unwrap().has_factor());
    }

    #[test]
    fn naive_cap() {
        let g = Graph::complete(NAIVE_MAX_ORDER + 1);
        assert_eq!(
            find_violation(&g, p(2, 1), Strategy::Naive),
            Err(FactorError::SizeLimit { n: 25, cap: NAIVE_MAX_ORDER })
        );
        assert!(find_violation(&g, p(2, 1), Strategy::Pruned).unwrap().is_none());
    }

    #[test]
    fn lexicographic_tie_break() {
        // three pendant leaves hang off 1 and off 3; both {1} and {3} violate
        let g = Graph::from_edges(
            10,
            &[(0, 1), (1, 2), (2, 3), (1, 4), (1, 5), (1, 6), (3, 7), (3, 8), (3, 9), (0, 3)],
        )
        .unwrap();
        for strategy in [Strategy::Naive, Strategy::Pruned] {
            let c = find_violation(&g, p(2, 1), strategy).unwrap().unwrap();
            assert_eq!(c.s.to_vec(), vec![1]);
        }
    }

    #[test]
    fn independent_set_neighbourhood_isolates_it() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (0, 3)])
            .unwrap();
        let n = g.order();
        for mask in 1u64..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let independent = members
                .iter()
                .all(|&a| members.iter().all(|&b| !g.has_edge(a, b)));
            if !independent {
                continue;
            }
            let mut nb = VertexSet::new(n);
            for &v in &members {
                nb.union_with(&g.neighbors(v));
            }
            let iso = g.isolated_after_removal(&nb);
            assert!(members.iter().all(|&v| iso.contains(v)));
            assert!(g.delete_vertices(&nb).unwrap().isolated_count() >= members.len());
        }
    }
}
