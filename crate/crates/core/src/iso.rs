//! Isomorphism testing for small graphs by individualisation and colour
//! refinement.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::Graph;

pub const DEFAULT_ORDER_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("order {n} exceeds isomorphism cap {cap}")]
    SizeLimit { n: usize, cap: usize },
}

/// Isomorphism test with the default order cap.
pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool, IsoError> {
    is_isomorphic_with_cap(g1, g2, DEFAULT_ORDER_CAP)
}

pub fn is_isomorphic_with_cap(g1: &Graph, g2: &Graph, cap: usize) -> Result<bool, IsoError> {
    let n = g1.order();
    if n.max(g2.order()) > cap {
        return Err(IsoError::SizeLimit {
            n: n.max(g2.order()),
            cap,
        });
    }
    Ok(find_isomorphism(g1, g2).is_some())
}

/// Returns `perm` with `g1.permute(&perm) == g2`, if one exists. No order cap;
/// callers are expected to bound the input size themselves.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<Vec<usize>> {
    let n = g1.order();
    if n != g2.order() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let mut d1 = g1.degrees();
    let mut d2 = g2.degrees();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return None;
    }
    let adj1: Vec<Vec<usize>> = (0..n).map(|v| g1.neighbors(v).to_vec()).collect();
    let adj2: Vec<Vec<usize>> = (0..n).map(|v| g2.neighbors(v).to_vec()).collect();
    let c1 = vec![0u32; n];
    let c2 = vec![0u32; n];
    search(g2, &adj1, &adj2, c1, c2)
}

fn search(
    g2: &Graph,
    adj1: &[Vec<usize>],
    adj2: &[Vec<usize>],
    c1: Vec<u32>,
    c2: Vec<u32>,
) -> Option<Vec<usize>> {
    let (c1, c2) = refine(adj1, adj2, c1, c2)?;
    let n = c1.len();

    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &c1 {
        *counts.entry(c).or_default() += 1;
    }
    let target = counts
        .iter()
        .filter(|(_, &size)| size > 1)
        .min_by_key(|(&c, &size)| (size, c))
        .map(|(&c, _)| c);

    let Some(cell) = target else {
        // discrete partition: colours give the bijection directly
        let mut by_colour = vec![usize::MAX; n];
        for (w, &c) in c2.iter().enumerate() {
            by_colour[c as usize] = w;
        }
        let perm: Vec<usize> = c1.iter().map(|&c| by_colour[c as usize]).collect();
        let ok = (0..n).all(|u| adj1[u].iter().all(|&v| g2.has_edge(perm[u], perm[v])));
        return ok.then_some(perm);
    };

    let fresh = n as u32;
    let v = c1.iter().position(|&c| c == cell).unwrap();
    for w in (0..n).filter(|&w| c2[w] == cell) {
        let mut n1 = c1.clone();
        let mut n2 = c2.clone();
        n1[v] = fresh;
        n2[w] = fresh;
        if let Some(p) = search(g2, adj1, adj2, n1, n2) {
            return Some(p);
        }
    }
    None
}

/// Joint 1-dimensional Weisfeiler–Leman refinement. Colours are renumbered
/// `0..classes` identically in both graphs; returns `None` when the colour
/// histograms diverge.
fn refine(
    adj1: &[Vec<usize>],
    adj2: &[Vec<usize>],
    mut c1: Vec<u32>,
    mut c2: Vec<u32>,
) -> Option<(Vec<u32>, Vec<u32>)> {
    let n = c1.len();
    let mut classes = usize::MAX;
    loop {
        let sig = |adj: &[Vec<usize>], c: &[u32], v: usize| {
            let mut nb: Vec<u32> = adj[v].iter().map(|&u| c[u]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let s1: Vec<_> = (0..n).map(|v| sig(adj1, &c1, v)).collect();
        let s2: Vec<_> = (0..n).map(|v| sig(adj2, &c2, v)).collect();
        let mut ids: BTreeMap<&(u32, Vec<u32>), u32> = BTreeMap::new();
        for s in s1.iter().chain(&s2) {
            ids.entry(s).or_insert(0);
        }
        for (i, id) in ids.values_mut().enumerate() {
            *id = i as u32;
        }
        let new1: Vec<u32> = s1.iter().map(|s| ids[s]).collect();
        let new2: Vec<u32> = s2.iter().map(|s| ids[s]).collect();
        let mut h1 = vec![0usize; ids.len()];
        let mut h2 = vec![0usize; ids.len()];
        new1.iter().for_each(|&c| h1[c as usize] += 1);
        new2.iter().for_each(|&c| h2[c as usize] += 1);
        if h1 != h2 {
            return None;
        }
        c1 = new1;
        c2 = new2;
        let now = h1.iter().filter(|&&h| h > 0).count();
        if now == classes {
            return Some((c1, c2));
        }
        classes = now;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shuffled_cycle() {
        let c4 = Graph::cycle(4);
        let shuffled = c4.permute(&[2, 0, 3, 1]);
        assert!(is_isomorphic(&shuffled, &c4).unwrap());
    }

    #[test]
    fn star_vs_path() {
        assert!(!is_isomorphic(&Graph::star(4), &Graph::path(4)).unwrap());
    }

    #[test]
    fn reversed_path() {
        let p4 = Graph::path(4);
        assert!(is_isomorphic(&p4, &p4.permute(&[3, 2, 1, 0])).unwrap());
    }

    #[test]
    fn regular_non_isomorphic() {
        // C_6 and 2K_3 share the degree sequence and 1-WL colouring
        let c6 = Graph::cycle(6);
        let two_triangles = Graph::complete(3).disjoint_union(&Graph::complete(3));
        assert!(!is_isomorphic(&c6, &two_triangles).unwrap());
    }

    #[test]
    fn cap_enforced() {
        let g = Graph::complete(17);
        assert_eq!(
            is_isomorphic(&g, &g),
            Err(IsoError::SizeLimit { n: 17, cap: 16 })
        );
        assert!(is_isomorphic_with_cap(&g, &g, 20).unwrap());
    }

    #[test]
    fn returned_map_is_isomorphism() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        let perm = [4, 1, 5, 0, 2, 3];
        let h = g.permute(&perm);
        let found = find_isomorphism(&g, &h).unwrap();
        assert_eq!(g.permute(&found), h);
    }

    #[test]
    fn equivalence_spot_checks() {
        let samples = [
            Graph::path(5),
            Graph::path(5).permute(&[4, 0, 3, 1, 2]),
            Graph::path(5).permute(&[1, 3, 0, 2, 4]),
            Graph::star(5),
            Graph::cycle(5),
        ];
        for a in &samples {
            assert!(is_isomorphic(a, a).unwrap());
            for b in &samples {
                let ab = is_isomorphic(a, b).unwrap();
                assert_eq!(ab, is_isomorphic(b, a).unwrap());
                for c in &samples {
                    if ab && is_isomorphic(b, c).unwrap() {
                        assert!(is_isomorphic(a, c).unwrap());
                    }
                }
            }
        }
    }
}
