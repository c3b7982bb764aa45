//! The extremal graphs `G₁(s) = K_s ∨ (K_{n−⌊ks/r⌋−s−1} ∪ (⌊ks/r⌋+1)K_1)`,
//! the order thresholds of the two spectral conditions, and the quadratics
//! `f(s)` and `g(s)` bounding `ρ(G₁(s))` and `q(G₁(s))`.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::factor::FamilyParams;
use crate::graph::Graph;

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("order {n} too small for separator {s}: need n >= {min}")]
    NegativePart { n: u64, s: u64, min: u64 },
    #[error("minimum degree must be at least 1")]
    ZeroDelta,
}

/// Parameters of `G₁(s)` on `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremalSpec {
    n: u64,
    s: u64,
    params: FamilyParams,
}

impl ExtremalSpec {
    pub fn new(n: u64, s: u64, params: FamilyParams) -> Result<Self, ExtremalError> {
        let min = floor_ratio(params, s) + s + 1;
        if n < min {
            return Err(ExtremalError::NegativePart { n, s, min });
        }
        Ok(Self { n, s, params })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn params(&self) -> FamilyParams {
        self.params
    }

    /// `⌊ks/r⌋`
    pub fn floor_ks_r(&self) -> u64 {
        floor_ratio(self.params, self.s)
    }

    /// Order of the middle clique, `n − ⌊ks/r⌋ − s − 1` (may be 0).
    pub fn clique_part(&self) -> u64 {
        self.n - self.floor_ks_r() - self.s - 1
    }

    /// Number of degree-`s` vertices, `⌊ks/r⌋ + 1`.
    pub fn isolated_part(&self) -> u64 {
        self.floor_ks_r() + 1
    }

    /// `C(n − ⌊ks/r⌋ − 1, 2) + s·(⌊ks/r⌋ + 1)`
    pub fn edge_count(&self) -> u64 {
        let big = self.n - self.floor_ks_r() - 1;
        big * big.saturating_sub(1) / 2 + self.s * self.isolated_part()
    }
}

fn floor_ratio(p: FamilyParams, s: u64) -> u64 {
    p.k() * s / p.r()
}

/// Labelled `G₁(s)`: separator `[0, s)`, then the clique, then the
/// `⌊ks/r⌋ + 1` vertices adjacent only to the separator.
pub fn build_extremal(spec: &ExtremalSpec) -> Graph {
    let s = spec.s as usize;
    let clique = spec.clique_part() as usize;
    let outer = spec.isolated_part() as usize;
    Graph::complete(s).join(&Graph::complete(clique).disjoint_union(&Graph::empty(outer)))
}

/// The separator `[0, s)` of [`build_extremal`]'s labelling.
pub fn separator(spec: &ExtremalSpec) -> Vec<usize> {
    (0..spec.s as usize).collect()
}

/// Exact order threshold `max{first, second}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    /// `(k+r)(k+2r)(kδ+k+r) / (k²r)`, shared by both conditions.
    pub first: Rational,
    pub second: Rational,
}

impl Threshold {
    pub fn value(&self) -> Rational {
        self.first.max(self.second)
    }

    pub fn as_f64(&self) -> f64 {
        self.value().to_f64().expect("finite rational")
    }

    /// Least integer `n` with `n ≥ value`.
    pub fn minimal_order(&self) -> u64 {
        self.value().ceil().to_integer() as u64
    }
}

fn ki(p: FamilyParams) -> (i128, i128) {
    (p.k() as i128, p.r() as i128)
}

fn first_term(delta: i128, k: i128, r: i128) -> Rational {
    Rational::new((k + r) * (k + 2 * r) * (k * delta + k + r), k * k * r)
}

/// Order threshold of the adjacency condition.
pub fn threshold_adjacency(delta: u64, p: FamilyParams) -> Result<Threshold, ExtremalError> {
    if delta == 0 {
        return Err(ExtremalError::ZeroDelta);
    }
    let (k, r) = ki(p);
    let d = delta as i128;
    let num = 2 * k * r * d * d + (2 * k * k + k * r + 2 * r * r) * d + k * k + 3 * k * r
        - 2 * r * r;
    Ok(Threshold {
        first: first_term(d, k, r),
        second: Rational::new(num, 2 * r * (k - r)),
    })
}

/// Order threshold of the signless Laplacian condition.
pub fn threshold_signless(delta: u64, p: FamilyParams) -> Result<Threshold, ExtremalError> {
    if delta == 0 {
        return Err(ExtremalError::ZeroDelta);
    }
    let (k, r) = ki(p);
    let d = delta as i128;
    let num = (k * k + 2 * k * r) * d * d + (2 * k * k + 3 * k * r + 2 * r * r) * d + k * k
        + 3 * k * r;
    Ok(Threshold {
        first: first_term(d, k, r),
        second: Rational::new(num, 2 * r * (k - r)),
    })
}

/// `f(s) = (k²+2kr)s² − (2krn − 2r² − kr)s + r²n² − 2r²n + r²`
pub fn f_value(s: i128, n: i128, p: FamilyParams) -> i128 {
    let (k, r) = ki(p);
    (k * k + 2 * k * r) * s * s - (2 * k * r * n - 2 * r * r - k * r) * s + r * r * n * n
        - 2 * r * r * n
        + r * r
}

/// `g(s) = (k²+2kr)s² − (2krn − kr − 2r²)s + 2r²n² − 4r²n + 2r²`
pub fn g_value(s: i128, n: i128, p: FamilyParams) -> i128 {
    let (k, r) = ki(p);
    (k * k + 2 * k * r) * s * s - (2 * k * r * n - k * r - 2 * r * r) * s + 2 * r * r * n * n
        - 4 * r * r * n
        + 2 * r * r
}

/// Integer separator sizes `s` with `δ + 1 ≤ s < rn/(k + r)`.
pub fn case_two_range(n: u64, delta: u64, p: FamilyParams) -> impl Iterator<Item = u64> {
    let (k, r) = (p.k(), p.r());
    (delta + 1..).take_while(move |s| s * (k + r) < r * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{find_violation, Strategy};

    fn p(k: u64, r: u64) -> FamilyParams {
        FamilyParams::new(k, r).unwrap()
    }

    #[test]
    fn constructions() {
        for (n, s, k, r, edges) in [(16, 1, 3, 2, 93), (16, 2, 3, 2, 74), (15, 1, 2, 1, 69)] {
            let spec = ExtremalSpec::new(n, s, p(k, r)).unwrap();
            let g = build_extremal(&spec);
            assert_eq!(g.order() as u64, n);
            assert_eq!(g.edge_count() as u64, edges);
            assert_eq!(spec.edge_count(), edges);
            assert_eq!(g.min_degree(), Some(s as usize));
        }
        let spec = ExtremalSpec::new(16, 1, p(3, 2)).unwrap();
        assert_eq!((spec.clique_part(), spec.isolated_part()), (13, 2));
    }

    #[test]
    fn degenerate_clique() {
        // n = ⌊ks/r⌋ + s + 1 leaves an empty middle clique
        let spec = ExtremalSpec::new(4, 1, p(2, 1)).unwrap();
        assert_eq!(spec.clique_part(), 0);
        assert_eq!(build_extremal(&spec), Graph::star(4));
        assert_eq!(
            ExtremalSpec::new(3, 1, p(2, 1)),
            Err(ExtremalError::NegativePart { n: 3, s: 1, min: 4 })
        );
    }

    #[test]
    fn thresholds() {
        let t = threshold_adjacency(1, p(2, 1)).unwrap();
        assert_eq!(t.first, Rational::from_integer(15));
        assert_eq!(t.second, Rational::from_integer(12));
        assert_eq!(t.minimal_order(), 15);

        let t = threshold_adjacency(1, p(3, 2)).unwrap();
        assert_eq!(t.first, Rational::new(280, 18));
        assert_eq!(t.second, Rational::new(63, 4));
        assert_eq!(t.as_f64(), 15.75);
        assert_eq!(t.minimal_order(), 16);

        let t = threshold_signless(1, p(3, 2)).unwrap();
        assert_eq!(t.second, Rational::new(92, 4));
        assert_eq!(t.value(), Rational::from_integer(23));
        assert_eq!(t.minimal_order(), 23);

        assert_eq!(threshold_signless(0, p(3, 2)), Err(ExtremalError::ZeroDelta));
    }

    #[test]
    fn quadratics() {
        assert_eq!(f_value(2, 16, p(3, 2)), 628);
        assert_eq!(g_value(2, 23, p(3, 2)), 3432);
        assert_eq!(f_value(2, 15, p(2, 1)), 116);
        for n in 1..30 {
            for (k, r) in [(2, 1), (3, 2), (5, 3)] {
                let rr = r as i128;
                assert_eq!(f_value(0, n, p(k, r)), rr * rr * (n - 1) * (n - 1));
            }
        }
    }

    #[test]
    fn separator_certificate() {
        let params = p(3, 2);
        let spec = ExtremalSpec::new(16, 2, params).unwrap();
        let g = build_extremal(&spec);
        let c = find_violation(&g, params, Strategy::Pruned).unwrap().unwrap();
        assert_eq!(c.s.to_vec(), separator(&spec));
        assert_eq!(c.isolated.len() as u64, spec.isolated_part());
    }

    #[test]
    fn case_two_bounds() {
        let s: Vec<u64> = case_two_range(16, 1, p(3, 2)).collect();
        // s < 32/5
        assert_eq!(s, vec![2, 3, 4, 5, 6]);
        let s: Vec<u64> = case_two_range(15, 1, p(2, 1)).collect();
        assert_eq!(s, vec![2, 3, 4]);
    }
}
