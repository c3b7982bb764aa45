//! Largest eigenvalues of the adjacency matrix `A(G)` and the signless
//! Laplacian `Q(G) = D(G) + A(G)`, and the closed-form upper bounds of Hong
//! (`ρ ≤ √(2e − n + 1)`) and Das (`q ≤ 2e/(n−1) + n − 2`).

mod jacobi;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

pub use jacobi::{symmetric_eigen, SymmetricEigen};

pub const DEFAULT_TOL: f64 = 1e-10;
/// Tolerance for comparing two computed eigenvalues against each other.
pub const DEFAULT_GAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("bound not applicable: {0}")]
    NotApplicable(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PowerShifted,
    JacobiFull,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Adjacency,
    SignlessLaplacian,
}

/// A computed largest eigenvalue together with its Perron vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate {
    pub value: f64,
    /// `‖M·x − value·x‖_∞` for the unit Perron vector `x`.
    pub residual: f64,
    pub iterations: usize,
    pub method: Method,
    /// Unit eigenvector over all `n` vertices; zero outside the component
    /// attaining the maximum.
    pub vector: Vec<f64>,
}

/// `ρ(G)` within `tol`, power iteration on `A + I` with a Jacobi fallback.
pub fn adjacency_spectral_radius(g: &Graph, tol: f64) -> Result<SpectralEstimate, SpectraError> {
    spectral_radius(g, MatrixKind::Adjacency, tol, None)
}

/// `q(G)` within `tol`.
pub fn signless_laplacian_spectral_radius(
    g: &Graph,
    tol: f64,
) -> Result<SpectralEstimate, SpectraError> {
    spectral_radius(g, MatrixKind::SignlessLaplacian, tol, None)
}

/// Largest eigenvalue of `kind`, computed component by component.
///
/// `force` pins the method; `None` runs power iteration and falls back to the
/// full Jacobi eigensolve once the iteration cap `100·n + 1000` is reached.
pub fn spectral_radius(
    g: &Graph,
    kind: MatrixKind,
    tol: f64,
    force: Option<Method>,
) -> Result<SpectralEstimate, SpectraError> {
    if g.order() == 0 {
        return Err(SpectraError::EmptyGraph);
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SpectraError::BadTolerance(tol));
    }
    let n = g.order();
    let mut best: Option<(Vec<usize>, ComponentResult)> = None;
    let mut iterations = 0;
    let mut residual: f64 = 0.0;
    let mut method = force.unwrap_or(Method::PowerShifted);

    for comp in g.components() {
        let sub = g.induced_subgraph(&comp);
        let res = match force {
            Some(Method::JacobiFull) => jacobi_radius(&sub, kind, tol)?,
            Some(Method::PowerShifted) => power_iteration(&sub, kind, tol)?,
            None => match power_iteration(&sub, kind, tol) {
                Ok(r) => r,
                Err(SpectraError::NonConvergence { iterations: spent, .. }) => {
                    iterations += spent;
                    jacobi_radius(&sub, kind, tol)?
                }
                Err(e) => return Err(e),
            },
        };
        iterations += res.iterations;
        residual = residual.max(res.residual);
        if res.method == Method::JacobiFull {
            method = Method::JacobiFull;
        }
        if best.as_ref().is_none_or(|(_, b)| res.value > b.value) {
            best = Some((comp, res));
        }
    }

    let (comp, res) = best.expect("nonempty graph has a component");
    let mut vector = vec![0.0; n];
    for (i, &v) in comp.iter().enumerate() {
        vector[v] = res.vector[i];
    }
    Ok(SpectralEstimate {
        value: res.value,
        residual,
        iterations,
        method,
        vector,
    })
}

struct ComponentResult {
    value: f64,
    residual: f64,
    iterations: usize,
    method: Method,
    vector: Vec<f64>,
}

fn adjacency_lists(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.order()).map(|v| g.neighbors(v).to_vec()).collect()
}

fn apply(adj: &[Vec<usize>], kind: MatrixKind, x: &[f64], out: &mut [f64]) {
    for (v, nb) in adj.iter().enumerate() {
        let s: f64 = nb.iter().map(|&u| x[u]).sum();
        out[v] = match kind {
            MatrixKind::Adjacency => s,
            MatrixKind::SignlessLaplacian => s + nb.len() as f64 * x[v],
        };
    }
}

fn residual_of(adj: &[Vec<usize>], kind: MatrixKind, x: &[f64], value: f64) -> f64 {
    let mut mx = vec![0.0; x.len()];
    apply(adj, kind, x, &mut mx);
    mx.iter()
        .zip(x)
        .map(|(a, b)| (a - value * b).abs())
        .fold(0.0, f64::max)
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

/// Power iteration on `M + I` starting from the all-ones vector. The shift
/// makes `A + I` primitive on connected bipartite graphs, so the iteration
/// does not oscillate between `±ρ`.
fn power_iteration(
    g: &Graph,
    kind: MatrixKind,
    tol: f64,
) -> Result<ComponentResult, SpectraError> {
    let n = g.order();
    if n == 1 {
        return Ok(ComponentResult {
            value: 0.0,
            residual: 0.0,
            iterations: 0,
            method: Method::PowerShifted,
            vector: vec![1.0],
        });
    }
    let adj = adjacency_lists(g);
    let cap = 100 * n + 1000;
    let mut x = vec![1.0; n];
    normalize(&mut x);
    let mut mx = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=cap {
        apply(&adj, kind, &x, &mut mx);
        let value: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum();
        residual = mx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - value * b).abs())
            .fold(0.0, f64::max);
        if residual <= tol {
            return Ok(ComponentResult {
                value,
                residual,
                iterations: it,
                method: Method::PowerShifted,
                vector: x,
            });
        }
        for (xi, mi) in x.iter_mut().zip(&mx) {
            *xi += mi;
        }
        normalize(&mut x);
    }
    Err(SpectraError::NonConvergence {
        iterations: cap,
        residual,
    })
}

fn dense_matrix(g: &Graph, kind: MatrixKind) -> Vec<Vec<f64>> {
    let n = g.order();
    let mut m = vec![vec![0.0; n]; n];
    for (u, v) in g.edges() {
        m[u][v] = 1.0;
        m[v][u] = 1.0;
    }
    if kind == MatrixKind::SignlessLaplacian {
        for (v, row) in m.iter_mut().enumerate() {
            row[v] = g.degree(v) as f64;
        }
    }
    m
}

fn jacobi_radius(g: &Graph, kind: MatrixKind, tol: f64) -> Result<ComponentResult, SpectraError> {
    let eig = symmetric_eigen(dense_matrix(g, kind));
    let (idx, &value) = eig
        .values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    let mut x: Vec<f64> = eig.vectors.iter().map(|row| row[idx]).collect();
    if x.iter().sum::<f64>() < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    let residual = residual_of(&adjacency_lists(g), kind, &x, value);
    if residual > tol {
        return Err(SpectraError::NonConvergence {
            iterations: eig.sweeps,
            residual,
        });
    }
    Ok(ComponentResult {
        value,
        residual,
        iterations: eig.sweeps,
        method: Method::JacobiFull,
        vector: x,
    })
}

/// Hong's bound `√(2e(G) − n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HongBound {
    pub bound: f64,
    /// The graph is a star or complete, where the bound is attained.
    pub equality_predicted: bool,
    /// The bound is only guaranteed for graphs without isolated vertices.
    pub applicable: bool,
}

/// Exact radicand `2e(G) − n + 1`.
pub fn hong_radicand(g: &Graph) -> i64 {
    2 * g.edge_count() as i64 - g.order() as i64 + 1
}

pub fn hong_bound(g: &Graph) -> Result<HongBound, SpectraError> {
    if g.order() == 0 {
        return Err(SpectraError::EmptyGraph);
    }
    let radicand = hong_radicand(g);
    if radicand < 0 {
        return Err(SpectraError::NotApplicable("negative radicand 2e - n + 1"));
    }
    Ok(HongBound {
        bound: (radicand as f64).sqrt(),
        equality_predicted: g.is_star() || g.is_complete(),
        applicable: g.order() == 1 || g.isolated_count() == 0,
    })
}

/// Das's bound `2e(G)/(n − 1) + n − 2`.
pub fn das_bound(g: &Graph) -> Result<f64, SpectraError> {
    let n = g.order();
    if n < 2 {
        return Err(SpectraError::NotApplicable("Das bound needs n >= 2"));
    }
    Ok(2.0 * g.edge_count() as f64 / (n - 1) as f64 + n as f64 - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-8;

    fn rho(g: &Graph) -> f64 {
        adjacency_spectral_radius(g, DEFAULT_TOL).unwrap().value
    }

    fn q(g: &Graph) -> f64 {
        signless_laplacian_spectral_radius(g, DEFAULT_TOL).unwrap().value
    }

    #[test]
    fn adjacency_examples() {
        assert!((rho(&Graph::complete(5)) - 4.0).abs() < EPS);
        assert!((rho(&Graph::star(5)) - 2.0).abs() < EPS);
        assert!((rho(&Graph::cycle(6)) - 2.0).abs() < EPS);
    }

    #[test]
    fn signless_examples() {
        assert!((q(&Graph::complete(4)) - 6.0).abs() < EPS);
        assert!((q(&Graph::cycle(5)) - 4.0).abs() < EPS);
        assert!((q(&Graph::star(4)) - 4.0).abs() < EPS);
    }

    #[test]
    fn star_q_matches_dense_solve() {
        // Q(K_{1,3}) written out by hand, solved independently
        let m = vec![
            vec![3.0, 1.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0, 1.0],
        ];
        let eig = symmetric_eigen(m);
        let top = eig.values.iter().cloned().fold(f64::MIN, f64::max);
        assert!((top - 4.0).abs() < 1e-12);
    }

    #[test]
    fn bipartite_path_converges() {
        // P_n has spectrum symmetric about 0; the shift must still converge
        for n in 2..40 {
            let est = adjacency_spectral_radius(&Graph::path(n), DEFAULT_TOL).unwrap();
            let expected = 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((est.value - expected).abs() < EPS, "n = {n}");
        }
    }

    #[test]
    fn disconnected_takes_max() {
        let g = Graph::complete(4).disjoint_union(&Graph::star(6));
        let est = adjacency_spectral_radius(&g, DEFAULT_TOL).unwrap();
        assert!((est.value - 3.0).abs() < EPS);
        assert!(est.vector[4..].iter().all(|&x| x == 0.0));
        let g = Graph::empty(3);
        assert_eq!(rho(&g), 0.0);
        assert_eq!(q(&g), 0.0);
    }

    #[test]
    fn methods_agree() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 4)]).unwrap();
        for kind in [MatrixKind::Adjacency, MatrixKind::SignlessLaplacian] {
            let p = spectral_radius(&g, kind, DEFAULT_TOL, Some(Method::PowerShifted)).unwrap();
            let j = spectral_radius(&g, kind, DEFAULT_TOL, Some(Method::JacobiFull)).unwrap();
            assert_eq!(j.method, Method::JacobiFull);
            assert!((p.value - j.value).abs() < 1e-7);
        }
    }

    #[test]
    fn perron_vector_positive() {
        let g = Graph::path(9);
        let est = adjacency_spectral_radius(&g, DEFAULT_TOL).unwrap();
        assert!(est.vector.iter().all(|&x| x > 0.0));
        assert!(est.residual <= DEFAULT_TOL);
    }

    #[test]
    fn errors() {
        assert_eq!(
            adjacency_spectral_radius(&Graph::empty(0), DEFAULT_TOL),
            Err(SpectraError::EmptyGraph)
        );
        assert_eq!(
            adjacency_spectral_radius(&Graph::complete(3), 0.0),
            Err(SpectraError::BadTolerance(0.0))
        );
        assert!(das_bound(&Graph::empty(1)).is_err());
        assert!(hong_bound(&Graph::empty(3)).is_err());
    }

    #[test]
    fn hong_examples() {
        let h = hong_bound(&Graph::star(5)).unwrap();
        assert!((h.bound - 2.0).abs() < EPS && h.equality_predicted);
        let h = hong_bound(&Graph::cycle(4)).unwrap();
        assert!((h.bound - 5f64.sqrt()).abs() < EPS && !h.equality_predicted);
        assert!((rho(&Graph::cycle(4)) - 2.0).abs() < EPS);
        let h = hong_bound(&Graph::complete(6)).unwrap();
        assert!((h.bound - 5.0).abs() < EPS && h.equality_predicted);
        // K_3 ∪ K_1 exceeds the bound, flagged as not applicable
        let g = Graph::complete(3).disjoint_union(&Graph::empty(1));
        let h = hong_bound(&g).unwrap();
        assert!(!h.applicable && rho(&g) > h.bound);
    }

    #[test]
    fn das_examples() {
        assert!((das_bound(&Graph::complete(4)).unwrap() - 6.0).abs() < EPS);
        assert!((q(&Graph::complete(4)) - 6.0).abs() < EPS);
        assert!((das_bound(&Graph::cycle(5)).unwrap() - 5.5).abs() < EPS);
        assert!((das_bound(&Graph::complete(2)).unwrap() - 2.0).abs() < EPS);
        assert!((q(&Graph::complete(2)) - 2.0).abs() < EPS);
    }
}
