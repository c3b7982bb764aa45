//! Cyclic Jacobi eigensolver for dense symmetric matrices.

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues, unsorted.
    pub values: Vec<f64>,
    /// Column `j` of `vectors` is the unit eigenvector for `values[j]`.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

/// Diagonalises the symmetric matrix `a` by cyclic sweeps of plane rotations
/// until the off-diagonal mass is negligible relative to the Frobenius norm.
pub fn symmetric_eigen(mut a: Vec<Vec<f64>>) -> SymmetricEigen {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let frob: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off <= f64::EPSILON * f64::EPSILON * frob.max(f64::MIN_POSITIVE) {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[r][p];
                        let arq = a[r][q];
                        let np = arp - s * (arq + tau * arp);
                        let nq = arq + s * (arp - tau * arq);
                        a[r][p] = np;
                        a[p][r] = np;
                        a[r][q] = nq;
                        a[q][r] = nq;
                    }
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = vp - s * (vq + tau * vp);
                    row[q] = vq + s * (vp - tau * vq);
                }
            }
        }
    }
    SymmetricEigen {
        values: (0..n).map(|i| a[i][i]).collect(),
        vectors: v,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let e = symmetric_eigen(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        let mut vals = e.values.clone();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_eigenpairs() {
        let a = vec![
            vec![4.0, 1.0, -2.0, 2.0],
            vec![1.0, 2.0, 0.0, 1.0],
            vec![-2.0, 0.0, 3.0, -2.0],
            vec![2.0, 1.0, -2.0, -1.0],
        ];
        let e = symmetric_eigen(a.clone());
        for j in 0..4 {
            for i in 0..4 {
                let av: f64 = (0..4).map(|k| a[i][k] * e.vectors[k][j]).sum();
                assert!((av - e.values[j] * e.vectors[i][j]).abs() < 1e-12);
            }
        }
        let trace: f64 = e.values.iter().sum();
        assert!((trace - 8.0).abs() < 1e-12);
    }

    #[test]
    fn already_diagonal() {
        let e = symmetric_eigen(vec![vec![5.0, 0.0], vec![0.0, -1.0]]);
        assert_eq!(e.sweeps, 0);
        assert_eq!(e.values, vec![5.0, -1.0]);
    }
}
