//! Small dense linear algebra: Gaussian elimination and a Jacobi eigensolver.
//!
//! Everything here operates on row-major `Vec<f64>` matrices of side at most a
//! few dozen, which is all the rest of the crate ever needs.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar;

/// Solves `A x = rhs` in place by Gaussian elimination with partial pivoting.
///
/// Returns `None` when a pivot falls below `tol` relative to the matrix scale,
/// i.e. the system is (numerically) singular.
pub fn solve_dense(a: &[f64], rhs: &[f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(rhs.len(), n);
    if n == 0 {
        return Some(Vec::new());
    }
    let mut m = a.to_vec();
    let mut b = rhs.to_vec();
    let scale = m
        .iter()
        .fold(0.0_f64, |acc, &x| if scalar::abs(x) > acc { scalar::abs(x) } else { acc })
        .max(1.0);
    let cutoff = tol * scale;

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_val = scalar::abs(m[col * n + col]);
        for row in col + 1..n {
            let v = scalar::abs(m[row * n + col]);
            if v > pivot_val {
                pivot_val = v;
                pivot_row = row;
            }
        }
        if pivot_val <= cutoff {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                m.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let inv = 1.0 / m[col * n + col];
        for row in col + 1..n {
            let factor = m[row * n + col] * inv;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[row * n + k] -= factor * m[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= m[row * n + k] * x[k];
        }
        x[row] = acc / m[row * n + row];
    }
    Some(x)
}

/// Eigendecomposition of a symmetric matrix by the cyclic Jacobi method.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues sorted in decreasing
/// order; `eigenvectors` is row-major with the j-th eigenvector in column j.
pub fn symmetric_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n <= 1 {
        return (m, v);
    }

    let frob: f64 = a.iter().map(|&x| x * x).sum::<f64>();
    let tol = 1e-30 * frob.max(1e-300);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if scalar::abs(apq) == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + scalar::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + scalar::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / scalar::sqrt(1.0 + t * t);
                let s = t * c;

                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut eigs: Vec<(f64, usize)> = (0..n).map(|i| (m[i * n + i], i)).collect();
    eigs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let values: Vec<f64> = eigs.iter().map(|&(val, _)| val).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_col, &(_, old_col)) in eigs.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = v[row * n + old_col];
        }
    }
    (values, vectors)
}
