//! Dense symmetric eigendecomposition by cyclic Jacobi rotations.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymMatrix};

/// Default stopping threshold: off-diagonal Frobenius norm relative to the
/// largest entry of the input.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;

pub const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthogonal; column `j` is the eigenvector for `values[j]`, with its
    /// largest-magnitude entry positive.
    pub vectors: Matrix<f64>,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("dim >= 1")
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }

    pub fn diagonal(&self) -> Matrix<f64> {
        Matrix::diag(&self.values)
    }

    /// `V diag(values) Vᵀ`.
    pub fn reconstruct(&self) -> Matrix<f64> {
        let v = &self.vectors;
        let n = v.rows();
        Matrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.values[k] * v[(j, k)]).sum()
        })
    }
}

pub fn sym_eigen(m: &SymMatrix<f64>, tol: f64) -> Result<EigenDecomposition> {
    let (values, vectors) = jacobi(m, tol, true)?;
    let mut vectors = vectors.expect("vectors requested");
    let n = values.len();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let mut sorted = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = vectors.column(src);
        let lead = col
            .iter()
            .copied()
            .fold(0.0f64, |best, v| if v.abs() > best.abs() { v } else { best });
        if lead < 0.0 {
            col.iter_mut().for_each(|v| *v = -*v);
        }
        for (i, v) in col.into_iter().enumerate() {
            sorted[(i, dst)] = v;
        }
    }
    vectors = sorted;
    Ok(EigenDecomposition {
        values: sorted_values,
        vectors,
    })
}

/// Eigenvalues only, ascending.
pub fn sym_eigenvalues(m: &SymMatrix<f64>, tol: f64) -> Result<Vec<f64>> {
    let (mut values, _) = jacobi(m, tol, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn lambda_min(m: &SymMatrix<f64>) -> Result<f64> {
    Ok(sym_eigenvalues(m, DEFAULT_EIGEN_TOL)?[0])
}

fn off_norm(a: &Matrix<f64>) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += 2.0 * a[(i, j)] * a[(i, j)];
        }
    }
    s.sqrt()
}

fn jacobi(m: &SymMatrix<f64>, tol: f64, want_vectors: bool) -> Result<(Vec<f64>, Option<Matrix<f64>>)> {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = want_vectors.then(|| Matrix::<f64>::identity(n));
    let threshold = tol * m.max_abs();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_norm(&a);
        if off <= threshold || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if !converged {
        let residual = off_norm(&a);
        if residual > threshold {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                residual,
            });
        }
    }
    Ok(((0..n).map(|i| a[(i, i)]).collect(), v))
}
