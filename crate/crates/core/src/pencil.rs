//! Affine symmetric-matrix-valued maps `x ↦ B₀ + Σ xᵢ Bᵢ`.

use crate::eigen::{sym_eigen, sym_eigenvalues, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPencil<T> {
    /// Constant term first, then one coefficient per variable.
    coeffs: Vec<SymMatrix<T>>,
}

impl<T: Scalar> MatrixPencil<T> {
    pub fn new(coeffs: Vec<SymMatrix<T>>) -> Result<Self> {
        let dim = coeffs
            .first()
            .ok_or(Error::Empty("pencil needs a constant term"))?
            .dim();
        if let Some((i, c)) = coeffs.iter().enumerate().find(|(_, c)| c.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "pencil coefficient {i} is {}x{}, expected {dim}x{dim}",
                c.dim(),
                c.dim()
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(b0: SymMatrix<T>) -> Self {
        Self { coeffs: vec![b0] }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn coeffs(&self) -> &[SymMatrix<T>] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &SymMatrix<T> {
        &self.coeffs[0]
    }

    /// Coefficient of `x_i` (zero-based).
    pub fn linear_term(&self, i: usize) -> &SymMatrix<T> {
        &self.coeffs[i + 1]
    }

    pub fn to_f64(&self) -> MatrixPencil<f64> {
        MatrixPencil {
            coeffs: self.coeffs.iter().map(SymMatrix::to_f64).collect(),
        }
    }

    pub fn eval(&self, x: &[T]) -> Result<SymMatrix<T>> {
        if x.len() != self.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "pencil has {} variables, got a point with {}",
                self.nvars(),
                x.len()
            )));
        }
        let mut out = self.coeffs[0].clone();
        for (xi, bi) in x.iter().zip(&self.coeffs[1..]) {
            out.add_scaled(xi, bi)?;
        }
        Ok(out)
    }

    /// `x ↦ diag(self(x), other(x))`.
    pub fn block_diag_merge(&self, other: &Self) -> Result<Self> {
        if self.nvars() != other.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "cannot merge pencils in {} and {} variables",
                self.nvars(),
                other.nvars()
            )));
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.block_diag(b))
                .collect(),
        })
    }
}

impl MatrixPencil<f64> {
    /// `(λ_min, λ_max)` of the pencil at `x`.
    pub fn eigen_range(&self, x: &[f64], tol: f64) -> Result<(f64, f64)> {
        let vals = sym_eigenvalues(&self.eval(x)?, tol)?;
        Ok((vals[0], vals[vals.len() - 1]))
    }

    pub fn spectrum(&self, x: &[f64], tol: f64) -> Result<Vec<f64>> {
        sym_eigenvalues(&self.eval(x)?, tol)
    }

    pub fn eigen(&self, x: &[f64], tol: f64) -> Result<EigenDecomposition> {
        sym_eigen(&self.eval(x)?, tol)
    }
}
