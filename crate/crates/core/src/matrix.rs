//! Dense matrices, Kronecker products and tensor (Kronecker) sums.

use std::ops::{Deref, Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {c}",
                row.len()
            )));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    /// `self += s * other`, skipping the work when `s` is zero.
    pub fn add_scaled(&mut self, s: &T, other: &Self) -> Result<()> {
        self.check_same_shape(other, "add_scaled")?;
        if s.is_zero() {
            return Ok(());
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = a.clone() + s.clone() * b.clone();
            }
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i][j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let f = &self[(i, j)];
                if f.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let g = &other[(k, l)];
                        if !g.is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] = f.clone() * g.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// Tensor sum `self ⊗ I_s + I_r ⊗ other` of two square matrices.
    pub fn tensor_sum(&self, other: &Self) -> Result<Self> {
        if !self.is_square() || !other.is_square() {
            return Err(Error::DimensionMismatch("tensor sum needs square operands".into()));
        }
        let (r, s) = (self.rows, other.rows);
        let left = self.kron(&Self::identity(s));
        let right = Self::identity(r).kron(other);
        left.add(&right)
    }

    /// Block-diagonal stacking `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    /// First entry pair violating symmetry, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        let scale = self.max_abs();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if !T::symmetric_eq(&self[(i, j)], &self[(j, i)], scale) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Matrix<f64> {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// `vᵀ self v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            let vi = v[i];
            if vi == 0.0 {
                continue;
            }
            acc += vi * self.row(i).iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        }
        acc
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Square matrix validated to be symmetric (exactly in exact mode, to a
/// relative `1e-12` in float mode).
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T>(Matrix<T>);

impl<T: Scalar> SymMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.rows() == 0 {
            return Err(Error::Empty("symmetric matrix needs dim >= 1"));
        }
        if let Some((i, j)) = m.asymmetry() {
            return Err(Error::NotSymmetric {
                row: i,
                col: j,
                upper: m[(i, j)].to_string(),
                lower: m[(j, i)].to_string(),
            });
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    pub fn diag(values: &[T]) -> Self {
        Self(Matrix::diag(values))
    }

    pub fn scalar(v: T) -> Self {
        Self(Matrix::diag(&[v]))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        SymMatrix(self.0.to_f64())
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kron(&other.0))
    }

    pub fn tensor_sum(&self, other: &Self) -> Self {
        Self(self.0.tensor_sum(&other.0).expect("symmetric operands are square"))
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        Self(self.0.block_diag(&other.0))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self(self.0.scale(s))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.add(&other.0)?))
    }

    pub fn add_scaled(&mut self, s: &T, other: &Self) -> Result<()> {
        self.0.add_scaled(s, &other.0)
    }

    /// Congruence `Uᵀ self U`.
    pub fn congruence(&self, u: &Matrix<T>) -> Result<Self> {
        let m = u.transpose().matmul(&self.0)?.matmul(u)?;
        Ok(Self(m))
    }
}

impl<T> Deref for SymMatrix<T> {
    type Target = Matrix<T>;

    fn deref(&self) -> &Matrix<T> {
        &self.0
    }
}

/// Left-associated fold of [`SymMatrix::tensor_sum`] over `ms`.
pub fn tensor_sum_many<T: Scalar>(ms: &[SymMatrix<T>]) -> Result<SymMatrix<T>> {
    let (first, rest) = ms.split_first().ok_or(Error::Empty("tensor_sum_many"))?;
    Ok(rest.iter().fold(first.clone(), |acc, m| acc.tensor_sum(m)))
}

/// Left-associated Kronecker product of a nonempty list.
pub fn kron_many<T: Scalar>(ms: &[Matrix<T>]) -> Result<Matrix<T>> {
    let (first, rest) = ms.split_first().ok_or(Error::Empty("kron_many"))?;
    Ok(rest.iter().fold(first.clone(), |acc, m| acc.kron(m)))
}
