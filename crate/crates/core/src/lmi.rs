//! The matrix-cube datum and its LMI representation.
//!
//! Given `A₀..A_m` (size `N₀`) and pencils `B₁(x)..B_m(x)` (sizes `N_k`), the
//! pencil in the formal unknowns `a = (a₀..a_m)`
//!
//! ```text
//! L_a(x,d) = (d a₀) ⊕ (a₁ B₁(x)) ⊕ ... ⊕ (a_m B_m(x))
//! ```
//!
//! is pushed through the operator `𝒜(Σ a_k P_k) = Σ P_k ⊗ A_k`. The result
//! `ℒ(x,d)` has size `N₀ N₁ ⋯ N_m`; the tensor factors appear in the order
//! d-slot, `B₁`, …, `B_m`, and the `A` factor is always the innermost one.

use crate::error::{Error, Result};
use crate::matrix::{tensor_sum_many, Matrix, SymMatrix};
use crate::pencil::MatrixPencil;
use crate::scalar::{Scalar, ScalarMode};

#[derive(Clone, Debug, PartialEq)]
pub struct CubeProblem<T> {
    nvars: usize,
    a: Vec<SymMatrix<T>>,
    b: Vec<MatrixPencil<T>>,
}

impl<T: Scalar> CubeProblem<T> {
    /// `a` holds `A₀..A_m`, `b` holds `B₁..B_m`.
    pub fn new(nvars: usize, a: Vec<SymMatrix<T>>, b: Vec<MatrixPencil<T>>) -> Result<Self> {
        let n0 = a.first().ok_or(Error::Empty("A₀ is required"))?.dim();
        if a.len() != b.len() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} A-matrices for {} pencils; need one more A than pencils",
                a.len(),
                b.len()
            )));
        }
        if let Some((k, ak)) = a.iter().enumerate().find(|(_, ak)| ak.dim() != n0) {
            return Err(Error::DimensionMismatch(format!(
                "A{k} is {}x{}, expected {n0}x{n0}",
                ak.dim(),
                ak.dim()
            )));
        }
        if let Some((k, bk)) = b.iter().enumerate().find(|(_, bk)| bk.nvars() != nvars) {
            return Err(Error::DimensionMismatch(format!(
                "B{} has {} variables, expected {nvars}",
                k + 1,
                bk.nvars()
            )));
        }
        Ok(Self { nvars, a, b })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of cube factors.
    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn n0(&self) -> usize {
        self.a[0].dim()
    }

    pub fn a(&self) -> &[SymMatrix<T>] {
        &self.a
    }

    pub fn b(&self) -> &[MatrixPencil<T>] {
        &self.b
    }

    /// `N₁..N_m`.
    pub fn factor_dims(&self) -> Vec<usize> {
        self.b.iter().map(MatrixPencil::dim).collect()
    }

    /// `N₀ N₁ ⋯ N_m`.
    pub fn lmi_dim(&self) -> usize {
        self.n0() * self.factor_dims().iter().product::<usize>()
    }

    pub fn mode(&self) -> ScalarMode {
        T::MODE
    }

    pub fn to_f64(&self) -> CubeProblem<f64> {
        CubeProblem {
            nvars: self.nvars,
            a: self.a.iter().map(SymMatrix::to_f64).collect(),
            b: self.b.iter().map(MatrixPencil::to_f64).collect(),
        }
    }

    /// `d·A₀ + Σ t_k A_k`.
    pub fn cube_matrix(&self, d: &T, t: &[T]) -> Result<SymMatrix<T>> {
        if t.len() != self.m() {
            return Err(Error::DimensionMismatch(format!(
                "{} cube parameters for m = {}",
                t.len(),
                self.m()
            )));
        }
        let mut out = self.a[0].scale(d);
        for (tk, ak) in t.iter().zip(&self.a[1..]) {
            out.add_scaled(tk, ak)?;
        }
        Ok(out)
    }
}

/// `ℒ(x,d) = c_const + d·c_d + Σ xᵢ·c_x[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LmiPencil<T> {
    n0: usize,
    factor_dims: Vec<usize>,
    c_const: SymMatrix<T>,
    c_d: SymMatrix<T>,
    c_x: Vec<SymMatrix<T>>,
}

impl<T: Scalar> LmiPencil<T> {
    pub fn nvars(&self) -> usize {
        self.c_x.len()
    }

    pub fn dim(&self) -> usize {
        self.c_const.dim()
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn c_const(&self) -> &SymMatrix<T> {
        &self.c_const
    }

    pub fn c_d(&self) -> &SymMatrix<T> {
        &self.c_d
    }

    pub fn c_x(&self) -> &[SymMatrix<T>] {
        &self.c_x
    }

    pub fn to_f64(&self) -> LmiPencil<f64> {
        LmiPencil {
            n0: self.n0,
            factor_dims: self.factor_dims.clone(),
            c_const: self.c_const.to_f64(),
            c_d: self.c_d.to_f64(),
            c_x: self.c_x.iter().map(SymMatrix::to_f64).collect(),
        }
    }

    pub fn eval(&self, x: &[T], d: &T) -> Result<SymMatrix<T>> {
        if x.len() != self.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "LMI has {} x-variables, got {}",
                self.nvars(),
                x.len()
            )));
        }
        let mut out = self.c_const.clone();
        out.add_scaled(d, &self.c_d)?;
        for (xi, ci) in x.iter().zip(&self.c_x) {
            out.add_scaled(xi, ci)?;
        }
        Ok(out)
    }

    /// Evaluation at a packed point `(x₁..x_n, d)`.
    pub fn eval_point(&self, point: &[T]) -> Result<SymMatrix<T>> {
        let (x, d) = split_point(point, self.nvars())?;
        self.eval(x, d)
    }

    /// Linear part along a packed direction `(v_x, v_d)`: `Σ vᵢ c_x[i] + v_d c_d`.
    pub fn linear_part(&self, direction: &[T]) -> Result<SymMatrix<T>> {
        let (vx, vd) = split_point(direction, self.nvars())?;
        let mut out = self.c_d.scale(vd);
        for (vi, ci) in vx.iter().zip(&self.c_x) {
            out.add_scaled(vi, ci)?;
        }
        Ok(out)
    }

    /// Entry `(i, j)` as an affine form `(constant, coeff_d, coeff_x)`.
    pub fn entry(&self, i: usize, j: usize) -> (T, T, Vec<T>) {
        (
            self.c_const[(i, j)].clone(),
            self.c_d[(i, j)].clone(),
            self.c_x.iter().map(|c| c[(i, j)].clone()).collect(),
        )
    }

    /// Entry `(i, j)` rendered as text, e.g. `d+3x1-1`.
    pub fn render_entry(&self, i: usize, j: usize) -> String {
        let (c, cd, cx) = self.entry(i, j);
        render_affine(&c, &cd, &cx)
    }
}

/// Splits `(x₁..x_n, d)`.
pub fn split_point<T>(point: &[T], nvars: usize) -> Result<(&[T], &T)> {
    if point.len() != nvars + 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a point (x, d) with {} coordinates, got {}",
            nvars + 1,
            point.len()
        )));
    }
    Ok((&point[..nvars], &point[nvars]))
}

/// Formats `cd·d + Σ cx_i·x_i + c` with integer-looking coefficients.
pub fn render_affine<T: Scalar>(c: &T, cd: &T, cx: &[T]) -> String {
    let mut out = String::new();
    let mut term = |coef: &T, var: Option<String>| {
        if coef.is_zero() {
            return;
        }
        let neg = *coef < T::zero();
        let mag = coef.abs_val();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mag_text = mag.to_string();
        match var {
            Some(v) if mag.is_one() => out.push_str(&v),
            Some(v) if mag_text.contains('/') || mag_text.contains('.') => out.push_str(&format!("({mag_text}){v}")),
            Some(v) => out.push_str(&format!("{mag_text}{v}")),
            None => out.push_str(&mag_text),
        }
    };
    term(cd, Some("d".into()));
    for (i, ci) in cx.iter().enumerate() {
        term(ci, Some(format!("x{}", i + 1)));
    }
    term(c, None);
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `𝒜(P) = Σ_k P_k ⊗ A_k`.
pub fn apply_a<T: Scalar>(p: &[Matrix<T>], a: &[SymMatrix<T>]) -> Result<Matrix<T>> {
    if p.len() != a.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficient matrices for {} A-matrices",
            p.len(),
            a.len()
        )));
    }
    let size = p.first().ok_or(Error::Empty("apply_a"))?.rows();
    let n0 = a[0].dim();
    for (k, (pk, ak)) in p.iter().zip(a).enumerate() {
        if !pk.is_square() || pk.rows() != size {
            return Err(Error::DimensionMismatch(format!(
                "P{k} is {}x{}, expected {size}x{size}",
                pk.rows(),
                pk.cols()
            )));
        }
        if ak.dim() != n0 {
            return Err(Error::DimensionMismatch(format!(
                "A{k} is {}x{}, expected {n0}x{n0}",
                ak.dim(),
                ak.dim()
            )));
        }
    }
    let mut out = Matrix::zeros(size * n0, size * n0);
    for (pk, ak) in p.iter().zip(a) {
        out = out.add(&pk.kron(ak.as_matrix()))?;
    }
    Ok(out)
}

/// Builds `ℒ(x,d) = 𝒜(L_a(x,d))` one coefficient at a time.
///
/// For each monomial (`1`, `d`, or `xᵢ`) the `a_k`-coefficient of `L_a` is a
/// tensor sum whose only nonzero slot is the matching coefficient of the
/// `k`-th summand; all other slots are zero matrices of the right size.
pub fn build_lmi<T: Scalar>(prob: &CubeProblem<T>) -> Result<LmiPencil<T>> {
    let m = prob.m();
    let dims = prob.factor_dims();

    // slot 0 is the 1x1 d-slot, slot k is B_k
    let slot_zero = |k: usize| -> SymMatrix<T> {
        if k == 0 {
            SymMatrix::zeros(1)
        } else {
            SymMatrix::zeros(dims[k - 1])
        }
    };
    let assemble = |coef_of_slot: &dyn Fn(usize) -> Option<SymMatrix<T>>| -> Result<SymMatrix<T>> {
        let mut p = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut slots: Vec<SymMatrix<T>> = (0..=m).map(slot_zero).collect();
            if let Some(c) = coef_of_slot(k) {
                slots[k] = c;
            }
            p.push(tensor_sum_many(&slots)?.into_matrix());
        }
        SymMatrix::new(apply_a(&p, prob.a())?)
    };

    let c_const = assemble(&|k| (k > 0).then(|| prob.b()[k - 1].constant_term().clone()))?;
    let c_d = assemble(&|k| (k == 0).then(|| SymMatrix::identity(1)))?;
    let c_x = (0..prob.nvars())
        .map(|i| assemble(&|k| (k > 0).then(|| prob.b()[k - 1].linear_term(i).clone())))
        .collect::<Result<Vec<_>>>()?;

    Ok(LmiPencil {
        n0: prob.n0(),
        factor_dims: dims,
        c_const,
        c_d,
        c_x,
    })
}
