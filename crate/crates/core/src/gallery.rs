//! Constructors for the standard families of matrix-cube problems.

use rand::Rng;

use crate::boundary::is_positive_definite;
use crate::eigen::DEFAULT_EIGEN_TOL;
use crate::error::{Error, Result};
use crate::lmi::CubeProblem;
use crate::matrix::{Matrix, SymMatrix};
use crate::pencil::MatrixPencil;
use crate::scalar::{Rational, Scalar};

/// Foci, positive weights, and optional PD weight matrices for ellipse-like
/// families.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipseSpec<T> {
    pub foci: Vec<Vec<T>>,
    pub weights: Vec<T>,
    pub a_list: Option<Vec<SymMatrix<T>>>,
}

impl<T: Scalar> EllipseSpec<T> {
    /// Unit weights, no weight matrices.
    pub fn unit(foci: Vec<Vec<T>>) -> Self {
        let weights = vec![T::one(); foci.len()];
        Self {
            foci,
            weights,
            a_list: None,
        }
    }

    pub fn from_i64(foci: &[&[i64]]) -> Self {
        Self::unit(
            foci.iter()
                .map(|f| f.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
    }

    fn check(&self) -> Result<usize> {
        if self.weights.len() != self.foci.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} foci",
                self.weights.len(),
                self.foci.len()
            )));
        }
        if let Some((k, _)) = self.weights.iter().enumerate().find(|(_, w)| **w <= T::zero()) {
            return Err(Error::InvalidArgument(format!("weight {k} is not positive")));
        }
        let n = self.foci.first().map_or(0, Vec::len);
        if let Some((k, f)) = self.foci.iter().enumerate().find(|(_, f)| f.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "focus {k} has {} coordinates, expected {n}",
                f.len()
            )));
        }
        Ok(n)
    }
}

/// Pencil `[[x₁-u, x₂-v], [x₂-v, u-x₁]]` with eigenvalues `±‖x - (u,v)‖`.
pub fn ellipse_pencil<T: Scalar>(focus: &[T]) -> MatrixPencil<T> {
    let (u, v) = (focus[0].clone(), focus[1].clone());
    let z = T::zero;
    let o = T::one;
    let s = |rows: Vec<Vec<T>>| SymMatrix::from_rows(rows).expect("symmetric by construction");
    MatrixPencil::new(vec![
        s(vec![vec![-u.clone(), -v.clone()], vec![-v, u]]),
        s(vec![vec![o(), z()], vec![z(), -o()]]),
        s(vec![vec![z(), o()], vec![o(), z()]]),
    ])
    .expect("uniform sizes")
}

/// Arrow pencil of size `n+1`: zero core, first row and column `(0, x - u)`.
pub fn arrow_pencil<T: Scalar>(focus: &[T]) -> MatrixPencil<T> {
    let n = focus.len();
    let mut b0 = Matrix::zeros(n + 1, n + 1);
    for (i, ui) in focus.iter().enumerate() {
        b0[(0, i + 1)] = -ui.clone();
        b0[(i + 1, 0)] = -ui.clone();
    }
    let mut coeffs = vec![SymMatrix::new(b0).expect("symmetric")];
    for i in 0..n {
        let mut bi = Matrix::zeros(n + 1, n + 1);
        bi[(0, i + 1)] = T::one();
        bi[(i + 1, 0)] = T::one();
        coeffs.push(SymMatrix::new(bi).expect("symmetric"));
    }
    MatrixPencil::new(coeffs).expect("uniform sizes")
}

/// Planar weighted m-ellipse: `Σ a_k ‖x - u_k‖ ≤ d`.
pub fn m_ellipse_problem<T: Scalar>(spec: &EllipseSpec<T>) -> Result<CubeProblem<T>> {
    let n = spec.check()?;
    if !spec.foci.is_empty() && n != 2 {
        return Err(Error::InvalidArgument(format!(
            "m-ellipse foci must be planar, got dimension {n}"
        )));
    }
    let mut a = vec![SymMatrix::scalar(T::one())];
    a.extend(spec.weights.iter().cloned().map(SymMatrix::scalar));
    let b = spec.foci.iter().map(|f| ellipse_pencil(f)).collect();
    CubeProblem::new(2, a, b)
}

/// The 3-ellipse with foci `(0,0)`, `(1,0)`, `(0,1)`.
pub fn three_ellipse() -> CubeProblem<Rational> {
    m_ellipse_problem(&EllipseSpec::from_i64(&[&[0, 0], &[1, 0], &[0, 1]])).expect("valid spec")
}

/// Matrix m-ellipsoid `Σ A_k ‖x - u_k‖ ⪯ d·I_N` via arrow pencils and `A₀ = I_N`.
pub fn matrix_m_ellipsoid_problem<T: Scalar>(spec: &EllipseSpec<T>) -> Result<CubeProblem<T>> {
    let n = spec.check()?;
    let a_list = spec
        .a_list
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("matrix m-ellipsoid needs weight matrices".into()))?;
    if a_list.len() != spec.foci.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} weight matrices for {} foci",
            a_list.len(),
            spec.foci.len()
        )));
    }
    let big_n = a_list.first().map_or(1, SymMatrix::dim);
    for (k, ak) in a_list.iter().enumerate() {
        if !is_positive_definite(ak) {
            return Err(Error::NotPositiveDefinite(format!("A{}", k + 1)));
        }
        if ak.dim() != big_n {
            return Err(Error::DimensionMismatch(format!(
                "A{} is {}x{}, expected {big_n}x{big_n}",
                k + 1,
                ak.dim(),
                ak.dim()
            )));
        }
    }
    let mut a = vec![SymMatrix::identity(big_n)];
    a.extend(a_list.iter().cloned());
    let b = spec.foci.iter().map(|f| arrow_pencil(f)).collect();
    CubeProblem::new(n, a, b)
}

/// The two-factor example with `n = m = N₀ = N₁ = N₂ = 2`.
pub fn example_322() -> CubeProblem<Rational> {
    let s = |rows: &[&[i64]]| SymMatrix::<Rational>::from_i64_rows(rows).expect("symmetric");
    let a = vec![s(&[&[2, 1], &[1, 2]]), s(&[&[1, 1], &[1, 0]]), s(&[&[0, 1], &[1, 1]])];
    // B1(x) = [[3 - x1 + 2x2, 2x1 - x2 - 2], [2x1 - x2 - 2, -1 + 2x1]]
    let b1 = MatrixPencil::new(vec![
        s(&[&[3, -2], &[-2, -1]]),
        s(&[&[-1, 2], &[2, 2]]),
        s(&[&[2, -1], &[-1, 0]]),
    ])
    .expect("uniform sizes");
    // B2(x) = [[2 + x1, 1 + 3x1 - x2], [1 + 3x1 - x2, 3 - 2x1 + x2]]
    let b2 = MatrixPencil::new(vec![
        s(&[&[2, 1], &[1, 3]]),
        s(&[&[1, 3], &[3, -2]]),
        s(&[&[0, -1], &[-1, 1]]),
    ])
    .expect("uniform sizes");
    CubeProblem::new(2, a, vec![b1, b2]).expect("valid problem")
}

/// Affine form `coeffs·x + constant`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineForm<T> {
    pub coeffs: Vec<T>,
    pub constant: T,
}

/// `B_k(x) = diag(forms[k][0](x), …)`.
pub fn diagonal_case_problem<T: Scalar>(
    nvars: usize,
    a: Vec<SymMatrix<T>>,
    forms: &[Vec<AffineForm<T>>],
) -> Result<CubeProblem<T>> {
    let mut b = Vec::with_capacity(forms.len());
    for (k, fk) in forms.iter().enumerate() {
        if fk.is_empty() {
            return Err(Error::Empty("each diagonal factor needs at least one form"));
        }
        if let Some(f) = fk.iter().find(|f| f.coeffs.len() != nvars) {
            return Err(Error::DimensionMismatch(format!(
                "factor {}: form has {} coefficients, expected {nvars}",
                k + 1,
                f.coeffs.len()
            )));
        }
        let mut coeffs = vec![SymMatrix::diag(
            &fk.iter().map(|f| f.constant.clone()).collect::<Vec<_>>(),
        )];
        for i in 0..nvars {
            coeffs.push(SymMatrix::diag(
                &fk.iter().map(|f| f.coeffs[i].clone()).collect::<Vec<_>>(),
            ));
        }
        b.push(MatrixPencil::new(coeffs)?);
    }
    CubeProblem::new(nvars, a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// `λ_max(E_k) ≥ λ_max(B_k)`
    MaxOrder,
    /// `λ_min(E_k) ≥ λ_min(B_k)`
    MinOrder,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisViolation {
    pub probe: usize,
    /// 1-based factor index.
    pub factor: usize,
    pub hypothesis: Hypothesis,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TildeProblem<T> {
    pub problem: CubeProblem<T>,
    /// Empty when every probe satisfied both ordering hypotheses.
    pub violations: Vec<HypothesisViolation>,
}

/// Cube bounds `λ_min(B_k) ≤ t_k ≤ λ_max(E_k)`, realized with the merged
/// pencils `D_k = diag(B_k, E_k)`.
///
/// The realization is exact only where `λ_min(E_k) ≥ λ_min(B_k)` and
/// `λ_max(E_k) ≥ λ_max(B_k)`; these are sampled at `probes` and any failure
/// is reported, but the problem is built regardless.
pub fn tilde_problem<T: Scalar>(
    nvars: usize,
    a: Vec<SymMatrix<T>>,
    b: &[MatrixPencil<T>],
    e: &[MatrixPencil<T>],
    probes: &[Vec<f64>],
) -> Result<TildeProblem<T>> {
    if b.len() != e.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} B-pencils but {} E-pencils",
            b.len(),
            e.len()
        )));
    }
    let merged = b
        .iter()
        .zip(e)
        .map(|(bk, ek)| bk.block_diag_merge(ek))
        .collect::<Result<Vec<_>>>()?;
    let problem = CubeProblem::new(nvars, a, merged)?;

    let mut violations = Vec::new();
    for (pi, x) in probes.iter().enumerate() {
        for (k, (bk, ek)) in b.iter().zip(e).enumerate() {
            let (bmin, bmax) = bk.to_f64().eigen_range(x, DEFAULT_EIGEN_TOL)?;
            let (emin, emax) = ek.to_f64().eigen_range(x, DEFAULT_EIGEN_TOL)?;
            let slack = 1e-12 * (1.0 + bmin.abs().max(bmax.abs()));
            if emax < bmax - slack {
                violations.push(HypothesisViolation {
                    probe: pi,
                    factor: k + 1,
                    hypothesis: Hypothesis::MaxOrder,
                });
            }
            if emin < bmin - slack {
                violations.push(HypothesisViolation {
                    probe: pi,
                    factor: k + 1,
                    hypothesis: Hypothesis::MinOrder,
                });
            }
        }
    }
    Ok(TildeProblem { problem, violations })
}

/// Shape of a random integer instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomShape {
    pub nvars: usize,
    pub n0: usize,
    /// `N₁..N_m`.
    pub dims: Vec<usize>,
    /// Entries are drawn uniformly from `-range..=range`.
    pub range: i64,
}

impl RandomShape {
    pub fn lmi_dim(&self) -> usize {
        self.n0 * self.dims.iter().product::<usize>()
    }

    /// Random shape with `1 ≤ m ≤ max_m`, `1 ≤ n ≤ max_n` and all sizes in `1..=max_size`.
    pub fn sample(rng: &mut impl Rng, max_m: usize, max_n: usize, max_size: usize, range: i64) -> Self {
        let m = rng.random_range(1..=max_m);
        Self {
            nvars: rng.random_range(1..=max_n),
            n0: rng.random_range(1..=max_size),
            dims: (0..m).map(|_| rng.random_range(1..=max_size)).collect(),
            range,
        }
    }
}

fn random_sym(rng: &mut impl Rng, n: usize, range: i64) -> SymMatrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = Rational::from_i64(rng.random_range(-range..=range));
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    SymMatrix::new(m).expect("symmetric by construction")
}

/// Random exact instance with integer entries.
pub fn random_integer_problem(rng: &mut impl Rng, shape: &RandomShape) -> CubeProblem<Rational> {
    let a = (0..=shape.dims.len())
        .map(|_| random_sym(rng, shape.n0, shape.range))
        .collect();
    let b = shape
        .dims
        .iter()
        .map(|&nk| {
            MatrixPencil::new((0..=shape.nvars).map(|_| random_sym(rng, nk, shape.range)).collect())
                .expect("uniform sizes")
        })
        .collect();
    CubeProblem::new(shape.nvars, a, b).expect("valid random problem")
}

/// Random exact instance whose `A₀` is diagonally dominant, hence `A₀ ≻ 0`.
pub fn random_integer_problem_pd(rng: &mut impl Rng, shape: &RandomShape) -> CubeProblem<Rational> {
    let p = random_integer_problem(rng, shape);
    let n0 = shape.n0;
    let bump = Rational::from_i64(shape.range * n0 as i64 + 1);
    let mut a0 = p.a()[0].as_matrix().clone();
    for i in 0..n0 {
        a0[(i, i)] = a0[(i, i)].abs_val() + bump.clone();
    }
    let mut a = p.a().to_vec();
    a[0] = SymMatrix::new(a0).expect("symmetric");
    CubeProblem::new(p.nvars(), a, p.b().to_vec()).expect("valid problem")
}
