//! The determinant `r(x,d) = det ℒ(x,d)` and its restrictions to lines.

use num_traits::Zero;

use crate::eigen::{sym_eigen, sym_eigenvalues, DEFAULT_EIGEN_TOL};
use crate::error::{Error, Result};
use crate::lmi::{split_point, CubeProblem, LmiPencil};
use crate::matrix::{Matrix, SymMatrix};
use crate::oracle::{lmi_membership, scaled_tol, BOUNDARY_BAND, DEFAULT_REL_TOL};
use crate::par::{map_range, Execution};
use crate::scalar::{Rational, Scalar};

pub fn det_at<T: Scalar>(lmi: &LmiPencil<T>, x: &[T], d: &T) -> Result<T> {
    Ok(T::det(lmi.eval(x, d)?.as_matrix()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    /// `det ℒ(x,d)`.
    pub lhs: f64,
    /// Product over eigenvalue tuples of `det(d A₀ + Σ λ_{j_k} A_k)`.
    pub rhs: f64,
    /// `|lhs - rhs| / max(1, |lhs|)`.
    pub rel_error: f64,
}

/// Compares `det ℒ(x,d)` with the product of the `N₁⋯N_m` block
/// determinants obtained by diagonalizing every `B_k(x)`.
pub fn det_factorization_check(
    prob: &CubeProblem<f64>,
    lmi: &LmiPencil<f64>,
    x: &[f64],
    d: f64,
    tol: f64,
) -> Result<Factorization> {
    let lhs = det_at(lmi, x, &d)?;
    let spectra = prob
        .b()
        .iter()
        .map(|b| b.spectrum(x, tol))
        .collect::<Result<Vec<_>>>()?;

    let mut rhs = 1.0;
    let mut idx = vec![0usize; spectra.len()];
    let mut t = vec![0.0; spectra.len()];
    loop {
        for (k, j) in idx.iter().enumerate() {
            t[k] = spectra[k][*j];
        }
        rhs *= f64::det(prob.cube_matrix(&d, &t)?.as_matrix());
        // odometer over index tuples
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < spectra[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    Ok(Factorization {
        lhs,
        rhs,
        rel_error: (lhs - rhs).abs() / lhs.abs().max(1.0),
    })
}

/// `α ↦ det ℒ(base + α·direction)` sampled at exact rational nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct LineRestriction {
    pub base: Vec<Rational>,
    pub direction: Vec<Rational>,
    /// `(α, det)` pairs at distinct nodes `0, 1, -1, 2, -2, …`.
    pub samples: Vec<(Rational, Rational)>,
}

impl LineRestriction {
    /// Exact interpolation of the samples, lowest degree first.
    pub fn coefficients(&self) -> Vec<Rational> {
        interpolate(&self.samples)
    }

    /// Index of the highest nonzero coefficient.
    pub fn degree(&self) -> Result<usize> {
        self.coefficients()
            .iter()
            .rposition(|c| !c.is_zero())
            .ok_or(Error::ZeroPolynomial)
    }
}

/// Interpolation nodes `0, 1, -1, 2, -2, …`.
pub fn nodes(count: usize) -> Vec<Rational> {
    (0..count as i64)
        .map(|i| {
            let k = (i + 1) / 2;
            Rational::from_i64(if i % 2 == 1 { k } else { -k })
        })
        .collect()
}

pub fn restrict_to_line(
    lmi: &LmiPencil<Rational>,
    base: &[Rational],
    direction: &[Rational],
    exec: Execution,
) -> Result<LineRestriction> {
    if direction.iter().all(Zero::is_zero) {
        return Err(Error::InvalidArgument("line direction must be nonzero".into()));
    }
    split_point(base, lmi.nvars())?;
    let at_base = lmi.eval_point(base)?;
    let slope = lmi.linear_part(direction)?;
    let alphas = nodes(lmi.dim() + 1);
    let values = map_range(exec, alphas.len(), |i| {
        let mut m = at_base.as_matrix().clone();
        m.add_scaled(&alphas[i], slope.as_matrix()).expect("same shape");
        Rational::det(&m)
    });
    Ok(LineRestriction {
        base: base.to_vec(),
        direction: direction.to_vec(),
        samples: alphas.into_iter().zip(values).collect(),
    })
}

/// Degree of `α ↦ det ℒ(base + α·direction)`, measured exactly.
pub fn degree_on_line(lmi: &LmiPencil<Rational>, base: &[Rational], direction: &[Rational]) -> Result<usize> {
    restrict_to_line(lmi, base, direction, Execution::default())?.degree()
}

/// Newton divided differences, expanded to monomial coefficients.
fn interpolate(samples: &[(Rational, Rational)]) -> Vec<Rational> {
    let n = samples.len();
    let xs: Vec<&Rational> = samples.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<Rational> = samples.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // Horner on the Newton form: p = dd[n-1]; p = p·(α - x_i) + dd[i]
    let mut poly = vec![Rational::zero(); n.max(1)];
    if n == 0 {
        return poly;
    }
    poly[0] = dd[n - 1].clone();
    for (len, i) in (1..).zip((0..n - 1).rev()) {
        // multiply by (α - x_i)
        for j in (0..=len).rev() {
            let shifted = if j > 0 { poly[j - 1].clone() } else { Rational::zero() };
            let here = if j < len { &poly[j] * xs[i] } else { Rational::zero() };
            poly[j] = shifted - here;
        }
        poly[0] += &dd[i];
    }
    poly
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealRootReport {
    /// Every root passed both the imaginary-part bound and the residual check.
    pub all_real: bool,
    /// Roots of `α ↦ det ℒ(w + α v)`, ascending, with multiplicity.
    pub roots: Vec<f64>,
    /// Largest admissible imaginary part over all roots.
    pub max_imag_bound: f64,
    /// Largest imaginary-part bound divided by `1 + |root|`; this is what `tol` judges.
    pub max_relative_imag: f64,
    /// Largest `min |eig ℒ(w + α v)|` over roots, relative to the matrix scale.
    pub max_residual: f64,
}

/// Residual threshold for accepting a computed root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-6;

/// Real-rootedness of `g(α) = det ℒ(w + α v)` for an interior `w`.
///
/// With `ℒ(w) = R Rᵀ` (Cholesky) and `V` the linear part along `v`,
/// `g(α) = det ℒ(w) · det(I + α S)` for `S = R⁻¹ V R⁻ᵀ`, so the roots are
/// `-1/μ` over the nonzero eigenvalues `μ` of `S`. The computed `S` is not
/// exactly symmetric; its skew part bounds how far the eigenvalues can leave
/// the real axis (Bauer–Fike), and that bound is what `tol` judges. Each root
/// is also checked to make `ℒ(w + α v)` singular.
pub fn rz_line_check(lmi: &LmiPencil<f64>, interior: &[f64], direction: &[f64], tol: f64) -> Result<RealRootReport> {
    if direction.iter().all(|v| *v == 0.0) {
        return Err(Error::InvalidArgument("line direction must be nonzero".into()));
    }
    let at_base = lmi.eval_point(interior)?;
    let lmin = sym_eigenvalues(&at_base, DEFAULT_EIGEN_TOL)?[0];
    let chol = match cholesky(&at_base) {
        Some(r) if lmin > 0.0 => r,
        _ => return Err(Error::NotInterior { lambda_min: lmin }),
    };
    let slope = lmi.linear_part(direction)?;
    let n = at_base.dim();

    // S = R⁻¹ V R⁻ᵀ
    let x = forward_solve_columns(&chol, slope.as_matrix());
    let s = forward_solve_columns(&chol, &x.transpose()).transpose();
    let mut skew = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            skew = skew.max((s[(i, j)] - s[(j, i)]).abs());
        }
    }
    let skew_norm = skew * n as f64;
    let sym = SymMatrix::new(Matrix::from_fn(n, n, |i, j| 0.5 * (s[(i, j)] + s[(j, i)])))?;
    let mu = sym_eigen(&sym, DEFAULT_EIGEN_TOL)?.values;
    let mu_scale = mu.iter().fold(0.0f64, |a, v| a.max(v.abs()));

    let scale_base = at_base.max_abs();
    let scale_slope = slope.max_abs();
    let mut roots = Vec::new();
    let mut all_real = true;
    let mut max_imag_bound = 0.0f64;
    let mut max_relative_imag = 0.0f64;
    let mut max_residual = 0.0f64;
    for &m in &mu {
        if m.abs() <= 1e-10 * mu_scale {
            continue;
        }
        let alpha = -1.0 / m;
        let imag_bound = if m.abs() > skew_norm {
            skew_norm / (m.abs() * (m.abs() - skew_norm))
        } else {
            f64::INFINITY
        };
        let mut at_root = at_base.clone();
        at_root.add_scaled(&alpha, &slope)?;
        let residual = sym_eigenvalues(&at_root, DEFAULT_EIGEN_TOL)?
            .iter()
            .fold(f64::INFINITY, |a, v| a.min(v.abs()))
            / (scale_base + alpha.abs() * scale_slope);
        if imag_bound > tol * (1.0 + alpha.abs()) || residual > ROOT_RESIDUAL_TOL {
            all_real = false;
        }
        max_imag_bound = max_imag_bound.max(imag_bound);
        max_relative_imag = max_relative_imag.max(imag_bound / (1.0 + alpha.abs()));
        max_residual = max_residual.max(residual);
        roots.push(alpha);
    }
    roots.sort_by(f64::total_cmp);
    Ok(RealRootReport {
        all_real,
        roots,
        max_imag_bound,
        max_relative_imag,
        max_residual,
    })
}

/// Lower-triangular `R` with `R Rᵀ = M`, or `None` if `M` is not positive definite.
fn cholesky(m: &SymMatrix<f64>) -> Option<Matrix<f64>> {
    let n = m.dim();
    let mut r = Matrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut diag = m[(j, j)];
        for k in 0..j {
            diag -= r[(j, k)] * r[(j, k)];
        }
        if diag <= 0.0 || !diag.is_finite() {
            return None;
        }
        let rjj = diag.sqrt();
        r[(j, j)] = rjj;
        for i in (j + 1)..n {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= r[(i, k)] * r[(j, k)];
            }
            r[(i, j)] = v / rjj;
        }
    }
    Some(r)
}

/// `R⁻¹ B` for lower-triangular `R`.
fn forward_solve_columns(r: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    let n = r.rows();
    let mut out = Matrix::<f64>::zeros(n, b.cols());
    for c in 0..b.cols() {
        for i in 0..n {
            let mut v = b[(i, c)];
            for k in 0..i {
                v -= r[(i, k)] * out[(k, c)];
            }
            out[(i, c)] = v / r[(i, i)];
        }
    }
    out
}

/// One boundary point found by [`trace_boundary`].
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySample {
    pub theta: f64,
    pub x: [f64; 2],
    /// Distance from the center along the ray.
    pub radius: f64,
}

/// Farthest ray length the tracer will try before calling a ray unbounded.
pub const TRACE_RADIUS_CAP: f64 = 1e6;

/// Boundary of the slice `{x ∈ ℝ² : ℒ(x, d) ⪰ 0}` sampled along `rays`
/// equally spaced rays from `center`.
///
/// Each ray is bisected until the bracket is narrower than
/// `width·(1 + radius)`; the member end of the bracket is returned.
/// Membership uses the default relative PSD tolerance.
pub fn trace_boundary(
    lmi: &LmiPencil<f64>,
    d: f64,
    center: [f64; 2],
    rays: usize,
    width: f64,
    exec: Execution,
) -> Result<Vec<BoundarySample>> {
    if lmi.nvars() != 2 {
        return Err(Error::InvalidArgument(format!(
            "boundary tracing needs n = 2, problem has n = {}",
            lmi.nvars()
        )));
    }
    if rays == 0 || width.is_nan() || width <= 0.0 {
        return Err(Error::InvalidArgument(
            "need at least one ray and a positive width".into(),
        ));
    }
    let member = |x: &[f64]| -> Result<(bool, f64)> {
        let tol = scaled_tol(lmi, x, d, DEFAULT_REL_TOL)?;
        let v = lmi_membership(lmi, x, d, tol)?;
        Ok((v.member, v.witness_eigenvalue - BOUNDARY_BAND * tol))
    };
    let (_, margin) = member(&center)?;
    if margin <= 0.0 {
        let m = lmi.eval(&center, &d)?;
        return Err(Error::NotInterior {
            lambda_min: sym_eigenvalues(&m, DEFAULT_EIGEN_TOL)?[0],
        });
    }
    let results = map_range(exec, rays, |j| -> Result<BoundarySample> {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / rays as f64;
        let (s, c) = theta.sin_cos();
        let at = |r: f64| [center[0] + r * c, center[1] + r * s];
        let mut lo = 0.0;
        let mut hi = 1.0;
        while member(&at(hi))?.0 {
            lo = hi;
            hi *= 2.0;
            if hi > TRACE_RADIUS_CAP {
                return Err(Error::InvalidArgument(format!(
                    "ray at theta = {theta} does not leave the set within radius {TRACE_RADIUS_CAP}"
                )));
            }
        }
        while hi - lo > width * (1.0 + lo) {
            let mid = 0.5 * (lo + hi);
            if member(&at(mid))?.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(BoundarySample {
            theta,
            x: at(lo),
            radius: lo,
        })
    });
    results.into_iter().collect()
}

/// `det(d·A₀)` style helper: determinant of a constant symmetric matrix.
pub fn det_of<T: Scalar>(m: &SymMatrix<T>) -> T {
    T::det(m.as_matrix())
}

/// `true` if every leading pivot of an unpivoted `LDLᵀ` is positive.
pub fn is_positive_definite<T: Scalar>(m: &SymMatrix<T>) -> bool {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    for k in 0..n {
        let p = a[(k, k)].clone();
        if p <= T::zero() {
            return false;
        }
        for i in (k + 1)..n {
            let f = a[(i, k)].div(&p);
            if f.is_zero() {
                continue;
            }
            for j in (k + 1)..n {
                let v = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                a[(i, j)] = v;
            }
        }
    }
    true
}
