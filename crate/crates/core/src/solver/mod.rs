//! Optimization over the LMI set: cutting planes for linear objectives on a
//! fixed-`d` slice, and bisection for the smallest feasible `d` at fixed `x`.

pub mod lp;

use crate::eigen::{sym_eigen, sym_eigenvalues, DEFAULT_EIGEN_TOL};
use crate::error::{Error, Result};
use crate::lmi::{CubeProblem, LmiPencil};
use crate::oracle::{lmi_membership, scaled_tol, DEFAULT_REL_TOL};

use lp::{solve_lp, LpOutcome};

/// Valid inequality `constant + coeff_d·d + Σ coeff_x[i]·xᵢ ≥ 0` on the set.
#[derive(Clone, Debug, PartialEq)]
pub struct Cut {
    pub constant: f64,
    pub coeff_d: f64,
    pub coeff_x: Vec<f64>,
}

impl Cut {
    pub fn value(&self, x: &[f64], d: f64) -> f64 {
        self.constant + self.coeff_d * d + self.coeff_x.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
    }
}

/// Eigenvector cut `(y, e) ↦ vᵀ ℒ(y, e) v` for the most negative eigenpair of
/// `ℒ(x, d)`, or `None` when `λ_min ≥ -tol`.
pub fn separate(lmi: &LmiPencil<f64>, x: &[f64], d: f64, tol: f64) -> Result<Option<Cut>> {
    let eig = sym_eigen(&lmi.eval(x, &d)?, DEFAULT_EIGEN_TOL)?;
    if eig.min() >= -tol {
        return Ok(None);
    }
    let v = eig.vector(0);
    Ok(Some(Cut {
        constant: lmi.c_const().quadratic_form(&v),
        coeff_d: lmi.c_d().quadratic_form(&v),
        coeff_x: lmi.c_x().iter().map(|c| c.quadratic_form(&v)).collect(),
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    IterationCap,
    /// Optimal for the boxed problem, but a box face the objective pushes
    /// against is active, so the box may be cutting the set.
    BoxActive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub d: f64,
    pub value: f64,
    /// Outer-approximation bound `min cᵀx` over box and cuts.
    pub lower_bound: f64,
    pub iterations: usize,
    /// Zero at optimality; otherwise the LMI violation `max(0, -λ_min)` at
    /// the last outer optimum.
    pub final_gap: f64,
    pub cuts: Vec<Cut>,
}

/// Kelley's cutting-plane method on the slice `d = d_fixed`.
///
/// `tol` is the absolute PSD tolerance a returned point satisfies. The outer
/// polyhedron is the box plus all cuts; each iteration minimizes `cᵀx` over
/// it and either certifies the minimizer or cuts it off.
pub fn minimize_linear(
    lmi: &LmiPencil<f64>,
    c: &[f64],
    d_fixed: f64,
    bounds: &[(f64, f64)],
    tol: f64,
    max_iters: usize,
) -> Result<SolveReport> {
    let n = lmi.nvars();
    if c.len() != n || bounds.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n} variables but {} objective entries and {} box bounds",
            c.len(),
            bounds.len()
        )));
    }
    if let Some((i, _)) = bounds
        .iter()
        .enumerate()
        .find(|(_, (lo, hi))| !(lo.is_finite() && hi.is_finite() && lo <= hi))
    {
        return Err(Error::InvalidArgument(format!(
            "box bound {i} is not a finite interval"
        )));
    }

    // Shifted variables y = x - lo ≥ 0.
    let lo: Vec<f64> = bounds.iter().map(|b| b.0).collect();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for (i, (l, h)) in bounds.iter().enumerate() {
        let mut row = vec![0.0; n];
        row[i] = 1.0;
        rows.push(row);
        rhs.push(h - l);
    }

    let mut cuts = Vec::new();
    let mut last_x = lo.clone();
    let mut last_bound = f64::NEG_INFINITY;
    let mut last_violation = f64::INFINITY;
    for iter in 1..=max_iters {
        let y = match solve_lp(c, &rows, &rhs) {
            LpOutcome::Optimal { y, .. } => y,
            LpOutcome::Infeasible => {
                return Ok(SolveReport {
                    status: SolveStatus::Infeasible,
                    x: last_x,
                    d: d_fixed,
                    value: f64::NAN,
                    lower_bound: f64::INFINITY,
                    iterations: iter,
                    final_gap: f64::INFINITY,
                    cuts,
                })
            }
            LpOutcome::Unbounded => unreachable!("box-bounded program"),
        };
        let x: Vec<f64> = y.iter().zip(&lo).map(|(yi, li)| yi + li).collect();
        let value: f64 = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
        last_bound = value;

        match separate(lmi, &x, d_fixed, tol)? {
            None => {
                let on_box = x.iter().zip(bounds).zip(c).any(|((xi, (l, h)), ci)| {
                    let slack = 1e-9 * (1.0 + l.abs().max(h.abs()));
                    (*ci > 0.0 && xi - l <= slack) || (*ci < 0.0 && h - xi <= slack)
                });
                return Ok(SolveReport {
                    status: if on_box {
                        SolveStatus::BoxActive
                    } else {
                        SolveStatus::Optimal
                    },
                    x,
                    d: d_fixed,
                    value,
                    lower_bound: value,
                    iterations: iter,
                    final_gap: 0.0,
                    cuts,
                });
            }
            Some(cut) => {
                last_violation = -cut.value(&x, d_fixed);
                // h + g·(y + lo) ≥ 0  ⇔  -g·y ≤ h + g·lo, normalized by |g|
                let h = cut.constant + cut.coeff_d * d_fixed;
                let norm = cut.coeff_x.iter().map(|g| g * g).sum::<f64>().sqrt();
                if norm == 0.0 {
                    // constant cut violated: the slice is empty
                    return Ok(SolveReport {
                        status: SolveStatus::Infeasible,
                        x,
                        d: d_fixed,
                        value: f64::NAN,
                        lower_bound: f64::INFINITY,
                        iterations: iter,
                        final_gap: f64::INFINITY,
                        cuts: {
                            cuts.push(cut);
                            cuts
                        },
                    });
                }
                rows.push(cut.coeff_x.iter().map(|g| -g / norm).collect());
                let shift: f64 = cut.coeff_x.iter().zip(&lo).map(|(g, l)| g * l).sum();
                rhs.push((h + shift) / norm);
                cuts.push(cut);
                last_x = x;
            }
        }
    }
    let value = c.iter().zip(&last_x).map(|(ci, xi)| ci * xi).sum();
    Ok(SolveReport {
        status: SolveStatus::IterationCap,
        x: last_x,
        d: d_fixed,
        value,
        lower_bound: last_bound,
        iterations: max_iters,
        final_gap: last_violation.max(0.0),
        cuts,
    })
}

/// Largest |d| the bisection in [`min_d`] will explore.
pub const MIN_D_CAP: f64 = 1e6;

/// Smallest `d` with `ℒ(x, d) ⪰ 0`, bracketed to width `tol`.
///
/// Requires `A₀ ⪰ 0` so that membership is monotone in `d`. Membership uses
/// the default relative PSD tolerance. The returned value is the feasible end
/// of the final bracket.
pub fn min_d(prob: &CubeProblem<f64>, lmi: &LmiPencil<f64>, x: &[f64], tol: f64) -> Result<f64> {
    let a0 = &prob.a()[0];
    let a0_min = sym_eigenvalues(a0, DEFAULT_EIGEN_TOL)?[0];
    if a0_min < -DEFAULT_REL_TOL * a0.max_abs() {
        return Err(Error::InvalidArgument(format!(
            "min_d needs A0 positive semidefinite (smallest eigenvalue {a0_min:e})"
        )));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("bisection width must be positive".into()));
    }
    let member = |d: f64| -> Result<bool> {
        let t = scaled_tol(lmi, x, d, DEFAULT_REL_TOL)?;
        Ok(lmi_membership(lmi, x, d, t)?.member)
    };

    let mut hi = 1.0;
    while !member(hi)? {
        hi *= 2.0;
        if hi > MIN_D_CAP {
            return Err(Error::NoFeasibleD { cap: MIN_D_CAP });
        }
    }
    let mut lo = -MIN_D_CAP;
    if member(lo)? {
        return Err(Error::UnboundedBelow { d: lo });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if member(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `(x, min_d(x) + margin)`, strictly interior when `A₀ ≻ 0` and `margin > 0`.
pub fn lift_to_interior(prob: &CubeProblem<f64>, lmi: &LmiPencil<f64>, x: &[f64], margin: f64) -> Result<Vec<f64>> {
    let d = min_d(prob, lmi, x, 1e-9)? + margin;
    let mut point = x.to_vec();
    point.push(d);
    Ok(point)
}
