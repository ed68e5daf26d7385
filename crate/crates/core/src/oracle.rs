//! Membership in the matrix-cube set, decided two independent ways.
//!
//! [`lmi_membership`] checks `ℒ(x,d) ⪰ 0`. [`vertex_membership`] goes back
//! to the definition: the cube pencil is affine in `t`, so it is PSD on the
//! whole box iff it is PSD at the `2^m` box corners `t_k ∈ {λ_min, λ_max}`.
//!
//! All tolerances passed to these functions are absolute. Use
//! [`scaled_tol`] to get the default relative policy.

use crate::eigen::{sym_eigenvalues, DEFAULT_EIGEN_TOL};
use crate::error::{Error, Result};
use crate::lmi::{CubeProblem, LmiPencil};
use crate::matrix::SymMatrix;
use crate::par::{map_slice, Execution};

/// Default PSD tolerance relative to the largest entry of the tested matrix.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Points whose witness eigenvalue is within this many tolerances of zero are
/// treated as boundary points when comparing the two oracles.
pub const BOUNDARY_BAND: f64 = 10.0;

/// Largest `m` the vertex oracle will enumerate.
pub const VERTEX_CAP: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Extreme {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipVerdict {
    pub member: bool,
    /// Most negative eigenvalue seen.
    pub witness_eigenvalue: f64,
    /// First cube corner that failed (vertex oracle only).
    pub witness_vertex: Option<Vec<Extreme>>,
    /// Absolute tolerance the verdict was taken at.
    pub tol: f64,
}

/// `(λ_min(M) ≥ -tol, λ_min(M))`.
pub fn psd_check(m: &SymMatrix<f64>, tol: f64) -> Result<(bool, f64)> {
    let lmin = sym_eigenvalues(m, DEFAULT_EIGEN_TOL)?[0];
    Ok((lmin >= -tol, lmin))
}

/// `rel · max|ℒ(x,d)_ij|`: the default absolute tolerance at a point.
pub fn scaled_tol(lmi: &LmiPencil<f64>, x: &[f64], d: f64, rel: f64) -> Result<f64> {
    Ok(rel * lmi.eval(x, &d)?.max_abs())
}

pub fn lmi_membership(lmi: &LmiPencil<f64>, x: &[f64], d: f64, tol: f64) -> Result<MembershipVerdict> {
    let (member, lmin) = psd_check(&lmi.eval(x, &d)?, tol)?;
    Ok(MembershipVerdict {
        member,
        witness_eigenvalue: lmin,
        witness_vertex: None,
        tol,
    })
}

pub fn vertex_membership(prob: &CubeProblem<f64>, x: &[f64], d: f64, tol: f64) -> Result<MembershipVerdict> {
    let m = prob.m();
    if m > VERTEX_CAP {
        return Err(Error::EnumerationCap { m, cap: VERTEX_CAP });
    }
    let ranges = prob
        .b()
        .iter()
        .map(|b| b.eigen_range(x, DEFAULT_EIGEN_TOL))
        .collect::<Result<Vec<_>>>()?;

    let mut witness = f64::INFINITY;
    let mut failing = None;
    let mut t = vec![0.0; m];
    for mask in 0u64..(1u64 << m) {
        for (k, (lo, hi)) in ranges.iter().enumerate() {
            t[k] = if mask >> k & 1 == 0 { *lo } else { *hi };
        }
        let (ok, lmin) = psd_check(&prob.cube_matrix(&d, &t)?, tol)?;
        witness = witness.min(lmin);
        if !ok && failing.is_none() {
            failing = Some(
                (0..m)
                    .map(|k| if mask >> k & 1 == 0 { Extreme::Min } else { Extreme::Max })
                    .collect(),
            );
        }
    }
    Ok(MembershipVerdict {
        member: failing.is_none(),
        witness_eigenvalue: witness,
        witness_vertex: failing,
        tol,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Disagreement {
    pub x: Vec<f64>,
    pub d: f64,
    pub lmi: MembershipVerdict,
    pub vertex: MembershipVerdict,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AgreementReport {
    pub compared: usize,
    /// Points inside the boundary band, not compared.
    pub skipped: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Runs both oracles at every `(x, d)` and collects verdict mismatches.
///
/// The tolerance at each point is `rel_tol` times the largest entry of
/// `ℒ(x,d)`; points where either witness lies within
/// [`BOUNDARY_BAND`] tolerances of zero are skipped.
pub fn compare_oracles(
    prob: &CubeProblem<f64>,
    lmi: &LmiPencil<f64>,
    points: &[(Vec<f64>, f64)],
    rel_tol: f64,
    exec: Execution,
) -> Result<AgreementReport> {
    let outcomes = map_slice(exec, points, |(x, d)| -> Result<Option<Option<Disagreement>>> {
        let tol = scaled_tol(lmi, x, *d, rel_tol)?;
        let a = lmi_membership(lmi, x, *d, tol)?;
        let b = vertex_membership(prob, x, *d, tol)?;
        let band = BOUNDARY_BAND * tol;
        if a.witness_eigenvalue.abs() <= band || b.witness_eigenvalue.abs() <= band {
            return Ok(None);
        }
        Ok(Some((a.member != b.member).then(|| Disagreement {
            x: x.clone(),
            d: *d,
            lmi: a,
            vertex: b,
        })))
    });
    let mut report = AgreementReport::default();
    for outcome in outcomes {
        match outcome? {
            None => report.skipped += 1,
            Some(dis) => {
                report.compared += 1;
                report.disagreements.extend(dis);
            }
        }
    }
    Ok(report)
}
