//! LMI representations of matrix cubes whose bounds are the extreme
//! eigenvalues of affine symmetric pencils.
//!
//! The set of `(x, d)` such that `d·A₀ + Σ t_k A_k ⪰ 0` whenever every `t_k`
//! lies between `λ_min(B_k(x))` and `λ_max(B_k(x))` is a spectrahedron. This
//! crate builds its LMI `ℒ(x,d) ⪰ 0` with Kronecker products and tensor sums,
//! tests membership through the LMI and through the defining cube vertices,
//! studies the determinant `det ℒ(x,d)`, and optimizes linear functionals over
//! the set.

pub mod boundary;
pub mod eigen;
pub mod error;
pub mod gallery;
pub mod io;
pub mod lmi;
pub mod matrix;
pub mod oracle;
pub mod par;
pub mod pencil;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use lmi::{apply_a, build_lmi, CubeProblem, LmiPencil};
pub use matrix::{tensor_sum_many, Matrix, SymMatrix};
pub use pencil::MatrixPencil;
pub use scalar::{Rational, Scalar, ScalarMode};
