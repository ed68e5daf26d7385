//! Scalar kinds used throughout the crate.
//!
//! Construction (Kronecker products, tensor sums, pencil assembly) is generic
//! over [`Scalar`], so the same code builds matrices with exact rational
//! entries or with `f64` entries. Spectral work only exists for `f64`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::Matrix;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Tag describing which arithmetic a value was built with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    Exact,
    Float,
}

impl Display for ScalarMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

/// A field element that matrices and pencils can be built from.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: ScalarMode;

    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// Field division. Callers guarantee a nonzero divisor.
    fn div(&self, other: &Self) -> Self;
    /// Determinant of a square matrix.
    fn det(m: &Matrix<Self>) -> Self;
    /// Whether `a` and `b` count as equal entries of a symmetric matrix whose
    /// largest entry has magnitude `scale`.
    fn symmetric_eq(a: &Self, b: &Self, scale: f64) -> bool;
}

/// Relative tolerance used to accept float matrices as symmetric.
pub const FLOAT_SYMMETRY_TOL: f64 = 1e-12;

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn det(m: &Matrix<Self>) -> Self {
        det_lu(m)
    }

    fn symmetric_eq(a: &Self, b: &Self, scale: f64) -> bool {
        (a - b).abs() <= FLOAT_SYMMETRY_TOL * scale.max(f64::MIN_POSITIVE)
    }
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn det(m: &Matrix<Self>) -> Self {
        det_bareiss(m)
    }

    fn symmetric_eq(a: &Self, b: &Self, _scale: f64) -> bool {
        a == b
    }
}

/// Gaussian elimination with partial pivoting.
fn det_lu(m: &Matrix<f64>) -> f64 {
    let n = m.rows();
    assert_eq!(n, m.cols(), "determinant of a non-square matrix");
    let mut a = m.clone();
    let mut det = 1.0;
    for k in 0..n {
        let mut piv = k;
        let mut best = a[(k, k)].abs();
        for i in (k + 1)..n {
            if a[(i, k)].abs() > best {
                best = a[(i, k)].abs();
                piv = i;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != k {
            a.swap_rows(k, piv);
            det = -det;
        }
        let p = a[(k, k)];
        det *= p;
        for i in (k + 1)..n {
            let f = a[(i, k)] / p;
            if f != 0.0 {
                for j in (k + 1)..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
    }
    det
}

/// Fraction-free (Bareiss) elimination. Rows are first scaled to integers by
/// their common denominator, so all intermediate work stays in `BigInt`.
fn det_bareiss(m: &Matrix<Rational>) -> Rational {
    let n = m.rows();
    assert_eq!(n, m.cols(), "determinant of a non-square matrix");
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let lcm = (0..n).fold(BigInt::one(), |acc, j| acc.lcm(m[(i, j)].denom()));
        a.push(
            (0..n)
                .map(|j| {
                    let e = &m[(i, j)];
                    e.numer() * (&lcm / e.denom())
                })
                .collect(),
        );
        scale *= lcm;
    }

    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        for row in tail.iter_mut() {
            let lead = row[k].clone();
            for j in (k + 1)..n {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    let mut det = a[n - 1][n - 1].clone();
    if sign < 0 {
        det = -det;
    }
    Rational::new(det, scale)
}

/// Parses `"-3/2"`, `"7"`, or `"−3/2"` (Unicode minus) into a rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim().replace('\u{2212}', "-");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim().to_string(), b.trim().to_string()),
        None => (t.clone(), "1".to_string()),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}
