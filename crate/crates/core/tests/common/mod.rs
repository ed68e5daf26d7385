#![allow(dead_code)]

use matcube::lmi::LmiPencil;
use matcube::{Matrix, Rational, Scalar, SymMatrix};

/// Reference LMI of the 3-ellipse with foci (0,0), (1,0), (0,1).
pub const THREE_ELLIPSE: [[&str; 8]; 8] = [
    ["d+3x1-1", "x2-1", "x2", "0", "x2", "0", "0", "0"],
    ["x2-1", "d+x1-1", "0", "x2", "0", "x2", "0", "0"],
    ["x2", "0", "d+x1+1", "x2-1", "0", "0", "x2", "0"],
    ["0", "x2", "x2-1", "d-x1+1", "0", "0", "0", "x2"],
    ["x2", "0", "0", "0", "d+x1-1", "x2-1", "x2", "0"],
    ["0", "x2", "0", "0", "x2-1", "d-x1-1", "0", "x2"],
    ["0", "0", "x2", "0", "x2", "0", "d-x1+1", "x2-1"],
    ["0", "0", "0", "x2", "0", "x2", "x2-1", "d-3x1+1"],
];

const G: &str = "-2+2x1-x2";
const H: &str = "1+3x1-x2";

/// Reference LMI of the two-factor example.
pub const EXAMPLE_322: [[&str; 8]; 8] = [
    ["2d+3-x1+2x2", "d+5+2x2", "0", H, G, G, "0", "0"],
    ["d+5+2x2", "2d+2+x1", H, H, G, "0", "0", "0"],
    ["0", H, "2d+3-x1+2x2", "d+6-3x1+3x2", "0", "0", G, G],
    [H, H, "d+6-3x1+3x2", "2d+3-2x1+x2", "0", "0", G, "0"],
    [G, G, "0", "0", "2d-1+2x1", "d+1+3x1", "0", H],
    [G, "0", "0", "0", "d+1+3x1", "2d+2+x1", H, H],
    ["0", "0", G, G, "0", H, "2d-1+2x1", "d+2+x2"],
    ["0", "0", G, "0", H, H, "d+2+x2", "2d+3-2x1+x2"],
];

/// Parses an affine expression in `d, x1, …, xn` with integer coefficients
/// into `(constant, coeff_d, coeff_x)`.
pub fn parse_affine(text: &str, nvars: usize) -> (i64, i64, Vec<i64>) {
    let mut c = 0;
    let mut cd = 0;
    let mut cx = vec![0; nvars];
    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    while i < s.len() {
        let mut sign = 1;
        if s[i] == '+' || s[i] == '-' {
            if s[i] == '-' {
                sign = -1;
            }
            i += 1;
        }
        let start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        let digits: String = s[start..i].iter().collect();
        let explicit = !digits.is_empty();
        let mag: i64 = if explicit { digits.parse().unwrap() } else { 1 };
        if i < s.len() && s[i] == 'd' {
            cd += sign * mag;
            i += 1;
        } else if i < s.len() && s[i] == 'x' {
            i += 1;
            let vs = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            let k: usize = s[vs..i].iter().collect::<String>().parse().unwrap();
            cx[k - 1] += sign * mag;
        } else {
            assert!(explicit, "bad term in {text:?}");
            c += sign * mag;
        }
    }
    (c, cd, cx)
}

/// Compares every entry of `lmi` to a reference table; returns the mismatches.
pub fn golden_mismatches(lmi: &LmiPencil<Rational>, table: &[[&str; 8]; 8]) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    assert_eq!(lmi.dim(), 8);
    for (i, row) in table.iter().enumerate() {
        for (j, text) in row.iter().enumerate() {
            let (c, cd, cx) = parse_affine(text, lmi.nvars());
            let want = (
                Rational::from_i64(c),
                Rational::from_i64(cd),
                cx.into_iter().map(Rational::from_i64).collect::<Vec<_>>(),
            );
            if lmi.entry(i, j) != want {
                bad.push((i, j));
            }
        }
    }
    bad
}

/// `I_p ⊗ M ⊗ I_q`.
pub fn embed<T: Scalar>(m: &Matrix<T>, p: usize, q: usize) -> Matrix<T> {
    Matrix::<T>::identity(p).kron(m).kron(&Matrix::identity(q))
}

/// `ℒ(x,d)` assembled directly as
/// `d·(I ⊗ A₀) + Σ_k (I ⊗ B_k(x) ⊗ I) ⊗ A_k`, without tensor sums.
pub fn closed_form<T: Scalar>(prob: &matcube::CubeProblem<T>, x: &[T], d: &T) -> Matrix<T> {
    let dims = prob.factor_dims();
    let total: usize = dims.iter().product();
    let a = prob.a();
    let mut out = Matrix::<T>::identity(total).kron(a[0].as_matrix()).scale(d);
    for (k, bk) in prob.b().iter().enumerate() {
        let before: usize = dims[..k].iter().product();
        let after: usize = dims[k + 1..].iter().product();
        let bx: SymMatrix<T> = bk.eval(x).unwrap();
        let term = embed(bx.as_matrix(), before, after).kron(a[k + 1].as_matrix());
        out = out.add(&term).unwrap();
    }
    out
}
