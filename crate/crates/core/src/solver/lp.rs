//! Dense two-phase simplex for `min cᵀy  s.t.  A y ≤ b, y ≥ 0`.
//!
//! Bland's rule for both the entering and leaving variable, so the method
//! cannot cycle. Intended for the few-variable, few-hundred-row programs of
//! the cutting-plane loop.

const EPS: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { y: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// Constraint rows followed by the objective row; last column is the RHS.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.basis.len()
    }

    fn rhs_col(&self) -> usize {
        self.t[0].len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule pivots over columns `< allowed`. Returns `false` on an
    /// unbounded direction.
    fn run(&mut self, allowed: usize) -> bool {
        let obj = self.rows();
        let rhs = self.rhs_col();
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.t[obj][j] < -EPS) else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows() {
                let a = self.t[i][enter];
                if a > EPS {
                    let ratio = self.t[i][rhs] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - EPS || (ratio <= lr + EPS && self.basis[i] < self.basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

pub fn solve_lp(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(m, b.len());
    let negative: Vec<usize> = (0..m).filter(|&i| b[i] < 0.0).collect();
    let n_art = negative.len();
    let cols = n + m + n_art;

    let mut t = vec![vec![0.0; cols + 1]; m + 1];
    let mut basis = vec![0; m];
    let mut art = 0;
    for i in 0..m {
        assert_eq!(a[i].len(), n);
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sign * a[i][j];
        }
        t[i][n + i] = sign;
        t[i][cols] = sign * b[i];
        if b[i] < 0.0 {
            t[i][n + m + art] = 1.0;
            basis[i] = n + m + art;
            art += 1;
        } else {
            basis[i] = n + i;
        }
    }
    let mut tab = Tableau { t, basis };

    if n_art > 0 {
        // phase 1: minimize the sum of artificials
        for j in n + m..cols {
            tab.t[m][j] = 1.0;
        }
        for &i in &negative {
            for j in 0..=cols {
                tab.t[m][j] -= tab.t[i][j];
            }
        }
        tab.run(cols);
        let scale = 1.0 + b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if -tab.t[m][cols] > 1e-9 * scale {
            return LpOutcome::Infeasible;
        }
        for r in 0..m {
            if tab.basis[r] >= n + m {
                if let Some(j) = (0..n + m).find(|&j| tab.t[r][j].abs() > EPS) {
                    tab.pivot(r, j);
                }
            }
        }
    }

    // phase 2
    tab.t[m].fill(0.0);
    tab.t[m][..n].copy_from_slice(c);
    for r in 0..m {
        let bj = tab.basis[r];
        let cb = if bj < n { c[bj] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..=cols {
                tab.t[m][j] -= cb * tab.t[r][j];
            }
        }
    }
    if !tab.run(n + m) {
        return LpOutcome::Unbounded;
    }
    let mut y = vec![0.0; n];
    for r in 0..m {
        if tab.basis[r] < n {
            y[tab.basis[r]] = tab.t[r][cols];
        }
    }
    let value = c.iter().zip(&y).map(|(ci, yi)| ci * yi).sum();
    LpOutcome::Optimal { y, value }
}
