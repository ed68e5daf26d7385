//! Acceptance suite: one PASS/FAIL line per criterion, seed 0.

mod common;

use std::time::{Duration, Instant};

use common::{golden_mismatches, EXAMPLE_322, THREE_ELLIPSE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matcube::boundary::{det_factorization_check, restrict_to_line, rz_line_check};
use matcube::eigen::{sym_eigen, sym_eigenvalues, DEFAULT_EIGEN_TOL};
use matcube::gallery::{
    example_322, m_ellipse_problem, matrix_m_ellipsoid_problem, random_integer_problem, random_integer_problem_pd,
    three_ellipse, EllipseSpec, RandomShape,
};
use matcube::oracle::{compare_oracles, scaled_tol, vertex_membership, DEFAULT_REL_TOL};
use matcube::par::{map_range, Execution};
use matcube::scalar::rat;
use matcube::solver::{lift_to_interior, min_d, minimize_linear, SolveStatus};
use matcube::{apply_a, build_lmi, tensor_sum_many, CubeProblem, Matrix, Rational, SymMatrix};

const SEED: u64 = 0;

/// `|witness| > BAND·scale` points must agree.
const ORACLE_BAND: f64 = 1e-7;
const FACTORIZATION_TOL: f64 = 1e-8;
const RZ_IMAG_TOL: f64 = 1e-7;
const TENSOR_SUM_TOL: f64 = 1e-8;
const MIN_D_TOL: f64 = 1e-6;
const GRID_PITCHES: f64 = 2.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED.wrapping_add(salt))
}

fn c1_three_ellipse() -> Outcome {
    let l = build_lmi(&three_ellipse()).unwrap();
    let bad = golden_mismatches(&l, &THREE_ELLIPSE);
    outcome(bad.is_empty(), format!("64 entries, mismatches {bad:?}"))
}

fn c2_example_322() -> Outcome {
    let l = build_lmi(&example_322()).unwrap();
    let bad = golden_mismatches(&l, &EXAMPLE_322);
    outcome(bad.is_empty(), format!("64 entries, mismatches {bad:?}"))
}

fn c3_oracle_equivalence() -> Outcome {
    let mut r = rng(3);
    let (mut compared, mut skipped, mut members, mut disagreements, mut largest) = (0, 0, 0, 0, 0);
    for inst in 0..10 {
        let mut shape = RandomShape::sample(&mut r, 3, 3, 3, 3);
        if inst == 0 {
            shape = RandomShape {
                nvars: 3,
                n0: 3,
                dims: vec![3, 3, 3],
                range: 3,
            };
        }
        let p = if inst % 2 == 0 {
            random_integer_problem_pd(&mut r, &shape)
        } else {
            random_integer_problem(&mut r, &shape)
        }
        .to_f64();
        let l = build_lmi(&p).unwrap();
        largest = largest.max(l.dim());
        let points: Vec<(Vec<f64>, f64)> = (0..1000)
            .map(|_| {
                let x = (0..p.nvars()).map(|_| r.random_range(-3.0..=3.0)).collect();
                (x, r.random_range(-20.0..=20.0))
            })
            .collect();
        let rep = compare_oracles(&p, &l, &points, ORACLE_BAND / 10.0, Execution::default()).unwrap();
        compared += rep.compared;
        skipped += rep.skipped;
        disagreements += rep.disagreements.len();
        members += points
            .iter()
            .filter(|(x, d)| {
                let tol = scaled_tol(&l, x, *d, DEFAULT_REL_TOL).unwrap();
                vertex_membership(&p, x, *d, tol).unwrap().member
            })
            .count();
    }
    outcome(
        disagreements == 0 && compared + skipped == 10_000,
        format!("10 instances (largest LMI {largest}x{largest}), {compared} compared ({members} members), {skipped} in band, {disagreements} disagreements"),
    )
}

fn c4_factorization() -> Outcome {
    let mut r = rng(4);
    let mut problems = vec![example_322().to_f64()];
    for _ in 0..5 {
        let shape = RandomShape::sample(&mut r, 3, 3, 3, 3);
        problems.push(random_integer_problem(&mut r, &shape).to_f64());
    }
    let mut worst = 0.0f64;
    for p in &problems {
        let l = build_lmi(p).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..p.nvars()).map(|_| r.random_range(-2.0..=2.0)).collect();
            let d = r.random_range(-5.0..=5.0);
            let f = det_factorization_check(p, &l, &x, d, DEFAULT_EIGEN_TOL).unwrap();
            worst = worst.max(f.rel_error);
        }
    }
    outcome(
        worst <= FACTORIZATION_TOL,
        format!("6 instances x 100 points, max relative error {worst:.3e}"),
    )
}

fn random_line(r: &mut impl Rng, n: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut pick = || rat(r.random_range(-5..=5), r.random_range(1..=4));
    let base = (0..n).map(|_| pick()).collect();
    let dir = (0..n).map(|_| pick()).collect();
    (base, dir)
}

fn max_degree(p: &CubeProblem<Rational>, r: &mut impl Rng, lines: usize, fix_d: Option<Rational>) -> usize {
    let l = build_lmi(p).unwrap();
    let n = p.nvars();
    (0..lines)
        .map(|_| {
            let (mut base, mut dir) = random_line(r, n + 1);
            if let Some(d) = &fix_d {
                base[n] = d.clone();
                dir[n] = rat(0, 1);
            }
            restrict_to_line(&l, &base, &dir, Execution::default())
                .unwrap()
                .degree()
                .unwrap_or(0)
        })
        .max()
        .unwrap()
}

fn c5_full_degree() -> Outcome {
    let mut r = rng(5);
    let mut report = Vec::new();
    let mut pass = true;
    let mut built = 0;
    while built < 5 {
        let shape = if built == 0 {
            RandomShape {
                nvars: 2,
                n0: 4,
                dims: vec![4, 4],
                range: 3,
            }
        } else {
            RandomShape::sample(&mut r, 3, 3, 3, 3)
        };
        if shape.lmi_dim() > 64 {
            continue;
        }
        built += 1;
        let p = random_integer_problem(&mut r, &shape);
        let deg = max_degree(&p, &mut r, 5, None);
        pass &= deg == shape.lmi_dim();
        report.push(format!("{deg}/{}", shape.lmi_dim()));
    }
    outcome(pass, format!("degree/expected: {}", report.join(" ")))
}

fn c6_known_degrees() -> Outcome {
    let mut r = rng(6);
    let three = max_degree(&three_ellipse(), &mut r, 5, Some(rat(3, 1)));
    let example = max_degree(&example_322(), &mut r, 5, None);
    let two = m_ellipse_problem(&EllipseSpec::<Rational>::from_i64(&[&[0, 0], &[3, 1]])).unwrap();
    let classical = max_degree(&two, &mut r, 5, None);
    let n0 = 2;
    let spec = EllipseSpec {
        foci: vec![vec![rat(1, 1), rat(-2, 1), rat(1, 2)]],
        weights: vec![rat(1, 1)],
        a_list: Some(vec![SymMatrix::from_i64_rows(&[&[2, 1], &[1, 3]]).unwrap()]),
    };
    let single = max_degree(&matrix_m_ellipsoid_problem(&spec).unwrap(), &mut r, 5, Some(rat(2, 1)));
    outcome(
        three == 8 && example == 8 && classical == 4 && single == 2 * n0,
        format!(
            "3-ellipse {three} (8), example {example} (8), 2-ellipse {classical} (4), single focus {single} ({})",
            2 * n0
        ),
    )
}

fn rz_lines(p: &CubeProblem<f64>, w: &[f64], r: &mut impl Rng) -> (usize, f64) {
    let l = build_lmi(p).unwrap();
    let mut ok = 0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dir: Vec<f64> = (0..w.len()).map(|_| r.random_range(-1.0..=1.0)).collect();
        let rep = rz_line_check(&l, w, &dir, RZ_IMAG_TOL).unwrap();
        ok += rep.all_real as usize;
        worst = worst.max(rep.max_relative_imag);
    }
    (ok, worst)
}

fn c7_rigid_convexity() -> Outcome {
    let mut r = rng(7);
    let ex = example_322().to_f64();
    let lex = build_lmi(&ex).unwrap();
    let w = lift_to_interior(&ex, &lex, &[0.0, 0.0], 1.0).unwrap();
    let (ok_ex, imag_ex) = rz_lines(&ex, &w, &mut r);
    let (ok_3, imag_3) = rz_lines(&three_ellipse().to_f64(), &[0.0, 0.0, 3.0], &mut r);
    outcome(
        ok_ex == 100 && ok_3 == 100,
        format!("example {ok_ex}/100 (imag/(1+|root|) <= {imag_ex:.1e}), 3-ellipse {ok_3}/100 (imag/(1+|root|) <= {imag_3:.1e})"),
    )
}

fn random_sym(r: &mut impl Rng, n: usize) -> SymMatrix<f64> {
    let mut m = Matrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = r.random_range(-5.0..=5.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymMatrix::new(m).unwrap()
}

fn c8_tensor_sum_laws() -> Outcome {
    let mut r = rng(8);
    let mut worst_sum = 0.0f64;
    let mut worst_cong = 0.0f64;
    for _ in 0..100 {
        let ms: Vec<SymMatrix<f64>> = (0..3)
            .map(|_| {
                let n = r.random_range(1..=4);
                random_sym(&mut r, n)
            })
            .collect();
        let eig: Vec<_> = ms.iter().map(|m| sym_eigen(m, DEFAULT_EIGEN_TOL).unwrap()).collect();
        let sum = tensor_sum_many(&ms).unwrap();

        let mut expect: Vec<f64> = vec![0.0];
        for e in &eig {
            expect = expect
                .iter()
                .flat_map(|a| e.values.iter().map(move |b| a + b))
                .collect();
        }
        expect.sort_by(f64::total_cmp);
        let got = sym_eigenvalues(&sum, DEFAULT_EIGEN_TOL).unwrap();
        worst_sum = got
            .iter()
            .zip(&expect)
            .fold(worst_sum, |w, (a, b)| w.max((a - b).abs()));

        let u = eig[0].vectors.kron(&eig[1].vectors).kron(&eig[2].vectors);
        let diag: Vec<SymMatrix<f64>> = eig.iter().map(|e| SymMatrix::diag(&e.values)).collect();
        let lhs = sum.congruence(&u).unwrap();
        worst_cong = worst_cong.max(lhs.max_abs_diff(&tensor_sum_many(&diag).unwrap()));
    }
    outcome(
        worst_sum <= TENSOR_SUM_TOL && worst_cong <= TENSOR_SUM_TOL,
        format!("100 triples, eigenvalue-sum deviation {worst_sum:.1e}, congruence deviation {worst_cong:.1e}"),
    )
}

fn c9_min_d() -> Outcome {
    let mut r = rng(9);
    let mut worst = 0.0f64;
    for m in 1..=3 {
        let foci: Vec<Vec<f64>> = (0..m)
            .map(|_| vec![r.random_range(-3.0..=3.0), r.random_range(-3.0..=3.0)])
            .collect();
        let spec = EllipseSpec::unit(foci.clone());
        let p = m_ellipse_problem(&spec).unwrap();
        let l = build_lmi(&p).unwrap();
        for _ in 0..50 {
            let x = [r.random_range(-4.0..=4.0), r.random_range(-4.0..=4.0)];
            let sum: f64 = foci.iter().map(|f| (x[0] - f[0]).hypot(x[1] - f[1])).sum();
            worst = worst.max((min_d(&p, &l, &x, 1e-10).unwrap() - sum).abs());
        }
    }
    outcome(
        worst <= MIN_D_TOL,
        format!("m = 1,2,3 x 50 points, max |min_d - distance sum| {worst:.2e}"),
    )
}

fn c10_optimizer_vs_grid() -> Outcome {
    let p = three_ellipse().to_f64();
    let l = build_lmi(&p).unwrap();
    let d = 2.0;
    let rep = minimize_linear(&l, &[0.0, -1.0], d, &[(-2.0, 2.0), (-2.0, 2.0)], 1e-9, 500).unwrap();
    let cells = 400;
    let pitch = 4.0 / cells as f64;
    let column_best = map_range(Execution::default(), cells + 1, |i| {
        let x1 = -2.0 + pitch * i as f64;
        (0..=cells)
            .map(|j| -2.0 + pitch * j as f64)
            .filter(|&x2| {
                let x = [x1, x2];
                let tol = scaled_tol(&l, &x, d, DEFAULT_REL_TOL).unwrap();
                vertex_membership(&p, &x, d, tol).unwrap().member
            })
            .map(|x2| -x2)
            .fold(f64::INFINITY, f64::min)
    });
    let grid = column_best.into_iter().fold(f64::INFINITY, f64::min);
    let gap = (rep.value - grid).abs();
    outcome(
        rep.status == SolveStatus::Optimal && gap <= GRID_PITCHES * pitch,
        format!(
            "status {:?}, optimum {:.6} at ({:.4}, {:.4}), grid {grid:.6}, gap {gap:.2e} (limit {:.2})",
            rep.status,
            rep.value,
            rep.x[0],
            rep.x[1],
            GRID_PITCHES * pitch
        ),
    )
}

fn c11_congruence_invariance() -> Outcome {
    let mut r = rng(11);
    let mut exact = 0;
    for _ in 0..20 {
        let shape = RandomShape::sample(&mut r, 3, 2, 3, 4);
        let p = random_integer_problem(&mut r, &shape);
        let x: Vec<Rational> = (0..p.nvars())
            .map(|_| rat(r.random_range(-5..=5), r.random_range(1..=3)))
            .collect();
        let d = rat(r.random_range(-5..=5), r.random_range(1..=3));
        // P = L_a at (x, d) split into its coefficient matrices
        let slot = |k: usize| -> Vec<SymMatrix<Rational>> {
            let mut v = vec![SymMatrix::zeros(1)];
            v.extend(p.b().iter().map(|b| SymMatrix::zeros(b.dim())));
            if k == 0 {
                v[0] = SymMatrix::scalar(d.clone());
            } else {
                v[k] = p.b()[k - 1].eval(&x).unwrap();
            }
            v
        };
        let ps: Vec<Matrix<Rational>> = (0..=p.m())
            .map(|k| tensor_sum_many(&slot(k)).unwrap().into_matrix())
            .collect();
        let size = ps[0].rows();
        let u = Matrix::from_fn(size, size, |_, _| rat(r.random_range(-4..=4), r.random_range(1..=3)));
        let moved: Vec<Matrix<Rational>> = ps
            .iter()
            .map(|pk| u.transpose().matmul(pk).unwrap().matmul(&u).unwrap())
            .collect();
        let w = u.kron(&Matrix::identity(p.n0()));
        let lhs = apply_a(&moved, p.a()).unwrap();
        let rhs = w
            .transpose()
            .matmul(&apply_a(&ps, p.a()).unwrap())
            .unwrap()
            .matmul(&w)
            .unwrap();
        exact += (lhs == rhs) as usize;
    }
    outcome(exact == 20, format!("{exact}/20 instances equal exactly"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("golden 3-ellipse matrix", Duration::from_secs(1), c1_three_ellipse),
        (
            "golden two-factor example matrix",
            Duration::from_secs(1),
            c2_example_322,
        ),
        (
            "LMI and vertex oracles agree",
            Duration::from_secs(60),
            c3_oracle_equivalence,
        ),
        ("determinant factorization", Duration::from_secs(30), c4_factorization),
        ("degree equals N0*N1*...*Nm", Duration::from_secs(60), c5_full_degree),
        ("known degree values", Duration::from_secs(30), c6_known_degrees),
        (
            "real roots on lines through interior",
            Duration::from_secs(30),
            c7_rigid_convexity,
        ),
        (
            "tensor sum eigenvalues and congruence",
            Duration::from_secs(10),
            c8_tensor_sum_laws,
        ),
        ("min_d equals distance sum", Duration::from_secs(30), c9_min_d),
        (
            "cutting planes match grid scan",
            Duration::from_secs(60),
            c10_optimizer_vs_grid,
        ),
        (
            "congruence invariance of A",
            Duration::from_secs(10),
            c11_congruence_invariance,
        ),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let pass = out.pass && took <= *budget;
        failed += !pass as usize;
        println!(
            "criterion {:>2} {}: {name} [{:.2}s / {}s] {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs(),
            out.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
