use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matcube::boundary::{restrict_to_line, rz_line_check, trace_boundary};
use matcube::gallery::{
    diagonal_case_problem, example_322, m_ellipse_problem, matrix_m_ellipsoid_problem, three_ellipse, tilde_problem,
    AffineForm, EllipseSpec,
};
use matcube::io::{parse_problem, serialize_problem, AnyProblem};
use matcube::oracle::{
    lmi_membership, scaled_tol, vertex_membership, Extreme, MembershipVerdict, BOUNDARY_BAND, DEFAULT_REL_TOL,
};
use matcube::par::Execution;
use matcube::scalar::parse_rational;
use matcube::solver::{lift_to_interior, min_d, minimize_linear, SolveStatus};
use matcube::{build_lmi, CubeProblem, Error, LmiPencil, MatrixPencil, Rational, Scalar, SymMatrix};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "matcube",
    version,
    about = "Matrix cubes with eigenvalue bounds: LMI construction, membership, degree, optimization"
)]
struct Cli {
    /// Seed for random lines and directions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numerical tolerance; its meaning depends on the subcommand.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleChoice {
    Lmi,
    Vertex,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Print the LMI pencil and its size.
    Build { file: String },
    /// Membership of (x, d); --tol is the relative PSD tolerance (default 1e-8).
    Check {
        file: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, value_enum, default_value = "both")]
        oracle: OracleChoice,
    },
    /// Smallest feasible d at a point, by bisection.
    MinD {
        file: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        point: String,
    },
    /// Minimize c·x on a d-slice inside a box; --tol is the relative PSD tolerance.
    Optimize {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Box as lo:hi per variable, comma separated.
        #[arg(long = "box", allow_hyphen_values = true)]
        bounds: String,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
    },
    /// Degree of det L along random rational lines (exact arithmetic).
    Degree {
        file: String,
        /// Keep d fixed and move only x.
        #[arg(long, allow_hyphen_values = true)]
        fix_d: Option<String>,
        #[arg(long, default_value_t = 5)]
        lines: usize,
    },
    /// Real-rootedness of det L on random lines through an interior point; --tol bounds imaginary parts (default 1e-7).
    RzCheck {
        file: String,
        /// Interior point x1,…,xn,d. Defaults to x = 0 lifted one unit above min_d.
        #[arg(long, allow_hyphen_values = true)]
        interior: Option<String>,
        #[arg(long, default_value_t = 100)]
        lines: usize,
    },
    /// CSV boundary samples of a planar slice along rays from an interior point.
    Trace {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
        center: String,
        #[arg(long, default_value_t = 360)]
        rays: usize,
    },
    /// Emit a problem document from the built-in families.
    #[command(subcommand)]
    Gallery(GalleryCommand),
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// Planar 3-ellipse with foci (0,0), (1,0), (0,1).
    #[command(name = "3ellipse")]
    ThreeEllipse,
    /// Planar weighted m-ellipse.
    MEllipse {
        /// Foci as x,y pairs separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        foci: String,
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
    },
    /// Matrix m-ellipsoid with arrow pencils.
    MatrixEllipsoid {
        /// Foci separated by ';', coordinates by ','.
        #[arg(long, allow_hyphen_values = true)]
        foci: String,
        /// Weight matrices separated by '|', rows by ';'. Defaults to identities of --size.
        #[arg(long, allow_hyphen_values = true)]
        matrices: Option<String>,
        #[arg(long, default_value_t = 2)]
        size: usize,
    },
    /// Two-factor example with 2x2 blocks.
    #[command(name = "example-322")]
    Example322,
    /// Diagonal pencils of affine forms.
    Diagonal {
        /// Factors separated by '|', forms by ';'; each form is constant,c1,…,cn.
        #[arg(long, allow_hyphen_values = true)]
        forms: String,
        /// Scalars A0,A1,…,Am (default all 1).
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// Scalar cube t in [x1, x1 + offset] built from a merged pair of pencils.
    Tilde {
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        offset: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch(_)
            | Error::NotSymmetric { .. }
            | Error::Empty(_)
            | Error::Parse(_)
            | Error::NotPositiveDefinite(_) => EXIT_DATA,
            Error::InvalidArgument(_) => EXIT_USAGE,
            Error::NoConvergence { .. }
            | Error::EnumerationCap { .. }
            | Error::ZeroPolynomial
            | Error::NotInterior { .. }
            | Error::NoFeasibleD { .. }
            | Error::UnboundedBelow { .. } => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Build { file } => match load(file)? {
            AnyProblem::Exact(p) => render_build(&p),
            AnyProblem::Float(p) => render_build(&p),
        },
        Command::Check { file, point, d, oracle } => {
            let p = load(file)?.to_f64();
            let x = parse_point(point, p.nvars(), "--point")?;
            cmd_check(&p, &x, parse_number(d, "--d")?, *oracle, cli.tol)
        }
        Command::MinD { file, point } => {
            let p = load(file)?.to_f64();
            let x = parse_point(point, p.nvars(), "--point")?;
            let l = build_lmi(&p)?;
            Ok(format!("{:.9}\n", min_d(&p, &l, &x, 1e-10)?))
        }
        Command::Optimize {
            file,
            c,
            d,
            bounds,
            max_iters,
        } => {
            let p = load(file)?.to_f64();
            cmd_optimize(&p, c, parse_number(d, "--d")?, bounds, *max_iters, cli.tol)
        }
        Command::Degree { file, fix_d, lines } => {
            let p = load(file)?.to_exact()?;
            let fix = fix_d.as_deref().map(|v| parse_exact(v, "--fix-d")).transpose()?;
            cmd_degree(&p, fix, *lines, cli.seed)
        }
        Command::RzCheck { file, interior, lines } => {
            let p = load(file)?.to_f64();
            cmd_rz(&p, interior.as_deref(), *lines, cli.seed, cli.tol.unwrap_or(1e-7))
        }
        Command::Trace { file, d, center, rays } => {
            let p = load(file)?.to_f64();
            let c = parse_point(center, 2, "--center")?;
            let l = build_lmi(&p)?;
            let pts = trace_boundary(
                &l,
                parse_number(d, "--d")?,
                [c[0], c[1]],
                *rays,
                1e-12,
                Execution::default(),
            )?;
            let mut out = String::from("theta,x1,x2\n");
            for s in pts {
                let _ = writeln!(out, "{},{},{}", s.theta, s.x[0], s.x[1]);
            }
            Ok(out)
        }
        Command::Gallery(g) => cmd_gallery(g),
    }
}

fn load(path: &str) -> CliResult<AnyProblem> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure {
            code: EXIT_DATA,
            message: format!("reading stdin: {e}"),
        })?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure {
            code: EXIT_DATA,
            message: format!("reading {path}: {e}"),
        })?
    };
    Ok(parse_problem(&text)?.problem)
}

fn parse_number(text: &str, flag: &str) -> CliResult<f64> {
    let t = text.trim();
    parse_rational(t)
        .map(|r| Scalar::to_f64(&r))
        .or_else(|| t.replace('\u{2212}', "-").parse::<f64>().ok())
        .filter(|v| v.is_finite())
        .ok_or_else(|| usage(format!("{flag}: cannot read number {text:?}")))
}

fn parse_exact(text: &str, flag: &str) -> CliResult<Rational> {
    let t = text.trim();
    parse_rational(t)
        .or_else(|| {
            t.replace('\u{2212}', "-")
                .parse::<f64>()
                .ok()
                .and_then(Rational::from_float)
        })
        .ok_or_else(|| usage(format!("{flag}: cannot read number {text:?}")))
}

fn parse_list(text: &str, flag: &str) -> CliResult<Vec<f64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| parse_number(t, flag)).collect()
}

fn parse_exact_list(text: &str, flag: &str) -> CliResult<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| parse_exact(t, flag)).collect()
}

fn parse_point(text: &str, n: usize, flag: &str) -> CliResult<Vec<f64>> {
    let v = parse_list(text, flag)?;
    if v.len() != n {
        return Err(usage(format!("{flag}: expected {n} coordinates, got {}", v.len())));
    }
    Ok(v)
}

fn format_matrix(cells: &[Vec<String>]) -> String {
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "[ {} ]", line.join("  "));
    }
    out
}

fn sym_cells<T: Scalar>(m: &SymMatrix<T>) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

fn render_build<T: Scalar>(p: &CubeProblem<T>) -> CliResult<String> {
    let l = build_lmi(p)?;
    let n = l.dim();
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", p.mode());
    let _ = writeln!(out, "dim: {n}");
    let _ = writeln!(out, "L(x,d) =");
    let cells: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| l.render_entry(i, j)).collect()).collect();
    out.push_str(&format_matrix(&cells));
    let _ = writeln!(out, "constant:");
    out.push_str(&format_matrix(&sym_cells(l.c_const())));
    let _ = writeln!(out, "coefficient of d:");
    out.push_str(&format_matrix(&sym_cells(l.c_d())));
    for (i, c) in l.c_x().iter().enumerate() {
        let _ = writeln!(out, "coefficient of x{}:", i + 1);
        out.push_str(&format_matrix(&sym_cells(c)));
    }
    Ok(out)
}

fn describe(v: &MembershipVerdict) -> String {
    let mut s = format!(
        "{}, witness eigenvalue {:e}",
        if v.member { "member" } else { "non-member" },
        v.witness_eigenvalue
    );
    if let Some(vertex) = &v.witness_vertex {
        let names: Vec<&str> = vertex
            .iter()
            .map(|e| match e {
                Extreme::Min => "min",
                Extreme::Max => "max",
            })
            .collect();
        let _ = write!(s, ", vertex ({})", names.join(","));
    }
    s
}

fn cmd_check(p: &CubeProblem<f64>, x: &[f64], d: f64, oracle: OracleChoice, rel: Option<f64>) -> CliResult<String> {
    let l = build_lmi(p)?;
    let tol = scaled_tol(&l, x, d, rel.unwrap_or(DEFAULT_REL_TOL))?;
    let mut out = String::new();
    let _ = writeln!(out, "tolerance: {tol:e}");
    let lmi = matches!(oracle, OracleChoice::Lmi | OracleChoice::Both)
        .then(|| lmi_membership(&l, x, d, tol))
        .transpose()?;
    let vertex = matches!(oracle, OracleChoice::Vertex | OracleChoice::Both)
        .then(|| vertex_membership(p, x, d, tol))
        .transpose()?;
    if let Some(v) = &lmi {
        let _ = writeln!(out, "lmi: {}", describe(v));
    }
    if let Some(v) = &vertex {
        let _ = writeln!(out, "vertex: {}", describe(v));
    }
    if let (Some(a), Some(b)) = (&lmi, &vertex) {
        let band = BOUNDARY_BAND * tol;
        if a.member == b.member {
            let _ = writeln!(out, "verdicts agree");
        } else if a.witness_eigenvalue.abs() <= band || b.witness_eigenvalue.abs() <= band {
            let _ = writeln!(out, "verdicts differ inside the boundary band");
        } else {
            print!("{out}");
            return Err(Failure {
                code: EXIT_NUMERIC,
                message: "oracles disagree outside the boundary band".into(),
            });
        }
    }
    Ok(out)
}

fn parse_box(text: &str, n: usize) -> CliResult<Vec<(f64, f64)>> {
    let bounds = text
        .split(',')
        .map(|part| {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| usage(format!("--box: expected lo:hi, got {part:?}")))?;
            Ok((parse_number(lo, "--box")?, parse_number(hi, "--box")?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if bounds.len() != n {
        return Err(usage(format!("--box: expected {n} intervals, got {}", bounds.len())));
    }
    Ok(bounds)
}

fn cmd_optimize(
    p: &CubeProblem<f64>,
    c: &str,
    d: f64,
    bounds: &str,
    max_iters: usize,
    rel: Option<f64>,
) -> CliResult<String> {
    let n = p.nvars();
    let c = parse_point(c, n, "--c")?;
    let bounds = parse_box(bounds, n)?;
    let l = build_lmi(p)?;
    let scale = std::iter::once(l.c_const())
        .chain(std::iter::once(l.c_d()))
        .chain(l.c_x())
        .fold(0.0f64, |a, m| a.max(m.max_abs()));
    let tol = rel.unwrap_or(DEFAULT_REL_TOL) * (1.0 + scale * (1.0 + d.abs()));
    let r = minimize_linear(&l, &c, d, &bounds, tol, max_iters)?;
    let status = match r.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::IterationCap => "iteration-cap",
        SolveStatus::BoxActive => "box-active",
    };
    let join = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
    let mut out = String::new();
    let _ = writeln!(out, "status: {status}");
    let _ = writeln!(out, "x: {}", join(&r.x));
    let _ = writeln!(out, "d: {}", r.d);
    let _ = writeln!(out, "value: {}", r.value);
    let _ = writeln!(out, "lower_bound: {}", r.lower_bound);
    let _ = writeln!(out, "iterations: {}", r.iterations);
    let _ = writeln!(out, "final_gap: {:e}", r.final_gap);
    let _ = writeln!(out, "cuts: {}", r.cuts.len());
    Ok(out)
}

fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.random_range(-5i64..=5).into(), rng.random_range(1i64..=4).into())
}

fn cmd_degree(p: &CubeProblem<Rational>, fix_d: Option<Rational>, lines: usize, seed: u64) -> CliResult<String> {
    if lines == 0 {
        return Err(usage("--lines must be positive"));
    }
    let l: LmiPencil<Rational> = build_lmi(p)?;
    let n = p.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    let mut best: Option<usize> = None;
    for k in 0..lines {
        let mut base: Vec<Rational> = (0..=n).map(|_| random_rational(&mut rng)).collect();
        let mut dir: Vec<Rational> = (0..=n).map(|_| random_rational(&mut rng)).collect();
        if let Some(d) = &fix_d {
            base[n] = d.clone();
            dir[n] = Rational::from_i64(0);
        }
        if dir.iter().all(|v| *v == Rational::from_i64(0)) {
            dir[0] = Rational::from_i64(1);
        }
        match restrict_to_line(&l, &base, &dir, Execution::default())?.degree() {
            Ok(deg) => {
                let _ = writeln!(out, "line {}: degree {deg}", k + 1);
                best = Some(best.map_or(deg, |b| b.max(deg)));
            }
            Err(Error::ZeroPolynomial) => {
                let _ = writeln!(out, "line {}: determinant vanishes identically", k + 1);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let _ = writeln!(out, "dim: {}", l.dim());
    match best {
        Some(b) => {
            let _ = writeln!(out, "max degree: {b}");
            Ok(out)
        }
        None => {
            print!("{out}");
            Err(Error::ZeroPolynomial.into())
        }
    }
}

fn cmd_rz(p: &CubeProblem<f64>, interior: Option<&str>, lines: usize, seed: u64, tol: f64) -> CliResult<String> {
    let n = p.nvars();
    let l = build_lmi(p)?;
    let w = match interior {
        Some(t) => parse_point(t, n + 1, "--interior")?,
        None => lift_to_interior(p, &l, &vec![0.0; n], 1.0)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_real = true;
    let mut failures = 0;
    let mut max_imag = 0.0f64;
    let mut max_residual = 0.0f64;
    let mut roots = 0;
    for _ in 0..lines {
        let mut dir: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if dir.iter().all(|v| *v == 0.0) {
            dir[0] = 1.0;
        }
        let r = rz_line_check(&l, &w, &dir, tol)?;
        if !r.all_real {
            all_real = false;
            failures += 1;
        }
        max_imag = max_imag.max(r.max_relative_imag);
        max_residual = max_residual.max(r.max_residual);
        roots += r.roots.len();
    }
    let join = w.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(",");
    let mut out = String::new();
    let _ = writeln!(out, "interior: {join}");
    let _ = writeln!(out, "lines: {lines}");
    let _ = writeln!(out, "roots: {roots}");
    let _ = writeln!(out, "all real: {}", if all_real { "yes" } else { "no" });
    let _ = writeln!(out, "failed lines: {failures}");
    let _ = writeln!(out, "max imaginary bound / (1 + |root|): {max_imag:e}");
    let _ = writeln!(out, "max residual: {max_residual:e}");
    Ok(out)
}

fn parse_foci(text: &str) -> CliResult<Vec<Vec<Rational>>> {
    text.split(';').map(|f| parse_exact_list(f, "--foci")).collect()
}

fn parse_sym(text: &str, flag: &str) -> CliResult<SymMatrix<Rational>> {
    let rows = text
        .split(';')
        .map(|r| parse_exact_list(r, flag))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SymMatrix::from_rows(rows)?)
}

fn cmd_gallery(g: &GalleryCommand) -> CliResult<String> {
    let (p, name) = match g {
        GalleryCommand::ThreeEllipse => (three_ellipse(), "3-ellipse".to_string()),
        GalleryCommand::Example322 => (example_322(), "example-322".to_string()),
        GalleryCommand::MEllipse { foci, weights } => {
            let mut spec = EllipseSpec::unit(parse_foci(foci)?);
            if let Some(w) = weights {
                spec.weights = parse_exact_list(w, "--weights")?;
            }
            let k = spec.foci.len();
            (m_ellipse_problem(&spec)?, format!("{k}-ellipse"))
        }
        GalleryCommand::MatrixEllipsoid { foci, matrices, size } => {
            let mut spec = EllipseSpec::unit(parse_foci(foci)?);
            spec.a_list = Some(match matrices {
                Some(t) => t
                    .split('|')
                    .map(|m| parse_sym(m, "--matrices"))
                    .collect::<CliResult<Vec<_>>>()?,
                None => {
                    if *size == 0 {
                        return Err(usage("--size must be positive"));
                    }
                    vec![SymMatrix::identity(*size); spec.foci.len()]
                }
            });
            (matrix_m_ellipsoid_problem(&spec)?, "matrix-ellipsoid".to_string())
        }
        GalleryCommand::Diagonal { forms, a } => {
            let factors = forms
                .split('|')
                .map(|f| {
                    f.split(';')
                        .map(|form| {
                            let v = parse_exact_list(form, "--forms")?;
                            let (constant, coeffs) = v.split_first().ok_or_else(|| usage("--forms: empty form"))?;
                            Ok(AffineForm {
                                coeffs: coeffs.to_vec(),
                                constant: constant.clone(),
                            })
                        })
                        .collect::<CliResult<Vec<_>>>()
                })
                .collect::<CliResult<Vec<_>>>()?;
            let nvars = factors[0][0].coeffs.len();
            let scalars = match a {
                Some(t) => parse_exact_list(t, "--a")?,
                None => vec![Rational::from_i64(1); factors.len() + 1],
            };
            let a = scalars.into_iter().map(SymMatrix::scalar).collect();
            (diagonal_case_problem(nvars, a, &factors)?, "diagonal".to_string())
        }
        GalleryCommand::Tilde { offset } => {
            let offset = parse_exact(offset, "--offset")?;
            let one = Rational::from_i64(1);
            let b = MatrixPencil::new(vec![
                SymMatrix::scalar(Rational::from_i64(0)),
                SymMatrix::scalar(one.clone()),
            ])?;
            let e = MatrixPencil::new(vec![SymMatrix::scalar(offset), SymMatrix::scalar(one.clone())])?;
            let probes: Vec<Vec<f64>> = (-2..=2).map(|v| vec![v as f64]).collect();
            let t = tilde_problem(
                1,
                vec![SymMatrix::scalar(one.clone()), SymMatrix::scalar(one)],
                &[b],
                &[e],
                &probes,
            )?;
            for v in &t.violations {
                eprintln!(
                    "warning: ordering hypothesis {:?} fails for factor {} at x = {:?}",
                    v.hypothesis, v.factor, probes[v.probe]
                );
            }
            (t.problem, "tilde".to_string())
        }
    };
    Ok(serialize_problem(&p, Some(&name), None))
}
