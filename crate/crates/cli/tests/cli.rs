use std::io::Write;
use std::process::{Command, Output, Stdio};

use matcube::build_lmi;
use matcube::gallery::{example_322, three_ellipse};
use matcube::io::{parse_problem, AnyProblem};
use matcube::oracle::{lmi_membership, scaled_tol, vertex_membership, DEFAULT_REL_TOL};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_matcube"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn gallery(name: &str) -> String {
    stdout(&run(&["gallery", name], None))
}

#[test]
fn three_ellipse_build_renders_integer_entries() {
    let text = stdout(&run(&["build", "-"], Some(&gallery("3ellipse"))));
    assert!(text.contains("dim: 8"));
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip_while(|l| !l.starts_with("L(x,d)"))
        .skip(1)
        .take(8)
        .map(|l| {
            l.trim_matches(|c| c == '[' || c == ']' || c == ' ')
                .split_whitespace()
                .collect()
        })
        .collect();
    assert_eq!(rows[0], ["d+3x1-1", "x2-1", "x2", "0", "x2", "0", "0", "0"]);
    assert_eq!(rows[3], ["0", "x2", "x2-1", "d-x1+1", "0", "0", "0", "x2"]);
    assert_eq!(rows[7][7], "d-3x1+1");
}

#[test]
fn min_d_at_origin_is_distance_sum() {
    let text = stdout(&run(&["min-d", "-", "--point", "0,0"], Some(&gallery("3ellipse"))));
    let v: f64 = text.trim().parse().unwrap();
    assert!((v - 2.0).abs() <= 1e-6, "{v}");
}

#[test]
fn trace_points_lie_on_the_boundary() {
    let text = stdout(&run(&["trace", "-", "--d", "2.5"], Some(&gallery("3ellipse"))));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,x1,x2"));
    let rows: Vec<[f64; 3]> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|t| t.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    assert_eq!(rows.len(), 360);

    let p = three_ellipse().to_f64();
    let l = build_lmi(&p).unwrap();
    let d = 2.5;
    for [theta, x1, x2] in rows {
        let x = [x1, x2];
        let tol = scaled_tol(&l, &x, d, DEFAULT_REL_TOL).unwrap();
        let inside = vertex_membership(&p, &x, d, tol).unwrap();
        assert!(inside.member, "theta {theta}: {inside:?}");
        let scale = l.eval(&x, &d).unwrap().max_abs();
        let lm = lmi_membership(&l, &x, d, tol).unwrap();
        assert!(lm.witness_eigenvalue.abs() <= 1e-6 * scale, "theta {theta}");

        let r = x1.hypot(x2) + 1e-6;
        let out = [r * theta.cos(), r * theta.sin()];
        let tol = scaled_tol(&l, &out, d, DEFAULT_REL_TOL).unwrap();
        assert!(!vertex_membership(&p, &out, d, tol).unwrap().member, "theta {theta}");
    }
}

#[test]
fn check_both_oracles_agree() {
    let doc = gallery("example-322");
    for (point, d) in [("0,0", "3"), ("1,-1", "0"), ("2,1/2", "-1"), ("-3,2", "10")] {
        let text = stdout(&run(&["check", "-", "--point", point, "--d", d], Some(&doc)));
        assert!(text.contains("verdicts agree"), "{point} {d}: {text}");
    }
}

#[test]
fn degree_of_example_surface_is_eight() {
    let text = stdout(&run(&["degree", "-"], Some(&gallery("example-322"))));
    assert!(text.contains("max degree: 8"), "{text}");
    let text = stdout(&run(&["degree", "-", "--fix-d", "3"], Some(&gallery("3ellipse"))));
    assert!(text.contains("max degree: 8"), "{text}");
}

#[test]
fn rz_check_reports_real_roots() {
    let text = stdout(&run(
        &["rz-check", "-", "--interior", "0,0,3", "--lines", "20"],
        Some(&gallery("3ellipse")),
    ));
    assert!(text.contains("all real: yes"), "{text}");
}

#[test]
fn optimize_reports_status() {
    let text = stdout(&run(
        &["optimize", "-", "--c", "0,-1", "--d", "2", "--box", "-2:2,-2:2"],
        Some(&gallery("3ellipse")),
    ));
    assert!(text.contains("status: optimal"), "{text}");
}

#[test]
fn gallery_documents_parse_back() {
    let parsed = parse_problem(&gallery("example-322")).unwrap();
    assert_eq!(parsed.problem, AnyProblem::Exact(example_322()));
    for args in [
        vec!["gallery", "m-ellipse", "--foci", "0,0;2,1", "--weights", "1,3/2"],
        vec![
            "gallery",
            "matrix-ellipsoid",
            "--foci",
            "0,0,0;1,1,1",
            "--matrices",
            "2,1;1,2|1,0;0,3",
        ],
        vec!["gallery", "diagonal", "--forms", "1,1,0;2,0,1|0,-1,1"],
        vec!["gallery", "tilde"],
    ] {
        let text = stdout(&run(&args, None));
        assert!(parse_problem(&text).is_ok(), "{args:?}");
    }
}

#[test]
fn files_and_m_zero_documents() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scalar.json");
    std::fs::write(
        &path,
        r#"{"schema_version":"1","n":0,"m":0,"N0":1,"A":[[["2"]]],"B":[]}"#,
    )
    .unwrap();
    let text = stdout(&run(&["build", path.to_str().unwrap()], None));
    assert!(text.contains("[ 2d ]"), "{text}");
}

#[test]
fn exit_codes() {
    let usage = run(&["build"], None);
    assert_eq!(usage.status.code(), Some(1));

    let missing = run(&["build", "/nonexistent/problem.json"], None);
    assert_eq!(missing.status.code(), Some(2));

    let asym = r#"{"schema_version":"1","n":0,"m":1,"N0":2,
        "A":[[["1","0"],["0","1"]],[["1","2"],["3","1"]]],"B":[[[["1"]]]]}"#;
    let bad = run(&["build", "-"], Some(asym));
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("A[1]"));

    let outside = run(
        &["trace", "-", "--d", "2", "--center", "5,5"],
        Some(&gallery("3ellipse")),
    );
    assert_eq!(outside.status.code(), Some(3));

    let wrong_point = run(&["check", "-", "--point", "1", "--d", "1"], Some(&gallery("3ellipse")));
    assert_eq!(wrong_point.status.code(), Some(1));
}
