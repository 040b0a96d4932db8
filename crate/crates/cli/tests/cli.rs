use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hauptmodul"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

#[test]
fn analyze_j2() {
    let out = run(&["analyze", "--input", s(&data("j2.txt"))]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"degree\": 100"));
    assert!(text.contains("\"genus\": 0"));
    assert!(text.contains("\"congruence\": false"));
    let v = json(text.as_bytes());
    assert_eq!(v["e2"], 0);
    assert_eq!(v["e3"], 4);
    assert_eq!(v["relation_orders"]["s0s1"], 7);
    assert_eq!(v["relation_orders"]["s0s1s0s1s1"], 12);
    let widths: Vec<u64> = v["cusps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["width"].as_u64().unwrap())
        .collect();
    assert_eq!(widths.iter().filter(|&&w| w == 1).count(), 2);
    assert_eq!(widths.iter().filter(|&&w| w == 7).count(), 14);
    assert_eq!(widths.len(), 16);
}

#[test]
fn analyze_gamma0_4() {
    let out = run(&["analyze", "--input", s(&data("gamma0_4.txt"))]);
    let v = json(&out.stdout);
    assert_eq!(v["degree"], 6);
    assert_eq!(v["congruence"], true);
    assert_eq!(v["cusps"][0]["representative"], "oo");
    assert_eq!(v["cusps"][0]["cycle"], serde_json::json!([1]));
}

#[test]
fn solve_index_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.txt");
    let st = run(&[
        "solve", "--input", s(&data("index1.txt")), "--N", "16", "--digits", "60", "--tol", "1e-30",
        "--method", "gmres", "--out", s(&out),
    ]);
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("group: index1\nN: 16\nprecision_digits: 60\ncusp 0 width 1\n"));
    let line = text.lines().find(|l| l.starts_with("1 ")).unwrap();
    let re: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((re - 196884.0).abs() <= 1e-9);
    let digits = line.split_whitespace().nth(1).unwrap();
    assert!(digits.starts_with("196884.0000000000000000000") || digits.starts_with("196883.9999999999999999999"));
}

#[test]
fn solve_belyi_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for g in ["index1", "gamma0_2", "gamma0_3", "gamma0_4"] {
        let out = dir.path().join(g);
        let st = run(&["belyi", "--input", s(&data(&format!("{g}.txt"))), "--out-dir", s(&out)]);
        assert!(st.status.success(), "{g}: {}", String::from_utf8_lossy(&st.stderr));
        let report = json(&fs::read(out.join("report.json")).unwrap());
        assert_eq!(report["passed"], true);
        assert_eq!(report["recognized"], "rational");
        let st = run(&[
            "verify",
            "--input",
            s(&data(&format!("{g}.txt"))),
            "--coeffs",
            s(&out.join("coeffs.txt")),
            "--polys",
            s(&out),
        ]);
        assert!(st.status.success(), "{g}: {}", String::from_utf8_lossy(&st.stderr));
        let v = json(&st.stdout);
        assert_eq!(v["exact_identity"], true);
        assert!(v["identity_residual"].as_f64().unwrap() <= 1e-30);
    }
    let exact = fs::read_to_string(dir.path().join("gamma0_2/p2.exact.txt")).unwrap();
    // (X + 40)(X − 536)²
    assert_eq!(exact, "1\n-1032\n244416\n11491840\n");
}

#[test]
fn separate_solve_then_belyi() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("c.txt");
    let input = data("gamma0_2.txt");
    assert!(run(&["solve", "--input", s(&input), "--N", "24", "--digits", "80", "--out", s(&coeffs)])
        .status
        .success());
    let out = dir.path().join("b");
    let st = run(&["belyi", "--input", s(&input), "--coeffs", s(&coeffs), "--out-dir", s(&out)]);
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    assert!(!out.join("coeffs.txt").exists());
    assert_eq!(fs::read_to_string(out.join("pc.exact.txt")).unwrap(), "1\n-48\n576\n");
}

#[test]
fn outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("gamma0_3.txt");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run(&["belyi", "--input", s(&input), "--out-dir", s(&a)]).status.success());
    assert!(run(&["--threads", "1", "belyi", "--input", s(&input), "--out-dir", s(&b)])
        .status
        .success());
    for f in ["coeffs.txt", "p3.txt", "p2.txt", "pc.txt", "p3.exact.txt", "report.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let x = run(&["analyze", "--input", s(&data("j2.txt"))]);
    let y = run(&["analyze", "--input", s(&data("j2.txt"))]);
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "degree: 3\ns0: (1,2,3)\ns1: (1,2,3)\n").unwrap();
    assert_eq!(run(&["analyze", "--input", s(&bad)]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["analyze", "--input", s(&missing)]).status.code(), Some(2));
    assert_eq!(run(&["solve"]).status.code(), Some(2));
}

#[test]
fn insufficient_precision_exits_2() {
    let st = run(&["solve", "--input", s(&data("gamma0_2.txt")), "--N", "24", "--digits", "40"]);
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("precision budget"));
}

#[test]
fn non_convergence_exits_3() {
    let st = run(&[
        "solve", "--input", s(&data("gamma0_2.txt")), "--N", "12", "--digits", "40", "--tol", "1e-20",
        "--method", "picard", "--max-sweeps", "3",
    ]);
    assert_eq!(st.status.code(), Some(3));
    assert!(st.stdout.is_empty());
}

#[test]
fn tampered_polynomials_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("gamma0_2.txt");
    assert!(run(&["belyi", "--input", s(&input), "--out-dir", s(dir.path())]).status.success());
    fs::write(dir.path().join("pc.exact.txt"), "1\n-48\n577\n").unwrap();
    let verify = || {
        run(&[
            "verify",
            "--input",
            s(&input),
            "--coeffs",
            s(&dir.path().join("coeffs.txt")),
            "--polys",
            s(dir.path()),
        ])
    };
    let st = verify();
    assert_eq!(st.status.code(), Some(4));
    assert_eq!(json(&st.stdout)["exact_identity"], false);
    fs::remove_file(dir.path().join("pc.exact.txt")).unwrap();
    let pc = fs::read_to_string(dir.path().join("pc.txt")).unwrap();
    let mut lines: Vec<String> = pc.lines().map(String::from).collect();
    lines[2] = "576.000001 0".into();
    fs::write(dir.path().join("pc.txt"), lines.join("\n")).unwrap();
    let st = verify();
    assert_eq!(st.status.code(), Some(4));
    let v = json(&st.stdout);
    assert_eq!(v["exact_identity"], serde_json::Value::Null);
    assert_eq!(v["passed"], false);
}
