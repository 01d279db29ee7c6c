use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use alphaperm::{certify_psd, parse_matrix, read_matrix, serialize_matrix, write_matrix, Matrix, Scalar};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_alphaperm"));
    for var in alphaperm::Caps::ENV_VARS {
        c.env_remove(var);
    }
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn alphaperm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn dir(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn mat(d: &Path, name: &str, rows: &[&[i64]]) -> String {
    let p = d.join(name);
    write_matrix(&p, &Matrix::from_int_rows(rows).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn compute_examples() {
    let d = dir("compute");
    let ones1 = mat(&d, "ones1.mat", &[&[1]]);
    let doubled = mat(&d, "doubled-ones1.mat", &[&[1, 1], &[1, 1]]);
    let m = mat(&d, "m.mat", &[&[1, 2], &[3, 4]]);

    let o = run(&["compute", "per-alpha", "--alpha", "1/2", "--algo", "dp", &ones1]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1/2");

    let o = run(&["compute", "haf", &doubled]);
    assert_eq!(stdout(&o).trim(), "1");

    for algo in ["dp", "naive"] {
        let o = run(&["compute", "per-alpha", "--alpha", "-1", "--algo", algo, &m]);
        assert_eq!(stdout(&o).trim(), "-2");
    }
    assert_eq!(stdout(&run(&["compute", "per", &m])).trim(), "10");
    assert_eq!(stdout(&run(&["compute", "det", &m])).trim(), "-2");
    assert_eq!(stdout(&run(&["compute", "alpha-det", "--alpha", "2", &m])).trim(), "16");
    assert_eq!(stdout(&run(&["compute", "per-beta-k", "--beta", "1", "--k", "2", &m])).trim(), "8");
}

#[test]
fn compute_output_parses_back() {
    let d = dir("roundtrip");
    let m = mat(&d, "m.mat", &[&[1, 2, 0], &[3, 4, 5], &[-1, 2, 7]]);
    let o = run(&["compute", "per-alpha", "--alpha", "-7/3", &m]);
    let text = stdout(&o);
    let v: Scalar = text.trim().parse().unwrap();
    assert_eq!(v.to_string(), text.trim());
}

#[test]
fn compute_reads_stdin() {
    let text = serialize_matrix(&Matrix::from_int_rows(&[[2, 1], [1, 2]]).unwrap());
    let mut child = bin()
        .args(["compute", "per", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o).trim(), "5");
}

#[test]
fn float_mode() {
    let d = dir("float");
    let m = mat(&d, "m.mat", &[&[1, 2], &[3, 4]]);
    let o = run(&["compute", "det", "--mode", "float", &m]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v + 2.0).abs() < 1e-12);
}

#[test]
fn gen_is_reproducible_and_psd() {
    let d = dir("gen");
    let a = d.join("a.mat");
    let b = d.join("b.mat");
    for p in [&a, &b] {
        let o = run(&["gen", "--n", "5", "--kind", "real", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), p.to_str().unwrap());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert_eq!(serialize_matrix(&parse_matrix(&text).unwrap()), text);
    assert!(certify_psd(&read_matrix(&a).unwrap()).unwrap());

    let o = run(&["gen", "--n", "4", "--kind", "hermitian", "--unit-diagonal", "--seed", "3"]);
    let h = parse_matrix(&stdout(&o)).unwrap();
    assert!(h.is_hermitian());
    assert!((0..4).all(|i| *h.get(i, i) == Scalar::one(h.field())));
    assert!(certify_psd(&h).unwrap());
}

#[test]
fn check_examples() {
    let o = run(&["check", "--suite", "identities", "--n-max", "5", "--trials", "50", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("status\tok\n"));

    let o = run(&["check", "--suite", "inequalities", "--n-max", "5", "--trials", "50", "--alpha-set", "theorem2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn check_given_matrix() {
    let d = dir("check-matrix");
    let g = d.join("g.mat");
    run(&["gen", "--n", "4", "--seed", "2", "--out", g.to_str().unwrap()]);
    let o = run(&["check", "--suite", "inequalities", "--trials", "1", "--matrix", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let not_psd = mat(&d, "bad.mat", &[&[1, 2], &[2, 1]]);
    let o = run(&["check", "--suite", "inequalities", "--trials", "1", "--matrix", &not_psd]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hunt_marcus_is_clean_and_reproducible() {
    let d = dir("hunt");
    let mut files = Vec::new();
    for i in 0..2 {
        let out = d.join(format!("f{i}.jsonl"));
        let o = run(&[
            "hunt", "--target", "marcus", "--n", "5", "--alpha-range", "1:2", "--trials", "2000", "--seed", "3", "--keep-smallest", "2",
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("status\tok"));
        assert!(d.join(format!("f{i}.jsonl.marcus.argmin.mat")).exists());
        files.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(String::from_utf8_lossy(&files[0]).lines().count(), 2);
}

#[test]
fn hunt_neg_positivity_is_ungated() {
    let o = run(&["hunt", "--target", "neg-positivity", "--n", "3", "--alpha", "3/2", "--trials", "300", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("regime\tneg-positivity\topen"));
}

#[test]
fn exit_codes() {
    let d = dir("exit");
    let corrupt = d.join("corrupt.mat");
    std::fs::write(&corrupt, "n = 2\nentries = [[\"1\"]]\n").unwrap();
    let o = run(&["compute", "per", corrupt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());

    let o = run(&["check", "--suite", "inequalities", "--matrix", corrupt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    assert_eq!(run(&["compute", "per", d.join("missing.mat").to_str().unwrap()]).status.code(), Some(3));

    let m = mat(&d, "m.mat", &[&[1, 2], &[3, 4]]);
    assert_eq!(run(&["compute", "per-alpha", "--alpha", "x/y", &m]).status.code(), Some(2));
    assert_eq!(run(&["compute", "haf", &m]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["hunt", "--target", "nope", "--n", "3"]).status.code(), Some(2));

    let big = d.join("big.mat");
    run(&["gen", "--n", "6", "--seed", "1", "--out", big.to_str().unwrap()]);
    let o = run(&["--cap-dp", "5", "compute", "per-alpha", "--alpha", "2", big.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let o = bin()
        .env("ALPHAPERM_CAP_HAFNIAN", "2")
        .args(["compute", "haf", &mat(&d, "j4.mat", &[&[1; 4], &[1; 4], &[1; 4], &[1; 4]])])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn bench_prints_a_table() {
    let o = run(&["bench", "--kernel", "dp", "--n-min", "2", "--n-max", "4", "--reps", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kernel\tn\treps\tmean_s\tmin_s");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.split('\t').count() == 5));
}

#[test]
fn hunt_reports_verified_violations() {
    let d = dir("violation");
    let out = d.join("f.jsonl");
    let o = run(&[
        "hunt", "--target", "neg-fischer", "--n", "4", "--alpha-range", "1:2", "--trials", "1500", "--seed", "5", "--kind", "real",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("status\tviolation\n"));
    let text = std::fs::read_to_string(&out).unwrap();
    let first = text.lines().next().expect("a finding");
    let f = alphaperm::hunt::Finding::from_json_line(first).unwrap();
    assert_eq!(f.verified, Some(true));
    let replayed = f.replay(&alphaperm::inequality::Checker::default().oracle()).unwrap();
    assert!(replayed.is_violated());
}
