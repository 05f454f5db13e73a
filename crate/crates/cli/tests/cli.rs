use std::io::Write;
use std::process::{Command, Output, Stdio};

fn dc(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn pipeline(gen: &[&str], last: &[&str]) -> Output {
    let program = dc(gen, "");
    assert_eq!(program.status.code(), Some(0));
    let theory = dc(&["ground", "-"], &stdout(&program));
    assert_eq!(
        theory.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&theory.stderr)
    );
    dc(last, &stdout(&theory))
}

const TRIANGLE: &str = "dc 1.0
#atoms c: hc(1,2) hc(2,3) hc(3,1)
#atoms h: vstd(1) vstd(2) vstd(3)
h: hc(1,2) -> vstd(2)
h: vstd(2) hc(2,3) -> vstd(3)
h: vstd(3) hc(3,1) -> vstd(1)
p: vstd(1)
p: vstd(2)
p: vstd(3)
";

#[test]
fn contradiction_exits_20_without_values() {
    let o = dc(
        &["solve", "-"],
        "dc 1.0\n#atoms c: a\n#atoms h:\nc: a\nc: -a\n",
    );
    assert_eq!(o.status.code(), Some(20));
    let out = stdout(&o);
    assert!(out.starts_with("s UNSAT\n"));
    assert!(!out.lines().any(|l| l.starts_with("v ")));
}

#[test]
fn triangle_solves_and_verifies() {
    let dir = std::env::temp_dir().join(format!("dc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let theory = dir.join("triangle.dc");
    std::fs::write(&theory, TRIANGLE).unwrap();
    let theory = theory.to_str().unwrap();

    let solved = dc(&["solve", theory, "--quiet"], "");
    assert_eq!(solved.status.code(), Some(10));
    assert_eq!(stdout(&solved), "s SAT\nv hc(1,2)\nv hc(2,3)\nv hc(3,1)\n");

    let verified = dc(&["verify", theory, "-"], &stdout(&solved));
    assert_eq!(verified.status.code(), Some(10));
    assert!(stdout(&verified).starts_with("s VERIFIED\nc derived vstd(1)\n"));

    let refuted = dc(&["verify", theory, "-"], "hc(1,2) hc(2,3)\n");
    assert_eq!(refuted.status.code(), Some(20));
    assert!(stdout(&refuted).starts_with("s REFUTED\n"));

    let unknown = dc(&["verify", theory, "-"], "vstd(1)\n");
    assert_eq!(unknown.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn schur_pipeline() {
    assert_eq!(
        pipeline(&["gen", "schur", "3", "14"], &["solve", "-"])
            .status
            .code(),
        Some(20)
    );
    assert_eq!(
        pipeline(&["gen", "schur", "3", "13"], &["solve", "-"])
            .status
            .code(),
        Some(10)
    );
}

#[test]
fn enumerate_prints_one_line_per_answer_set() {
    let o = pipeline(
        &["gen", "pigeonhole", "3", "3"],
        &["enumerate", "-", "--no-timing"],
    );
    assert_eq!(o.status.code(), Some(10));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("a ")).count(), 6);
    assert!(out.contains("c answer_sets: 6\n"));
    let two = pipeline(
        &["gen", "pigeonhole", "3", "3"],
        &["enumerate", "-", "-k", "2"],
    );
    assert_eq!(
        stdout(&two).lines().filter(|l| l.starts_with("a ")).count(),
        2
    );
}

#[test]
fn stats_json_is_well_formed() {
    let o = pipeline(&["gen", "nqueens", "6"], &["solve", "-", "--stats-json"]);
    assert_eq!(o.status.code(), Some(10));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "SAT");
    assert_eq!(v["answer_sets"][0].as_array().unwrap().len(), 6);
    assert_eq!(v["theory"]["atoms"], 36);
    assert!(v["elapsed_ms"].is_number());
    let quiet = pipeline(
        &["gen", "nqueens", "6"],
        &["solve", "-", "--stats-json", "--no-timing"],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&quiet)).unwrap();
    assert!(v["elapsed_ms"].is_null());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = pipeline(
        &["gen", "hamilton", "12", "40", "--seed", "5"],
        &["solve", "-", "--no-timing"],
    );
    let b = pipeline(
        &["gen", "hamilton", "12", "40", "--seed", "5"],
        &["solve", "-", "--no-timing"],
    );
    assert_eq!(a.stdout, b.stdout);
    assert!(matches!(a.status.code(), Some(10 | 20)));
}

#[test]
fn decision_limit_reports_unknown() {
    let o = pipeline(
        &["gen", "pigeonhole", "7", "6"],
        &["solve", "-", "--max-decisions", "1"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("s UNKNOWN\n"));
}

#[test]
fn bench_writes_csv() {
    let o = dc(&["bench", "schur", "--sizes", "5..7", "--no-timing"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("family,size,seed,status,decisions,millis")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows
        .iter()
        .all(|r| r.starts_with("schur,") && r.ends_with(",0") && r.contains(",SAT,")));
    let edges = dc(
        &[
            "bench", "hamilton", "--sizes", "6", "--count", "3", "--edges", "15",
        ],
        "",
    );
    assert_eq!(edges.status.code(), Some(0));
    assert_eq!(stdout(&edges).lines().count(), 4);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(dc(&["solve"], "").status.code(), Some(1));
    assert_eq!(dc(&["frobnicate"], "").status.code(), Some(1));
    assert_eq!(
        dc(&["solve", "-", "--lookahead", "0"], "").status.code(),
        Some(1)
    );
    assert_eq!(dc(&["--help"], "").status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let o = dc(&["solve", "-"], "dc 1.0\nc: zz\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("-:2:"));
    assert_eq!(dc(&["ground", "-"], "c: p(X).\n").status.code(), Some(2));
    assert_eq!(
        dc(&["solve", "/nonexistent/theory.dc"], "").status.code(),
        Some(2)
    );
    assert_eq!(
        dc(&["gen", "hamilton", "3", "7"], "").status.code(),
        Some(2)
    );
}

#[test]
fn generated_graphs_can_be_read_back() {
    let dir = std::env::temp_dir().join(format!("dc-graph-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let g = dir.join("k4.txt");
    std::fs::write(&g, "% K4\n4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n").unwrap();
    let o = pipeline(
        &["gen", "coloring", "3", "--graph", g.to_str().unwrap()],
        &["solve", "-"],
    );
    assert_eq!(o.status.code(), Some(20));
    std::fs::remove_dir_all(&dir).unwrap();
}
