use std::path::Path;
use std::process::{Command, Output};

fn shadowlp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowlp")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn solve_reports_status_and_value() {
    let dir = tempfile::tempdir().unwrap();
    let opt = write(dir.path(), "opt.json", r#"{"d": 2, "n": 3, "A": [[1, 0], [0, 1], [-1, -1]], "b": [1, 1, 1], "z": [1, 1]}"#);
    let out = shadowlp(&["solve", &opt]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["status"], "optimal");
    assert!((v["objective"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["basis"], serde_json::json!([0, 1]));

    let inf = write(dir.path(), "inf.json", r#"{"d": 2, "n": 3, "A": [[1, 0], [-1, 0], [0, 1]], "b": [-3, -3, 1], "z": [0, 1]}"#);
    let out = shadowlp(&["solve", &inf]);
    assert!(out.status.success());
    assert_eq!(json(&out)["status"], "infeasible");

    let unb = write(dir.path(), "unb.json", r#"{"d": 2, "n": 3, "A": [[-1, 0], [0, 1], [0, -1]], "b": [1, 1, 1], "z": [1, 0]}"#);
    assert_eq!(json(&shadowlp(&["solve", &unb]))["status"], "unbounded");
}

#[test]
fn malformed_instances_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cut = write(dir.path(), "cut.json", r#"{"d": 2, "n": 3, "A": [[1, 0"#);
    let out = shadowlp(&["solve", &cut]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column"));
    let ragged = write(dir.path(), "ragged.json", r#"{"d": 2, "n": 2, "A": [[1, 0], [0, 1]], "b": [1, 1], "z": [1, 1]}"#);
    assert_eq!(shadowlp(&["solve", &ragged]).status.code(), Some(2));
}

fn strip_timing(csv: &str) -> String {
    csv.lines().map(|l| l.rsplit_once(',').unwrap().0).collect::<Vec<_>>().join("\n")
}

#[test]
fn pivot_experiment_writes_trial_and_aggregate_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"n": [20], "d": [3], "sigma": [0.1], "trials": 1, "seed": 5}"#);
    let out = shadowlp(&["experiment-pivots", "--config", &cfg]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("schema,kind,n,d,sigma,trial,seed,status,"));
    assert!(lines[1].starts_with("pivots/v1,trial,20,3,0.1,0,"));
    assert!(lines[2].starts_with("pivots/v1,aggregate,20,3,0.1,,,ok 1/1,"));
}

#[test]
fn experiments_are_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"n": [16, 32], "d": [2, 3], "sigma": [0.1], "trials": 3}"#);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let out = shadowlp(&["--threads", threads, "experiment-pivots", "--config", &cfg, "--seed", "9", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (a, b) = (std::fs::read_to_string(a).unwrap(), std::fs::read_to_string(b).unwrap());
    assert_eq!(strip_timing(&a), strip_timing(&b));
    assert_eq!(a.lines().count(), 1 + 4 * 4);
}

#[test]
fn section_experiment_counts_edges() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"n": [50], "d": [2, 3], "sigma": [1.0], "trials": 2, "centers": "origin"}"#);
    let out = shadowlp(&["experiment-sections", "--config", &cfg]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("schema,kind,n,d,sigma,trial,seed,status,degenerate,edge_count,"));
    for row in text.lines().skip(1).filter(|l| l.contains(",trial,")) {
        let edges: f64 = row.split(',').nth(9).unwrap().parse().unwrap();
        assert!(edges >= 3.0, "{row}");
    }
}

#[test]
fn bad_config_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"n": [3], "d": [3], "sigma": [0.1], "trials": 1}"#);
    assert_eq!(shadowlp(&["experiment-pivots", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn verify_emits_a_summary_per_suite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "verify.json",
        r#"{"oracle_instances": 20, "phase1_instances": 4, "phase1_draws_per_instance": 10, "pivot_ns": [16, 64, 256],
            "pivot_trials": 10, "section_instances": 10, "hull_ns": [20, 400], "hull_trials": 5, "angle_configs": 100, "polygons": 10}"#,
    );
    let out = shadowlp(&["verify", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 8);
    assert!(suites.iter().all(|s| s["checked"].as_u64().unwrap() > 0));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().filter(|l| l.starts_with("[PASS]")).count(), 8);
}
