use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ursell-lab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rgraph_prints_signed_count() {
    let o = run(&["rgraph", data("h2.mg").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "R=-2 partitions=4\n");
}

#[test]
fn two_spin_first_zero_at_half_log_two() {
    let j = (0.5f64 * 2f64.ln()).to_string();
    let o = run(&["zeros", data("twospins.mg").to_str().unwrap(), "--J", &j]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,alpha"));
    let alpha: f64 = lines.next().unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((alpha - std::f64::consts::FRAC_PI_3).abs() < 1e-12);

    let rounded = run(&["zeros", data("twospins.mg").to_str().unwrap(), "--J", "0.3466"]);
    let alpha: f64 = stdout(&rounded).lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((alpha - std::f64::consts::FRAC_PI_3).abs() < 1e-4);
}

#[test]
fn parse_error_names_the_line() {
    let o = run(&["rgraph", data("bad.mg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn coupling_above_cap_is_refused() {
    let o = run(&["scan", data("twospins.mg").to_str().unwrap(), "--to", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ursell_prints_exact_values() {
    let o = run(&["ursell", data("square.mg").to_str().unwrap(), "--edge", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("order=4\n"));
    assert!(text.lines().any(|l| l.starts_with("u=") && l.contains('/')));
}

#[test]
fn out_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for p in [&a, &b] {
        let o = run(&["explore", "--seed", "7", "--count", "15", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let last = String::from_utf8(first).unwrap().lines().last().unwrap().to_string();
    let summary: serde_json::Value = serde_json::from_str(&last).unwrap();
    assert_eq!(summary["summary"]["instances"], 15);
}

#[test]
fn oracle_corpus_agrees() {
    let o = run(&["oracle", "--count", "10"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
}

#[test]
fn verify_reports_every_suite_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["verify", "--count", "20", "--out", out.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("suite") && text.contains("violations") && text.contains("seconds"));
    let again = dir.path().join("again.json");
    run(&["verify", "--count", "20", "--out", again.to_str().unwrap()]);
    let json = std::fs::read_to_string(&out).unwrap();
    assert_eq!(json, std::fs::read_to_string(&again).unwrap());
    let reports: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 11);
    let any_violation = reports.as_array().unwrap().iter().any(|r| {
        r["checks"].as_array().unwrap().iter().any(|c| c["violations"].as_u64().unwrap() > 0)
    });
    // exit status tracks violations
    assert_eq!(o.status.success(), !any_violation);
}
