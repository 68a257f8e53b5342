use std::process::{Command, Output};

use serde_json::Value;

use s4bell::fixtures;
use s4bell_cli::{cmd_verify, BoundMode, VerifyOptions};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_s4bell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    (code(&out), serde_json::from_str(&stdout(&out)).expect("valid json"))
}

fn failed_checks(report: &Value) -> Vec<String> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| !c["pass"].as_bool().unwrap())
        .map(|c| c["name"].as_str().unwrap().to_owned())
        .collect()
}

#[test]
fn verify_passes() {
    let (status, report) = json(&["verify-group", "--format", "json"]);
    assert_eq!(status, 0);
    assert_eq!(report["command"], "verify-group");
    assert_eq!(report["results"]["group_order"], 24);
    assert_eq!(report["results"]["class_sizes"], serde_json::json!([1, 3, 6, 6, 8]));
    assert!(failed_checks(&report).is_empty());
    assert!(report["elapsed"].as_f64().unwrap() >= 0.0);
}

#[test]
fn perturbed_fixture_fails_labelling() {
    let (status, report) = json(&["verify-group", "--format", "json", "--perturb-fixture", "1e-3"]);
    assert_eq!(status, 1);
    assert_eq!(failed_checks(&report), vec!["orbit labelling"]);
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "orbit labelling")
        .unwrap();
    assert!(check["actual"].as_str().unwrap().contains("matches no fixture entry"));

    let (status, _) = json(&["verify-group", "--format", "json", "--perturb-fixture", "1e-12"]);
    assert_eq!(status, 0, "a perturbation inside the matching tolerance is accepted");
}

#[test]
fn verify_in_process() {
    assert!(cmd_verify(VerifyOptions::default()).passed());
    let broken = cmd_verify(VerifyOptions {
        fixture_perturbation: Some(-1e-3),
    });
    assert_eq!(broken.exit_code(), 1);
}

#[test]
fn quantum_bound_text_and_json() {
    let out = run(&["bound", "--quantum"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("lambda_max: 14.036349633\n"), "{text}");
    assert!(text.contains("status: PASS"));

    let (status, report) = json(&["bound", "--quantum", "--format", "json"]);
    assert_eq!(status, 0);
    let lambda = report["results"]["lambda_max"].as_f64().unwrap();
    assert!((lambda - 14.036349632908053).abs() < 1e-12);
    let eig = report["results"]["component_eigenvalues"].as_object().unwrap();
    let dims = report["results"]["component_dimensions"].as_object().unwrap();
    assert_eq!(eig.len(), 4);
    let weighted: f64 = eig
        .iter()
        .map(|(k, v)| v.as_f64().unwrap() * dims[k].as_f64().unwrap())
        .sum();
    assert!((weighted - 48.0).abs() < 1e-9);
}

#[test]
fn json_fields_are_stable() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed");
        v
    };
    let (_, a) = json(&["bound", "--quantum", "--format", "json"]);
    let (_, b) = json(&["bound", "--quantum", "--format", "json"]);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn classical_bound() {
    let (status, report) = json(&["bound", "--classical", "--threads", "4", "--format", "json"]);
    assert_eq!(status, 0);
    assert_eq!(report["results"]["max_c"], 14);
    assert_eq!(report["results"]["argmax_count"], 144);
    let in_process = s4bell_cli::cmd_bound(BoundMode::Classical, 2).unwrap();
    assert!(in_process.passed());
}

#[test]
fn histogram_is_thread_count_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    let many = dir.path().join("many.csv");
    let a = run(&["histogram", "--threads", "1", "--out", one.to_str().unwrap()]);
    let b = run(&["histogram", "--threads", "5", "--out", many.to_str().unwrap()]);
    assert_eq!(code(&a), code(&b));
    let bytes = std::fs::read(&one).unwrap();
    assert_eq!(bytes, std::fs::read(&many).unwrap());

    let csv = String::from_utf8(bytes).unwrap();
    let rows: Vec<(usize, u64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let (c, n) = l.split_once(',').unwrap();
            (c.parse().unwrap(), n.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows.iter().map(|r| r.1).sum::<u64>(), 43_046_721);
    assert_eq!(rows[14], (14, 144));
    assert_eq!(rows[15], (15, 0));
    assert_eq!(rows[16], (16, 0));
}

#[test]
fn histogram_reports_the_table_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let (status, report) = json(&[
        "histogram",
        "--threads",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    let bins = report["results"]["bins"].as_array().unwrap();
    assert_eq!(bins.len(), 17);
    for (c, expected) in fixtures::COEFFICIENT_COUNTS {
        assert_eq!(bins[c as usize]["reference"], expected);
    }
    // The enumeration disagrees with the reference table at c = 12 by 10,
    // which also moves the implied zero bin. Every other bin agrees.
    assert_eq!(failed_checks(&report), vec!["bin c=0", "bin c=12"]);
    assert_eq!(bins[12]["count"], 12_420);
    assert_eq!(bins[0]["count"], 38_025);
    assert_eq!(status, 1);
}

#[test]
fn histogram_to_stdout() {
    let out = run(&["histogram", "--threads", "3"]);
    let text = stdout(&out);
    assert!(text.starts_with("c,count\n0,"));
    assert_eq!(text.lines().count(), 18);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("command: histogram"));
}

#[test]
fn io_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("h.csv");
    assert_eq!(
        code(&run(&["histogram", "--threads", "1", "--out", bad.to_str().unwrap()])),
        2
    );
    assert_eq!(code(&run(&["histogram", "--threads", "0"])), 2);
    assert_eq!(code(&run(&["bound"])), 2);
    assert_eq!(code(&run(&["bound", "--quantum", "--classical"])), 2);
    assert_eq!(code(&run(&["game", "--table", "--quantum"])), 2);
    assert_eq!(code(&run(&["bound", "--quantum", "--format", "yaml"])), 2);
    assert_eq!(code(&run(&["nonsense"])), 2);
    assert!(matches!(
        s4bell_cli::cmd_histogram(0, None),
        Err(s4bell_cli::CliError::InvalidThreads)
    ));
}

#[test]
fn orbit_csv_round_trips() {
    let out = run(&["orbit", "--export", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,alpha,v1,v2,v3"));
    let fixture = fixtures::reference_orbit();
    let mut n = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let i: usize = f[0].parse().unwrap();
        let alpha: usize = f[1].parse().unwrap();
        for k in 0..3 {
            let v: f64 = f[2 + k].parse().unwrap();
            assert!((v - fixture[i - 1][alpha][k]).abs() < 1e-9);
        }
        n += 1;
    }
    assert_eq!(n, 24);

    let (status, report) = json(&["orbit", "--format", "json"]);
    assert_eq!(status, 0);
    assert_eq!(report["results"]["vectors"].as_array().unwrap().len(), 24);
}

#[test]
fn game_modes() {
    let out = run(&["game", "--table"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for (key, answers) in fixtures::WIN_TABLE {
        assert!(text.contains(&format!("    {key} | {answers}\n")), "{key}");
    }

    let (status, report) = json(&["game", "--optimize", "--threads", "2", "--format", "json"]);
    assert_eq!(status, 0);
    assert_eq!(report["results"]["classical_wins"], "14/64");
    assert_eq!(report["results"]["optimal_strategies"], 144);

    let (status, report) = json(&["game", "--quantum", "--format", "json"]);
    assert_eq!(status, 0);
    let p = report["results"]["quantum_win_probability"].as_f64().unwrap();
    assert!((p * 64.0 - 14.036349632908053).abs() < 1e-9);
}
