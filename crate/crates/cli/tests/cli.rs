use std::process::Command;

fn toolkit(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_renyi-toolkit")).args(args).output().unwrap()
}

#[test]
fn divergence_subcommand_reports_every_trial() {
    let out = toolkit(&["divergence", "--alpha", "0.5", "--dims", "2", "--trials", "100", "--check", "sandwich"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema_version"], 1);
    let check = &report["checks"][0];
    assert_eq!(check["check"], "sandwich");
    assert_eq!(check["rows"].as_array().unwrap().len(), 100);
    assert_eq!(check["failures"], 0);
}

#[test]
fn csv_report_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pgm.csv");
    let out = toolkit(&[
        "pgm", "--trials", "4", "--dims", "2x2", "--check", "pgm_identity,guessing_chain", "--format", "csv",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS  pgm_identity"));
}

#[test]
fn check_failures_exit_one() {
    // generic states never admit the explicit certificate
    let out = toolkit(&["fidelity", "--check", "certificate", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL  certificate"));
}

#[test]
fn bad_arguments_exit_two() {
    let out = toolkit(&["divergence", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    for args in [
        &["divergence", "--trials", "0"][..],
        &["divergence", "--check", "pgm_identity"],
        &["suite", "--check", "nope"],
        &["entropy", "--dims", "2xq"],
        &["sdp", "--format", "xml"],
        &["suite", "--tolerance", "sandwich"],
        &["frobnicate"],
    ] {
        assert_eq!(toolkit(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn suite_runs_listed_checks_with_infinite_orders() {
    let out = toolkit(&["suite", "--check", "duality", "--alpha", "0.5,inf", "--trials", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"][0]["alphas"][1], "inf");
}
