//! Black-box checks of the command-line interface: output formats, config
//! file plumbing, and exit codes.

use std::process::Command;

fn casimir(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .output()
        .expect("failed to launch binary")
}

#[test]
fn dce1d_emits_csv_with_expected_columns() {
    let out = casimir(&["dce1d", "--tau", "0:6:5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "tau,renyi_exact,renyi_asymp1,renyi_asymp2,entropy_exact,entropy_asymp"
    );
    assert_eq!(lines.count(), 5);
    assert!(!text.contains('\r'), "LF line endings only");
}

#[test]
fn sumrules_emits_json_report() {
    let out = casimir(&["sumrules", "--tau", "0.5", "--nmax", "11,21,41"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["config"]["scenario"], "sumrules");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    let residuals: Vec<f64> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[1].as_f64().unwrap())
        .collect();
    assert!(residuals.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn config_file_is_read_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "scenario = dce1d\ngrid = 0:6:4\nformat = json\n").unwrap();
    let out = casimir(&["dce1d", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);

    // the flag takes precedence over the file value
    let out = casimir(&["dce1d", "--config", path.to_str().unwrap(), "--tau", "0:6:7"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let piped = casimir(&["dce1d", "--tau", "0:2:5"]);
    let to_file = casimir(&["dce1d", "--tau", "0:2:5", "--out", path.to_str().unwrap()]);
    assert!(piped.status.success() && to_file.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), piped.stdout);
}

#[test]
fn invalid_configs_exit_with_2() {
    for args in [
        vec!["dce1d", "--tau", "6:0:5"],
        vec!["dce1d", "--tau", "0:6:1"],
        vec!["dce-nd", "--L", "1", "--time", "0:10:3"],
        vec!["dce1d", "--epsilon", "2.0"],
        vec!["compare", "--target", "lyapunov"],
    ] {
        let out = casimir(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn thread_cap_is_validated_and_respected() {
    let out = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["dce1d", "--tau", "0:6:5"])
        .env("CASIMIR_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let single = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["dce1d", "--tau", "0:6:50"])
        .env("CASIMIR_THREADS", "1")
        .output()
        .unwrap();
    let parallel = casimir(&["dce1d", "--tau", "0:6:50"]);
    assert!(single.status.success());
    assert_eq!(single.stdout, parallel.stdout, "worker count must not change results");
}

#[test]
fn mathieu_table_tracks_the_envelope() {
    let out = casimir(&["mathieu", "--L", "1,1", "--epsilon", "0.01", "--time", "0:150:20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let (beta, sinh_env) = (fields[2], fields[4]);
        assert!((beta - sinh_env).abs() < 3e-3 + 0.03 * sinh_env);
    }
}
