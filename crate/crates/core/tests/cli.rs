use std::process::{Command, Output};

fn freelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freelab")).args(args).output().expect("binary runs")
}

#[test]
fn passing_run_prints_json_report() {
    let out = freelab(&["moments", "--m", "2,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "moments");
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["orders"], serde_json::json!([2, 4]));
}

#[test]
fn exit_codes() {
    // numeric failure: quadrature cannot resolve a moment of order 1000
    let out = freelab(&["moments", "--m", "1000"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("numeric failure"));

    for args in [&["moments", "--radius", "0"][..], &["bogus"], &["rmt", "--trials"], &["matdist", "--N", "30", "--k", "4"]] {
        let out = freelab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }

    let out = freelab(&["freeness", "--n", "4", "--L", "9"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource guard"));
}

#[test]
fn out_flag_writes_file_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = freelab(&["--format", "csv", "--out", path.to_str().unwrap(), "matdist", "--N", "32", "--k", "1,4", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    assert_eq!(lines.next(), Some("n,N,k,trials,seed,stat,value,bound,pass"));
    assert_eq!(lines.count(), 8);

    let bad = dir.path().join("no/such/dir/r.json");
    let out = freelab(&["--out", bad.to_str().unwrap(), "moments"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["rmt", "--n", "2", "--N", "16", "--trials", "4", "--seed", "123"][..],
        &["--format", "csv", "perturb", "--r", "0.05", "--K", "10", "--N", "16", "--trials", "4"],
        &["fgroup", "--trials", "30"],
    ] {
        let a = freelab(args);
        let b = freelab(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = freelab(&["rmt", "--n", "2", "--N", "16", "--trials", "4", "--seed", "1"]);
    let b = freelab(&["rmt", "--n", "2", "--N", "16", "--trials", "4", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn seed_is_recorded() {
    let out = freelab(&["fgroup", "--trials", "3", "--seed", "99"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 99);
    let out = freelab(&["fgroup", "--trials", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], freelab::commands::DEFAULT_SEED);
}
