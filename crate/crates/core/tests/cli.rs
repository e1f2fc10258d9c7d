use std::process::{Command, Output};

use gaussmap::verify::{ScanReport, VerificationReport, FORMAT_VERSION};

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gaussmap"));
    cmd.args(args).env_remove("GAUSSMAP_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn report(out: &Output) -> VerificationReport {
    serde_json::from_slice(&out.stdout).expect("report parses")
}

#[test]
fn full_suite_is_byte_identical_across_runs() {
    let a = run(&["verify", "all", "--seed", "42"], &[]);
    let b = run(&["verify", "all", "--seed", "42"], &[]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r.format_version, FORMAT_VERSION);
    assert_eq!(r.format_version, "gaussmap-report/1");
    assert_eq!(r.seed, 42);
    assert!(!r.run_id.is_empty());
}

#[test]
fn schema_fields_are_present() {
    let out = run(&["verify", "isorn-spectrum", "--example", "clifford(1,2)"], &[]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["format_version", "run_id", "seed", "tolerance_profile", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let rec = &v["checks"][0];
    for key in ["check_id", "example", "params", "samples", "max_residual", "verdict"] {
        assert!(rec.get(key).is_some(), "missing {key}");
    }
    assert_eq!(rec["check_id"], "isorn-spectrum");
    assert_eq!(rec["verdict"], "pass");
    let l0 = rec["details"]["eigenvalue[0]"].as_f64().unwrap();
    let l1 = rec["details"]["eigenvalue[1]"].as_f64().unwrap();
    assert!((l0 - 2.0).abs() < 1e-12 && (l1 - 2.0).abs() < 1e-12);
}

#[test]
fn seed_precedence() {
    let env = run(&["verify", "n2eta"], &[("GAUSSMAP_SEED", "7")]);
    assert_eq!(report(&env).seed, 7);
    let flag = run(&["verify", "n2eta", "--seed", "9"], &[("GAUSSMAP_SEED", "7")]);
    assert_eq!(report(&flag).seed, 9);
    let default = run(&["verify", "n2eta"], &[]);
    assert_eq!(report(&default).seed, 42);
    assert_ne!(report(&env).run_id, report(&default).run_id);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "no-such-check"], &[]).status.code(), Some(2));
    assert_eq!(run(&["verify", "n2eta", "--example", "nowhere"], &[]).status.code(), Some(2));
    assert_eq!(run(&["verify", "n2eta", "--example", "circles(1.5)"], &[]).status.code(), Some(2));
    assert_eq!(run(&["verify", "n2eta", "--param", "bogus=1"], &[]).status.code(), Some(2));
    assert_eq!(run(&["verify", "n2eta", "--tol", "nope"], &[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], &[]).status.code(), Some(2));
    // a negative control judged as a positive claim fails
    let fail = run(
        &["verify", "harm-theta", "--example", "circles(0.6)", "--param", "theta=0.5"],
        &[],
    );
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(report(&fail).checks[0].verdict.as_str(), "fail");
    // fail-expected records do not fail the run
    let neg = run(&["verify", "euler-lagrange", "--example", "perturbed(0.6,0.03)"], &[]);
    assert_eq!(neg.status.code(), Some(0));
    assert_eq!(report(&neg).checks[0].verdict.as_str(), "fail-expected");
}

#[test]
fn io_errors_carry_the_path() {
    let out = run(&["verify", "n2eta", "--out", "/nonexistent-dir/r.json"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/r.json"));
}

#[test]
fn out_file_and_csv_projection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = run(
        &["verify", "harm-theta", "--format", "csv", "--out", path.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let json = report(&run(&["verify", "harm-theta"], &[]));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "check_id");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), json.checks.len());
    for (row, rec) in rows.iter().zip(&json.checks) {
        assert_eq!(&row[2], rec.subject);
        assert_eq!(&row[8], rec.verdict.as_str());
        assert_eq!(row[5].parse::<f64>().unwrap(), rec.max_residual);
    }
}

#[test]
fn one_point_scan_reproduces_verify() {
    let scan = run(
        &["scan", "harm-theta", "--example", "circles({r})", "--grid", "r=0.6"],
        &[],
    );
    assert_eq!(scan.status.code(), Some(0));
    let s: ScanReport = serde_json::from_slice(&scan.stdout).unwrap();
    let v = report(&run(&["verify", "harm-theta", "--example", "circles(0.6)"], &[]));
    let recs: Vec<_> = s.rows.iter().map(|r| r.record.clone()).collect();
    assert_eq!(recs, v.checks);
}

#[test]
fn scan_over_radii_follows_the_angle_curve() {
    let out = run(
        &["scan", "classification-scan", "--example", "circles({r})", "--grid", "r=0.3:0.8:6"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let s: ScanReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(s.rows.len(), 6);
    for row in &s.rows {
        let r: f64 = row.grid["r"].parse().unwrap();
        let rec = &row.record;
        assert!(rec.max_residual <= 1e-8);
        let theta = rec.details["best_theta"];
        // cot θ − tan θ = (1 − 2r²)/(r√(1 − r²))
        let want = (1.0 - 2.0 * r * r) / (r * (1.0 - r * r).sqrt());
        assert!((1.0 / theta.tan() - theta.tan() - want).abs() <= 1e-8, "r = {r}");
    }
}

#[test]
fn empty_grid_is_a_usage_error() {
    assert_eq!(run(&["scan", "n2eta", "--grid", ""], &[]).status.code(), Some(2));
    assert_eq!(run(&["scan", "n2eta", "--grid", "r=1:2:0"], &[]).status.code(), Some(2));
}

#[test]
fn list_names_every_check() {
    let out = run(&["list"], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    for c in gaussmap::verify::CheckId::ALL {
        assert!(text.contains(c.name()));
    }
    assert!(text.contains("circles(r)") && text.contains("veronese"));
}
