use std::path::Path;

use kahler_sobolev::cli::run_with;
use serde_json::Value;

fn ksl(args: &[&str], out: &Path) -> (i32, String, String) {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv = std::iter::once("ksl").chain(args.iter().copied());
    let code = run_with(argv, Some(out.to_path_buf()), &mut stdout, &mut stderr);
    (code, String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

/// The report without its header, re-serialized.
fn payload(json: &str) -> String {
    let mut v: Value = serde_json::from_str(json).unwrap();
    let header = v.as_object_mut().unwrap().shift_remove("header").expect("header present");
    assert!(header.get("timestamp").is_some());
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

#[test]
fn constants_golden() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = ksl(&["constants", "--n", "2", "--q", "2"], dir.path());
    assert_eq!(code, 0);
    let written = std::fs::read_to_string(dir.path().join("constants.json")).unwrap();
    assert_eq!(written, stdout);
    let golden = include_str!("golden/constants_n2_q2.json");
    assert_eq!(payload(&stdout), golden);
}

#[test]
fn interval_csv_golden() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = ksl(&["interval", "--n", "2,3", "--q", "1.5,2", "--format", "csv"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(stdout, include_str!("golden/interval.csv"));
    assert!(dir.path().join("interval.csv").exists());
}

#[test]
fn same_seed_same_payload() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["all", "--seed", "11", "--count", "3", "--L", "10"];
    let (ca, ra, _) = ksl(&args, a.path());
    let (cb, rb, _) = ksl(&args, b.path());
    assert_eq!((ca, cb), (0, 0));
    assert_eq!(payload(&ra), payload(&rb));
}

#[test]
fn every_chain_step_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = ksl(&["algebra-verify"], dir.path());
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let results = v["results"].as_object().unwrap();
    let statuses: Vec<_> = results.iter().filter(|(k, _)| k.ends_with(".status")).collect();
    assert!(statuses.iter().any(|(k, _)| k.starts_with("algebra.section2.step5")));
    assert!(statuses.iter().any(|(k, _)| k.starts_with("algebra.section3.")));
    assert!(statuses.iter().all(|(_, s)| *s == "pass"));
}

#[test]
fn pde_solve_reports_constant() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, stderr) = ksl(&["pde-solve", "--lambda", "0.4", "--q", "2", "--L", "16", "--seed", "7"], dir.path());
    assert_eq!(code, 0, "{stderr}");
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["results"]["pde.summary"], "constant solution 0.400000");
    assert!(stderr.contains("constant solution 0.400000"));
}

#[test]
fn domain_errors_are_reported_not_raised() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, stderr) = ksl(&["constants", "--n", "2", "--q", "5"], dir.path());
    assert_eq!(code, 1);
    let msg = "domain error: q = 5 exceeds the critical exponent (n+1)/(n-1) = 3 for n = 2";
    assert!(stderr.contains(msg));
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["errors"][0], msg);
    assert_eq!(v["passed"], false);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ksl(&["frobnicate"], dir.path()).0, 2);
    assert_eq!(ksl(&["constants", "--n", "two"], dir.path()).0, 2);
    assert_eq!(ksl(&["optimize-k", "--k", "maybe"], dir.path()).0, 2);
    let (code, stdout, _) = ksl(&["--help"], dir.path());
    assert_eq!(code, 0);
    assert!(stdout.contains("sphere-verify"));
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "n = 3\nq = 1.5\nformat = csv\n").unwrap();
    let (code, stdout, _) = ksl(&["constants", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code, 0);
    assert!(stdout.starts_with("table,n,q,c_s"));
    assert!(stdout.contains("constants,3,1.5,"));
}
