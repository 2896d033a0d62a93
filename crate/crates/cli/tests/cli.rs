//! End-to-end runs of the binary on the bundled theories, one per exit path.

use std::process::{Command, Output};

fn fames(args: &[&str]) -> Output {
    fames_env(args, &[])
}

fn fames_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fames"));
    cmd.args(args).env_remove("FAMES_ATOM_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const LOAN_DP: &[&str] = &["--domain", "loan.fth", "--goal", "hasLoan(x)", "--protected", "Male"];

fn check(notion: &str, plan: &str, extra: &[&str]) -> Output {
    let mut args = vec!["check", "--notion", notion, "--plan", plan];
    args.extend_from_slice(LOAN_DP);
    args.extend_from_slice(extra);
    fames(&args)
}

#[test]
fn check_holds_exits_zero() {
    let o = check("ftu-dp", "approve(n);approve(nprime)", &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("HOLDS ftu-dp"));
}

#[test]
fn check_fails_names_prefix_and_attribute() {
    let o = check("ftu-dp", "isMale(n);approve(n);approve(nprime)", &["--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["holds"], false);
    assert_eq!(verdict["failing_prefix"], serde_json::json!(["isMale(n)"]));
    assert!(verdict["detail"].as_str().unwrap().contains("Male(n)"));
    assert_eq!(verdict["counterexample_world"]["Male(n)"], true);
}

#[test]
fn eo_without_criterion_is_a_usage_error() {
    let o = check("eo", "", &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("criterion"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn eo_reports_its_reading() {
    let o = check("eo", "approve(n);approve(nprime)", &["--criterion", "Eligible", "--eo-reading", "literal", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdicts"][0]["reading"], "literal");
}

#[test]
fn clap_usage_errors_exit_two() {
    assert_eq!(code(&fames(&["check", "--domain", "loan.fth"])), 2);
    assert_eq!(code(&check("nonsense", "", &[])), 2);
    assert_eq!(code(&check("eo", "", &["--criterion", "Eligible", "--eo-reading", "maybe"])), 2);
    assert_eq!(code(&fames(&["frobnicate"])), 2);
}

#[test]
fn parse_errors_are_located_on_stderr() {
    let o = check("ftu-dp", "approve(n", &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("--plan:1:"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fth");
    std::fs::write(&bad, format!("{}\nrigid Tall(\n", fames_core::bundled::LOAN)).unwrap();
    let o = fames(&["worlds", "--domain", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad.fth:"), "{}", stderr(&o));
}

#[test]
fn theory_files_load_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.fth");
    std::fs::write(&path, fames_core::bundled::LOAN).unwrap();
    let o = fames(&["worlds", "--domain", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("|W0|=16 |E|=64"));
}

#[test]
fn unknown_domain_exits_two() {
    assert_eq!(code(&fames(&["worlds", "--domain", "no-such-theory.fth"])), 2);
}

#[test]
fn plan_found_exits_zero() {
    let mut args = vec!["plan", "--notion", "dp", "--horizon", "2", "--json"];
    args.extend_from_slice(LOAN_DP);
    let o = fames(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let plan = v["verdicts"][0]["plan"].as_array().unwrap();
    assert_eq!(plan.len(), 2);
    assert!(plan.iter().all(|a| a.as_str().unwrap().starts_with("approve(")));
}

#[test]
fn plan_not_found_exits_one() {
    let mut args = vec!["plan", "--notion", "dp", "--horizon", "0"];
    args.extend_from_slice(LOAN_DP);
    let o = fames(&args);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "no plan found\n");
}

#[test]
fn over_budget_horizon_exits_three() {
    let mut args = vec!["plan", "--notion", "dp", "--horizon", "9"];
    args.extend_from_slice(LOAN_DP);
    let o = fames(&args);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("resource limit"));
}

#[test]
fn atom_cap_from_environment() {
    let o = fames_env(&["worlds", "--domain", "loan.fth"], &[("FAMES_ATOM_CAP", "4")]);
    assert_eq!(code(&o), 3);
    let o = fames_env(&["worlds", "--domain", "loan.fth"], &[("FAMES_ATOM_CAP", "lots")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn worlds_counts() {
    let o = fames(&["worlds", "--domain", "loan.fth"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("|W0|=16 |E|=64\n"));
    let o = fames(&["worlds", "--domain", "loan.fth", "--after", "isMale(n)", "--world", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["actual_world"], 3);
    // sensing Male(n) halves the 64 worlds the agent considers possible
    assert_eq!(v["result"]["compatible"], 32);
    assert_eq!(code(&fames(&["worlds", "--domain", "loan.fth", "--world", "16"])), 2);
}

#[test]
fn forget_drops_the_conjunct() {
    let o = fames(&["forget", "--domain", "loan.fth", "--atoms", "Male(n)", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let init = v["result"]["init_true"].as_str().unwrap();
    assert!(!init.contains("Male(n)"), "{init}");
    assert!(init.contains("Male(nprime)"));
    assert_eq!(v["result"]["w0_after"], 32);
    assert_eq!(code(&fames(&["forget", "--domain", "loan.fth", "--atoms", "Tall(n)"])), 2);
}

#[test]
fn proxy_lists_eton() {
    let o = fames(&["proxy", "--domain", "loan-eton.fth", "--protected", "Male"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "EtonForBoys"));
    assert_eq!(code(&fames(&["proxy", "--domain", "loan.fth", "--protected", "Tall"])), 2);
}

#[test]
fn json_field_order_is_fixed() {
    let o = check("ftu-dp", "", &["--json"]);
    let s = stdout(&o);
    let keys = ["\"version\"", "\"domain\"", "\"command\"", "\"verdicts\"", "\"warnings\"", "\"timing_ms\""];
    let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap_or_else(|| panic!("{k} missing"))).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{s}");
}
