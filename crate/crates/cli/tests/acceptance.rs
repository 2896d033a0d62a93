//! Acceptance criteria AC1–AC8, one line each. AC1–AC7 drive the library
//! through the testkit; AC8 runs the binary. Runs without the libtest harness
//! so the lines are never captured.

use std::process::{Command, ExitCode};
use std::time::Instant;

use fames_testkit::acceptance::{self, Outcome};

const RUNS: &[&[&str]] = &[
    &["check", "--domain", "loan.fth", "--notion", "ftu-dp", "--plan", "approve(n);approve(nprime)", "--goal", "hasLoan(x)", "--protected", "Male"],
    &["check", "--domain", "loan.fth", "--notion", "ftu-dp", "--plan", "isMale(n);approve(n);approve(nprime)", "--goal", "hasLoan(x)", "--protected", "Male"],
    &["check", "--domain", "loan.fth", "--notion", "eo", "--plan", "promote(n);promote(nprime)", "--goal", "highSalary(x)", "--protected", "Male", "--criterion", "Eligible"],
    &["check", "--domain", "loan.fth", "--notion", "cf", "--plan", "promote(nprime)", "--goal", "highSalary(nprime)", "--protected", "Male", "--individual", "nprime"],
    &["check", "--domain", "loan-make.fth", "--notion", "equitable-ftu", "--plan", "promote(n);promote(nprime)", "--goal", "forall x. highSalary(x)", "--protected", "Male", "--property", "Eligible"],
    &["check", "--domain", "loan.fth", "--notion", "weak-equity", "--protected", "Male", "--property", "Eligible"],
    &["check", "--domain", "loan.fth", "--notion", "eo", "--goal", "hasLoan(x)", "--protected", "Male"],
    &["plan", "--domain", "loan.fth", "--notion", "dp", "--goal", "hasLoan(x)", "--protected", "Male", "--horizon", "2", "--max-results", "5"],
    &["plan", "--domain", "loan.fth", "--notion", "dp", "--goal", "hasLoan(x)", "--protected", "Male", "--horizon", "9"],
    &["worlds", "--domain", "loan.fth", "--after", "isMale(n);approve(n)"],
    &["forget", "--domain", "loan.fth", "--atoms", "Eligible(n),Eligible(nprime)"],
    &["proxy", "--domain", "loan-eton.fth", "--protected", "Male"],
];

fn run(args: &[&str]) -> (Option<i32>, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_fames"))
        .args(args)
        .arg("--json")
        .env_remove("FAMES_ATOM_CAP")
        .output()
        .expect("binary runs");
    let out = String::from_utf8(o.stdout).unwrap();
    let stable: Vec<&str> = out.lines().filter(|l| !l.trim_start().starts_with("\"timing_ms\"")).collect();
    (o.status.code(), stable.join("\n"), String::from_utf8(o.stderr).unwrap())
}

fn ac8_determinism() -> Outcome {
    for args in RUNS {
        let first = run(args);
        for _ in 0..2 {
            if run(args) != first {
                return Err(format!("output differs between runs of `fames {}`", args.join(" ")));
            }
        }
    }
    Ok(format!("{} commands, 3 runs each, identical modulo timing", RUNS.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("AC1", acceptance::ac1_examples),
        ("AC2", acceptance::ac2_validities),
        ("AC3", acceptance::ac3_only_knowing),
        ("AC4", acceptance::ac4_forgetting),
        ("AC5", acceptance::ac5_oracle),
        ("AC6", acceptance::ac6_checker_formulas),
        ("AC7", acceptance::ac7_search),
        ("AC8", ac8_determinism),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("{name} pass: {msg} ({secs:.2}s)"),
            Err(msg) => {
                println!("{name} FAIL: {msg} ({secs:.2}s)");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {failed:?}");
        ExitCode::FAILURE
    }
}
