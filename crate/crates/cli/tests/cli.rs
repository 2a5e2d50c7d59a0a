use std::process::{Command, Output};

fn degzero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degzero"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn wg_text() {
    let o = degzero(&["wg", "-g", "2", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(1/480)*V3*V1^-1 + (-11/5760)*V2^2*V1^-2\n");
}

#[test]
fn wg_json_and_formulas() {
    let a = degzero(&["wg", "-g", "3", "--format", "json"]);
    let b = degzero(&[
        "wg",
        "-g",
        "3",
        "--format",
        "json",
        "--formula",
        "equivalent",
    ]);
    let ja: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let jb: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(ja["g"], 3);
    assert_eq!(ja["formula"], "theorem1");
    assert_eq!(jb["formula"], "equivalent");
    assert_eq!(ja["W"], jb["W"]);
    assert_eq!(ja["W"].as_array().unwrap().len(), 5);
}

#[test]
fn theorem_a_and_constants() {
    assert_eq!(stdout(&degzero(&["theorem-a", "-g", "3"])), "41/580608\n");
    assert_eq!(
        stdout(&degzero(&["constants", "--partition", "2"])),
        "7/5760\n"
    );
    assert_eq!(
        stdout(&degzero(&["constants", "--partition", "1 1"])),
        "0\n"
    );
    assert_eq!(
        stdout(&degzero(&["constants", "--partition", "4"])),
        "-31/967680\n"
    );
}

#[test]
fn hodge_csv_and_fe_json() {
    let o = degzero(&[
        "hodge",
        "-g",
        "2",
        "--class",
        "lambda_gm1",
        "--max-points",
        "2",
    ]);
    assert!(stdout(&o).starts_with("g,class,indices,value\n2,lambda_gm1,3,1/480\n"));
    let o = degzero(&[
        "fe",
        "-g",
        "2",
        "--target-genus",
        "0",
        "--order",
        "3",
        "--max-index",
        "3",
    ]);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["order"], 3);
    assert!(j["terms"]
        .as_array()
        .unwrap()
        .iter()
        .any(|t| t["monomial"] == "Q2" && t["value"] == "7/5760"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(degzero(&["wg", "-g", "1"]).status.code(), Some(2));
    assert_eq!(
        degzero(&["wg", "-g", "2", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        degzero(&["hodge", "-g", "2", "--class", "lambda_x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        degzero(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        degzero(&["constants", "--partition", "0 2"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_all_reports_each_suite() {
    let o = degzero(&["verify", "--suite", "all", "--gmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for suite in [
        "matrix",
        "loop",
        "lambda-g",
        "string-dilaton",
        "theorem-a",
        "eisenstein",
    ] {
        assert!(
            out.lines().any(|l| l.starts_with(&format!("ok {suite} ("))),
            "missing {suite}"
        );
    }
    assert!(!out.contains("FAIL"));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--suite", "matrix,loop,stationary", "--gmax", "3"];
    let a = Command::new(env!("CARGO_BIN_EXE_degzero"))
        .args(args)
        .env("DEGZERO_THREADS", "1")
        .output()
        .unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_degzero"))
        .args(args)
        .env("DEGZERO_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c = degzero(&["matrix", "-g", "3", "--inverse", "--format", "json"]);
    let d = degzero(&["matrix", "-g", "3", "--inverse", "--format", "json"]);
    assert_eq!(c.stdout, d.stdout);
}
