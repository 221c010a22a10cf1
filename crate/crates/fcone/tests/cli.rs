//! Subprocess tests for the `fcone` binary: exit codes, output shapes,
//! and error surfaces for each subcommand.

use std::path::PathBuf;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_fcone"))
        .args(args)
        .output()
        .expect("failed to run fcone");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).to_string(),
        String::from_utf8_lossy(&output.stderr).to_string(),
    )
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("fcone-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn admissible_count_prints_the_number() {
    let (code, stdout, _) = run(&["admissible", "count", "--g", "2", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "8");

    let (code, stdout, _) = run(&["admissible", "count", "--g", "3", "--n", "0"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "2");
}

#[test]
fn intersect_lambda_with_tail_curve() {
    let divisor = fixture(
        "lambda20.json",
        r#"{"space":"Mgn","g":2,"n":0,"lambda":"1","irr":"0","boundary":[]}"#,
    );
    let curve = fixture("ell.json", r#"{"family":"Ell"}"#);
    let (code, stdout, _) = run(&[
        "intersect",
        "--divisor",
        divisor.to_str().unwrap(),
        "--curve",
        curve.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "1");
}

#[test]
fn malformed_json_exits_2_with_diagnostic() {
    let bad = fixture("bad.json", "{ definitely not json");
    let (code, stdout, stderr) = run(&["nef", "check", "--divisor", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("cannot parse"), "stderr was: {stderr}");
}

#[test]
fn missing_subcommand_exits_2() {
    let (code, _, _) = run(&[]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn domain_errors_exit_1_naming_the_violation() {
    // (2, 0) is excluded from the space-property predicates
    let t = fixture("empty_t.json", r#"{"irr":false}"#);
    let (code, _, stderr) = run(&[
        "space",
        "props",
        "--t",
        t.to_str().unwrap(),
        "--g",
        "2",
        "--n",
        "0",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("undefined for (g, n) = (2, 0)"), "{stderr}");

    // coefficients violating the adjoint bounds are domain errors too
    let p = fixture(
        "bad_adjoint.json",
        r#"{"space":"Mgn","g":3,"n":1,"a":"-1","alpha_irr":"1","alpha_default":"1"}"#,
    );
    let (code, _, stderr) = run(&["ample-model", "classify", "--params", p.to_str().unwrap()]);
    // adjoint bounds are validated while parsing the file
    assert_eq!(code, 2);
    assert!(stderr.contains("out of range"), "{stderr}");
}

#[test]
fn nef_check_reports_witnesses() {
    let divisor = fixture(
        "lambda20b.json",
        r#"{"space":"Mgn","g":2,"n":0,"lambda":"1","irr":"0","boundary":[]}"#,
    );
    let (code, stdout, _) = run(&["nef", "check", "--divisor", divisor.to_str().unwrap()]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["status"], "FNef");
    assert_eq!(report["passes"], true);
    assert_eq!(report["witnesses"][0][0]["family"], "Fs");
    assert_eq!(report["witnesses"][0][1], "0");

    let (code, stdout, _) = run(&[
        "nef",
        "check",
        "--divisor",
        divisor.to_str().unwrap(),
        "--mode",
        "ample",
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["passes"], false);
}

#[test]
fn nef_check_space_flag_must_match_the_file() {
    let divisor = fixture(
        "lambda20c.json",
        r#"{"space":"Mgn","g":2,"n":0,"lambda":"1","irr":"0","boundary":[]}"#,
    );
    let (code, _, stderr) = run(&[
        "nef",
        "check",
        "--divisor",
        divisor.to_str().unwrap(),
        "--space",
        "ps",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--space disagrees"), "{stderr}");
}

#[test]
fn ps_nef_check_matches_the_face() {
    // the full-face point on (3, 1)
    let divisor = fixture(
        "face31.json",
        r#"{"space":"MgnPs","g":3,"n":1,"lambda":"13","irr":"-13/10",
            "boundary":[{"i":0,"I":[1],"c":"-13/10"},{"i":1,"I":[1],"c":"-13/10"}]}"#,
    );
    let t = fixture("full31.json", r#"{"irr":true,"pairs":[[0,[1]],[1,[1]]]}"#);
    let (code, stdout, _) = run(&[
        "nef",
        "check",
        "--divisor",
        divisor.to_str().unwrap(),
        "--space",
        "ps",
        "--t",
        t.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["status"], "FNefOnExactSet");
}

#[test]
fn classify_emits_certificate() {
    let p = fixture(
        "classify31.json",
        r#"{"space":"Mgn","g":3,"n":1,"a":"0","alpha_irr":"4/5","alpha_default":"1"}"#,
    );
    let (code, stdout, _) = run(&["ample-model", "classify", "--params", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["model"], "ps");
    assert!(report["certificate"]["checks"].as_array().unwrap().len() >= 2);
}

#[test]
fn sweep_writes_csv_and_summary() {
    let grid = fixture(
        "grid31.json",
        r#"{"g":3,"n":1,"a":"0","alpha_irr":{"start":"0","stop":"1","step":"1/4"},
            "alpha":{"uniform":"1"}}"#,
    );
    let out = std::env::temp_dir().join("fcone-cli-tests/sweep.csv");
    let svg = std::env::temp_dir().join("fcone-cli-tests/sweep.svg");
    let (code, stdout, stderr) = run(&[
        "sweep",
        "--spec",
        grid.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let summary: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(summary["counts"]["identity"], 1);

    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "g,n,a,alpha_irr,alpha,model,t,clause"
    );
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.contains("3,1,0,1,1,identity,,A"));

    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert_eq!(svg_text.matches("<rect").count(), 5);
}

#[test]
fn space_props_reports_factorization() {
    let t = fixture("divpair.json", r#"{"pairs":[[0,[1]],[1,[1]]]}"#);
    let (code, stdout, _) = run(&[
        "space",
        "props",
        "--t",
        t.to_str().unwrap(),
        "--g",
        "3",
        "--n",
        "2",
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["q_factorial"], true);
    assert_eq!(report["q_gorenstein"], true);
    assert_eq!(report["factorization"]["divisorial_steps"][0], 1);
    assert_eq!(report["factorization"]["k_negative_small"], true);
}

#[test]
fn descend_answers_for_both_directions() {
    let lambda = fixture(
        "ps_lambda.json",
        r#"{"space":"MgnPs","g":3,"n":1,"lambda":"1","irr":"0","boundary":[]}"#,
    );
    let balanced = fixture(
        "ps_balanced.json",
        r#"{"space":"MgnPs","g":3,"n":1,"lambda":"1","irr":"-1/10","boundary":[]}"#,
    );
    let t = fixture("irr_t.json", r#"{"irr":true}"#);
    let (code, stdout, _) = run(&[
        "descend",
        "--divisor",
        lambda.to_str().unwrap(),
        "--t",
        t.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"descends\": false"));
    let (code, stdout, _) = run(&[
        "descend",
        "--divisor",
        balanced.to_str().unwrap(),
        "--t",
        t.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"descends\": true"));
}

#[test]
fn fcurves_list_matches_catalogue() {
    let (code, stdout, _) = run(&["fcurves", "list", "--g", "2", "--n", "0"]);
    assert_eq!(code, 0);
    let curves: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(curves.as_array().unwrap().len(), 2);
    assert_eq!(curves[0]["family"], "Ell");
    assert_eq!(curves[1]["family"], "Fs");
}
