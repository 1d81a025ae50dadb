use std::process::Command;

use branchkit::quaternionic::QuaternionicContext;
use branchkit::rootsystems::{compact_positive, positive_systems_containing, FormLabel};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_branchkit"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = bin().args(args).env_remove("BRANCHKIT_GROUP_ORDER_BOUND").output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn validator() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/branchkit-output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let val = validator();
    let errors: Vec<String> = val.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    v
}

#[test]
fn list_forms_covers_quaternionic_families() {
    let v = json_ok(&["list-forms"]);
    let labels: Vec<&str> = v["forms"].as_array().unwrap().iter().map(|f| f["label"].as_str().unwrap()).collect();
    for l in ["g2_2", "f4_4", "e6_2", "e7_m5", "e8_m24", "su2_n:<n>", "so4_n:<n>"] {
        assert!(labels.contains(&l), "{l}");
    }
    let text = run(&["list-forms", "--format", "text"]);
    assert!(text.stdout.starts_with("label"));
}

#[test]
fn branch_quat_with_oracle() {
    let v = json_ok(&[
        "branch",
        "quat",
        "--form",
        "g2_2",
        "--basis",
        "fundamental",
        "--lambda",
        "1,1",
        "--cutoff",
        "8",
        "--check-oracle",
    ]);
    assert_eq!(v["oracleChecked"], Value::Bool(true));
    assert_eq!(v["oracle"]["agree"], Value::Bool(true));
    assert_eq!(v["cutoff"], 8);
    assert!(!v["entries"].as_array().unwrap().is_empty());
    let plain = json_ok(&["branch", "quat", "--form", "g2_2", "--basis", "fundamental", "--lambda", "1,1"]);
    assert_eq!(plain["oracleChecked"], Value::Bool(false));
}

#[test]
fn output_is_deterministic() {
    let args = ["branch", "quat", "--form", "su2_n:2", "--basis", "fundamental", "--lambda", "1,2,1", "--cutoff", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn non_small_chamber_is_rejected() {
    let ctx = QuaternionicContext::new(FormLabel::G2Split).unwrap();
    let systems = positive_systems_containing(&ctx.rd, &compact_positive(&ctx.rd), 1000).unwrap();
    let other = systems.iter().find(|s| **s != ctx.psi).unwrap();
    let lam = other.rho().to_string();
    let r = run(&["branch", "quat", "--form", "g2_2", "--lambda", &lam]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not admissible"), "{}", r.stderr);
    let v = json_ok(&["admissible", "quat", "--form", "g2_2", "--lambda", &lam]);
    assert_eq!(v["admissible"], Value::Bool(false));
    let v = json_ok(&["admissible", "quat", "--form", "g2_2", "--lambda", &ctx.psi.rho().to_string()]);
    assert_eq!(v["admissible"], Value::Bool(true));
}

#[test]
fn sp1q_branch_and_oracle() {
    let v = json_ok(&[
        "branch",
        "sp1q",
        "--q",
        "2",
        "--lambda",
        "3,2,1",
        "--cutoff",
        "4",
        "--check-oracle",
        "--step-bound",
        "10",
    ]);
    let mults: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["mult"].as_str().unwrap()).collect();
    assert_eq!(mults, ["1", "2", "3", "4", "5"]);
    let rep =
        json_ok(&["oracle-check", "sp1q", "--q", "2", "--lambda", "5,3,1", "--cutoff", "4", "--step-bound", "10"]);
    assert_eq!(rep["agree"], Value::Bool(true));
}

#[test]
fn oracle_check_quat() {
    let rep = json_ok(&[
        "oracle-check",
        "quat",
        "--form",
        "so4_n:4",
        "--basis",
        "fundamental",
        "--lambda",
        "1,1,1,1",
        "--cutoff",
        "4",
        "--step-bound",
        "10",
    ]);
    assert_eq!(rep["agree"], Value::Bool(true));
    assert!(rep["comparedWeights"].as_u64().unwrap() > 0);
}

#[test]
fn admissibility_commands() {
    let v =
        json_ok(&["admissible", "hermitian", "--form", "su_pq:2,3", "--basis", "fundamental", "--lambda", "1,1,1,1"]);
    assert_eq!(v["admissible"], Value::Bool(true));
    let v = json_ok(&["admissible", "so3", "--n", "2"]);
    assert_eq!(v["admissible"], Value::Bool(false));
    let r = run(&["admissible", "so3", "--p", "3"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("empty discrete series"));
    let t = run(&["admissible", "so3", "--n", "1", "--format", "text"]);
    assert!(t.stdout.starts_with("admissible: false"));
}

#[test]
fn weights_tsv_and_json() {
    let v = json_ok(&["weights", "--cartan", "B2", "--basis", "fundamental", "--highest-weight", "1,0"]);
    assert_eq!(v["dimension"], 5);
    let t = run(&["weights", "--cartan", "A2", "--highest-weight", "1,0,-1", "--format", "text"]);
    let lines: Vec<&str> = t.stdout.lines().collect();
    assert_eq!(lines[0], "weight\tmult");
    assert_eq!(lines.len(), 8);
    assert!(lines.contains(&"0,0,0\t2"));
}

#[test]
fn exit_codes() {
    let r = run(&["branch", "quat", "--form", "nonsense", "--lambda", "1"]);
    assert_eq!(r.code, 2);
    let r = run(&["branch", "quat", "--form", "g2_2"]);
    assert_eq!(r.code, 2);
    let r = run(&["branch", "quat", "--form", "g2_2", "--lambda", "1,2"]);
    assert_eq!(r.code, 2);
    let r = run(&["admissible", "hermitian", "--form", "g2_2", "--lambda", "1,2,3"]);
    assert_eq!(r.code, 2);
    let out = bin()
        .args(["oracle-check", "quat", "--form", "g2_2", "--basis", "fundamental", "--lambda", "1,1", "--cutoff", "2"])
        .env("BRANCHKIT_GROUP_ORDER_BOUND", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn in_process_entry_point() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code =
        branchkit::cli::main_with(["branchkit", "admissible", "so3", "--n", "3"].map(String::from), &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("\"admissible\": false"));
    let code = branchkit::cli::main_with(["branchkit", "--help"].map(String::from), &mut Vec::new(), &mut Vec::new());
    assert_eq!(code, 0);
}

#[test]
fn selftest_scoreboard_matches_schema() {
    let r = run(&["selftest"]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert!(validator().is_valid(&v));
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 9);
    let all = criteria.iter().all(|c| c["passed"] == Value::Bool(true));
    assert_eq!(r.code, if all { 0 } else { 1 });
    assert_eq!(v["passed"], Value::Bool(all));
}
