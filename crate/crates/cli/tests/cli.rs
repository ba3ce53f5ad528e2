use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramanujan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Runs a JSON-emitting command, checks exit 0 and the shipped schema.
fn json_of(name: &str, args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
    assert_eq!(v["schema_version"], "1");
    v
}

const BINARY: [&str; 10] = [
    "--q", "2", "--d", "3", "--e", "4", "--basis", "power", "--beta", "1,1,0",
];

#[test]
fn reproduce_example_matches() {
    let out = run(&["reproduce-example"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3x3 and 9x9 forms match"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn construct_binary_example() {
    let mut args = vec!["construct"];
    args.extend(BINARY);
    let v = json_of("construct", &args);
    assert_eq!(v["algebra"]["one_plus_y"], "1+x+x^3");
    assert_eq!(v["quotient"]["p_text"], "λ^4+λ^3+λ^2+λ+1");
    assert_eq!(v["quotient"]["g_text"], "λ^4+λ+1");
    assert_eq!(v["quotient"]["r"], 3);
    let b0 = &v["generators"][0]["matrix"];
    assert_eq!(b0["den_pow"], 1);
    assert_eq!(b0["rows"][0], "x+x^3 | x^2 | x+x^2");
    assert_eq!(v["generators"].as_array().unwrap().len(), 7);
    assert_eq!(v["relations"].as_array().unwrap().len(), 21);
    assert_eq!(v["header_sets"][0]["size"], 7);
    assert_eq!(v["header_sets"][1]["size"], 7);
    assert!(v["generators"][3]["conj"]["A"].is_array());
}

#[test]
fn construct_septic_example() {
    let v = json_of(
        "construct",
        &[
            "construct", "--q", "7", "--d", "3", "--modulus", "x^3-2", "--basis",
            "normal-from:1,1,1", "--beta", "5,1,0",
        ],
    );
    assert_eq!(v["z_matrix"]["rows"][0], "3x | 6x | 1+4x");
    assert_eq!(v["z_matrix"]["den_pow"], 0);
    assert_eq!(v["header_sets"][0]["size"], 57);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["construct", "--q", "2", "--d", "3", "--e", "1"])), 3);
    assert_eq!(code(&run(&["construct", "--q", "6", "--d", "3"])), 2);
    assert_eq!(code(&run(&["construct", "--q", "3", "--d", "1"])), 2);
    assert_eq!(code(&run(&["construct", "--q", "3", "--d", "2", "--beta", "9"])), 2);
    assert_eq!(code(&run(&["quotient", "--q", "4", "--d", "2", "--s", "2"])), 2);
    assert_eq!(code(&run(&["cayley", "--q", "3", "--d", "2", "--cap", "10"])), 4);
    assert_eq!(code(&run(&["nonsense"])), 2);
}

#[test]
fn quotient_output() {
    let mut args = vec!["quotient"];
    args.extend(BINARY);
    let v = json_of("quotient", &args);
    assert_eq!(v["alpha"], serde_json::json!([0, 1, 0, 0]));
    assert_eq!(v["gamma"], serde_json::json!([0, 1, 0, 1]));
    assert_eq!(v["L_order"], "16");
}

#[test]
fn verify_suites() {
    let v = json_of("verify", &["verify", "--q", "2", "--d", "3", "--e", "2"]);
    assert_eq!(v["passed"], true);
    let v = json_of("verify", &["verify", "--q", "2", "--d", "2", "--e", "3"]);
    let reld = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "reld")
        .unwrap();
    assert_eq!(reld["status"], "pass");
}

#[test]
fn tampered_generators_fail() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["construct"];
    args.extend(BINARY);
    let out = run(&args);
    assert_eq!(code(&out), 0);
    let good = dir.path().join("good.json");
    std::fs::write(&good, &out.stdout).unwrap();
    let mut check = vec!["verify", "--no-closure"];
    check.extend(BINARY);
    let mut with_file = check.clone();
    with_file.extend(["--generators", good.to_str().unwrap()]);
    assert_eq!(code(&run(&with_file)), 0);

    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    // Flip the constant term of entry (0, 0) of b_2.
    let entry = &mut v["generators"][2]["matrix"]["entries"][0][0];
    let mut coeffs: Vec<u64> = serde_json::from_value(entry.clone()).unwrap();
    coeffs[0] ^= 1;
    *entry = serde_json::json!(coeffs);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_vec(&v).unwrap()).unwrap();
    let mut with_bad = check.clone();
    with_bad.extend(["--generators", bad.to_str().unwrap()]);
    let out = run(&with_bad);
    assert_eq!(code(&out), 5);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"generators_match"));
    assert!(failed.contains(&"det_identity"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("det_identity"));
}

#[test]
fn cayley_pgl2_f3() {
    let v = json_of("cayley", &["cayley", "--q", "3", "--d", "2"]);
    assert_eq!(v["order"], 24);
    assert_eq!(v["degree_by_color"], serde_json::json!([4]));
    assert_eq!(v["class_sizes"], serde_json::json!([12, 12]));
    let csv = run(&["cayley", "--q", "3", "--d", "2", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("src,dst,color,generator_id"));
    assert_eq!(text.lines().count(), 1 + 24 * 4);
    let dot = run(&["cayley", "--q", "3", "--d", "2", "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().contains("color="));
}

#[test]
fn spectrum_pgl2_f3() {
    let v = json_of("spectrum", &["spectrum", "--q", "3", "--d", "2"]);
    assert_eq!(v["verdict"], "RAMANUJAN");
    assert_eq!(v["n"], 24);
    let total: u64 = v["tuples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 24);
    let v = json_of("spectrum", &["spectrum", "--q", "3", "--d", "2", "--mode", "sparse"]);
    assert_eq!(v["verdict"], "PARTIAL");
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["construct", "--q", "3", "--d", "3"],
        vec!["spectrum", "--q", "3", "--d", "2"],
        vec!["cayley", "--q", "2", "--d", "3", "--e", "2", "--format", "csv"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_dir_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "cayley", "--q", "3", "--d", "2", "--format", "dot", "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("cayley.dot")).unwrap();
    assert!(text.starts_with("digraph"));
}
