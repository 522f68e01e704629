use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn model(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "models", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn rysbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rysbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = rysbench(&all);
    let v = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), v)
}

#[test]
fn theorem_suite_exit_reflects_verdicts() {
    let m0 = model("m0.json");
    let (code, v) = json(&["check-identities", "--input", &m0, "--suite", "cera-theorem", "--mode", "exhaustive"]);
    assert_eq!(code, 1);
    let failing: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["verdict"] != "holds")
        .map(|r| r["label"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["ov-1a"]);
    assert!(v["results"][0].get("millis").is_none());

    let (code, _) = json(&["check-identities", "--input", &m0, "--suite", "aera-axioms"]);
    assert_eq!(code, 0);
}

#[test]
fn granule_profile_of_blocks() {
    let m0 = model("m0.json");
    let out = rysbench(&["check-granules", "--input", &m0, "--granules", "blocks", "--mereology", "nonempty-witness"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("profile: RA✓ WRA✓ ACG✓ WCG✓ MER✓ LS✓ US✓ ST✓ AS✓ NO✓ FU✓ UU✗"), "{text}");

    let single = model("single-block.json");
    let (code, v) = json(&[
        "check-granules", "--input", &single, "--granules", "blocks", "--property", "FU", "--mereology",
        "nonempty-witness",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["holds"], false);
}

#[test]
fn input_errors_exit_two() {
    let out = rysbench(&["check-approx", "--input", &model("empty-universe.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least one atom"));

    let out = rysbench(&["check-approx", "--input", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = rysbench(&["no-such-verb"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"universe": ["a"], "partition": [["a"]], "extra": 1}"#).unwrap();
    let out = rysbench(&["check-approx", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let suite = dir.path().join("bad.suite");
    std::fs::write(&suite, "x = y\nx = = y\n").unwrap();
    let out = rysbench(&["check-identities", "--input", &model("m0.json"), "--suite", suite.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 5"));
}

#[test]
fn duality_fails_for_covers() {
    let cover = model("cover.json");
    let (code, v) = json(&["check-duality", "--input", &cover]);
    assert_eq!(code, 1);
    let dual: Vec<bool> = v["families"].as_array().unwrap().iter().map(|f| f["dual"].as_bool().unwrap()).collect();
    assert_eq!(dual, [true, false, false]);
    let (code, _) = json(&["check-duality", "--input", &cover, "--family", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn approx_and_rys_on_m0() {
    let m0 = model("m0.json");
    let (code, v) = json(&["check-approx", "--input", &m0]);
    assert_eq!(code, 0);
    assert_eq!(v["checked"], 32);
    let (code, v) = json(&["check-rys", "--input", &m0, "--mereology", "nonempty-witness"]);
    assert_eq!(code, 0);
    assert_eq!(v["supplementation"]["weak"]["holds"], true);
}

#[test]
fn cera_quotient_and_crad_summaries() {
    let m0 = model("m0.json");
    let (code, v) = json(&["build-cera", "--input", &m0]);
    assert_eq!(code, 0);
    assert_eq!((v["size"].as_str(), v["tau2"].as_u64()), (Some("50"), Some(18)));

    let (code, v) = json(&["quotient", "--input", &m0]);
    assert_eq!(code, 1);
    assert_eq!(v["class_count"], 18);

    let (code, v) = json(&["crad-info", "--input", &m0]);
    assert_eq!(code, 0);
    assert_eq!(v["pairs"], 64);
}

#[test]
fn represent_round_trips_through_a_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let three = dir.path().join("three.json");
    std::fs::write(&three, r#"{"name": "X", "universe": ["a", "b", "c"], "partition": [["a", "b"], ["c"]]}"#).unwrap();
    let out = rysbench(&["build-cera", "--input", three.to_str().unwrap(), "--table"]);
    assert_eq!(out.status.code(), Some(0));
    let table = dir.path().join("table.json");
    std::fs::write(&table, &out.stdout).unwrap();
    let (code, v) = json(&["represent", "--algebra", table.to_str().unwrap(), "--max-n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["found"]["block_sizes"], serde_json::json!([2, 1]));
}

#[test]
fn sampled_reports_are_reproducible_across_jobs() {
    let m0 = model("m0.json");
    let args = ["check-identities", "--input", &m0, "--suite", "cera-theorem", "--mode", "sampled", "--samples", "500", "--seed", "9"];
    let a = rysbench(&[&["--jobs", "1"][..], &args].concat());
    let b = rysbench(&[&["--jobs", "4"][..], &args].concat());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
