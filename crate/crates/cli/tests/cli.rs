use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const GRID: &str = "1e-6,4";

fn rispace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rispace"))
        .args(args)
        .env("RISPACE_GRID", GRID)
        .output()
        .expect("binary runs")
}

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn validate(command: &str, doc: &Value) {
    let text = std::fs::read_to_string(schema_dir().join(format!("{command}.schema.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let v = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{command}: {errors:?}");
}

#[test]
fn norm_of_constant_in_lorentz() {
    let out = rispace(&["norm", "--space", "Lor:2,1", "--fn", "1*t^0*log^0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2.0");
}

#[test]
fn every_report_matches_its_schema() {
    let cases: &[(&str, &[&str])] = &[
        ("norm", &["norm", "--space", "Lor:2,1", "--fn", "1*t^0*log^0", "--format", "json"]),
        ("rearrange", &["rearrange", "--fn", "1*t^-0.5*log^0"]),
        ("fundamental", &["fundamental", "--space", "expL:2"]),
        (
            "embed",
            &["embed", "--m", "1", "--alpha", "0.5", "--domain", "LlogL:2,-1", "--target", "expL:2", "--random", "3"],
        ),
        (
            "opnorm",
            &["opnorm", "--op", "copson", "--m", "1", "--alpha", "0.5", "--domain", "Lor:2,1", "--target", "L:inf", "--random", "3"],
        ),
        ("mazya", &["mazya", "--n", "3", "--alpha", "0.75"]),
        ("thm31", &["thm31", "--phi-y", "1*t^0.25*log^0", "--alpha", "0.5"]),
        ("witness", &["witness", "--m", "1", "--alpha", "0.5", "--q", "2"]),
        ("report", &["report", "--m", "1", "--alpha", "0.5"]),
    ];
    for (command, args) in cases {
        let out = rispace(args);
        assert_eq!(out.status.code(), Some(0), "{command}: {}", String::from_utf8_lossy(&out.stderr));
        let doc = json_of(&out);
        validate(command, &doc);
        assert_eq!(doc["grid"]["points_per_decade"], 4);
        assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn witness_certifies_nonexistence() {
    let dir = std::env::temp_dir().join(format!("rispace-witness-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let curve = dir.join("curve.csv");
    let out = rispace(&["witness", "--m", "1", "--alpha", "0.5", "--q", "2", "--curve", curve.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["report"]["verdict"], "nonexistence_certified");
    let csv = std::fs::read_to_string(&curve).unwrap();
    assert!(csv.starts_with("t,u,S\n"));
    assert!(csv.lines().count() > 10);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn mazya_volume_is_one() {
    let doc = json_of(&rispace(&["mazya", "--n", "2", "--alpha", "0.5"]));
    assert!((doc["report"]["volume"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn report_names_optimal_targets() {
    let doc = json_of(&rispace(&["report", "--m", "1", "--alpha", "0.5"]));
    let targets: Vec<&str> = doc["report"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["target"].as_str().unwrap())
        .collect();
    assert_eq!(targets, ["L:inf", "LZ:inf,2,-1", "expL:2"]);
}

#[test]
fn failed_report_row_exits_two() {
    let out = rispace(&["report", "--m", "1", "--alpha", "0.5", "--q", "2,bad"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json_of(&out);
    assert!(doc["report"]["rows"][1]["error"].as_str().unwrap().contains("bad"));
}

#[test]
fn parse_errors_name_token_and_rule() {
    let out = rispace(&["norm", "--space", "Lor:2,1", "--fn", "1*x^0*log^0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("`x^0`") && err.contains("t^<power>"), "{err}");

    let out = rispace(&["norm", "--space", "Q:2", "--fn", "1*t^0*log^0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("`Q`"));
}

#[test]
fn bad_flags_exit_one() {
    assert_eq!(rispace(&["norm", "--bogus"]).status.code(), Some(1));
    assert_eq!(rispace(&["--help"]).status.code(), Some(0));
}

#[test]
fn precondition_failure_exits_one() {
    let out = rispace(&["witness", "--m", "2", "--alpha", "0.5", "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("precondition"));
}

#[test]
fn outputs_are_byte_identical() {
    let args = ["opnorm", "--op", "sup", "--gamma", "0.5", "--domain", "L:2", "--target", "L:2", "--random", "20", "--seed", "7"];
    let a = rispace(&args);
    let b = rispace(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["seed"], 7);
}

#[test]
fn grid_flag_overrides_environment() {
    let doc = json_of(&rispace(&["mazya", "--n", "2", "--alpha", "0.5", "--grid", "1e-8,8"]));
    assert_eq!(doc["grid"]["points_per_decade"], 8);
    assert_eq!(doc["grid"]["t_min"], 1e-8);
}

#[test]
fn csv_tables_carry_u() {
    let out = rispace(&["fundamental", "--space", "L:2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,u,phi,majorant"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((first[1] - (2.0 / first[0]).ln()).abs() < 1e-12);
}
