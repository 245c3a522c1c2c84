use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gentle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gentle")).args(args).env_remove("GENTLE_FIELD").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn temp(name: &str, body: &str) -> String {
    let p = std::env::temp_dir().join(format!("gentle-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn validate_prints_the_exact_object() {
    let o = gentle(&["datum", "validate", &data("dual.json")]);
    assert_eq!(stdout(&o).trim(), r#"{"valid":true,"gentle":true}"#);
    let o = gentle(&["datum", "validate", &data("skew.json")]);
    assert_eq!(stdout(&o).trim(), r#"{"valid":true,"gentle":false}"#);
}

#[test]
fn domain_errors_exit_one_with_a_json_object() {
    let bad = temp("bad.json", r#"{"m":[2],"relations":[[[1,1],[1,3]]]}"#);
    let o = gentle(&["datum", "validate", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "invalid-datum");
    assert!(e["message"].is_string());
    let o = gentle(&["--field", "Fp:9", "datum", "validate", &data("dual.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gentle(&["datum", "frobnicate"]).status.code(), Some(2));
    assert_eq!(gentle(&[]).status.code(), Some(2));
}

#[test]
fn band_complex_matches_the_worked_example_and_round_trips() {
    let o = gentle(&["word", "build", &data("fav.json"), &data("band1.json")]);
    let v = json_of(&o);
    assert_eq!(v["degrees"]["-2"], serde_json::json!(["g3"]));
    assert_eq!(v["degrees"]["-1"], serde_json::json!(["g2", "g2"]));
    assert_eq!(v["degrees"]["0"], serde_json::json!(["g1"]));
    // the eigenvalue sits on the (1,3,2) entry
    assert_eq!(v["diff"]["-2"][1][0][0][0], "2");
    let file = temp("band.json", &stdout(&o));
    let check = json_of(&gentle(&["complex", "check", &data("fav.json"), &file]));
    assert_eq!(check["complex"], true);
    assert_eq!(check["minimal"], true);
    let parts = json_of(&gentle(&["complex", "decompose", &data("fav.json"), &file]));
    assert_eq!(parts["summands"].as_array().unwrap().len(), 1);
    let iso = json_of(&gentle(&["complex", "iso", &data("fav.json"), &file, &file]));
    assert_eq!(iso["iso"], true);
    assert_eq!(iso["seed"], 0x5eed);
}

#[test]
fn gluing_diagram_of_the_worked_band() {
    let o = gentle(&["word", "build", &data("fav.json"), &data("band1.json"), "--dot"]);
    let dot = stdout(&o);
    let nodes = dot.lines().filter(|l| l.contains("[label=\"Q")).count();
    let dotted = dot.lines().filter(|l| l.contains("style=dotted")).count();
    let solid = dot.lines().filter(|l| l.contains("->") && !l.contains("style=dotted")).count();
    assert_eq!((nodes, solid, dotted), (8, 4, 4));
}

#[test]
fn quiver_of_the_dual_numbers() {
    let dot = stdout(&gentle(&["algebra", "info", &data("dual.json"), "--dot"]));
    assert_eq!(dot.matches("->").count(), 1);
    assert!(dot.contains(r#""g1" -> "g1" [label="(1,2,1)"]"#));
    let info = json_of(&gentle(&["algebra", "info", &data("fav.json")]));
    assert_eq!(info["dim_a"], 9);
    assert_eq!(info["gentle"], true);
}

#[test]
fn words_check_enumerate_and_compare() {
    let check = json_of(&gentle(&["word", "check", &data("fav.json"), &data("string1.json")]));
    assert_eq!(check["kind"], "string");
    let list =
        json_of(&gentle(&["word", "enumerate", &data("dual.json"), "--segments", "3", "--window", "-2:0"]));
    assert_eq!(list["count"], list["words"].as_array().unwrap().len());
    let first = temp("w.json", &list["words"][0].to_string());
    let eq = json_of(&gentle(&["word", "equiv", &data("dual.json"), &first, &first]));
    assert_eq!(eq["equivalent"], true);
    assert_eq!(eq["homotopy_iso"], true);
}

#[test]
fn certificates_and_fat_points() {
    let o = gentle(&["word", "build", &data("fav.json"), &data("string1.json")]);
    let file = temp("string.json", &stdout(&o));
    let c = json_of(&gentle(&["rouquier", "certify", &data("fav.json"), &file]));
    assert_eq!(c["exact"], true);
    let f = json_of(&gentle(&["rouquier", "fatpoint", "2"]));
    assert_eq!(
        (f["dim_a"].as_u64(), f["dim_h"].as_u64(), f["holds"].as_bool()),
        (Some(3), Some(6), Some(true))
    );
}

#[test]
fn prime_fields_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gentle"))
        .args(["word", "build", &data("fav.json"), &data("band1.json")])
        .env("GENTLE_FIELD", "Fp:7")
        .output()
        .unwrap();
    let v = json_of(&o);
    assert_eq!(v["diff"]["-2"][1][0][0][0], "2");
}

#[test]
fn bunch_and_index_sets() {
    let b = json_of(&gentle(&["bunch", "show", &data("dual.json"), "--window", "-1:0"]));
    assert_eq!(b["indices"].as_array().unwrap().len(), 4);
    assert_eq!(b["ties"].as_array().unwrap().len(), 3);
    let s = json_of(&gentle(&["datum", "sets", &data("skew.json")]));
    assert_eq!(s["omega_bar"].as_array().unwrap().len(), 8);
}

#[test]
fn small_suite_passes() {
    let o = gentle(&["suite", "run", "--corpus", "small"]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
}
