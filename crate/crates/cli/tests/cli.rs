use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn waring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waring")).args(args).env_remove("WARING_PRECISION").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write_matrix(dir: &TempDir, name: &str, rows: &[&[&str]]) -> PathBuf {
    let path = dir.path().join(name);
    let doc = serde_json::json!({ "n": rows.len(), "entries": rows });
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verdict_not_surjective() {
    let out = waring(&["verdict", "--n", "3", "--k", "3", "--r0", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["verdict"], "not_surjective");
    assert_eq!(v["reason"], "miller_obstruction");
}

#[test]
fn verdict_unknown_exit_code() {
    let out = waring(&["verdict", "--n", "5", "--k", "2", "--r0", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["verdict"], "unknown");
}

#[test]
fn solve_excluded_target() {
    let dir = TempDir::new().unwrap();
    let a1 = write_matrix(&dir, "a1.json", &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
    let a2 = write_matrix(&dir, "a2.json", &[&["0", "1", "0"], &["0", "0", "0"], &["0", "0", "0"]]);
    let c = write_matrix(&dir, "c.json", &[&["0", "0", "0"], &["0", "0", "1"], &["0", "0", "0"]]);
    let out = waring(&["solve", "--a1", s(&a1), "--a2", s(&a2), "--target", s(&c), "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["status"], "not_in_image");
    assert_eq!(v["report"]["parameters"]["r0"], 2);

    let out = waring(&["solve", "--a1", s(&a1), "--a2", s(&a2), "--target", s(&c), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["status"], "solved");
    assert!(v["residual"].as_f64().unwrap() <= 2f64.powi(-128));
    assert_eq!(v["x1"]["precision"], 256);
    assert_eq!(v["x1"]["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn solve_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a1 = write_matrix(&dir, "a1.json", &[&["2", "1"], &["0", "1/3+i"]]);
    let a2 = write_matrix(&dir, "a2.json", &[&["0", "1"], &["0", "0"]]);
    let c = write_matrix(&dir, "c.json", &[&["1", "-2"], &["3/4", "5i"]]);
    let args = ["--deterministic", "solve", "--a1", s(&a1), "--a2", s(&a2), "--target", s(&c), "--k", "3", "--seed", "7"];
    let first = waring(&args);
    let second = waring(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let v = json_of(&first);
    assert!(v["report"].get("timestamp").is_none());
    assert_eq!(v["report"]["parameters"]["seed"], 7);
}

#[test]
fn precision_from_environment_and_flag() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(&dir, "m.json", &[&["4", "0"], &["0", "9"]]);
    let out = Command::new(env!("CARGO_BIN_EXE_waring"))
        .args(["root", "--matrix", s(&m), "--k", "2"])
        .env("WARING_PRECISION", "128")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["root"]["precision"], 128);
    let out = Command::new(env!("CARGO_BIN_EXE_waring"))
        .args(["root", "--matrix", s(&m), "--k", "2", "--precision", "512"])
        .env("WARING_PRECISION", "128")
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["root"]["precision"], 512);
    assert_eq!(v["root"]["entries"][1][1], "3");
}

#[test]
fn ispower_nilpotent_block() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(&dir, "j.json", &[&["0", "1"], &["0", "0"]]);
    let out = waring(&["ispower", "--matrix", s(&m), "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["is_kth_power"], false);
    let out = waring(&["root", "--matrix", s(&m), "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let m = write_matrix(&dir, "jj.json", &[&["0", "1", "0", "0"], &["0", "0", "0", "0"], &["0", "0", "0", "1"], &["0", "0", "0", "0"]]);
    let out = waring(&["ispower", "--matrix", s(&m), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["witness"], serde_json::json!([4]));
}

#[test]
fn jordan_reports_structure() {
    let dir = TempDir::new().unwrap();
    let m = write_matrix(&dir, "m.json", &[&["2", "1", "0"], &["0", "2", "0"], &["0", "0", "0"]]);
    let out = waring(&["jordan", "--matrix", s(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["r0"], 1);
    assert_eq!(v["blocks"][0]["exact"], "2");
    assert_eq!(v["blocks"][0]["size"], 2);
}

#[test]
fn certify_witness() {
    let dir = TempDir::new().unwrap();
    let a2 = write_matrix(&dir, "a2.json", &[&["0", "1", "0"], &["0", "0", "0"], &["0", "0", "0"]]);
    let out = waring(&["certify", "--a2", s(&a2), "--k", "3", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["held"], 50);
    assert_eq!(v["witness"]["entries"][1][2], "1");

    let out = waring(&["certify", "--a2", s(&a2), "--k", "2"]);
    assert_eq!(out.status.code(), Some(64));
    assert_eq!(json_of(&out)["error"], "out_of_regime");
}

#[test]
fn parse_errors_are_located() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 1,\n \"entries\": [[\"1/x\"]]}").unwrap();
    let out = waring(&["ispower", "--matrix", bad.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(64));
    let v = json_of(&out);
    assert_eq!(v["error"], "parse");
    assert_eq!(v["line"], 2);

    let ragged = write_matrix(&dir, "r.json", &[&["1", "0"], &["0"]]);
    let out = waring(&["jordan", "--matrix", s(&ragged)]);
    assert_eq!(out.status.code(), Some(64));
    assert_eq!(json_of(&out)["error"], "dimension_mismatch");
}

#[test]
fn usage_errors() {
    assert_eq!(waring(&["verdict", "--n", "3"]).status.code(), Some(64));
    assert_eq!(waring(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(waring(&["verdict", "--n", "3", "--k", "1", "--r0", "0"]).status.code(), Some(64));
    let out = waring(&["ispower", "--matrix", "/nonexistent/m.json", "--k", "2"]);
    assert_eq!(out.status.code(), Some(64));
    assert_eq!(json_of(&out)["error"], "io");
    assert_eq!(waring(&["--help"]).status.code(), Some(0));
}

#[test]
fn singular_a1_rejected() {
    let dir = TempDir::new().unwrap();
    let z = write_matrix(&dir, "z.json", &[&["0", "0"], &["0", "0"]]);
    let out = waring(&["solve", "--a1", s(&z), "--a2", s(&z), "--target", s(&z), "--k", "2"]);
    assert_eq!(out.status.code(), Some(64));
    assert_eq!(json_of(&out)["error"], "singular");
}
