use std::path::Path;
use std::process::{Command, Output};

fn mlobs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlobs")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn engine_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| l.starts_with("numeric") || l.starts_with("symbolic"))
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect()
}

#[test]
fn solve_sombrilla_table() {
    let out = mlobs(&["solve", &data("sombrilla.json")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = engine_rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row[1..], ["3", "10", "9", "1", "1"]);
    }
}

#[test]
fn solve_point_override_and_json_round_trip() {
    let out = mlobs(&["solve", "--point", "3,2,1", "--engine", "numeric", "--json", &data("sombrilla.json")]);
    assert!(out.status.success());
    let first: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(first["results"][0]["euler_obstruction"], 0);

    let dir = tempfile::tempdir().unwrap();
    let again = dir.path().join("again.json");
    std::fs::write(&again, &out.stdout).unwrap();
    let out = mlobs(&["solve", "--json", again.to_str().unwrap()]);
    assert!(out.status.success());
    let second: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(first, second);
}

#[test]
fn witness_reuse_and_reclassify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(mlobs(&["witness", "compute", &data("sombrilla.json"), d]).status.success());
    let out = mlobs(&["witness", "reuse", "--point", "1,1,1", d]);
    assert!(out.status.success());
    assert_eq!(engine_rows(&stdout(&out))[0][1..], ["3", "10", "9", "1", "1"]);

    let tight = mlobs(&["reclassify", "--tol", "1e-300", d]);
    let tight: Vec<usize> = engine_rows(&stdout(&tight))[0][1..5].iter().map(|s| s.parse().unwrap()).collect();
    assert!(tight.iter().zip([3, 10, 9, 1]).all(|(a, b)| *a >= b) && tight.iter().sum::<usize>() > 23);
    let out = mlobs(&["reclassify", "--tol", "1e-6", d]);
    assert_eq!(engine_rows(&stdout(&out))[0][1..], ["3", "10", "9", "1", "1"]);
}

#[test]
fn euler_from_degrees() {
    let out = mlobs(&["euler", "--dim", "3", "--degrees", "0,16,31,18,2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "Eu = 1");
}

#[test]
fn exit_codes() {
    assert_eq!(mlobs(&[]).status.code(), Some(1));
    assert_eq!(mlobs(&["solve", "/no/such/file.json"]).status.code(), Some(1));
    // a zero coordinate fails validation
    assert_eq!(mlobs(&["solve", "--point", "0,1,1", &data("sombrilla.json")]).status.code(), Some(1));
    // the engine rejects a circle declared to be zero-dimensional
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"variables":["x","y"],"generators":["x^2+y^2-1"],"point":[1,1],"dimension":0,"engine":"numeric"}"#,
    )
    .unwrap();
    assert_eq!(mlobs(&["solve", bad.to_str().unwrap()]).status.code(), Some(2));
    let empty = tempfile::tempdir().unwrap();
    assert_eq!(mlobs(&["reclassify", "--tol", "1e-6", empty.path().to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(mlobs(&["--help"]).status.code(), Some(0));
}
