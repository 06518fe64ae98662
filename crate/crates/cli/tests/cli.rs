use std::path::PathBuf;
use std::process::{Command, Output};

fn input(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("inputs")
        .join(name)
        .display()
        .to_string()
}

fn frobsesh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobsesh"))
        .args(args)
        .env_remove("FROBSESH_SECTION_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = frobsesh(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn validate_reports_positivity() {
    let v = json(&["validate", "--input", &input("p2.json")]);
    assert_eq!(v["ample"], true);
    assert_eq!(v["diagnostics"]["smooth"], true);
}

#[test]
fn seshadri_values() {
    let hex = json(&["seshadri", "--input", &input("hexagon.json")]);
    let rows = hex.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        assert_eq!(r["epsilon"], "1/1");
        assert_eq!(r["epsilon_frobenius"], "1/1");
    }
    let p3 = json(&["seshadri", "--input", &input("p3.json")]);
    assert_eq!(p3[0]["epsilon"], "1/1");
    assert_eq!(p3[0]["epsilon_frobenius"], "1/3");
    let prod = json(&["seshadri", "--input", &input("p1xp1.json"), "--cone", "0"]);
    assert_eq!(prod[0]["epsilon"], "2/1");
    assert_eq!(prod[0]["epsilon_frobenius"], "2/1");

    let text = stdout(&frobsesh(&["seshadri", "--input", &input("p2.json")]));
    assert!(text.starts_with("cone 0: epsilon = 1/1"), "{text}");
}

#[test]
fn oracle_on_projective_plane() {
    let out = frobsesh(&["oracle", "--input", &input("p2.json"), "--m-max", "6", "--e-cap", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.ends_with("disagreements with the closed form: 0\n"), "{text}");
    let rows = json(&["oracle", "--input", &input("p2.json"), "--m-max", "6", "--e-cap", "3"]);
    let at_six: Vec<bool> = rows
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["m"] == 6)
        .map(|r| r["surjective"].as_bool().unwrap())
        .collect();
    assert_eq!(at_six, vec![true, true, false]);
}

#[test]
fn oracle_dump_and_multi_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("matrix.txt");
    let out = frobsesh(&[
        "oracle",
        "--input",
        &input("hexagon.json"),
        "--m-max",
        "1",
        "--e-cap",
        "1",
        "--cone",
        "0",
        "--dump",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let dump = std::fs::read_to_string(&path).unwrap();
    assert!(dump.starts_with("2 1 1 1 4 7\n"), "{dump}");
    assert_eq!(dump.lines().count(), 5);

    let rows = json(&["oracle", "--input", &input("p2.json"), "--m-max", "4", "--e-cap", "1", "--points", "0,1"]);
    // the two corners of 2·P share sections until m = 4
    let verdicts: Vec<bool> = rows.as_array().unwrap().iter().map(|r| r["surjective"].as_bool().unwrap()).collect();
    assert_eq!(verdicts, vec![false, false, false, true]);
}

#[test]
fn adjoint_of_hexagon() {
    let v = json(&["adjoint", "--input", &input("hexagon.json")]);
    assert_eq!(v["adjoint_globally_generated"], true);
    assert_eq!(v["violations"], 0);
}

#[test]
fn trace_demo() {
    let out = frobsesh(&["trace", "--form", "y^3 dy", "--p", "2"]);
    assert_eq!(stdout(&out), "y dy\n");
    let out = frobsesh(&["trace", "--form", "y^11 dy", "--p", "2", "--e", "2"]);
    assert_eq!(stdout(&out), "y^2 dy\n");
}

#[test]
fn jets_table() {
    let v = json(&["jets", "--input", &input("p2.json"), "--m-max", "12"]);
    assert_eq!(v[0]["sup"], "1/2");
    let diag = v[0]["simplex_diagnostic"].as_array().unwrap();
    assert_eq!(diag[1]["m"], 5);
    assert_eq!(diag[1]["ratio"], "1/5");
}

#[test]
fn scan_is_deterministic_and_passes() {
    let args = ["scan", "--count", "10", "--seed", "7", "--m-max", "3", "--hexagon", "--json"];
    let a = frobsesh(&args);
    let b = frobsesh(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);

    let empty = frobsesh(&["scan", "--count", "5", "--dims", "7"]);
    assert!(empty.status.success());
}

#[test]
fn svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex.svg");
    let out = frobsesh(&["svg", "--input", &input("hexagon.json"), "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("stroke-dasharray").count(), 2);

    let out = frobsesh(&["svg", "--input", &input("p3.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension 3"));
}

#[test]
fn errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(input("p2.json")).unwrap().replace("\"p\": 2", "\"p\": 4");
    std::fs::write(&bad, text).unwrap();
    let out = frobsesh(&["seshadri", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must be prime"));

    let out = frobsesh(&["seshadri", "--input", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));

    let nef_only = dir.path().join("nef.json");
    let text = std::fs::read_to_string(input("p1xp1.json")).unwrap().replace("[0, 2, 0, 3]", "[0, 0, 0, 3]");
    std::fs::write(&nef_only, text).unwrap();
    let out = frobsesh(&["seshadri", "--input", nef_only.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not ample"));
}

#[test]
fn section_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_frobsesh"))
        .args(["oracle", "--input", &input("p2.json"), "--m-max", "6"])
        .env("FROBSESH_SECTION_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the configured cap 10"));
}
