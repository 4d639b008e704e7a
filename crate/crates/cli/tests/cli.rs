use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn reebix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reebix"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn ellipsoid(dir: &TempDir, aspects: &str, name: &str) -> String {
    let out = dir.path().join(name);
    let o = reebix(&[
        "models",
        "ellipsoid",
        "--aspects",
        aspects,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out.to_string_lossy().into_owned()
}

#[test]
fn rotation_index() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "rot.json",
        r#"{"dim2n": 2, "generator": {"kind": "rotation_sum", "params": ["1/2"]}}"#,
    );
    let o = reebix(&["index", "--path", &p]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["mu_cz"], 1);
    assert_eq!(v["schema_version"], 1);
    assert!(v["tolerances"]["sympl"].is_number());
}

#[test]
fn degenerate_index_has_no_cz() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "id.json",
        r#"{"dim2n": 2, "generator": {"kind": "rotation_sum", "params": ["2/1"]}}"#,
    );
    let v = json(&reebix(&["index", "--path", &p]));
    assert!(v["mu_cz"].is_null());
    assert_eq!(v["nullity"], 2);
    assert_eq!(v["mu_lower"], 1);
    assert_eq!(v["mu_upper"], 3);
}

#[test]
fn ellipsoid_audit_is_consistent() {
    let dir = TempDir::new().unwrap();
    let cat = ellipsoid(&dir, "1,2", "e12.json");
    let rep = dir.path().join("report.json");
    let o = reebix(&[
        "audit",
        "--catalog",
        &cat,
        "--report",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&rep).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "consistent");
    assert_eq!(v["schema_version"], 1);
    // canonical output is byte-stable through a parse
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    assert_eq!(o.stdout, reebix(&["audit", "--catalog", &cat]).stdout);
}

#[test]
fn single_orbit_is_contradiction() {
    let dir = TempDir::new().unwrap();
    let cat = ellipsoid(&dir, "1,2,3", "e123.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cat).unwrap()).unwrap();
    v["orbits"].as_array_mut().unwrap().truncate(1);
    let cut = write(&dir, "single.json", &v.to_string());
    let o = reebix(&["audit", "--catalog", &cut]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["verdict"], "contradiction");
}

#[test]
fn negative_mode_rejects_positive_orbits() {
    let dir = TempDir::new().unwrap();
    let cat = ellipsoid(&dir, "1,2", "e12.json");
    let o = reebix(&["audit", "--catalog", &cat, "--mode", "negative"]);
    assert_eq!(code(&o), 3);
    assert!(json(&o)["reason"]
        .as_str()
        .unwrap()
        .starts_with("mean-index gate"));
}

#[test]
fn incomplete_catalog_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let cat = ellipsoid(&dir, "1,2", "e12.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cat).unwrap()).unwrap();
    v["claimed_complete"] = Value::Bool(false);
    let open = write(&dir, "open.json", &v.to_string());
    let o = reebix(&["audit", "--catalog", &open]);
    assert_eq!(code(&o), 4);
    assert_eq!(json(&o)["verdict"], "inconclusive");
}

#[test]
fn jump_certificate_and_bounded_search() {
    let dir = TempDir::new().unwrap();
    let cat = ellipsoid(&dir, "1,2", "e12.json");
    let o = reebix(&["cijt", "--orbits", &cat]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["N"], 6);

    let irr = ellipsoid(&dir, "1,1.4142135623730951", "irr.json");
    let o = reebix(&[
        "cijt",
        "--orbits",
        &irr,
        "--bound",
        "1",
        "--epsilon",
        "1/1000",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn homology_ranks() {
    let dir = TempDir::new().unwrap();
    let prof = dir.path().join("s3.json");
    assert_eq!(
        code(&reebix(&[
            "models",
            "profile",
            "--name",
            "sphere",
            "--n",
            "1",
            "--out",
            prof.to_str().unwrap()
        ])),
        0
    );
    let v = json(&reebix(&[
        "homology",
        "--profile",
        prof.to_str().unwrap(),
        "--degrees",
        "0..9",
    ]));
    let ranks: Vec<u64> = v["ranks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, vec![0, 0, 0, 1, 0, 1, 0, 1, 0, 1]);
}

#[test]
fn iterate_table() {
    let dir = TempDir::new().unwrap();
    let cat = ellipsoid(&dir, "1,2", "e12.json");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cat).unwrap()).unwrap();
    let orbit = write(&dir, "g1.json", &v["orbits"][0].to_string());
    let v = json(&reebix(&["iterate", "--orbit", &orbit, "--up-to", "5"]));
    let lows: Vec<i64> = v["iterates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["mu_lower"].as_i64().unwrap())
        .collect();
    assert_eq!(lows, vec![3, 5, 9, 11, 15]);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&reebix(&["index", "--bogus"])), 1);
    assert_eq!(code(&reebix(&["frobnicate"])), 1);
    assert_eq!(
        code(&reebix(&["index", "--path", "/nonexistent/p.json"])),
        1
    );
    assert_eq!(
        code(&reebix(&[
            "--tau-rank",
            "-1",
            "models",
            "profile",
            "--name",
            "sphere",
            "--n",
            "1"
        ])),
        1
    );
    assert_eq!(
        code(&reebix(&[
            "models",
            "profile",
            "--name",
            "katok-ziller",
            "--n",
            "2"
        ])),
        1
    );
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    assert_eq!(code(&reebix(&["audit", "--catalog", &bad])), 1);
}

#[test]
fn text_format() {
    let o = reebix(&[
        "--format", "text", "models", "profile", "--name", "sphere", "--n", "2",
    ]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("k_minus: 4"));
    assert!(s.contains("schema_version: 1"));
}
