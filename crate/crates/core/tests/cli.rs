use std::process::{Command, Output};

fn ribvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ribvol")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fpoly_prints_human_then_json() {
    let o = ribvol(&["fpoly", "1", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("1/24·L1^3"));
    let json: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(json["terms"][0]["exp"], serde_json::json!([3]));
    assert_eq!(stdout(&ribvol(&["fpoly", "0", "3"])).lines().next(), Some("L1 + L2 + L3"));
}

#[test]
fn fpoly_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    assert!(ribvol(&["fpoly", "0", "4", "--out", path.to_str().unwrap()]).status.success());
    let p: ribvol::poly::PolyJson = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(ribvol::poly::Poly::from_json(&p).unwrap(), ribvol::volumes::f_polynomial(0, 4).unwrap());
}

#[test]
fn zeval_values_and_input_errors() {
    let o = ribvol(&["zeval", "0", "2", "2", "--Lplus", "1,2", "--Lminus", "3/2,3/2"]);
    assert!(o.status.success());
    let o = ribvol(&["zeval", "1", "2", "1", "--Lplus", "3,4", "--Lminus", "7"]);
    assert_eq!(stdout(&o).trim(), "1225/24");
    for bad in [
        &["zeval", "0", "1", "1", "--Lplus", "1", "--Lminus", "1"][..],
        &["zeval", "0", "2", "1", "--Lplus", "1,2", "--Lminus", "4"],
        &["zeval", "0", "2", "1", "--Lplus", "1,x", "--Lminus", "3"],
        &["zeval", "0", "2", "1", "--Lplus", "1", "--Lminus", "1"],
        &["fpoly", "0", "1"],
    ] {
        let o = ribvol(bad);
        assert_eq!(o.status.code(), Some(2), "{bad:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn enumerate_is_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let a = ribvol(&["--threads", "1", "enumerate", "1", "2", "1"]);
    let b = ribvol(&["--threads", "4", "enumerate", "1", "2", "1", "--cache-dir", cache.to_str().unwrap()]);
    let c = ribvol(&["enumerate", "1", "2", "1", "--cache-dir", cache.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let cat: ribvol::enumerate::CatalogJson = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(cat.r#type, (1, 2, 1));
    assert_eq!(ribvol::enumerate::GraphCatalog::from_json(&cat).unwrap().entries.len(), cat.entries.len());
}

#[test]
fn decompose_dot_and_json() {
    let graph = concat!(env!("CARGO_MANIFEST_DIR"), "/data/g11.json");
    let o = ribvol(&["decompose", graph, "--order", "u,v"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("c0 -> c1").count(), 2);
    let o = ribvol(&["decompose", graph, "--order", "1,0", "--format", "json"]);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["acyclic"], serde_json::json!(true));
    assert_eq!(j["order"], serde_json::json!([1, 0]));
    assert_eq!(ribvol(&["decompose", graph, "--order", "w"]).status.code(), Some(2));
}

#[test]
fn hurwitz_counts() {
    assert_eq!(stdout(&ribvol(&["hurwitz", "1", "--alpha", "4"])).trim(), "1/4");
    let table = stdout(&ribvol(&["hurwitz", "0", "--n", "3"]));
    assert!(!table.is_empty());
    assert_eq!(ribvol(&["hurwitz", "0"]).status.code(), Some(2));
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.ndjson");
    let o = ribvol(&["verify", "--depth", "2", "--report", report.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("[PASS]")).count(), 9);
    let text = std::fs::read_to_string(report).unwrap();
    assert!(text.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
}
