use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use relcx::homogeneity::Witness;
use relcx::io::parse_lift_json;
use relcx::PartialMap;

fn relcx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relcx"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(dir: &Path, args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = relcx(dir, &full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn generate(dir: &Path, file: &str, family: &[&str]) {
    let mut args = vec!["gen"];
    args.extend_from_slice(family);
    args.extend_from_slice(&["--out", file]);
    assert!(relcx(dir, &args).status.success());
}

fn pairs(v: &Value) -> PartialMap {
    let p = v
        .as_array()
        .unwrap()
        .iter()
        .map(|x| {
            (
                x[0].as_u64().unwrap() as usize,
                x[1].as_u64().unwrap() as usize,
            )
        })
        .collect();
    PartialMap::new(p).unwrap()
}

#[test]
fn petersen_rc_and_witness_round_trip() {
    let d = tempfile::tempdir().unwrap();
    generate(d.path(), "petersen.json", &["petersen"]);
    let o = relcx(d.path(), &["rc", "petersen.json"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("rc = 3\n"));
    let witness = std::fs::read_to_string(d.path().join("petersen.rc-witness.json")).unwrap();
    assert_eq!(parse_lift_json(&witness).unwrap().max_ext_arity(), 3);
    let v = json(d.path(), &["verify", "petersen.rc-witness.json"]);
    assert_eq!(v["verified"], true);
    let v = json(d.path(), &["lc", "petersen.json", "--out", "lc.json"]);
    assert_eq!(v["lc"], 1);
    assert_eq!(
        json(d.path(), &["verify", "--kind", "lc", "lc.json"])["verified"],
        true
    );
}

#[test]
fn ultrahomogeneity_reports() {
    let d = tempfile::tempdir().unwrap();
    generate(d.path(), "c5.json", &["cycle", "5"]);
    generate(d.path(), "c6.json", &["cycle", "6"]);
    assert_eq!(
        stdout(&relcx(d.path(), &["uh", "c5.json"])),
        "ultrahomogeneous: true\n"
    );
    let v = json(d.path(), &["uh", "c6.json"]);
    assert_eq!(v["ultrahomogeneous"], false);
    let w = Witness {
        seed: pairs(&v["witness"]["seed"]),
        map: pairs(&v["witness"]["map"]),
        vertex: v["witness"]["vertex"].as_u64().unwrap() as usize,
    };
    assert!(w.verify(&relcx::generators::cycle(6).unwrap()));
}

#[test]
fn petersen_cuts() {
    let d = tempfile::tempdir().unwrap();
    generate(d.path(), "p.json", &["petersen"]);
    let text = stdout(&relcx(d.path(), &["gcuts", "p.json"]));
    assert!(text.contains("max size = 4\n"));
    assert!(text.contains("isomorphism types = 2\n"));
    let v = json(d.path(), &["gcuts", "p.json"]);
    assert_eq!(v["cuts"].as_array().unwrap().len(), 15);
}

#[test]
fn reports_are_deterministic() {
    let d = tempfile::tempdir().unwrap();
    generate(d.path(), "p.json", &["petersen"]);
    for args in [
        vec!["--json", "rc", "p.json"],
        vec!["gcuts", "p.json"],
        vec!["aut", "p.json"],
        vec!["--seedless", "orbits", "p.json", "--arity", "3"],
        vec!["amalg", "failures", "--class", "induced:P4", "--max", "3"],
    ] {
        let a = relcx(d.path(), &args);
        let b = relcx(d.path(), &args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let w1 = std::fs::read(d.path().join("p.rc-witness.json")).unwrap();
    relcx(d.path(), &["rc", "p.json"]);
    assert_eq!(
        w1,
        std::fs::read(d.path().join("p.rc-witness.json")).unwrap()
    );
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(
        d.path().join("bad.json"),
        "{\"vertices\": 2, \"signature\": [2],",
    )
    .unwrap();
    std::fs::write(d.path().join("bad.txt"), "3; 0-7").unwrap();
    assert_eq!(relcx(d.path(), &["uh", "bad.json"]).status.code(), Some(2));
    assert_eq!(relcx(d.path(), &["uh", "bad.txt"]).status.code(), Some(2));
    assert_eq!(
        relcx(d.path(), &["uh", "missing.json"]).status.code(),
        Some(2)
    );
    assert_eq!(relcx(d.path(), &["frobnicate"]).status.code(), Some(2));
    generate(d.path(), "p.json", &["petersen"]);
    let o = relcx(d.path(), &["--limit", "5", "rc", "p.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));
}

#[test]
fn amalgamation_failures() {
    let d = tempfile::tempdir().unwrap();
    let v = json(
        d.path(),
        &["amalg", "failures", "--class", "induced:P4", "--max", "4"],
    );
    assert_eq!(v["minimal"], 2);
    for f in v["failures"].as_array().unwrap() {
        assert_eq!(f["c"]["vertices"], 3);
    }
    let v = json(
        d.path(),
        &["amalg", "failures", "--class", "hom:C3", "--max", "3"],
    );
    assert_eq!(v["amalgamation_property"], true);
    generate(d.path(), "k3.json", &["complete", "3"]);
    let v = json(
        d.path(),
        &["amalg", "failures", "--class", "hom:@k3.json", "--max", "3"],
    );
    assert_eq!(v["amalgamation_property"], true);
    let o = relcx(
        d.path(),
        &["amalg", "failures", "--class", "weird", "--max", "3"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumeration_check_and_batch() {
    let d = tempfile::tempdir().unwrap();
    let v = json(d.path(), &["enumerate", "--vertices", "4"]);
    assert_eq!(v["count"], 11);
    let codes: Vec<&str> = v["graph6"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    std::fs::write(
        d.path().join("g4.g6"),
        format!(">>graph6<<{}\n", codes.join("\n")),
    )
    .unwrap();
    let v = json(
        d.path(),
        &["enumerate", "--vertices", "4", "--check", "g4.g6"],
    );
    assert_eq!(v["check"]["complete"], true);
    let text = stdout(&relcx(d.path(), &["batch", "uh", "g4.g6"]));
    assert_eq!(text.lines().filter(|l| l.ends_with("uh = true")).count(), 4);
    let v = json(d.path(), &["enumerate", "--vertices", "6", "--trees"]);
    assert_eq!(v["count"], 6);
}

#[test]
fn props_and_homogenize() {
    let d = tempfile::tempdir().unwrap();
    let o = relcx(d.path(), &["props", "--vertices", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 violations"));
    generate(d.path(), "c7.json", &["cycle", "7"]);
    let v = json(d.path(), &["homogenize", "c7.json", "--method", "metric"]);
    assert_eq!(v["ultrahomogeneous"], true);
    let lift = std::fs::read_to_string(d.path().join("c7.metric-lift.json")).unwrap();
    assert_eq!(parse_lift_json(&lift).unwrap().ext_len(), 2);
    std::fs::write(d.path().join("t.txt"), "5; 0-1 1-2 2-3 1-4").unwrap();
    let v = json(
        d.path(),
        &[
            "homogenize",
            "t.txt",
            "--method",
            "tree",
            "--colors",
            "0,0,1,0,1",
        ],
    );
    assert_eq!(v["ultrahomogeneous"], true);
    assert_eq!(v["max_extended_arity"], 2);
    let o = relcx(d.path(), &["homogenize", "c7.json", "--method", "tree"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn morphism_queries() {
    let d = tempfile::tempdir().unwrap();
    generate(d.path(), "p4.json", &["path", "4"]);
    generate(d.path(), "k2.json", &["complete", "2"]);
    generate(d.path(), "c3.json", &["cycle", "3"]);
    generate(d.path(), "pet.json", &["petersen"]);
    assert_eq!(
        json(d.path(), &["hom", "p4.json", "k2.json"])["exists"],
        true
    );
    assert_eq!(
        json(d.path(), &["hom", "c3.json", "pet.json"])["exists"],
        false
    );
    assert_eq!(
        json(d.path(), &["hom", "--embedding", "k2.json", "p4.json"])["exists"],
        true
    );
    assert_eq!(json(d.path(), &["core", "pet.json"])["core"], true);
    assert_eq!(json(d.path(), &["core", "p4.json"])["core"], false);
    let g = stdout(&relcx(
        d.path(),
        &["gen", "cograph", "complement(union(K1,K1,K1))"],
    ));
    assert!(g.contains("\"vertices\": 3"));
}
