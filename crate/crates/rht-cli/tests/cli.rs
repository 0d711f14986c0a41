use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn rht(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rht"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_accepts_the_corpus() {
    for name in [
        "delta2.json",
        "delta3.json",
        "sphere2.json",
        "sphere3.json",
        "sphere4.json",
        "small_s2.json",
        "wedge_s2_s4.json",
        "cp2_9.json",
    ] {
        let out = rht(&["validate", fixture(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {:?}", out);
        assert!(stdout(&out).is_empty());
    }
}

#[test]
fn validate_reports_broken_faces() {
    let text = std::fs::read_to_string(fixture("sphere2.json")).unwrap();
    // swap the two faces of one edge; the triangles above it then violate
    // the face identities
    let broken = text.replacen(
        r#""0.1": [
      {
        "target": "1"
      },
      {
        "target": "0"
      }
    ]"#,
        r#""0.1": [
      {
        "target": "0"
      },
      {
        "target": "1"
      }
    ]"#,
        1,
    );
    assert_ne!(broken, text, "fixture layout changed");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken).unwrap();
    let out = rht(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!stdout(&out).is_empty());

    let json_out = rht(&["validate", path.to_str().unwrap(), "--json"]);
    assert_eq!(json_out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    assert!(!v.as_array().unwrap().is_empty());
}

#[test]
fn validate_rejects_garbage_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = rht(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn minimal_model_requires_the_assertion_flag() {
    let out = rht(&[
        "minimal-model",
        "--degree",
        "4",
        fixture("sphere2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--assert-simply-connected"));
}

#[test]
fn minimal_model_of_the_two_sphere() {
    let out = rht(&[
        "minimal-model",
        "--degree",
        "4",
        "--assert-simply-connected",
        fixture("sphere2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 2);
    assert_eq!(gens[0]["degree"], 2);
    assert_eq!(gens[1]["degree"], 3);
    assert_eq!(gens[1]["d"], "1*v2_0^2");
}

#[test]
fn equivalent_pair_exits_zero() {
    let out = rht(&[
        "rht-equiv",
        "--assert-simply-connected",
        fixture("sphere2.json").to_str().unwrap(),
        fixture("small_s2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "equivalent");
    assert!(v["evidence"]["witness"].is_object());
}

#[test]
fn inequivalent_pair_exits_two() {
    let out = rht(&[
        "rht-equiv",
        "--assert-simply-connected",
        fixture("sphere2.json").to_str().unwrap(),
        fixture("sphere3.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "not_equivalent");
    assert!(v["evidence"]["certificate"]
        .as_str()
        .unwrap()
        .contains("degree 2"));
}

#[test]
fn degree_below_dimension_is_an_input_error() {
    let out = rht(&[
        "rht-equiv",
        "--assert-simply-connected",
        "--degree",
        "2",
        fixture("sphere2.json").to_str().unwrap(),
        fixture("sphere3.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_usage_exits_one_not_two() {
    let out = rht(&["rht-equiv", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let path = fixture("wedge_s2_s4.json");
    let args = [
        "minimal-model",
        "--degree",
        "4",
        "--assert-simply-connected",
        path.to_str().unwrap(),
    ];
    assert_eq!(rht(&args).stdout, rht(&args).stdout);
}

#[test]
fn gen_fixtures_reproduces_the_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = rht(&["gen-fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for name in ["sphere2.json", "cp2_9.json"] {
        let fresh = std::fs::read(dir.path().join(name)).unwrap();
        let committed = std::fs::read(fixture(name)).unwrap();
        assert_eq!(fresh, committed, "{name} drifted from the generator");
    }
}
