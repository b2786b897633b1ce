use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kacmoody")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn classify_examples() {
    let out = run(&["classify", "--gcm", &data("a2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["type"], "finite");
    assert_eq!(v["hyperbolic"], false);

    for name in ["triangle_pendant.json", "e10.json"] {
        let v = json(&run(&["classify", "--gcm", &data(name)]));
        assert_eq!(v["type"], "indefinite");
        assert_eq!(v["hyperbolic"], true);
    }

    let out = run(&["classify", "--gcm", &data("double_bond.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not simply laced"));
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["classify", "--gcm", missing.to_str().unwrap()]).status.code(), Some(1));

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{\"matrix\": [[2, -1], [-1]]").unwrap();
    assert_eq!(run(&["classify", "--gcm", garbled.to_str().unwrap()]).status.code(), Some(2));

    let not_gcm = dir.path().join("bad.json");
    std::fs::write(&not_gcm, r#"{"matrix": [[2, 0], [-1, 2]]}"#).unwrap();
    assert_eq!(run(&["classify", "--gcm", not_gcm.to_str().unwrap()]).status.code(), Some(2));

    let tp = data("triangle_pendant.json");
    assert_eq!(run(&["verify", "--gcm", &tp, "--lambda", "-1,1,1,1", "--depth", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--gcm", &tp, "--lambda", "1,1,1", "--depth", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["module", "--gcm", &tp, "--lambda", "1,1,1,1", "--depth", "2", "--word", "S1^2"]).status.code(),
        Some(2)
    );
    let out = run(&["module", "--gcm", &tp, "--lambda", "1,1,1,1", "--depth", "4", "--max-basis", "20"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("basis"));
}

#[test]
fn verify_rank4_depth6_succeeds() {
    let tp = data("triangle_pendant.json");
    let out = run(&["verify", "--gcm", &tp, "--lambda", "1,1,1,1", "--depth", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rels = v["relations"].as_array().unwrap();
    assert!(rels.iter().all(|r| r["status"] == "verified"));
    assert!(rels.iter().filter(|r| r["id"] == "R11").all(|r| r["sign"].is_i64()));
}

#[test]
fn verify_depth1_has_empty_windows() {
    let tp = data("triangle_pendant.json");
    let out = run(&["verify", "--gcm", &tp, "--lambda", "1,1,1,1", "--depth", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert!(v["relations"].as_array().unwrap().iter().any(|r| r["status"] == "window_empty"));
}

#[test]
fn kernel_outputs() {
    let sq = data("square_diagonal.json");
    let order = |lambda: &str| {
        let out = run(&["kernel", "--gcm", &sq, "--lambda", lambda, "--depth", "3"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        let n = v["order"].as_u64().unwrap();
        assert!(n.is_power_of_two() && n <= 16);
        assert_eq!(v["members"].as_array().unwrap().len() as u64, n);
        assert_eq!(v["members"][0], serde_json::json!([]));
        n
    };
    assert_eq!(order("2,2,2,2"), 4);
    assert_eq!(order("1,1,1,1"), 2);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let tp = data("triangle_pendant.json");
    let mut outputs = Vec::new();
    for (k, jobs) in ["1", "2"].iter().enumerate() {
        let path = dir.path().join(format!("report{k}.json"));
        let status = run(&[
            "verify", "--gcm", &tp, "--lambda", "1,1,1,1", "--depth", "3", "--jobs", jobs, "--out",
            path.to_str().unwrap(),
        ])
        .status;
        assert_eq!(status.code(), Some(0));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(!outputs[0].is_empty());
}

#[test]
fn module_roots_and_signs() {
    let a2 = data("a2.json");
    let v = json(&run(&["roots", "--gcm", &a2, "--height", "2"]));
    assert_eq!(v["count"], 6);

    let v = json(&run(&["module", "--gcm", &a2, "--lambda", "1,1", "--depth", "4"]));
    assert_eq!(v["total_rank"], 8);

    let v = json(&run(&["module", "--gcm", &a2, "--lambda", "1,1", "--depth", "3", "--word", "X1(1) X1(-1)"]));
    assert_eq!(v["word"], "X1(1) X1(-1)");
    for col in v["columns"].as_array().unwrap() {
        let image = col["image"].as_array().unwrap();
        assert_eq!(image.len(), 1);
        assert_eq!(image[0][0], col["column"]);
        assert_eq!(image[0][1], 1);
    }

    let tp = data("triangle_pendant.json");
    let v = json(&run(&["commutator-signs", "--gcm", &tp, "--lambda", "1,1,1,1", "--depth", "4"]));
    let signs = v["signs"].as_array().unwrap();
    assert_eq!(signs.len(), 8);
    assert!(signs.iter().all(|s| s["sign"] == 1 || s["sign"] == -1));
}
