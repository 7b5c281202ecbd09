use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn mpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpair")).args(args).output().unwrap()
}

fn mpair_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mpair"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn decompose_e1_reports_labels_and_witness() {
    let w = scratch("e1.witness.json");
    let out = scratch("e1.min.mpair");
    let o = mpair(&["decompose", &data("e1.mpair"), "--witness", w.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["format"], "mpair-report");
    assert_eq!(v["result"]["labels"], serde_json::json!(["LR(0,1)", "LR(1,0)"]));
    let replay = mpair(&["conjugate", &data("e1.mpair"), w.to_str().unwrap(), "--emit"]);
    assert!(replay.status.success());
    assert_eq!(stdout(&replay), std::fs::read_to_string(&out).unwrap());
}

#[test]
fn every_stage_witness_replays() {
    for doc in ["e1.mpair", "e2.mpair", "e3.mpair"] {
        for stage in [&["reduce"][..], &["reduce", "--block"], &["quasi"], &["minimize"], &["decompose"]] {
            let w = scratch(&format!("{doc}.{}.witness.json", stage.join("")));
            let mut args: Vec<&str> = stage.to_vec();
            let input = data(doc);
            args.extend([input.as_str(), "--emit", "--witness", w.to_str().unwrap()]);
            let o = mpair(&args);
            assert!(o.status.success(), "{stage:?} {doc}: {}", String::from_utf8_lossy(&o.stderr));
            let replay = mpair(&["conjugate", &input, w.to_str().unwrap(), "--emit"]);
            assert_eq!(stdout(&replay), stdout(&o), "{stage:?} on {doc}");
        }
    }
}

#[test]
fn corrupted_input_fails_validation() {
    let o = mpair(&["validate", &data("corrupted.mpair")]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["result"]["ok"], false);
    let names: Vec<&str> =
        v["result"]["violations"].as_array().unwrap().iter().map(|x| x["invariant"].as_str().unwrap()).collect();
    assert!(names.contains(&"C-triviality"), "{names:?}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("C-triviality"));
    assert_eq!(mpair(&["validate", &data("e1.mpair")]).status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(mpair(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mpair(&["validate", "/no/such/file.mpair"]).status.code(), Some(2));
    assert_eq!(mpair(&["render", &data("e1.mpair"), "--format", "png"]).status.code(), Some(2));
    assert_eq!(mpair(&["gen-random", "--density", "3"]).status.code(), Some(2));
    let o = mpair_stdin(&["validate", "-"], b"field GF(2)\nelement a deg=zero side=boundary\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(mpair(&["--help"]).status.code(), Some(0));
}

#[test]
fn interval_model_pipes_into_decompose() {
    let gen = mpair(&["gen-interval", &data("e4.scenario")]);
    assert!(gen.status.success());
    let g = json(&gen);
    assert_eq!(g["result"]["valid"], true);
    let o = mpair_stdin(&["decompose", "-"], &gen.stdout);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let labels = json(&o)["result"]["labels"].as_array().unwrap().len();
    assert!(labels >= 1);
    let inv = mpair_stdin(&["invariants", "-"], &gen.stdout);
    // a function on an interval: one class in degree 0
    assert_eq!(json(&inv)["result"]["homology"]["A"], serde_json::json!({"0": 1}));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["decompose".to_string(), data("e1.mpair")],
        vec!["gen-random".into(), "-n".into(), "9".into(), "--seed".into(), "17".into(), "--field".into(), "Q".into()],
        vec!["gen-interval".into(), "--seed".into(), "4".into(), "--interior".into(), "5".into()],
        vec!["invariants".into(), data("e3.mpair")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = mpair(&args);
        let b = mpair(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn text_round_trip_corpus() {
    let mut docs = Vec::new();
    for (seed, field) in (0..16u64).zip(["GF(2)", "GF(3)", "GF(5)", "Q"].into_iter().cycle()) {
        let n = (3 + seed % 7).to_string();
        let s = seed.to_string();
        docs.push(stdout(&mpair(&["gen-random", "-n", &n, "--seed", &s, "--field", field, "--emit"])));
    }
    for seed in 0..4u64 {
        let s = seed.to_string();
        docs.push(stdout(&mpair(&["gen-interval", "--seed", &s, "--interior", "3", "--field", "Q", "--emit"])));
    }
    for f in ["e1.mpair", "e2.mpair", "e3.mpair", "corrupted.mpair"] {
        docs.push(stdout(&mpair(&["fmt", &data(f)])));
    }
    assert!(docs.len() >= 20);
    for doc in &docs {
        assert!(doc.starts_with("field "), "{doc}");
        let o = mpair_stdin(&["fmt", "-"], doc.as_bytes());
        assert!(o.status.success());
        assert_eq!(&stdout(&o), doc);
    }
}

#[test]
fn svg_is_well_formed() {
    for f in ["e1.mpair", "e2.mpair", "e3.mpair"] {
        let o = mpair(&["render", &data(f), "--format", "svg"]);
        assert!(o.status.success());
        let text = stdout(&o);
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
    }
    let svg = stdout(&mpair(&["render", &data("e2.mpair"), "--format", "svg"]));
    assert_eq!(svg.matches("class=\"double\"").count(), 2);
}

#[test]
fn enumeration_counts() {
    let count = |f: &str| json(&mpair(&["enumerate", &data(f)]))["result"]["count"].as_u64().unwrap();
    assert_eq!(count("e2.mpair"), 1);
    assert_eq!(count("e3.mpair"), 4);
    let o = mpair(&["enumerate", &data("e1.mpair")]);
    assert_eq!(o.status.code(), Some(1), "rationals cannot be enumerated");
}
