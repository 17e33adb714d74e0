use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn endcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_endcalc"))
        .args(args)
        .env_remove("ENDCALC_SEED")
        .output()
        .expect("binary runs")
}

fn surf(name: &str) -> String {
    corpus().join(format!("{name}.surf")).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn classify_text_report() {
    let o = endcalc(&["classify", &surf("flute")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict:       YES"));
}

#[test]
fn classify_json_with_witness() {
    let o = endcalc(&["classify", &surf("two_towers"), "--json", "--witness"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "NO");
    assert_eq!(v["witness"]["target"]["torsion2"], 2);
    assert_eq!(v["bounds"]["flux_rank"], 1);
}

#[test]
fn witness_is_omitted_by_default() {
    let o = endcalc(&["classify", &surf("two_towers"), "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["witness"].is_null());
}

#[test]
fn parse_error_exits_two() {
    let o = endcalc(&["classify", &surf("wave")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("finite rank only"));
    assert!(stderr(&o).contains("2:12"));
}

#[test]
fn missing_file_exits_two() {
    let o = endcalc(&["classify", "/nonexistent/x.surf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validation_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.surf");
    fs::write(&path, "punctures 3\n").unwrap();
    let o = endcalc(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn expect_gates_the_exit_code() {
    let o = endcalc(&["classify", &surf("flute"), "--expect", "YES"]);
    assert_eq!(o.status.code(), Some(0));
    let o = endcalc(&["classify", &surf("flute"), "--expect", "NO"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn flux_phi() {
    let o = endcalc(&["flux", "phi", "--perm", "d=1", "--cut", "0"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = endcalc(&["flux", "phi", "--perm", "d=0 table={0:1,1:0}", "--cut", "0"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = endcalc(&["flux", "phi", "--perm", "d=-2", "--cut", "-5"]);
    assert_eq!(stdout(&o).trim(), "-2");
    let o = endcalc(&["flux", "phi", "--perm", "d=0 table={0:5}"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flux_theta_ladder() {
    let o = endcalc(&[
        "flux",
        "theta",
        "--n",
        "2",
        "--word",
        "swap(0,1)*shift(0,1)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(1, 1)");
}

#[test]
fn flux_shift_and_swindle() {
    let o = endcalc(&["flux", "shift", "--spec", "excluded=finite{0,5}"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[0, 5]"));
    let o = endcalc(&["flux", "shift", "--spec", "excluded=periodic{N=3,p=3,r=0}"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Spontaneous"));
    let o = endcalc(&[
        "flux",
        "swindle",
        "--perm",
        "d=0 table={0:1,1:0}",
        "--k",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = endcalc(&["flux", "swindle", "--perm", "d=1", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flux_check_prints_seed() {
    let o = endcalc(&[
        "flux",
        "check",
        "--suite",
        "additivity",
        "--n",
        "1000",
        "--seed",
        "42",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("seed: 42"));
    assert!(out.contains("ok"));
}

#[test]
fn flux_check_seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_endcalc"))
        .args(["flux", "check", "--suite", "normalize", "--n", "50"])
        .env("ENDCALC_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("seed: 7"));
}

#[test]
fn flux_check_violation_exits_three() {
    let o = endcalc(&[
        "flux", "check", "--suite", "theta", "--n", "200", "--seed", "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bundled_corpus_matches() {
    let exp = corpus().join("expectations.toml");
    let o = endcalc(&[
        "corpus",
        corpus().to_str().unwrap(),
        "--expectations",
        exp.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("name"));
    assert!(!out.contains("MISMATCH"));
}

#[test]
fn edited_expectation_exits_one() {
    let text = fs::read_to_string(corpus().join("expectations.toml")).unwrap();
    let edited = text.replacen("[flute]\nverdict = \"YES\"", "[flute]\nverdict = \"NO\"", 1);
    assert_ne!(text, edited);
    let dir = tempfile::tempdir().unwrap();
    let exp = dir.path().join("expectations.toml");
    fs::write(&exp, edited).unwrap();
    let o = endcalc(&[
        "corpus",
        corpus().to_str().unwrap(),
        "--expectations",
        exp.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH verdict"));
}

#[test]
fn empty_directory_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = endcalc(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn unexpected_parse_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ok.surf"), "root omega + 1\n").unwrap();
    fs::write(dir.path().join("bad.surf"), "root acc(\n").unwrap();
    let o = endcalc(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

fn check_schema(v: &Value) {
    for key in [
        "countable",
        "self_similar",
        "M",
        "C",
        "M_iso",
        "G0_count",
        "verdict",
        "rule",
        "witness",
        "bounds",
        "notes",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["countable"].is_boolean());
    assert!(["NOT", "UNIQUELY", "PERFECTLY"].contains(&v["self_similar"].as_str().unwrap()));
    assert!(["YES", "NO", "UNKNOWN"].contains(&v["verdict"].as_str().unwrap()));
    assert!(v["rule"].as_str().unwrap().starts_with('R'));
    for key in ["M", "C", "M_iso", "G0_count"] {
        assert!(v[key].is_u64(), "{key}");
    }
    let b = &v["bounds"];
    assert!(b["lower"].as_u64().unwrap() >= 1);
    assert!(b["upper"].as_u64().unwrap() >= b["lower"].as_u64().unwrap());
    assert!(b["flux_rank"].is_u64() || b["flux_rank"] == "NOT_APPLICABLE");
    assert!(b["handle_pair_generators"].is_u64());
    for key in ["shifts", "dehn", "handles"] {
        assert!(b["budget"][key].is_u64());
    }
    assert!(b["abelianization_upper"].is_null() || b["abelianization_upper"].is_u64());
    assert!(v["notes"].as_array().unwrap().iter().all(Value::is_string));
    let w = &v["witness"];
    if v["verdict"] == "NO" {
        assert!(w["target"]["free_rank"].is_u64());
        assert!(w["characters"]
            .as_array()
            .unwrap()
            .iter()
            .all(Value::is_string));
        for g in w["generator_images"].as_array().unwrap() {
            assert!(g["generator"].is_string());
            assert!(g["image"].as_array().unwrap().iter().all(Value::is_i64));
        }
    } else {
        assert!(w.is_null());
    }
}

#[test]
fn json_reports_follow_the_schema() {
    let mut seen = 0;
    for entry in fs::read_dir(corpus()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|x| x != "surf") || path.ends_with("wave.surf") {
            continue;
        }
        let o = endcalc(&[
            "classify",
            path.to_str().unwrap(),
            "--json",
            "--witness",
            "--bounds",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", path.display());
        check_schema(&serde_json::from_slice(&o.stdout).unwrap());
        seen += 1;
    }
    assert!(seen >= 10);
}
