use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn gsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsc"))
        .args(args)
        .env_remove("GSC_BUDGET_MAX_BALL")
        .env_remove("GSC_BUDGET_N_MAX")
        .output()
        .expect("gsc runs")
}

fn result(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    v["result"].clone()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_good_presentation() {
    let out = gsc(&["validate", path(&corpus("triangle.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(result(&out)["valid"], true);
}

#[test]
fn check_reports_witness() {
    let out = gsc(&["check", "--lambda", "1/6", path(&corpus("duplicate-components.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let r = result(&out);
    assert_eq!(r["pass"], false);
    assert_eq!(r["witness"]["piece"]["word"], "abcabc");
}

#[test]
fn check_passes_on_hexagon() {
    let out = gsc(&["check", path(&corpus("hexagon-a6.json"))]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_label_is_a_usage_error() {
    let out = gsc(&["validate", path(&corpus("bad-label.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/edges/0/label"), "{err}");
}

#[test]
fn missing_argument_is_a_usage_error() {
    let out = gsc(&["ball", path(&corpus("ab6.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn truncated_ball_exits_with_budget_code() {
    let out = gsc(&["ball", "--radius", "6", "--max-ball", "10", path(&corpus("ab6.json"))]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(result(&out)["truncated"], true);
}

#[test]
fn word_equality() {
    let out = gsc(&["word", "--check", "abcabc", "--equal", "", path(&corpus("triangle.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let r = result(&out);
    assert_eq!(r["trivial"], true);
    assert_eq!(r["equal"], true);
}

#[test]
fn cover_then_walls() {
    let dir = tempfile::tempdir().unwrap();
    let cover = dir.path().join("cover.json");
    let out = gsc(&["cover", "--z2", path(&corpus("theta.json")), "--out", path(&cover)]);
    assert_eq!(out.status.code(), Some(0));
    let out = gsc(&["walls", path(&cover)]);
    assert_eq!(out.status.code(), Some(0));
    let r = result(&out);
    assert_eq!(r["walls"].as_array().unwrap().len(), 6);
    assert!(r["failures"].as_array().unwrap().is_empty());
    assert_eq!(r["diagnostics"]["invalid_candidates"], 0);
}

#[test]
fn pipeline_run_is_reproducible_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let tower = dir.path().join("tower.json");
    for (out, extra) in [(&a, vec!["--tower", path(&tower)]), (&b, vec![])] {
        let mut args = vec!["pipeline", "run", "--toy", "--levels", "3", "--out", path(out)];
        args.extend(extra);
        let run = gsc(&args);
        assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let mut manifest = a.clone().into_os_string();
    manifest.push(".manifest.json");
    let manifest: Value = serde_json::from_slice(&std::fs::read(manifest).unwrap()).unwrap();
    assert!(manifest["wall_clock_ms"].is_number());

    let verify = gsc(&["pipeline", "verify", path(&a)]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(result(&verify)["verify"]["pass"], true);

    let check = gsc(&["tower", "check", path(&tower)]);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn tampered_transcript_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    assert_eq!(gsc(&["pipeline", "run", "--toy", "--levels", "2", "--out", path(&t)]).status.code(), Some(0));
    let mut v: Value = serde_json::from_slice(&std::fs::read(&t).unwrap()).unwrap();
    v["levels"][1]["girth"] = Value::from(99);
    std::fs::write(&t, serde_json::to_string(&v).unwrap()).unwrap();
    let verify = gsc(&["pipeline", "verify", path(&t)]);
    assert_eq!(verify.status.code(), Some(1));
}

#[test]
fn exhausted_quotient_search_fails() {
    let out = gsc(&["quotient", "--nmax", "1", path(&corpus("triangle.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(result(&out)["found"], false);
}
