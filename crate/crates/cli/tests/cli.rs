use std::process::{Command, Output};

use ffred::logic::print;
use ffred::model::robinson_formula;
use serde_json::Value;

fn ffred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffred")).args(args).env_remove("FFRED_THREADS").output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

#[test]
fn verify_examples_pass() {
    for args in [
        vec!["verify", "version1", "--p", "3", "--smax", "4"],
        vec!["verify", "powersoft2", "--p", "5", "--P", "1,1,0,1", "--m", "3"],
        vec!["verify", "all", "--p", "2"],
    ] {
        let out = ffred(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(report(&out)["status"], "pass");
    }
    let out = ffred(&["verify", "genus", "--p", "3", "--gk", "2"]);
    let r = report(&out);
    let kv = &r["checks"][0]["witnesses"];
    assert_eq!((kv["k"].as_u64(), kv["u"].as_u64()), (Some(1), Some(5)), "{r}");
}

#[test]
fn verify_reports_are_deterministic() {
    let strip = |mut v: Value| {
        for c in v["checks"].as_array_mut().unwrap() {
            c["elapsed_ms"] = Value::Null;
        }
        v
    };
    let a = strip(report(&ffred(&["verify", "ramify", "--p", "7", "--seed", "9"])));
    let b = strip(report(&ffred(&["verify", "ramify", "--p", "7", "--seed", "9"])));
    assert_eq!(a, b);
}

#[test]
fn translate_reports_parameters() {
    let r = report(&ffred(&["translate", "--expr", "(= (+ 1 1) 2)"]));
    assert_eq!(r["checks"][0]["witnesses"]["parameters"], serde_json::json!(["t"]));
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().join("wrapped.txt");
    let out = ffred(&["translate", "--wrap-q", "--expr", "(= (+ 1 1) 2)", "--emit", emit.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["checks"][0]["witnesses"]["parameters"], serde_json::json!([]));
    assert!(std::fs::read_to_string(&emit).unwrap().starts_with("(forall _w"));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let out = ffred(&["translate", "--expr", "(= (+ 1 1) 2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at byte"));
    assert_eq!(ffred(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(ffred(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ffred(&["demo", "--p", "4"]).status.code(), Some(2));
}

#[test]
fn eval_translated_divisibility() {
    let dir = tempfile::tempdir().unwrap();
    let ring = dir.path().join("ring.txt");
    ffred(&["translate", "--expr", "(divides 2 4)", "--emit", ring.to_str().unwrap()]);
    let out = ffred(&["eval", ring.to_str().unwrap(), "--mode", "ring-witness"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["checks"][0]["witnesses"]["verdict"], "true");
    assert_eq!(r["checks"][0]["witnesses"]["formula_hash"].as_str().unwrap().len(), 64);

    let out = ffred(&["eval", "--from-arith", "--expr", "(divides 2 5)"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["checks"][0]["verdict"], "fail");
}

#[test]
fn eval_robinson_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mul.txt");
    std::fs::write(&path, print(&robinson_formula())).unwrap();
    let file = path.to_str().unwrap();
    let run = |k: &str| ffred(&["eval", file, "--mode", "arith", "--N", "156", "--bind", &format!("k={k}"), "--bind", "m=2", "--bind", "n=3"]);
    assert_eq!(run("6").status.code(), Some(0));
    assert_eq!(run("5").status.code(), Some(1));
}

#[test]
fn bounded_search_guard() {
    let out = ffred(&["eval", "--mode", "ring-bounded", "--d", "27", "--expr", "(exists x (= (* x x) (param t)))"]);
    assert_eq!(out.status.code(), Some(3));
    let ok = ffred(&["eval", "--mode", "ring-bounded", "--d", "2", "--expr", "(exists x (= (* x x) (param a)))", "--param", "a=(pow (param t) 4)"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(report(&ok)["checks"][0]["witnesses"]["bounds"]["search_points"], 729);
}

#[test]
fn witness_bundles_feed_eval() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("b.json");
    let out = ffred(&["witness", "--bundle", bundle.to_str().unwrap(), "add", "--a", "2", "--b", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["checks"][0]["witnesses"]["j"], 5);
    let out = ffred(&["eval", "--from-arith", "--expr", "(= (+ 2 3) 5)", "--witnesses", bundle.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    assert_eq!(ffred(&["witness", "divides", "--s1", "2", "--s2", "5"]).status.code(), Some(1));
    assert_eq!(ffred(&["witness", "version1", "--s", "3", "--p", "2", "--r", "2"]).status.code(), Some(0));
    assert_eq!(ffred(&["witness", "getdown", "--s", "2", "--p", "3", "--n", "2", "--a", "1,2"]).status.code(), Some(0));
}

#[test]
fn curve_and_demo() {
    let out = ffred(&["curve", "--p", "7", "--P", "1,2,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["checks"].as_array().unwrap().len() >= 7);
    assert_eq!(ffred(&["curve", "--p", "5", "--P", "0,0,0,1"]).status.code(), Some(2));
    let out = ffred(&["demo"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["checks"][1]["witnesses"]["agree"], 20);
}

#[test]
fn thread_cap_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "p = 5\nN = 20\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ffred"))
        .args(["demo", "--config", cfg.to_str().unwrap()])
        .env("FFRED_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["config"]["p"], 5);
    let bad = Command::new(env!("CARGO_BIN_EXE_ffred")).arg("demo").env("FFRED_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let out_file = dir.path().join("r.json");
    let out = ffred(&["demo", "--out", out_file.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    assert_eq!(serde_json::from_str::<Value>(&std::fs::read_to_string(&out_file).unwrap()).unwrap()["status"], "pass");
}
