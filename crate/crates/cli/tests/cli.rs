use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scatter-ef"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn term_commands() {
    assert_eq!(stdout(&run(&["print", "w^2 . w*"])).trim(), "w^2.w*");
    assert_eq!(stdout(&run(&["print", "z"])).trim(), "w* + w");
    assert_eq!(stdout(&run(&["normalize", "2.w"])).trim(), "w");
    assert_eq!(stdout(&run(&["rank", "w"])).trim(), "1");
    let ends = json(&["ends", "w + 1"]);
    assert_eq!(ends["least"], true);
    assert_eq!(ends["greatest"], true);
    let p = json(&["parse", "sumw[; w* + w]"]);
    assert_eq!(p["term"], "sumw[; w* + w]");
}

#[test]
fn verdict_schema() {
    let v = json(&["length", "--cap", "6", "w^2 + z", "w^2"]);
    assert_eq!(v["relation"], "optimal_length");
    assert_eq!(v["value"], 3);
    assert_eq!(v["source"], "engine");
    assert!(v["witness"].is_null());
    for key in ["a", "b", "relation", "value", "source", "witness"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let v = json(&["equiv", "-n", "4", "w", "w.2"]);
    assert_eq!(v["relation"], "optimal_length");
    assert_eq!(v["value"], 2);
    let v = json(&["equiv", "-n", "3", "7", "8"]);
    assert_eq!(v["relation"], "equivalent_up_to");
    assert_eq!(v["value"], 3);
}

#[test]
fn witness_moves() {
    let v = json(&["witness", "-n", "4", "w", "w*"]);
    assert_eq!(v["relation"], "inequivalent_at_most");
    assert_eq!(v["value"], 2);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
    let v = json(&["witness", "-n", "3", "w", "w + w"]);
    assert_eq!(v["relation"], "inequivalent_at_most");
    let v = json(&["witness", "-n", "2", "w", "w + w"]);
    assert_eq!(v["relation"], "equivalent_up_to");
    assert!(v["witness"].is_null());
}

#[test]
fn predict_reports_its_rule() {
    let v = json(&["predict", "w^2", "w^2.w"]);
    assert_eq!(v["relation"], "optimal_length");
    assert_eq!(v["value"], 4);
    assert_eq!(v["source"], "power-times-ordinal");
    let v = json(&["predict", "w* + w.w*", "w*^2 + w.w*"]);
    assert_eq!(v["value"], 3);
    assert_eq!(v["source"], "two-term-sum-exception");
    let text = stdout(&run(&["predict", "w.w*", "w*.w"]));
    assert!(text.contains("opposite-start-monomials"), "{text}");
}

#[test]
fn finite_oracle() {
    for (k, l, n, want) in [
        ("1", "2", "1", "true"),
        ("1", "2", "2", "false"),
        ("7", "8", "3", "true"),
        ("6", "8", "3", "false"),
    ] {
        assert_eq!(stdout(&run(&["oracle-finite", k, l, n])).trim(), want, "{k} {l} {n}");
    }
    assert_eq!(run(&["oracle-finite", "21", "1", "1"]).status.code(), Some(1));
}

#[test]
fn classify_is_deterministic() {
    let a = json(&["classify", "--max-exp-sum", "2", "-n", "3"]);
    let b = json(&["classify", "--max-exp-sum", "2", "-n", "3"]);
    assert_eq!(a, b);
    let classes = a.as_array().unwrap();
    let members: usize = classes.iter().map(|c| c["members"].as_array().unwrap().len()).sum();
    assert_eq!(members, 6);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["print", "w^0"]).status.code(), Some(1));
    assert_eq!(run(&["print", "w +"]).status.code(), Some(1));
    assert_eq!(run(&["equiv", "w"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["validate", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(
        run(&["validate", "--suite", "equal-lengths", "--budget", "depth"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let ok = run(&[
        "validate",
        "--suite",
        "equal-lengths",
        "--budget",
        "max-exp-sum=2,depth=6",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["validate", "--suite", "two-term-sums", "--budget", "max-exp-sum=2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn validate_json_is_seeded() {
    let args = [
        "validate",
        "--suite",
        "properties",
        "--budget",
        "cases=15",
        "--seed",
        "11",
    ];
    let strip = |mut v: Value| {
        for r in v.as_array_mut().unwrap() {
            r["wall_time"] = Value::Null;
        }
        v
    };
    let a = strip(json(&args));
    assert_eq!(a, strip(json(&args)));
    assert_eq!(a[0]["seed"], 11);
    assert_eq!(a[0]["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn cache_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.cache");
    let p = path.to_str().unwrap();
    let first = json(&["--cache", p, "length", "--cap", "6", "w^2 + z", "w^2"]);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("scatter-ef-cache v1 "));
    assert!(text.lines().skip(1).all(|l| l.split('\t').count() >= 2));
    let second = json(&["--cache", p, "length", "--cap", "6", "w^2 + z", "w^2"]);
    assert_eq!(first, second);

    fs::write(&path, "scatter-ef-cache v9 abc\n").unwrap();
    let o = run(&["--cache", p, "equiv", "-n", "2", "w", "w"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("version"));
    assert_eq!(fs::read_to_string(&path).unwrap(), "scatter-ef-cache v9 abc\n");
}
