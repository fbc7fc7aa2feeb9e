use std::process::{Command, Output};

fn hookpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hookpath"))
        .args(args)
        .env_remove("HOOKPATH_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_all_suites_json() {
    let args = [
        "verify",
        "--p",
        "3",
        "--k",
        "0,1",
        "--max-floor",
        "12",
        "--suite",
        "all",
        "--format",
        "json",
    ];
    let out = hookpath(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut suites = std::collections::BTreeSet::new();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema_version"], 1);
        if v["record"] == "check" {
            suites.insert(v["suite"].as_str().unwrap().to_string());
            if v["severity"] == "hard" {
                assert_eq!(v["pass"], true, "{line}");
            }
        }
    }
    assert_eq!(suites.len(), 6);
    assert_eq!(stdout(&hookpath(&args)), text, "output is deterministic");
}

#[test]
fn rejects_even_p() {
    let out = hookpath(&["verify", "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must be an odd prime"));
}

#[test]
fn rejects_floor_below_class() {
    let out = hookpath(&[
        "verify",
        "--p",
        "3",
        "--k",
        "2",
        "--max-floor",
        "4",
        "--suite",
        "fibonacci",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fibonacci_worked_example() {
    let out = hookpath(&[
        "verify",
        "--p",
        "5",
        "--k",
        "2",
        "--suite",
        "fibonacci",
        "--max-floor",
        "14",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for v in ["202", "206", "210", "186", "190", "194", "1526"] {
        assert!(text.contains(v), "missing {v}");
    }
    assert!(text.contains("discrepancy worked-example p=5 k=2 s=3 l=19: oracle 194 vs 190"));
}

#[test]
fn resource_guard() {
    let args = [
        "verify",
        "--p",
        "7",
        "--k",
        "0",
        "--max-floor",
        "24",
        "--suite",
        "stats",
    ];
    assert_eq!(hookpath(&args).status.code(), Some(3));
    let small = [
        "verify",
        "--p",
        "3",
        "--k",
        "0",
        "--max-floor",
        "8",
        "--path-budget",
        "10",
    ];
    assert_eq!(hookpath(&small).status.code(), Some(3));
    let forced = [&small[..], &["--force"]].concat();
    assert_eq!(hookpath(&forced).status.code(), Some(0));
}

#[test]
fn csv_projection() {
    let out = hookpath(&["verify", "--p", "3", "--k", "0", "--max-floor", "6", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("schema_version,record,suite,check,severity,p,k,floor,s"));
    assert!(lines.all(|l| l.starts_with("1,check,")));
}

#[test]
fn writes_report_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.ndjson");
    let cache = dir.path().join("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hookpath"))
            .args([
                "verify",
                "--p",
                "3",
                "--k",
                "1",
                "--max-floor",
                "9",
                "--suite",
                "eulerian",
                "--format",
                "json",
            ])
            .arg("--out")
            .arg(&out_path)
            .env("HOOKPATH_CACHE_DIR", &cache)
            .output()
            .unwrap()
    };
    assert_eq!(run().status.code(), Some(0));
    let first = std::fs::read_to_string(&out_path).unwrap();
    assert!(cache.join("eulerian-p3-k1-floor9.json").exists());
    assert_eq!(run().status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), first);
}

#[test]
fn show_commands() {
    let poly = hookpath(&["show", "poly", "--p", "3", "--floor", "4", "--k", "0"]);
    assert_eq!(stdout(&poly).trim(), "q^2 + 3q + 2");
    let fib = hookpath(&["show", "fib", "--p", "5", "--k", "2", "--s", "3", "--l", "0"]);
    assert_eq!(stdout(&fib).trim(), "202");
    let gf = hookpath(&["show", "genfun", "--p", "3", "--k", "0"]);
    assert!(stdout(&gf).starts_with("5, 27, 117"));
    let json = hookpath(&["show", "poly", "--p", "3", "--floor", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!([2, 3, 1]));
    let vertex = hookpath(&["show", "vertex", "--p", "3", "--floor", "5", "--k", "-1", "--l", "2"]);
    assert_eq!(vertex.status.code(), Some(0));
    let paths = hookpath(&["show", "paths", "--p", "3", "--floor", "4", "--k", "0", "--limit", "3"]);
    assert_eq!(stdout(&paths).lines().count(), 4);
}
