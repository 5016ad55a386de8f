use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use redheffer_cli::cache::cache_file;
use redheffer_cli::config::{Cli, RunConfig};
use redheffer_cli::emit::{render, CONJECTURE_HEADER};
use redheffer_cli::run::OverallStatus;
use redheffer_cli::{run_suite, Format, ReportBundle};
use clap::Parser;
use serde_json::Value;

fn redheffer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redheffer"))
        .args(args)
        .env_remove("REDHEFFER_CACHE_DIR")
        .output()
        .expect("spawn redheffer")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn without_timing(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn config(args: &[&str]) -> RunConfig {
    let mut full = vec!["redheffer"];
    full.extend_from_slice(args);
    RunConfig::from_cli(Cli::try_parse_from(full).unwrap()).unwrap()
}

#[test]
fn single_check_matches_golden_report() {
    let o = redheffer(&["check", "--theorem", "T1", "--nu", "0.5", "--grid", "99", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    let got = without_timing(&stdout(&o));
    assert_eq!(got, serde_json::from_str::<Value>(&golden("check_t1_half.json")).unwrap());
    let report = &got["inequality"][0];
    assert_eq!(report["theorem"], "T1");
    assert!(report["min_lower_margin"].as_f64().unwrap() > 0.0);
    assert!(report["min_upper_margin"].as_f64().unwrap() > 0.0);
    assert_eq!(got["summary"]["passed"], 1);
}

#[test]
fn conjecture_csv_matches_golden() {
    let o = redheffer(&["conjecture", "--nu", "-0.5,0.5", "--m-max", "3", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text, golden("conjecture_half_orders.csv"));
    assert_eq!(text.lines().next().unwrap(), CONJECTURE_HEADER.join(","));
}

#[test]
fn json_keys_are_sorted_at_every_level() {
    let o = redheffer(&["conjecture", "--nu", "0", "--m-max", "2", "--format", "json", "--no-cache"]);
    fn check(v: &Value) {
        match v {
            Value::Object(m) => {
                let keys: Vec<_> = m.keys().collect();
                let mut sorted = keys.clone();
                sorted.sort();
                assert_eq!(keys, sorted);
                m.values().for_each(check);
            }
            Value::Array(a) => a.iter().for_each(check),
            _ => {}
        }
    }
    check(&serde_json::from_str(&stdout(&o)).unwrap());
}

#[test]
fn exit_codes() {
    let o = redheffer(&["check", "--theorem", "T1", "--nu", "-1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nu must exceed -1"));

    assert_eq!(redheffer(&["check", "--bogus"]).status.code(), Some(2));
    assert_eq!(redheffer(&["check", "--theorem", "T4"]).status.code(), Some(2));
    assert_eq!(redheffer(&["conjecture", "--nu-range", "1:0:0.1"]).status.code(), Some(2));
    assert_eq!(redheffer(&["eval", "--function", "Gamma", "--nu", "0", "--x", "1"]).status.code(), Some(2));
    let o = redheffer(&["check", "--theorem", "TAN", "--no-cache", "--output", "/dev/null/report.json"]);
    assert_eq!(o.status.code(), Some(2));

    // A point outside the domain is a failed evaluation, reported and exit 1.
    let o = redheffer(&["eval", "--function", "tanc", "--x", "0.5,2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("tanc,,,0.5,1.092604979687581"));
    assert!(text.contains("outside the domain"));
}

#[test]
fn exploratory_results_do_not_fail_the_run() {
    let o = redheffer(&["check", "--theorem", "CONJ", "--nu", "0,1", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    let v = without_timing(&stdout(&o));
    assert_eq!(v["summary"]["exploratory"], 2);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["status"], "passed");
}

#[test]
fn repeated_runs_are_byte_identical_apart_from_timing() {
    let args = ["report", "--nu", "-0.5,0.5", "--r", "1.5707963267948966", "--m-max", "5", "--no-cache"];
    let a = stdout(&redheffer(&args));
    let b = stdout(&redheffer(&args));
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.trim_start().starts_with("\"elapsed_ms\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    assert_ne!(a.len(), 0);
    let csv_args = ["conjecture", "--nu-range", "-0.9:1:0.1", "--no-cache"];
    assert_eq!(redheffer(&csv_args).stdout, redheffer(&csv_args).stdout);
}

#[test]
fn warm_cache_equals_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["check", "--theorem", "T2", "--nu", "-0.25,2", "--cache-dir", d];
    let cold = redheffer(&args);
    let file = cache_file(dir.path(), -0.25, 200, 1e-15);
    assert!(file.exists(), "{}", file.display());
    let warm = redheffer(&args);
    assert_eq!(without_timing(&stdout(&cold)), without_timing(&stdout(&warm)));
    let uncached = redheffer(&["check", "--theorem", "T2", "--nu", "-0.25,2", "--no-cache"]);
    assert_eq!(without_timing(&stdout(&cold)), without_timing(&stdout(&uncached)));

    // A damaged entry is rebuilt, not trusted.
    fs::write(&file, "{\"nu\": -0.25, \"tol\": 1e-15, \"zeros\": []}").unwrap();
    let repaired = redheffer(&args);
    assert_eq!(without_timing(&stdout(&repaired)), without_timing(&stdout(&cold)));
    assert!(fs::read_to_string(&file).unwrap().len() > 1000);
}

#[test]
fn cache_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_redheffer"))
        .args(["check", "--theorem", "T1", "--nu", "1"])
        .env("REDHEFFER_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(cache_file(dir.path(), 1.0, 200, 1e-15).exists());
}

#[test]
fn empty_bundle_is_a_valid_skeleton() {
    let b = ReportBundle::empty(config(&["check", "--theorem", "T1"]));
    let v: Value = serde_json::from_str(&render(&b, Format::Json).unwrap()).unwrap();
    for key in ["config", "conjecture", "inequality", "monotonicity", "summary", "status", "versions"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["inequality"], Value::Array(vec![]));
    let csv = render(&b, Format::Csv).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn library_runs_match_the_binary() {
    let mut c = config(&["conjecture", "--nu", "-0.5", "--m-max", "4"]);
    c.cache_dir = None;
    let b = run_suite(&c).unwrap();
    assert_eq!(b.status, OverallStatus::Passed);
    assert_eq!(b.conjecture.len(), 4);
    assert!((b.conjecture[0].ratio - 15.0 / 7.0).abs() < 1e-12);
    let text = render(&b, Format::Csv).unwrap();
    let o = redheffer(&["conjecture", "--nu", "-0.5", "--m-max", "4", "--no-cache"]);
    assert_eq!(text, stdout(&o));
}
