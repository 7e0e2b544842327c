use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dyh_core::harness::Report;

fn dyh(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyh"))
        .args(args)
        .env("DYH_CACHE_DIR", cache)
        .output()
        .expect("dyh runs")
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("dyh-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

const SMALL: [&str; 8] = ["-M", "2", "-N", "2", "-W", "2", "-p", "3"];

fn with_small<'a>(head: &[&'a str]) -> Vec<&'a str> {
    head.iter().copied().chain(SMALL).collect()
}

#[test]
fn empty_run_succeeds_with_an_empty_report() {
    let d = scratch("empty");
    let out = dyh(&["run"], &d);
    assert!(out.status.success());
    let r = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(r.records.is_empty());
    assert_eq!(r.config.cache_dir, d);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let d = scratch("usage");
    let out = dyh(&["run", "--suite", "rmatrix,nope"], &d);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn rmatrix_suite_passes_at_n2() {
    let d = scratch("rmatrix");
    let report = d.join("report.json");
    let out = dyh(&with_small(&["run", "--suite", "rmatrix", "--output", report.to_str().unwrap()]), &d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = Report::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r.records.iter().any(|x| x.check_id.starts_with("ybe")));
    assert!(r.passed() && r.records.iter().all(|x| x.suite == "rmatrix"));
}

#[test]
fn a_failing_check_gives_exit_status_one() {
    let d = scratch("fail");
    let bad = d.join("bad.txt");
    std::fs::write(&bad, "n = two\n").unwrap();
    let out = dyh(&["run", "--suite", "wakimoto", "--wakimoto-params", bad.to_str().unwrap(), "-M", "2", "-N", "2", "-p", "2"], &d);
    assert_eq!(out.status.code(), Some(1));
    let r = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let f = r.records.iter().find(|x| !x.passed()).unwrap();
    assert!(f.witness.is_some());
}

#[test]
fn corrupted_cache_is_rederived_with_a_warning() {
    let d = scratch("corrupt");
    let run = |d: &Path| dyh(&with_small(&["run", "--suite", "relations"]), d);
    let first = Report::from_json(&String::from_utf8(run(&d).stdout).unwrap()).unwrap();
    let path = &first.cache[0].path;
    let text = std::fs::read_to_string(path).unwrap();
    std::fs::write(path, text.replacen("rows ", "rows 1", 1)).unwrap();
    let out = run(&d);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("re-deriving"));
    let second = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(second.deterministic(), first.deterministic());
    assert_eq!(std::fs::read_to_string(path).unwrap(), text);
}

#[test]
fn export_tables_round_trips_and_show_config_echoes_flags() {
    let d = scratch("export");
    let to = d.join("table.txt");
    let out = dyh(&with_small(&["export-tables", "--to", to.to_str().unwrap()]), &d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&to).unwrap();
    assert_eq!(dyh_core::algebra::RelationTable::from_text(&text).unwrap().to_text(), text);

    let out = dyh(&["show-config", "--c=3/2", "--suite", "hc", "--seed", "9"], &d);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["c"], "3/2");
    assert_eq!(v["seed"], 9);
    assert_eq!(v["suites"][0], "hc");
}
