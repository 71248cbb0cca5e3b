use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn toda(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_toda"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("TODA_THREADS", t),
        None => cmd.env_remove("TODA_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const PAIR_N2: &str = r#"{"n": 2, "input_kind": "pair", "pair": {"v0": ["1"], "v1": ["0", "1"]},
  "grid": {"half_width": 1.0, "points_per_side": 41}, "suites": "all"}"#;

#[test]
fn all_suites_pass_for_standard_pair() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", PAIR_N2);
    let report = dir.path().join("r.json");
    let out = toda(&["verify", "--config", &cfg, "--report", report.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["version"], "1");
    assert_eq!(doc["config_digest"].as_str().unwrap().len(), 64);
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["name"].is_string() && c["paper_ref"].is_string());
        let status = c["status"].as_str().unwrap();
        assert!(["pass", "skipped", "info"].contains(&status), "{c}");
    }
}

#[test]
fn printed_numerator_is_informational() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"n": 1, "input_kind": "function", "f": ["0", "1"], "R": "identity", "suites": ["reduced"]}"#,
    );
    let out = toda(&["verify", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let printed = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "reduced.printed-numerator")
        .unwrap();
    assert_eq!(printed["status"], "info");
    assert!(printed["witness"].as_str().unwrap().starts_with("mismatch"));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let cases = [
        r#"{"n": 2, "input_kind": "function", "f": ["0", "1"], "suites": ["frames"]}"#,
        r#"{"n": 2, "input_kind": "pair", "suites": ["frames"]}"#,
        r#"{"n": 2, "input_kind": "pair", "pair": {"v0": ["1"], "v1": ["0", "1"]}, "extra": 1}"#,
        r#"{"n": 1, "input_kind": "function", "f": ["0", "1.5"]}"#,
        "not json",
    ];
    for (k, text) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("c{k}.json"), text);
        let out = toda(&["verify", "--config", &cfg], None);
        assert_eq!(out.status.code(), Some(2), "{text}");
    }
    let out = toda(&["verify", "--config", "/nonexistent/config.json"], None);
    assert_eq!(out.status.code(), Some(2));
    let cfg = write(dir.path(), "ok.json", PAIR_N2);
    assert_eq!(toda(&["verify", "--config", &cfg], Some("zero")).status.code(), Some(2));
}

#[test]
fn inapplicable_suites_are_skipped_under_all() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"n": 2, "input_kind": "function", "f": ["0", "0", "1"], "grid": {"center": [1, 1], "half_width": 0.5, "points_per_side": 41}}"#,
    );
    let out = toda(&["verify", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let skipped: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "skipped")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(skipped, ["wronskian", "frames", "kernel"]);
}

#[test]
fn sample_csv_layout() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"n": 1, "input_kind": "pair", "pair": {"v0": ["1"], "v1": ["0", "1"]}, "grid": {"half_width": 1, "points_per_side": 3}}"#,
    );
    let csv = dir.path().join("s.csv");
    let out = toda(&["sample", "--config", &cfg, "--out", csv.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,u_1,masked");
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[5], "0,0,0,0");
    let at_one: Vec<&str> = lines[6].split(',').collect();
    assert_eq!(&at_one[..2], ["1", "0"]);
    let u: f64 = at_one[2].parse().unwrap();
    assert!((u + 2.0 * 2f64.ln()).abs() < 1e-12);
}

#[test]
fn sample_masks_poles() {
    // make_unit_pair(z) = (1/z, z²/3) has a pole at 0.
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"n": 1, "input_kind": "pair", "pair": {"v0": {"num": ["1"], "den": ["0", "1"]}, "v1": ["0", "0", "1/3"]}, "grid": {"half_width": 1, "points_per_side": 21}}"#,
    );
    let csv = dir.path().join("s.csv");
    assert_eq!(toda(&["sample", "--config", &cfg, "--out", csv.to_str().unwrap()], None).status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let masked: Vec<&str> = text.lines().skip(1).filter(|l| l.ends_with(",1")).collect();
    assert!(!masked.is_empty());
    assert!(masked.iter().all(|l| l.split(',').nth(2) == Some("")));
    assert_eq!(text.lines().skip(1).count(), 21 * 21);
}

#[test]
fn sample_without_grid_is_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"n": 1, "input_kind": "function", "f": ["0", "1"]}"#);
    let csv = dir.path().join("s.csv");
    assert_eq!(toda(&["sample", "--config", &cfg, "--out", csv.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn info_prints_problem() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", PAIR_N2);
    let out = toda(&["info", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n = 2"));
    assert!(text.contains("[ 2 -1]"));
    assert!(text.contains("shift constants e^c_i: [2, 2]"));
}

#[test]
fn failing_check_exits_1() {
    // Valid inputs satisfy every exact identity; a grid far too coarse for
    // the asymptotic regime makes the order check fail.
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"n": 1, "input_kind": "function", "f": ["0", "0", "0", "0", "0", "0", "1"],
           "grid": {"center": [0, 0], "half_width": 2, "points_per_side": 5, "exclusion_radius": 0.01}, "suites": ["numeric"]}"#,
    );
    let out = toda(&["verify", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for c in doc["checks"].as_array().unwrap() {
        if c["status"] == "fail" {
            assert!(c["witness"].is_string());
        }
    }
}

#[test]
fn reports_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", PAIR_N2);
    let mut outputs = Vec::new();
    for t in ["1", "4"] {
        let r = dir.path().join(format!("r{t}.json"));
        let s = dir.path().join(format!("s{t}.csv"));
        assert_eq!(toda(&["verify", "--config", &cfg, "--report", r.to_str().unwrap()], Some(t)).status.code(), Some(0));
        assert_eq!(toda(&["sample", "--config", &cfg, "--out", s.to_str().unwrap()], Some(t)).status.code(), Some(0));
        outputs.push((fs::read(&r).unwrap(), fs::read(&s).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}
