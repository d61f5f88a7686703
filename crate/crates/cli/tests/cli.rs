use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn tauq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tauq")).args(args).env_remove("TAUQ_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn partitions_list() {
    let o = tauq(&["partitions", "list", "--weight", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "6\n5,1\n4,2\n3,2,1\n");
}

#[test]
fn qschur_compute_and_eval() {
    let o = tauq(&["qschur", "compute", "--lambda", "2,1", "--max-weight", "3", "--normalization", "mac"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4/3*t1^3 - 4*t3");

    let o = tauq(&["qschur", "eval", "--lambda", "2,1", "--point", "delta1", "--normalization", "mac"]);
    assert_eq!(stdout(&o).trim(), "4/3");

    let dir = tempfile::tempdir().unwrap();
    let point = dir.path().join("p.json");
    fs::write(&point, r#"{"1": "1/2", "3": 1}"#).unwrap();
    let arg = format!("@{}", point.display());
    let o = tauq(&["qschur", "eval", "--lambda", "2,1", "--point", &arg, "--normalization", "mac"]);
    // 4/3·(1/8) − 4·1
    assert_eq!(stdout(&o).trim(), "-23/6");
}

#[test]
fn verify_writes_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out/report.json");
    let o = tauq(&["verify", "bgw-q", "--max-weight", "6", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("bgw-q: PASS"));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert!(report["timing"]["wall_seconds"].is_number());
    let labels: Vec<&str> = report["items"].as_array().unwrap().iter().map(|i| i["label"].as_str().unwrap()).collect();
    for l in ["hook 6", "hook 3,2,1", "hbar^6"] {
        assert!(labels.contains(&l), "missing item {l}");
    }
}

#[test]
fn every_campaign_passes_at_small_caps() {
    let runs: &[&[&str]] = &[
        &["verify", "mm", "--max-weight", "6"],
        &["verify", "c2", "--max-weight", "4"],
        &["verify", "c3", "--max-weight", "6", "--beta", "2/3"],
        &["verify", "perpart", "--max-weight", "6"],
        &["verify", "virasoro", "--model", "kw", "--max-weight", "6"],
        &["verify", "cauchy", "--max-weight", "6"],
        &["verify", "hook", "--max-weight", "6"],
        &["verify", "operators", "--max-weight", "5"],
        &["verify", "hirota-bkp", "--model", "bgw", "--max-weight", "4", "--nu-symbolic"],
        &["verify", "hirota-kp", "--model", "kw", "--max-weight", "6"],
    ];
    for args in runs {
        let o = tauq(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "nonsense", "--max-weight", "3"][..],
        &["verify", "virasoro", "--max-weight", "4"],
        &["verify", "c2", "--max-weight", "4", "--nu", "1", "--nu-symbolic"],
        &["qschur", "compute", "--lambda", "2,2"],
        &["verify", "hirota-bkp", "--model", "bgw", "--max-weight", "6", "--hbar-order", "2"],
        &["tau", "cutjoin", "--model", "kw"],
    ] {
        let o = tauq(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.path().join(format!("r{threads}.json"));
        let o = tauq(&["--threads", threads, "verify", "mm", "--max-weight", "9", "--report", path.to_str().unwrap()]);
        assert!(o.status.success());
        let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        bodies.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let plain = tauq(&["tau", "qexpand", "--model", "kw", "--max-weight", "9"]);
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_tauq"))
            .args(["tau", "qexpand", "--model", "kw", "--max-weight", "9"])
            .env("TAUQ_CACHE_DIR", &cache)
            .output()
            .unwrap()
    };
    let cold = run();
    assert!(cache.join("index.json").exists());
    let warm = run();
    assert_eq!(stdout(&plain), stdout(&cold));
    assert_eq!(stdout(&plain), stdout(&warm));
}

#[test]
fn csv_export() {
    let o = tauq(&["tau", "cutjoin", "--model", "bgw", "--order", "2", "--csv", "-"]);
    assert_eq!(stdout(&o), "hbar_order,monomial,coefficient\n0,1,1\n1,t1,1/8\n2,t1^2,9/128\n");
}

#[test]
fn log_of_cutjoin_series() {
    let o = tauq(&["tau", "cutjoin", "--model", "kw", "--order", "1", "--log"]);
    assert_eq!(stdout(&o).trim(), "(1/6*t1^3 + 1/8*t3)*hbar^1");
}

#[test]
fn hypergeometric_and_family_commands() {
    let o = tauq(&["tau", "hypergeom", "--model", "kw", "--max-weight", "3"]);
    assert_eq!(stdout(&o).trim(), "(1) + (1/48*t1^3 + 1/16*t3)*hbar^1");
    let o = tauq(&["tau", "hypergeom", "--model", "bgw", "--max-weight", "1", "--nu", "1/4"]);
    assert_eq!(stdout(&o).trim(), "(1)");
    let o = tauq(&["tau", "bkp-family", "--b", "0", "--order", "1"]);
    // Ŵ₁·1 + t₁³/144 = t₁³/6 + t₁³/144 + t₃/8
    assert_eq!(stdout(&o).trim(), "(1) + (25/144*t1^3 + 1/8*t3)*hbar^1");
}

#[test]
fn bench_warm_runs_do_no_pfaffians() {
    let o = tauq(&["bench", "--from", "4", "--to", "8", "--step", "2"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    let mut last = 0;
    for l in levels {
        assert_eq!(l["warm_pfaffians"], 0);
        let terms = l["q_terms"].as_u64().unwrap();
        assert!(terms >= last);
        last = terms;
    }
}
