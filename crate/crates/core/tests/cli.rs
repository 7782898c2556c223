use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rgsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rgsym")).args(args).output().expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn listing_is_stable() {
    let a = rgsym(&["list-scenarios"]);
    let b = rgsym(&["list-scenarios"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("bunch: Eqs. (66)–(74)"));
    let ids: Vec<&str> = text.lines().map(|l| l.split(':').next().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(rgsym(&["run", "--scenario", "nope", "--output", out]).status.code(), Some(2));
    assert_eq!(rgsym(&["run", "--scenario", "hopf", "--output", out, "--hopf.bogus=1"]).status.code(), Some(2));
    assert_eq!(rgsym(&["run", "--scenario", "hopf", "--output", out, "--eps=abc"]).status.code(), Some(2));
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[transfer]\nunknown = 3\n").unwrap();
    let code = rgsym(&["run", "--scenario", "transfer", "--output", out, "--config", cfg.to_str().unwrap()]).status.code();
    assert_eq!(code, Some(2));
}

#[test]
fn sine_blowup_time() {
    let dir = tempfile::tempdir().unwrap();
    let o = rgsym(&["run", "--scenario", "hopf", "--profile", "sine", "--eps", "1.0", "--output", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    let sing = r["singularities"].as_array().unwrap();
    let rec = sing.iter().find(|s| s["name"].as_str().unwrap().ends_with("gradient_blowup")).unwrap();
    assert!(rec["relative_error"].as_f64().unwrap().abs() < 0.01);
    assert!((rec["predicted"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn soliton_collapse_density() {
    let dir = tempfile::tempdir().unwrap();
    let o = rgsym(&["run", "--scenario", "chaplygin-soliton", "--fast", "--output", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path());
    let check = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"].as_str().unwrap().ends_with("axis_collapse_density"))
        .unwrap();
    assert!((check["rg"].as_f64().unwrap() - 2.0).abs() <= 1e-6);
    assert_eq!(check["pass"], Value::Bool(true));
    assert!(r["provenance"]["config_hash"].as_str().unwrap().len() == 64);
}

#[test]
fn tables_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = rgsym(&["run", "--scenario", "bunch", "--fast", "--seed", "7", "--output", d.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n.to_string_lossy().ends_with(".dat"))
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
    let (ra, rb) = (report(a.path()), report(b.path()));
    assert_eq!(ra["checks"], rb["checks"]);
}
