use openxyz::cli::main_with;
use serde_json::Value;
use std::path::PathBuf;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn tmp(name: &str) -> PathBuf {
    tempfile::Builder::new().suffix(name).tempfile().unwrap().into_temp_path().keep().unwrap()
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = tmp(".json");
    let mut v: Vec<String> = vec!["openxyz".into()];
    v.extend(args.iter().map(|s| s.to_string()));
    v.push("--out".into());
    v.push(out.to_string_lossy().into_owned());
    let code = main_with(v);
    let json = std::fs::read_to_string(&out).ok().and_then(|s| serde_json::from_str(&s).ok()).unwrap_or(Value::Null);
    let _ = std::fs::remove_file(&out);
    (code, json)
}

#[test]
fn verify_elliptic_passes() {
    let (code, rep) = run(&["verify", "--config", &fixture("default.toml"), "--suite", "elliptic"]);
    assert_eq!(code, 0);
    assert_eq!(rep["pass"], true);
    let recs = rep["records"].as_array().unwrap();
    assert_eq!(recs.len(), 4);
    assert!(recs.iter().all(|r| r["name"].as_str().unwrap().starts_with("elliptic/")));
}

#[test]
fn unknown_suite_is_config_error() {
    let (code, _) = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(run(&["verify", "--tol", "bogus=1e-3"]).0, 2);
    assert_eq!(run(&["verify", "--tol", "elliptic"]).0, 2);
    assert_eq!(run(&["scalar", "--kind", "III"]).0, 2);
    assert_eq!(run(&["verify", "--config", "/nonexistent.toml"]).0, 2);
}

#[test]
fn tolerance_override_can_fail_a_check() {
    let (code, rep) = run(&["verify", "--suite", "trig", "--tol", "trig=1e-30"]);
    assert_eq!(code, 1);
    assert_eq!(rep["pass"], false);
}

#[test]
fn scalar_end_to_end() {
    let (code, rep) = run(&["scalar", "--N", "2", "--kind", "I-I", "--u", "0.21,0.03", "--solve"]);
    assert_eq!(code, 0);
    for r in rep["records"].as_array().unwrap() {
        assert!(r["residual"].as_f64().unwrap() < 1e-8);
        assert!(r.get("value").is_some() && r.get("oracle").is_some() && r.get("cond").is_some());
    }
}

#[test]
fn scalar_off_shell_needs_force() {
    let (code, rep) = run(&["scalar", "--config", &fixture("offshell.json")]);
    assert_eq!(code, 3);
    assert!(rep["abort"].as_str().unwrap().contains("off shell"));
    let (code, rep) = run(&["scalar", "--config", &fixture("offshell.json"), "--force"]);
    assert_ne!(code, 3);
    assert!(rep["records"][0]["warning"].is_string());
}

#[test]
fn large_chain_skips_oracle() {
    let us: Vec<String> = (0..8).map(|k| format!("{},{}", 0.05 * k as f64 - 0.17, 0.01 * k as f64)).collect();
    let mut args = vec!["scalar", "--N", "8", "--kind", "I"];
    for u in &us {
        args.push("--u");
        args.push(u);
    }
    let (code, rep) = run(&args);
    assert_eq!(code, 0);
    let r = &rep["records"][0];
    assert!(r.get("oracle").is_none());
    assert!(r["notes"][0].as_str().unwrap().starts_with("oracle: too large"));
    assert!(r["value"].is_array());
}

#[test]
fn norm_and_spectrum_at_two_sites() {
    let (code, rep) = run(&["norm", "--N", "2", "--kind", "II", "--solve"]);
    assert_eq!(code, 0);
    assert!(rep["records"].as_array().unwrap().iter().all(|r| r["residual"].as_f64().unwrap() < 1e-8));
    let (code, rep) = run(&["spectrum", "--N", "2", "--u", "0.13,0.02", "--u", "0.31,-0.05"]);
    assert_eq!(code, 0);
    assert_eq!(rep["records"].as_array().unwrap().len(), 2);
}

#[test]
fn spectrum_without_roots_is_empty_match() {
    // no M=1 eigenstates exist at N=4
    let (code, rep) = run(&["spectrum", "--N", "4", "--M", "1"]);
    assert_eq!(code, 0);
    let notes = rep["records"][0]["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("empty match set")));
}

#[test]
fn csv_written() {
    let csv = tmp("residuals.csv");
    let (code, _) = run(&["verify", "--suite", "trig", "--out-csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let _ = std::fs::remove_file(&csv);
    assert!(text.starts_with("name,identity,residual,tolerance,pass,wall_ms"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        for r in v["records"].as_array_mut().unwrap() {
            r["wall_ms"] = Value::Null;
        }
        v
    };
    let a = strip(run(&["verify", "--suite", "structural", "--seed", "11", "--jobs", "3"]).1);
    let b = strip(run(&["verify", "--suite", "structural", "--seed", "11"]).1);
    assert_eq!(a, b);
}
