use openxyz::config::{default_tolerances, parse_complex, parse_tol, FileConfig, Overrides, RunConfig};
use openxyz::linalg::c;
use openxyz::suites::expand;
use openxyz::Error;
use std::io::Write;

#[test]
fn complex_parsing() {
    assert_eq!(parse_complex("0.2,-0.1").unwrap(), c(0.2, -0.1));
    assert_eq!(parse_complex("[1, 2]").unwrap(), c(1.0, 2.0));
    assert_eq!(parse_complex("3").unwrap(), c(3.0, 0.0));
    assert!(parse_complex("1,2,3").is_err());
    assert!(parse_complex("x").is_err());
}

#[test]
fn tolerance_parsing() {
    assert_eq!(parse_tol("scalar=1e-7").unwrap(), ("scalar".to_string(), 1e-7));
    assert!(parse_tol("scalar").is_err());
    assert!(parse_tol("scalar=-1").is_err());
}

#[test]
fn flags_override_file() {
    let mut f = tempfile("a.toml");
    writeln!(f.1, "seed = 3\nsuites = [\"trig\"]\n[model]\nn = 4\neta = [0.3, 0.05]\n[tolerances]\nscalar = 1e-5").unwrap();
    let file = FileConfig::load(&f.0).unwrap();
    let o = Overrides { n: Some(2), seed: Some(9), tol: vec![("norm".into(), 1e-4)], ..Overrides::default() };
    let cfg = RunConfig::resolve(Some(file), o).unwrap();
    assert_eq!(cfg.model.n(), 2);
    assert_eq!(cfg.model.eta, c(0.3, 0.05));
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.solver.rng_seed, 9);
    assert_eq!(cfg.suites, vec!["trig".to_string()]);
    assert_eq!(cfg.tol("scalar"), 1e-5);
    assert_eq!(cfg.tol("norm"), 1e-4);
    let _ = std::fs::remove_file(&f.0);
}

#[test]
fn json_config_and_unknown_fields() {
    let mut f = tempfile("b.json");
    write!(f.1, "{{\"model\": {{\"n\": 2}}, \"roots\": [[0.1, 0.2]]}}").unwrap();
    let cfg = RunConfig::resolve(Some(FileConfig::load(&f.0).unwrap()), Overrides::default()).unwrap();
    assert_eq!(cfg.roots, vec![c(0.1, 0.2)]);
    let mut g = tempfile("c.toml");
    writeln!(g.1, "colour = 1").unwrap();
    assert!(matches!(FileConfig::load(&g.0), Err(Error::Config(_))));
    let _ = std::fs::remove_file(&f.0);
    let _ = std::fs::remove_file(&g.0);
}

#[test]
fn invalid_model_is_config_error() {
    let o = Overrides { tol: vec![("nope".into(), 1.0)], ..Overrides::default() };
    assert!(matches!(RunConfig::resolve(None, o), Err(Error::Config(_))));
    let mut f = tempfile("d.toml");
    writeln!(f.1, "[model]\ntau = [0.0, 0.05]").unwrap();
    let r = RunConfig::resolve(Some(FileConfig::load(&f.0).unwrap()), Overrides::default());
    assert_eq!(r.unwrap_err().exit_code(), 2);
    let _ = std::fs::remove_file(&f.0);
}

#[test]
fn tolerances_tighten_for_small_chains() {
    assert!(default_tolerances(2)["scalar"] < default_tolerances(4)["scalar"]);
}

#[test]
fn suite_aliases() {
    assert_eq!(expand(&["determinants".into()]).unwrap(), vec!["partition", "scalar", "norms"]);
    assert_eq!(expand(&[]).unwrap().len(), 10);
    assert_eq!(expand(&["trig".into(), "all".into()]).unwrap()[0], "trig");
    assert!(expand(&["x".into()]).is_err());
}

fn tempfile(name: &str) -> (std::path::PathBuf, std::fs::File) {
    let f = tempfile::Builder::new().suffix(name).tempfile().unwrap();
    let (file, path) = f.keep().unwrap();
    (path, file)
}
