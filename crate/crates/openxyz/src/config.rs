//! Run configuration: a TOML or JSON file, overridden by command-line flags.
//! Complex numbers are written as `[re, im]`.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::solver::SolverConfig;
use crate::C64;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Model section of the file; missing fields fall back to the seeded point.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub tau: Option<C64>,
    pub eta: Option<C64>,
    pub lambda1: Option<C64>,
    pub lambda2: Option<C64>,
    pub xi: Option<C64>,
    pub xibar: Option<C64>,
    pub z: Option<Vec<C64>>,
    /// Number of sites when `z` is not given.
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub model: ModelSection,
    pub solver: SolverConfig,
    pub suites: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<PathBuf>,
    pub output_csv: Option<PathBuf>,
    pub seed: Option<u64>,
    pub m: Option<usize>,
    pub kind: Option<String>,
    /// Free spectral parameters (the u's of a scalar product, or probe points).
    pub u: Vec<C64>,
    /// Bethe roots supplied instead of `--solve`.
    pub roots: Vec<C64>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        }
    }
}

/// Values given on the command line; `None` / empty means "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub suites: Vec<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub kind: Option<String>,
    pub u: Vec<C64>,
    pub solve: bool,
    pub force: bool,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
    pub tol: Vec<(String, f64)>,
    pub jobs: Option<usize>,
}

/// Fully resolved configuration for one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelParams,
    pub solver: SolverConfig,
    pub suites: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
    pub seed: u64,
    pub m: Option<usize>,
    pub kind: Option<String>,
    pub u: Vec<C64>,
    pub roots: Vec<C64>,
    pub solve: bool,
    pub force: bool,
    pub jobs: usize,
}

/// Built-in tolerances. Several loosen for N > 2.
pub fn default_tolerances(n: usize) -> BTreeMap<String, f64> {
    let small = n <= 2;
    let pairs = [
        ("elliptic", 1e-10),
        ("structural", 1e-10),
        ("bridge", 1e-9),
        ("fmatrix", 1e-9),
        ("triangular", 1e-14),
        ("nondegenerate", 1e-10),
        ("twisted", 1e-10),
        ("creation", 1e-9),
        ("partition", if small { 1e-9 } else { 1e-8 }),
        ("scalar", if small { 1e-8 } else { 1e-6 }),
        ("norm", if small { 1e-8 } else { 1e-6 }),
        ("richardson", 1e-5),
        ("spectrum", 1e-6),
        ("eigen", 1e-7),
        ("commutator", if small { 1e-9 } else { 1e-8 }),
        ("orthogonality", 1e-6),
        ("symmetry", 1e-9),
        ("trig", 1e-5),
        ("finite_difference", 1e-6),
    ];
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Parses `NAME=VALUE`.
pub fn parse_tol(s: &str) -> Result<(String, f64)> {
    let (k, v) = s.split_once('=').ok_or_else(|| Error::Config(format!("--tol expects NAME=VALUE, got {s:?}")))?;
    let v: f64 = v.trim().parse().map_err(|_| Error::Config(format!("bad tolerance value in {s:?}")))?;
    if v.is_nan() || v <= 0.0 {
        return Err(Error::Config(format!("tolerance must be positive in {s:?}")));
    }
    Ok((k.trim().to_string(), v))
}

/// Parses `re,im` (or a bare real).
pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || Error::Config(format!("expected \"re,im\", got {s:?}"));
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let mut it = t.split(',');
    let re: f64 = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = match it.next() {
        Some(x) => x.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if it.next().is_some() {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

impl RunConfig {
    pub fn resolve(file: Option<FileConfig>, o: Overrides) -> Result<Self> {
        let f = file.unwrap_or_default();
        let ms = &f.model;
        let n = o.n.or(ms.n).or(ms.z.as_ref().map(|z| z.len())).unwrap_or(2);
        let base = ModelParams::seeded(n);
        let z = match (&ms.z, o.n) {
            (Some(z), None) => z.clone(),
            (Some(z), Some(n)) if z.len() == n => z.clone(),
            _ => base.z.clone(),
        };
        let model = ModelParams {
            tau: ms.tau.unwrap_or(base.tau),
            eta: ms.eta.unwrap_or(base.eta),
            lambda1: ms.lambda1.unwrap_or(base.lambda1),
            lambda2: ms.lambda2.unwrap_or(base.lambda2),
            xi: ms.xi.unwrap_or(base.xi),
            xibar: ms.xibar.unwrap_or(base.xibar),
            z,
        };
        model.validate().map_err(|e| Error::Config(e.to_string()))?;
        let mut tolerances = default_tolerances(model.n());
        for (k, v) in f.tolerances.iter().map(|(k, v)| (k.clone(), *v)).chain(o.tol.iter().cloned()) {
            if !tolerances.contains_key(&k) {
                return Err(Error::Config(format!("unknown tolerance name {k:?}")));
            }
            tolerances.insert(k, v);
        }
        let seed = o.seed.or(f.seed).unwrap_or(20240601);
        let mut solver = f.solver.clone();
        if o.seed.is_some() || f.seed.is_some() {
            solver.rng_seed = seed;
        }
        solver.validate()?;
        let suites = if o.suites.is_empty() { f.suites.clone() } else { o.suites.clone() };
        Ok(Self {
            model,
            solver,
            suites,
            tolerances,
            out: o.out.or(f.output),
            out_csv: o.out_csv.or(f.output_csv),
            seed,
            m: o.m.or(f.m),
            kind: o.kind.or(f.kind),
            u: if o.u.is_empty() { f.u } else { o.u },
            roots: f.roots,
            solve: o.solve,
            force: o.force,
            jobs: o.jobs.or(f.jobs).unwrap_or(1).max(1),
        })
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}
