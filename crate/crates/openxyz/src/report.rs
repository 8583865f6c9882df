//! Check records and the JSON / CSV report writers.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::C64;
use serde::Serialize;
use std::path::Path;

/// One check or computed quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub name: String,
    /// Name of the identity or formula being exercised.
    pub identity: String,
    pub inputs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cond: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub wall_ms: f64,
}

impl Record {
    pub fn new(name: impl Into<String>, identity: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            identity: identity.into(),
            inputs: String::new(),
            residual: None,
            value: None,
            oracle: None,
            cond: None,
            tolerance: None,
            pass: true,
            warning: None,
            notes: Vec::new(),
            wall_ms: 0.0,
        }
    }

    pub fn inputs(mut self, s: impl Into<String>) -> Self {
        self.inputs = s.into();
        self
    }

    /// Sets residual and tolerance, and passes iff residual < tolerance.
    pub fn residual(mut self, r: f64, tol: f64) -> Self {
        self.residual = Some(r);
        self.tolerance = Some(tol);
        self.pass = r < tol;
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub params: ModelParams,
    pub seed: u64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abort: Option<String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(command: &str, params: ModelParams, seed: u64, records: Vec<Record>) -> Self {
        let pass = records.iter().all(|r| r.pass);
        Self { command: command.into(), params, seed, pass, abort: None, records }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::Config(format!("writing {}: {e}", path.display())))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let err = |e: csv::Error| Error::Config(format!("writing {}: {e}", path.display()));
        let mut w = csv::Writer::from_path(path).map_err(err)?;
        w.write_record(["name", "identity", "residual", "tolerance", "pass", "wall_ms"]).map_err(err)?;
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.6e}")).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.name.clone(),
                r.identity.clone(),
                opt(r.residual),
                opt(r.tolerance),
                r.pass.to_string(),
                format!("{:.3}", r.wall_ms),
            ])
            .map_err(err)?;
        }
        w.flush().map_err(|e| Error::Config(format!("writing {}: {e}", path.display())))
    }

    /// 0 all pass, 1 some check failed, 3 a numerical abort occurred.
    pub fn exit_code(&self) -> i32 {
        if self.abort.is_some() {
            3
        } else if self.pass {
            0
        } else {
            1
        }
    }
}

/// Compact "a+bi" rendering used in input descriptions.
pub fn fmt_c(z: C64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

pub fn fmt_list(zs: &[C64]) -> String {
    let parts: Vec<String> = zs.iter().map(|&z| fmt_c(z)).collect();
    format!("[{}]", parts.join(", "))
}
