//! Command-line front end: `verify`, `scalar`, `norm`, `spectrum`.

use crate::config::{parse_complex, parse_tol, FileConfig, Overrides, RunConfig};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, rel_err};
use crate::monodromy::{BetheSet, Pairing};
use crate::report::{fmt_c, fmt_list, Record, Report};
use crate::solver::BetheRoots;
use crate::suites::{probe_u, run_suites, Ctx};
use crate::C64;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::time::Instant;

/// Largest N for which the dense oracle is built.
pub const ORACLE_MAX_N: usize = 6;
/// Largest N for dense diagonalization of τ(u).
pub const SPECTRUM_MAX_N: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "openxyz", version, about = "Open XYZ chain: F-basis and determinant checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites.
    Verify(CommonArgs),
    /// Scalar product or partition function, determinant beside the oracle.
    Scalar(CommonArgs),
    /// On-shell norms from the Gaudin determinant.
    Norm(CommonArgs),
    /// Dense spectrum of τ(u) matched against Bethe eigenvalues.
    Spectrum(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "suite")]
    pub suites: Vec<String>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long, value_parser = ["I", "II", "I-I", "II-II", "I-II", "II-I"])]
    pub kind: Option<String>,
    #[arg(long = "u", allow_hyphen_values = true)]
    pub u: Vec<String>,
    #[arg(long)]
    pub solve: bool,
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "out-csv")]
    pub out_csv: Option<PathBuf>,
    #[arg(long = "tol")]
    pub tol: Vec<String>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = self.config.as_deref().map(FileConfig::load).transpose()?;
        let o = Overrides {
            suites: self.suites.clone(),
            n: self.n,
            m: self.m,
            kind: self.kind.clone(),
            u: self.u.iter().map(|s| parse_complex(s)).collect::<Result<_>>()?,
            solve: self.solve,
            force: self.force,
            seed: self.seed,
            out: self.out.clone(),
            out_csv: self.out_csv.clone(),
            tol: self.tol.iter().map(|s| parse_tol(s)).collect::<Result<_>>()?,
            jobs: self.jobs,
        };
        RunConfig::resolve(file, o)
    }
}

fn finish(command: &str, ctx: &Ctx, records: Vec<Record>, abort: Option<Error>) -> Report {
    let mut rep = Report::new(command, ctx.cfg.model.clone(), ctx.cfg.seed, records);
    if let Some(e) = abort {
        rep.abort = Some(e.to_string());
        rep.pass = false;
    }
    rep
}

pub fn cmd_verify(cfg: RunConfig) -> Result<Report> {
    let ctx = Ctx::new(cfg)?;
    let (records, abort) = run_suites(&ctx, &ctx.cfg.suites)?;
    Ok(finish("verify", &ctx, records, abort))
}

/// Root sets for `set`: the configured ones, or the solver's when `--solve`.
fn root_sets(ctx: &Ctx, set: BetheSet, m: usize) -> Result<Vec<BetheRoots>> {
    if ctx.cfg.solve {
        return ctx.roots(set, m);
    }
    if ctx.cfg.roots.is_empty() {
        return Err(Error::Config("give roots in the config file or pass --solve".into()));
    }
    if ctx.cfg.roots.len() != m {
        return Err(Error::Config(format!("expected {m} roots, got {}", ctx.cfg.roots.len())));
    }
    let v = ctx.cfg.roots.clone();
    let residuals = ctx.model.bae_residual(set, &v)?;
    Ok(vec![BetheRoots { set, v, residuals }])
}

fn residual_table(r: &BetheRoots) -> String {
    let parts: Vec<String> = r.residuals.iter().map(|x| format!("{x:.3e}")).collect();
    format!("BAE residuals [{}]", parts.join(", "))
}

fn half_or(ctx: &Ctx) -> Result<usize> {
    match ctx.cfg.m {
        Some(m) => Ok(m),
        None => ctx.model.p.require_even(),
    }
}

/// Runs one determinant evaluation as a record; off-shell and numerical errors
/// become a failing record and are passed back for the exit code.
fn guarded(rec: Record, r: &BetheRoots, f: impl FnOnce(Record) -> Result<Record>) -> (Record, Option<Error>) {
    let t0 = Instant::now();
    let base = rec.clone();
    match f(rec) {
        Ok(mut out) => {
            out.wall_ms = t0.elapsed().as_secs_f64() * 1e3;
            (out, None)
        }
        Err(e) => {
            let mut out = base.note(e.to_string()).note(residual_table(r));
            out.pass = false;
            out.wall_ms = t0.elapsed().as_secs_f64() * 1e3;
            (out, Some(e))
        }
    }
}

fn fill(mut rec: Record, value: C64, cond: f64, oracle: Option<C64>, tol: f64, n: usize) -> Record {
    rec.value = Some(value);
    rec.cond = Some(cond);
    match oracle {
        Some(o) => {
            rec.oracle = Some(o);
            rec = rec.residual(rel_err(value, o), tol);
        }
        None => rec = rec.note(format!("oracle: too large (N = {n} > {ORACLE_MAX_N})")),
    }
    rec
}

const OFF_SHELL_WARNING: &str = "roots are off shell; the determinant formula does not apply";

pub fn cmd_scalar(cfg: RunConfig) -> Result<Report> {
    let ctx = Ctx::new(cfg)?;
    let kind = ctx.cfg.kind.clone().unwrap_or_else(|| "I-I".into());
    let n = ctx.model.n();
    let with_oracle = n <= ORACLE_MAX_N;
    let mut records = Vec::new();
    let mut abort = None;
    match kind.as_str() {
        "I-I" | "II-II" => {
            let set = if kind == "I-I" { BetheSet::I } else { BetheSet::II };
            let m = half_or(&ctx)?;
            let u = if ctx.cfg.u.is_empty() { probe_u(m.min(3)) } else { ctx.cfg.u.clone() };
            if u.len() != m {
                return Err(Error::Config(format!("need {m} values of --u, got {}", u.len())));
            }
            for r in root_sets(&ctx, set, m)? {
                let rec = Record::new(format!("scalar_{kind}"), format!("scalar product determinant {kind}"))
                    .inputs(format!("N={n}, u={}, v={}", fmt_list(&u), fmt_list(&r.v)));
                let (rec, e) = guarded(rec, &r, |rec| {
                    let d = ctx.model.scalar_product_det(set, &u, &r.v, ctx.cfg.force)?;
                    let o = if with_oracle { Some(ctx.model.scalar_product_oracle(Pairing::diagonal(set), &u, &r.v)?) } else { None };
                    let mut rec = fill(rec, d.value, d.cond, o, ctx.tol("scalar"), n);
                    if d.off_shell {
                        rec.warning = Some(OFF_SHELL_WARNING.into());
                    }
                    Ok(rec.note(residual_table(&r)))
                });
                abort = abort.or(e);
                records.push(rec);
            }
        }
        _ => {
            let (set, pairing) = match kind.as_str() {
                "I" | "I-II" => (BetheSet::I, Pairing::OneTwo),
                _ => (BetheSet::II, Pairing::TwoOne),
            };
            let ub = if ctx.cfg.u.is_empty() {
                let h = ctx.model.p.require_even()?;
                let mut w = probe_u(h.min(3));
                w.extend(probe_u(h.min(3)).iter().map(|z| z * 0.5 + C64::new(0.07, 0.01)));
                w
            } else {
                ctx.cfg.u.clone()
            };
            if ub.len() != n {
                return Err(Error::Config(format!("partition function needs N = {n} values of --u, got {}", ub.len())));
            }
            let t0 = Instant::now();
            let rec = Record::new(format!("partition_{set}"), format!("domain-wall partition function {set}")).inputs(format!("N={n}, ubar={}", fmt_list(&ub)));
            let h = n / 2;
            let d = ctx.model.partition_function(set, &ub)?;
            let o = if with_oracle { Some(ctx.model.scalar_product_oracle(pairing, &ub[..h], &ub[h..])?) } else { None };
            let mut rec = fill(rec, d.value, d.cond, o, ctx.tol("partition"), n);
            rec.wall_ms = t0.elapsed().as_secs_f64() * 1e3;
            records.push(rec);
        }
    }
    Ok(finish("scalar", &ctx, records, abort))
}

fn sets_for(kind: Option<&str>) -> Vec<BetheSet> {
    match kind {
        Some("I") | Some("I-I") => vec![BetheSet::I],
        Some("II") | Some("II-II") => vec![BetheSet::II],
        _ => vec![BetheSet::I, BetheSet::II],
    }
}

pub fn cmd_norm(cfg: RunConfig) -> Result<Report> {
    let ctx = Ctx::new(cfg)?;
    if matches!(ctx.cfg.kind.as_deref(), Some("I-II") | Some("II-I")) {
        return Err(Error::Config("norm takes --kind I or II".into()));
    }
    let n = ctx.model.n();
    let m = half_or(&ctx)?;
    let mut records = Vec::new();
    let mut abort = None;
    for set in sets_for(ctx.cfg.kind.as_deref()) {
        for r in root_sets(&ctx, set, m)? {
            let rec = Record::new(format!("norm_{set}"), format!("Gaudin norm {set}")).inputs(format!("N={n}, v={}", fmt_list(&r.v)));
            let (rec, e) = guarded(rec, &r, |rec| {
                let d = ctx.model.norm_det(set, &r.v, ctx.cfg.force)?;
                let o = if n <= ORACLE_MAX_N { Some(ctx.model.scalar_product_oracle(Pairing::diagonal(set), &r.v, &r.v)?) } else { None };
                let mut rec = fill(rec, d.value, d.cond, o, ctx.tol("norm"), n);
                if d.off_shell {
                    rec.warning = Some(OFF_SHELL_WARNING.into());
                }
                Ok(rec.note(residual_table(&r)))
            });
            abort = abort.or(e);
            records.push(rec);
        }
    }
    Ok(finish("norm", &ctx, records, abort))
}

pub fn cmd_spectrum(cfg: RunConfig) -> Result<Report> {
    let ctx = Ctx::new(cfg)?;
    let n = ctx.model.n();
    if n > SPECTRUM_MAX_N {
        return Err(Error::Config(format!("spectrum limited to N <= {SPECTRUM_MAX_N}")));
    }
    let us = if ctx.cfg.u.is_empty() { vec![C64::new(0.13, 0.02)] } else { ctx.cfg.u.clone() };
    let m = half_or(&ctx).ok();
    let tol = ctx.tol("spectrum");
    let mut records = Vec::new();
    for &u in &us {
        let t0 = Instant::now();
        let eig = eigenvalues(&ctx.model.transfer_matrix(u)?);
        let scale = eig.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        let mut rec = Record::new(format!("spectrum_u={}", fmt_c(u)), "dense spectrum of the transfer matrix").inputs(format!("N={n}, u={}", fmt_c(u)));
        rec = rec.note(format!("eigenvalues {}", fmt_list(&eig)));
        let mut matched = 0usize;
        let mut worst: f64 = 0.0;
        if let Some(m) = m {
            for set in sets_for(ctx.cfg.kind.as_deref()) {
                for r in ctx.roots(set, m)? {
                    let lam = ctx.model.eigenvalue(set, u, &r.v)?;
                    let (k, gap) = eig
                        .iter()
                        .enumerate()
                        .map(|(k, &e)| (k, (e - lam).norm() / scale))
                        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
                    worst = worst.max(gap);
                    if gap < tol {
                        matched += 1;
                    }
                    rec = rec.note(format!("set {set} roots {}: Lambda {} nearest eigenvalue #{k} gap {gap:.2e}", fmt_list(&r.v), fmt_c(lam)));
                }
            }
        }
        if matched == 0 && worst == 0.0 {
            rec = rec.note("empty match set: no solved root sets");
        } else {
            rec = rec.residual(worst, tol).note(format!("{matched} matched"));
        }
        rec.wall_ms = t0.elapsed().as_secs_f64() * 1e3;
        records.push(rec);
    }
    Ok(finish("spectrum", &ctx, records, None))
}

/// Runs a parsed command. Errors are configuration (exit 2) or numerical
/// (exit 3) failures that prevented a report.
pub fn execute(cli: &Cli) -> Result<Report> {
    let (name, args) = match &cli.command {
        Command::Verify(a) => ("verify", a),
        Command::Scalar(a) => ("scalar", a),
        Command::Norm(a) => ("norm", a),
        Command::Spectrum(a) => ("spectrum", a),
    };
    let cfg = args.resolve()?;
    let (out, csv) = (cfg.out.clone(), cfg.out_csv.clone());
    let rep = match name {
        "verify" => cmd_verify(cfg)?,
        "scalar" => cmd_scalar(cfg)?,
        "norm" => cmd_norm(cfg)?,
        _ => cmd_spectrum(cfg)?,
    };
    if let Some(p) = out {
        rep.write_json(&p)?;
    }
    if let Some(p) = csv {
        rep.write_csv(&p)?;
    }
    Ok(rep)
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(rep) => {
            let code = rep.exit_code();
            let to_stdout = match &cli.command {
                Command::Verify(a) | Command::Scalar(a) | Command::Norm(a) | Command::Spectrum(a) => a.out.is_none(),
            };
            if to_stdout {
                println!("{}", rep.to_json());
            }
            code
        }
        Err(e) => {
            eprintln!("openxyz: {e}");
            e.exit_code()
        }
    }
}
