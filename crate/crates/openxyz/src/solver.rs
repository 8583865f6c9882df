//! Damped Newton solver for the logarithmic Bethe equations of either set.

use crate::error::{Error, Result};
use crate::linalg::{c, max_abs, Mat};
use crate::logform::{bracket_terms, log_derivative};
use crate::monodromy::BetheSet;
use crate::params::Model;
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_iter: usize,
    pub tol: f64,
    pub damping: f64,
    /// Explicit starting tuples; when empty a grid (M=1) or random draws are used.
    pub seeds: Vec<Vec<C64>>,
    /// Random starts for M ≥ 2.
    pub random_starts: usize,
    pub min_root_separation: f64,
    pub rng_seed: u64,
    /// Reject roots whose Bethe state vanishes or is not an eigenvector of τ(u).
    /// Only applied for N ≤ 6.
    pub check_states: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-10,
            damping: 0.5,
            seeds: Vec::new(),
            random_starts: 600,
            min_root_separation: 1e-6,
            rng_seed: 7,
            check_states: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tol < 1e-12 {
            return Err(Error::Config(format!("solver tol {} below 1e-12", self.tol)));
        }
        if self.min_root_separation < 1e-6 {
            return Err(Error::Config("min_root_separation below 1e-6".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Config("damping must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// One solved root set.
#[derive(Debug, Clone, Serialize)]
pub struct BetheRoots {
    pub set: BetheSet,
    pub v: Vec<C64>,
    pub residuals: Vec<f64>,
}

impl BetheRoots {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn on_shell(&self) -> bool {
        self.max_residual() < 1e-8
    }
}

/// Coordinates (x, y) of w = x + yτ.
fn lattice_coords(w: C64, tau: C64) -> (f64, f64) {
    let y = w.im / tau.im;
    (w.re - y * tau.re, y)
}

/// Distance from w to the nearest point of ℤ + τℤ.
pub fn lattice_distance(w: C64, tau: C64) -> f64 {
    let (x, y) = lattice_coords(w, tau);
    let mut best = f64::INFINITY;
    for dy in [-1.0, 0.0, 1.0] {
        for dx in [-1.0, 0.0, 1.0] {
            let r = w - c(x.round() + dx, 0.0) - tau * (y.round() + dy);
            best = best.min(r.norm());
        }
    }
    best
}

/// w reduced into the cell [0,1) + [0,1)τ.
pub fn reduce_to_cell(w: C64, tau: C64) -> C64 {
    let (x, y) = lattice_coords(w, tau);
    let (fx, fy) = (x - x.floor(), y - y.floor());
    c(fx, 0.0) + tau * fy
}

fn key(w: C64) -> (f64, f64) {
    (w.re, w.im)
}

impl Model {
    /// ln(LHS/RHS) per root, principal branch.
    pub fn log_bae(&self, set: BetheSet, v: &[C64]) -> Result<Vec<C64>> {
        (0..v.len()).map(|a| Ok(self.bae_ratio(set, v, a)?.ln())).collect()
    }

    /// ∂(log residual)_α / ∂v_β, analytic.
    pub fn residual_jacobian(&self, set: BetheSet, v: &[C64]) -> Result<Mat> {
        let m = v.len();
        let mut j = Mat::zeros(m, m);
        for a in 0..m {
            let terms = bracket_terms(self, set, m, a);
            for b in 0..m {
                j[(a, b)] = -log_derivative(self, &terms, v, b)?;
            }
        }
        Ok(j)
    }

    fn newton(&self, set: BetheSet, start: &[C64], cfg: &SolverConfig) -> Option<Vec<C64>> {
        let m = start.len();
        let mut v = start.to_vec();
        let norm = |f: &[C64]| f.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let mut f = self.log_bae(set, &v).ok()?;
        for _ in 0..cfg.max_iter {
            let fnorm = norm(&f);
            if fnorm < cfg.tol * 1e-2 {
                break;
            }
            let jac = self.residual_jacobian(set, &v).ok()?;
            let rhs = Mat::from_iterator(m, 1, f.iter().copied());
            let step = jac.lu().solve(&rhs)?;
            let mut scale = 1.0;
            let mut accepted = false;
            for _ in 0..12 {
                let trial: Vec<C64> = (0..m).map(|k| v[k] - step[(k, 0)] * scale).collect();
                if let Ok(ft) = self.log_bae(set, &trial) {
                    if norm(&ft) < fnorm || scale < 1e-3 {
                        v = trial;
                        f = ft;
                        accepted = true;
                        break;
                    }
                }
                scale *= cfg.damping;
            }
            if !accepted {
                return None;
            }
            if v.iter().any(|x| !x.re.is_finite() || !x.im.is_finite() || x.im.abs() > 20.0 * self.p.tau.im) {
                return None;
            }
        }
        Some(v)
    }

    /// Canonical representative: each root reduced into the cell, choosing
    /// between v and −v−η the one with the smaller (re, im); then sorted.
    fn canonical(&self, v: &[C64]) -> Vec<C64> {
        let tau = self.p.tau;
        let eta = self.eta();
        let mut out: Vec<C64> = v
            .iter()
            .map(|&x| {
                let a = reduce_to_cell(x, tau);
                let b = reduce_to_cell(-x - eta, tau);
                if key(a) <= key(b) {
                    a
                } else {
                    b
                }
            })
            .collect();
        out.sort_by(|a, b| key(*a).partial_cmp(&key(*b)).unwrap());
        out
    }

    fn admissible(&self, set: BetheSet, v: &[C64], cfg: &SolverConfig) -> bool {
        let tau = self.p.tau;
        let eta = self.eta();
        let res = match self.bae_residual(set, v) {
            Ok(r) => r,
            Err(_) => return false,
        };
        if res.iter().any(|&r| !(r < cfg.tol)) {
            return false;
        }
        if v.iter().any(|&x| lattice_distance(x * 2.0 + eta, tau) < 1e-5) {
            return false;
        }
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                if lattice_distance(v[a] - v[b], tau) < cfg.min_root_separation.max(1e-5)
                    || lattice_distance(v[a] + v[b] + eta, tau) < cfg.min_root_separation.max(1e-5)
                {
                    return false;
                }
            }
        }
        match self.residual_jacobian(set, v) {
            Ok(j) if j.determinant().norm() > 1e-10 => {}
            _ => return false,
        }
        if cfg.check_states && self.n() <= 6 {
            let Ok(state) = self.bethe_state(set, v) else { return false };
            let probe = c(0.13, 0.02);
            if max_abs(&state) < 1e-12 {
                return false;
            }
            match self.eigen_residual(set, probe, v, &state) {
                Ok(r) if r < 1e-6 => {}
                _ => return false,
            }
        }
        true
    }

    fn starts(&self, m: usize, cfg: &SolverConfig) -> Vec<Vec<C64>> {
        if !cfg.seeds.is_empty() {
            return cfg.seeds.iter().filter(|s| s.len() == m).cloned().collect();
        }
        let tau = self.p.tau;
        let eta = self.eta();
        let clear = |w: C64| {
            self.p.z.iter().all(|&zk| {
                lattice_distance(w - zk, tau) > 0.05 && lattice_distance(w + zk, tau) > 0.05 && lattice_distance(w + zk + eta, tau) > 0.05
            })
        };
        // shifted grid in the fundamental cell
        let mut grid = Vec::new();
        for j in 0..4 {
            for i in 0..8 {
                let mut w = c((i as f64 + 0.37) / 8.0, 0.0) + tau * ((j as f64 + 0.41) / 4.0);
                if !clear(w) {
                    w += c(0.031, 0.0) + tau * 0.027;
                }
                grid.push(w);
            }
        }
        if m == 1 {
            return grid.into_iter().map(|w| vec![w]).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        let mut out = Vec::with_capacity(cfg.random_starts);
        while out.len() < cfg.random_starts {
            let s: Vec<C64> = (0..m)
                .map(|_| c(rng.random::<f64>(), 0.0) + tau * rng.random::<f64>())
                .collect();
            if s.iter().all(|&w| clear(w)) {
                out.push(s);
            }
        }
        out
    }

    /// All distinct admissible root sets found from the configured starts,
    /// in canonical order.
    pub fn solve(&self, set: BetheSet, m: usize, cfg: &SolverConfig) -> Result<Vec<BetheRoots>> {
        cfg.validate()?;
        if m == 0 {
            return Ok(vec![BetheRoots { set, v: Vec::new(), residuals: Vec::new() }]);
        }
        if m > 3 {
            return Err(Error::InvalidParams(format!("solver supports M <= 3, got {m}")));
        }
        let starts = self.starts(m, cfg);
        let found: Vec<Vec<C64>> = starts
            .par_iter()
            .filter_map(|s| {
                let v = self.newton(set, s, cfg)?;
                if !self.admissible(set, &v, cfg) {
                    return None;
                }
                let can = self.canonical(&v);
                let keep = if self.admissible(set, &can, cfg) { can } else { v };
                Some(keep)
            })
            .collect();
        let mut uniq: Vec<Vec<C64>> = Vec::new();
        for v in found {
            let cv = self.canonical(&v);
            let dup = uniq.iter().any(|u| {
                let cu = self.canonical(u);
                cu.iter().zip(&cv).all(|(a, b)| (a - b).norm() < 1e-7)
            });
            if !dup {
                uniq.push(v);
            }
        }
        uniq.sort_by(|a, b| {
            let (ka, kb) = (self.canonical(a), self.canonical(b));
            for (x, y) in ka.iter().zip(&kb) {
                let o = key(*x).partial_cmp(&key(*y)).unwrap();
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        });
        uniq.into_iter()
            .map(|v| {
                let residuals = self.bae_residual(set, &v)?;
                Ok(BetheRoots { set, v, residuals })
            })
            .collect()
    }
}
