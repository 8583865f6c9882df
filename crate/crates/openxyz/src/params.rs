//! Model parameters, dynamical weights and basis bookkeeping.

use crate::elliptic::Elliptic;
use crate::error::{Error, Result};
use crate::linalg::c;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

/// All global parameters. Complex numbers serialize as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub tau: C64,
    pub eta: C64,
    pub lambda1: C64,
    pub lambda2: C64,
    pub xi: C64,
    pub xibar: C64,
    /// Inhomogeneities z₁..z_N; their count fixes N.
    pub z: Vec<C64>,
}

impl ModelParams {
    /// The pinned generic point used by tests and the CLI default, with
    /// z_k = 0.1k + 0.03ik.
    pub fn seeded(n: usize) -> Self {
        Self {
            tau: c(0.0, 1.0),
            eta: c(0.37, 0.04),
            lambda1: c(0.81, 0.11),
            lambda2: c(-0.42, 0.23),
            xi: c(0.55, -0.08),
            xibar: c(0.29, 0.17),
            z: default_z(n),
        }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self {
            z: default_z(n),
            ..self.clone()
        }
    }

    pub fn lambda(&self) -> Weight {
        Weight::new(self.lambda1, self.lambda2)
    }

    /// Genericity check on the σ factors that recur as denominators.
    pub fn validate(&self) -> Result<()> {
        let e = Elliptic::new(self.tau)?;
        if self.n() == 0 {
            return Err(Error::InvalidParams("need at least one site".into()));
        }
        let thr = 1e-8;
        let check = |what: &str, x: C64| -> Result<()> {
            let v = e.sigma(x).norm();
            if v <= thr {
                return Err(Error::InvalidParams(format!(
                    "non-generic point: |sigma({what})| = {v:.3e}"
                )));
            }
            Ok(())
        };
        let (l1, l2, eta) = (self.lambda1, self.lambda2, self.eta);
        check("eta", eta)?;
        check("lambda1+lambda2-1/2", l1 + l2 - 0.5)?;
        check("lambda1+lambda2+eta-1/2", l1 + l2 + eta - 0.5)?;
        for (nm, b) in [("xi", self.xi), ("xibar", self.xibar)] {
            check(nm, l1 + b)?;
            check(nm, l2 + b)?;
        }
        let nn = self.n() as i64;
        for k in -nn - 2..=nn + 2 {
            check("lambda12 + k eta", l1 - l2 + eta * k as f64)?;
        }
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                check("z_k - z_l", self.z[a] - self.z[b])?;
                check("z_k - z_l + eta", self.z[a] - self.z[b] + eta)?;
                check("z_l - z_k + eta", self.z[b] - self.z[a] + eta)?;
                check("z_k + z_l", self.z[a] + self.z[b])?;
            }
        }
        let h = [e.theta_j(1, c(0.0, 0.0)), e.theta_j(0, eta), e.theta_j(1, eta)];
        if h.iter().any(|x| x.norm() <= thr) {
            return Err(Error::InvalidParams("theta^(j) normalization vanishes".into()));
        }
        Ok(())
    }

    pub fn require_even(&self) -> Result<usize> {
        let n = self.n();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("N = {n} must be even (N = 2M)")));
        }
        Ok(n / 2)
    }
}

fn default_z(n: usize) -> Vec<C64> {
    (1..=n).map(|k| c(0.1 * k as f64, 0.03 * k as f64)).collect()
}

/// A face weight m = (m₁, m₂).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub m1: C64,
    pub m2: C64,
}

impl Weight {
    pub fn new(m1: C64, m2: C64) -> Self {
        Self { m1, m2 }
    }

    pub fn m12(&self) -> C64 {
        self.m1 - self.m2
    }

    pub fn comp(&self, j: usize) -> C64 {
        if j == 0 {
            self.m1
        } else {
            self.m2
        }
    }

    /// m + c·ĵ, where 1̂ = (1/2, −1/2) and 2̂ = (−1/2, 1/2). `j` is 0 for ε₁.
    pub fn shift(&self, j: usize, amount: C64) -> Self {
        *self + hat(j) * amount
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight::new(self.m1 + o.m1, self.m2 + o.m2)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight::new(self.m1 - o.m1, self.m2 - o.m2)
    }
}

impl Mul<C64> for Weight {
    type Output = Weight;
    fn mul(self, s: C64) -> Weight {
        Weight::new(self.m1 * s, self.m2 * s)
    }
}

/// The fundamental vector ĵ (0-based: 0 ↔ 1̂, 1 ↔ 2̂).
pub fn hat(j: usize) -> Weight {
    if j == 0 {
        Weight::new(c(0.5, 0.0), c(-0.5, 0.0))
    } else {
        Weight::new(c(-0.5, 0.0), c(0.5, 0.0))
    }
}

/// Bits of a basis index on `n` spaces; space 0 is the most significant.
/// Bit value 0 is ε₁, 1 is ε₂.
pub fn bits_of(index: usize, n: usize) -> Vec<usize> {
    (0..n).map(|k| (index >> (n - 1 - k)) & 1).collect()
}

pub fn index_of(bits: &[usize]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b)
}

/// Number of ε₂ entries in a basis index.
pub fn count_twos(index: usize) -> usize {
    index.count_ones() as usize
}

/// Weight label of a basis state: base − η Σ_k î_k.
pub fn label(base: Weight, index: usize, n: usize, eta: C64) -> Weight {
    let n2 = count_twos(index) as f64;
    let n1 = n as f64 - n2;
    // Σ î = (n1 − n2)/2 · (1, −1)
    let d = eta * ((n1 - n2) / 2.0);
    Weight::new(base.m1 - d, base.m2 + d)
}

/// The model: parameters plus the σ evaluator bound to their τ.
#[derive(Debug, Clone)]
pub struct Model {
    pub p: ModelParams,
    pub ell: Elliptic,
}

impl Model {
    pub fn new(p: ModelParams) -> Result<Self> {
        p.validate()?;
        let ell = Elliptic::new(p.tau)?;
        Ok(Self { p, ell })
    }

    pub fn seeded(n: usize) -> Self {
        Self::new(ModelParams::seeded(n)).expect("seeded parameters are generic")
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn dim(&self) -> usize {
        1 << self.n()
    }

    pub fn eta(&self) -> C64 {
        self.p.eta
    }

    pub fn lambda(&self) -> Weight {
        self.p.lambda()
    }

    pub fn s(&self, u: C64) -> C64 {
        self.ell.sigma(u)
    }

    pub fn sd(&self, what: &'static str, u: C64) -> Result<C64> {
        self.ell.sigma_den(what, u)
    }

    pub fn ratio(&self, what: &'static str, num: C64, den: C64) -> Result<C64> {
        self.ell.ratio(what, num, den)
    }

    /// Π_k σ(u+z_k)/σ(u+z_k+η), the common scalar in front of the double-row operators.
    pub fn fprod(&self, u: C64) -> Result<C64> {
        let eta = self.eta();
        self.p.z.iter().try_fold(c(1.0, 0.0), |acc, &zk| {
            Ok(acc * self.ratio("fprod", u + zk, u + zk + eta)?)
        })
    }

    pub fn label(&self, base: Weight, index: usize) -> Weight {
        label(base, index, self.n(), self.eta())
    }
}
