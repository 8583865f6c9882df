//! Determinant representations: the partition functions 𝒵^(I), 𝒵^(II), the
//! scalar products S^{I,I}, S^{II,II} and the Gaudin norms.
//!
//! All λ-dependent constants go through the single product
//! P_N = Π_{j=0}^{N−1} σ(λ₁₂+(N−2j)η)/σ(λ₁₂−jη).

use crate::error::{Error, Result};
use crate::linalg::det_with_cond;
use crate::linalg::Mat;
use crate::logform::{bracket_terms, log_derivative, LogAcc};
use crate::monodromy::BetheSet;
use crate::params::Model;
use crate::C64;
use serde::Serialize;

/// Which entry formula a [`DetMatrix`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DetKind {
    NI,
    NII,
    NbarI,
    NbarII,
    PhiI,
    PhiII,
}

#[derive(Debug, Clone)]
pub struct DetMatrix {
    pub kind: DetKind,
    pub entries: Mat,
}

impl DetMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }
}

/// A determinant-formula value with the condition number of its matrix.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DetValue {
    pub value: C64,
    pub cond: f64,
    /// Set when the on-shell gate was overridden.
    pub off_shell: bool,
}

/// Per-formula λ-products in unreduced form. They differ from P_N and are
/// kept only for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltPrefactor {
    PartitionI,
    PartitionII,
    ScalarI,
    ScalarII,
}

/// Largest BAE residual the scalar-product and norm formulas accept.
pub const ON_SHELL_TOL: f64 = 1e-8;

fn check_distinct(m: &Model, xs: &[C64], what: &str, roots: bool) -> Result<()> {
    for a in 0..xs.len() {
        for b in a + 1..xs.len() {
            if m.s(xs[a] - xs[b]).norm() <= 1e-6 {
                let msg = format!("{what}[{a}] and {what}[{b}] coincide");
                return Err(if roots { Error::CollidingRoots(msg) } else { Error::CollidingArguments(msg) });
            }
        }
    }
    Ok(())
}

impl Model {
    pub fn pn_prefactor(&self) -> Result<C64> {
        let n = self.n();
        let eta = self.eta();
        let l12 = self.lambda().m12();
        let mut acc = LogAcc::default();
        for j in 0..n {
            acc.mul(self.s(l12 + eta * (n as f64 - 2.0 * j as f64)));
            acc.div("P_N", self.s(l12 - eta * j as f64))?;
        }
        Ok(acc.value())
    }

    pub fn alt_lambda_prefactor(&self, which: AltPrefactor, m: usize) -> Result<C64> {
        let eta = self.eta();
        let l12 = self.lambda().m12();
        let l21 = -l12;
        let s = |x| self.s(x);
        let mut acc = LogAcc::default();
        for k in 1..=m {
            let k = k as f64;
            let (num, den) = match which {
                AltPrefactor::PartitionI => (
                    [l12 + eta * 2.0 * k, l12 - eta * 2.0 * k + eta],
                    [l12 + eta * k, l12 - eta * k + eta],
                ),
                AltPrefactor::PartitionII => (
                    [l21 + eta - eta * 2.0 * k, l21 - eta + eta * 2.0 * k],
                    [l21 - eta * k, l21 + eta * k - eta],
                ),
                AltPrefactor::ScalarI => (
                    [l12 + eta * 2.0 - eta * 2.0 * k, l12 - eta + eta * 2.0 * k],
                    [l12 - eta * (k - 1.0), l12 + eta * k],
                ),
                AltPrefactor::ScalarII => (
                    [l12 + eta * 2.0 * k, l21 - eta + eta * 2.0 * k],
                    [l12 + eta * k, l21 + eta * (k - 1.0)],
                ),
            };
            for x in num {
                acc.mul(s(x));
            }
            for x in den {
                acc.div("alt prefactor", s(x))?;
            }
        }
        Ok(acc.value())
    }

    /// 𝒩^(I) (`BetheSet::I`) or 𝒩^(II), N×N in ū and z.
    pub fn partition_matrix(&self, set: BetheSet, ubar: &[C64]) -> Result<DetMatrix> {
        let (l1, l2, xi, xb, eta) = (self.p.lambda1, self.p.lambda2, self.p.xi, self.p.xibar, self.eta());
        let n = self.n();
        let z = &self.p.z;
        let sd = |x| self.sd("partition matrix", x);
        let mut a = Mat::zeros(n, n);
        for al in 0..n {
            let u = ubar[al];
            for j in 0..n {
                let zj = z[j];
                let common = sd(u - zj)? * sd(u + zj + eta)? * sd(u - zj + eta)? * sd(u + zj)?;
                a[(al, j)] = match set {
                    BetheSet::I => {
                        self.s(eta) * self.s(l1 + xi - zj) * self.s(l2 + xi + zj) * self.s(u * 2.0)
                            / (common * sd(l1 + xi + u)? * sd(l2 + xi + u)?)
                    }
                    BetheSet::II => {
                        self.s(eta) * self.s(l2 + xb - zj) * self.s(l1 + xb + zj) * self.s(u * 2.0 + eta * 2.0)
                            / (common * sd(l2 + xb - u - eta)? * sd(l1 + xb - u - eta)?)
                    }
                };
            }
        }
        let kind = if set == BetheSet::I { DetKind::NI } else { DetKind::NII };
        Ok(DetMatrix { kind, entries: a })
    }

    /// 𝒵^(I)(ū) = ⟨Ψ^(I)(u)|Ψ^(II)(v)⟩ or 𝒵^(II)(ū) = ⟨Ψ^(II)(u)|Ψ^(I)(v)⟩ with
    /// ū = (u₁…u_M, v₁…v_M).
    pub fn partition_function(&self, set: BetheSet, ubar: &[C64]) -> Result<DetValue> {
        let n = self.n();
        self.p.require_even()?;
        if ubar.len() != n {
            return Err(Error::InvalidParams(format!("need {n} arguments, got {}", ubar.len())));
        }
        check_distinct(self, ubar, "ubar", false)?;
        let eta = self.eta();
        let z = &self.p.z;
        let sign = if set == BetheSet::I { 1.0 } else { -1.0 };
        let mut acc = LogAcc { log: self.pn_prefactor()?.ln() };
        for &u in ubar {
            for &zl in z {
                acc.mul(self.s(u + zl * sign));
                acc.div("partition", self.s(u + zl * sign + eta))?;
                acc.mul(self.s(u - zl * sign));
                acc.mul(self.s(u + zl * sign + eta));
            }
        }
        for a in 0..n {
            for b in 0..a {
                acc.div("partition", self.s(ubar[a] - ubar[b]))?;
                acc.div("partition", self.s(ubar[a] + ubar[b] + eta))?;
            }
        }
        for k in 0..n {
            for l in k + 1..n {
                acc.div("partition", self.s(z[k] - z[l]))?;
                acc.div("partition", self.s(z[k] + z[l]))?;
            }
        }
        let mat = self.partition_matrix(set, ubar)?;
        let (det, cond) = det_with_cond(&mat.entries);
        Ok(DetValue { value: acc.value() * det, cond, off_shell: false })
    }

    /// F₁..F₄ at u, as used inside H^(I) (F₁, F₂) and H^(II) (F₃, F₄).
    pub fn f_coefficients(&self, u: C64) -> [C64; 4] {
        let (l1, l2, xi, xb, eta) = (self.p.lambda1, self.p.lambda2, self.p.xi, self.p.xibar, self.eta());
        let s = |x| self.s(x);
        [
            s(l2 + xb + u + eta) * s(l2 + xi - u - eta) * s(l1 + xb - u - eta) * s(l1 + xi + u + eta),
            s(l2 + xb - u) * s(l2 + xi + u) * s(l1 + xb + u) * s(l1 + xi - u),
            s(l2 + xb - u - eta) * s(l2 + xi + u + eta) * s(l1 + xb + u + eta) * s(l1 + xi - u - eta),
            s(l2 + xb + u) * s(l2 + xi - u) * s(l1 + xb - u) * s(l1 + xi + u),
        ]
    }

    /// H^(I)_j(u) or H^(II)_j(u) for roots v.
    pub fn h_function(&self, set: BetheSet, j: usize, u: C64, v: &[C64]) -> Result<C64> {
        let eta = self.eta();
        let z = &self.p.z;
        let s = |x| self.s(x);
        let f = self.f_coefficients(u);
        let sd = |x| self.sd("H function", x);
        let (mut a, mut b) = match set {
            BetheSet::I => (f[0], f[1]),
            BetheSet::II => (f[2], f[3]),
        };
        for &zl in z {
            match set {
                BetheSet::I => {
                    a *= s(u + zl) / sd(u + zl + eta)?;
                    b *= s(u - zl + eta) / sd(u - zl)?;
                }
                BetheSet::II => {
                    a *= s(u - zl) / sd(u - zl + eta)?;
                    b *= s(u + zl + eta) / sd(u + zl)?;
                }
            }
        }
        for (k, &vk) in v.iter().enumerate() {
            if k == j {
                continue;
            }
            match set {
                BetheSet::I => {
                    a *= s(u + vk + eta * 2.0) * s(u - vk + eta);
                    b *= s(u + vk) * s(u - vk - eta);
                }
                BetheSet::II => {
                    a *= s(vk + u + eta * 2.0) * s(vk - u - eta);
                    b *= s(vk + u) * s(vk - u + eta);
                }
            }
        }
        let vj = v[j];
        Ok((a - b) / (sd(u - vj)? * sd(u + vj + eta)? * sd(u * 2.0 + eta)?))
    }

    /// 𝒩̄^(I) or 𝒩̄^(II), M×M in u (rows) and v (columns).
    pub fn scalar_matrix(&self, set: BetheSet, u: &[C64], v: &[C64]) -> Result<DetMatrix> {
        let (l1, l2, xi, xb, eta) = (self.p.lambda1, self.p.lambda2, self.p.xi, self.p.xibar, self.eta());
        let m = u.len();
        let s = |x| self.s(x);
        let sd = |x| self.sd("scalar matrix", x);
        let mut a = Mat::zeros(m, m);
        for al in 0..m {
            let ua = u[al];
            for j in 0..m {
                let vj = v[j];
                let h = self.h_function(set, j, ua, v)?;
                a[(al, j)] = match set {
                    BetheSet::I => {
                        s(eta) * s(ua * 2.0) * s(vj * 2.0 + eta * 2.0) * h
                            / (sd(l1 + xi + ua)? * sd(l2 + xi + ua)? * sd(l2 + xb - vj - eta)? * sd(l1 + xb - vj - eta)?)
                    }
                    BetheSet::II => {
                        s(eta) * s(ua * 2.0 + eta * 2.0) * s(vj * 2.0) * h
                            / (sd(l2 + xb - ua - eta)? * sd(l1 + xb - ua - eta)? * sd(l2 + xi + vj)? * sd(l1 + xi + vj)?)
                    }
                };
            }
        }
        let kind = if set == BetheSet::I { DetKind::NbarI } else { DetKind::NbarII };
        Ok(DetMatrix { kind, entries: a })
    }

    fn max_bae(&self, set: BetheSet, v: &[C64]) -> Result<f64> {
        Ok(self.bae_residual(set, v)?.into_iter().fold(0.0, f64::max))
    }

    /// S^{I,I}(u; v) or S^{II,II}(u; v) for on-shell v. With `force` the
    /// on-shell gate is skipped and the result is flagged.
    pub fn scalar_product_det(&self, set: BetheSet, u: &[C64], v: &[C64], force: bool) -> Result<DetValue> {
        let m = v.len();
        if u.len() != m {
            return Err(Error::InvalidParams("u and v must have the same length".into()));
        }
        let res = self.max_bae(set, v)?;
        let off_shell = res >= ON_SHELL_TOL;
        if off_shell && !force {
            return Err(Error::OffShellRoots(res));
        }
        check_distinct(self, u, "u", false)?;
        check_distinct(self, v, "v", true)?;
        let eta = self.eta();
        let sign = if set == BetheSet::I { -1.0 } else { 1.0 };
        let mut acc = LogAcc { log: self.pn_prefactor()?.ln() };
        for k in 0..m {
            for &zl in &self.p.z {
                let zl = zl * sign;
                acc.mul(self.s(u[k] + zl));
                acc.mul(self.s(v[k] + zl));
                acc.div("scalar product", self.s(u[k] + zl + eta))?;
                acc.div("scalar product", self.s(v[k] + zl + eta))?;
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                acc.div("scalar product", self.s(u[a] - u[b]))?;
                acc.div("scalar product", self.s(u[a] + u[b] + eta))?;
            }
            for b in 0..a {
                acc.div("scalar product", self.s(v[a] - v[b]))?;
                acc.div("scalar product", self.s(v[a] + v[b] + eta))?;
            }
        }
        let mat = self.scalar_matrix(set, u, v)?;
        let (det, cond) = det_with_cond(&mat.entries);
        Ok(DetValue { value: acc.value() * det, cond, off_shell })
    }

    /// ∂/∂v_α ln B_j, analytic.
    pub fn log_bracket_derivative(&self, set: BetheSet, v: &[C64], j: usize, alpha: usize) -> Result<C64> {
        log_derivative(self, &bracket_terms(self, set, v.len(), j), v, alpha)
    }

    /// The Gaudin matrix Φ^(I) or Φ^(II).
    pub fn gaudin_matrix(&self, set: BetheSet, v: &[C64]) -> Result<DetMatrix> {
        let (l1, l2, xi, xb, eta) = (self.p.lambda1, self.p.lambda2, self.p.xi, self.p.xibar, self.eta());
        let m = v.len();
        let s = |x| self.s(x);
        let sd = |x| self.sd("gaudin matrix", x);
        let mut a = Mat::zeros(m, m);
        for al in 0..m {
            let va = v[al];
            let mut zp = C64::new(1.0, 0.0);
            for &zl in &self.p.z {
                zp *= match set {
                    BetheSet::I => s(va - zl + eta) / sd(va - zl)?,
                    BetheSet::II => s(va - zl) / sd(va - zl + eta)?,
                };
            }
            for j in 0..m {
                let vj = v[j];
                let pre = match set {
                    BetheSet::I => {
                        s(eta) * s(l2 + xb - va) * s(l1 + xb + va) * s(l1 + xi - va)
                            / (sd(l1 + xi + va)? * sd(l2 + xb - vj - eta)? * sd(l1 + xb - vj - eta)?)
                            * s(va * 2.0)
                            * s(vj * 2.0 + eta * 2.0)
                            / (sd(va * 2.0 + eta)? * sd(vj * 2.0 + eta)?)
                    }
                    BetheSet::II => {
                        s(eta) * s(l2 + xi + va + eta) * s(l1 + xb + va + eta) * s(l1 + xi - va - eta)
                            / (sd(l1 + xb - va - eta)? * sd(l2 + xi + vj)? * sd(l1 + xi + vj)?)
                            * s(va * 2.0 + eta * 2.0)
                            * s(vj * 2.0)
                            / (sd(va * 2.0 + eta)? * sd(vj * 2.0 + eta)?)
                    }
                };
                a[(al, j)] = pre * zp * self.log_bracket_derivative(set, v, j, al)?;
            }
        }
        let kind = if set == BetheSet::I { DetKind::PhiI } else { DetKind::PhiII };
        Ok(DetMatrix { kind, entries: a })
    }

    /// ⟨Ψ(v)|Ψ(v)⟩ from the Gaudin determinant, for on-shell distinct v.
    pub fn norm_det(&self, set: BetheSet, v: &[C64], force: bool) -> Result<DetValue> {
        let m = v.len();
        let res = self.max_bae(set, v)?;
        let off_shell = res >= ON_SHELL_TOL;
        if off_shell && !force {
            return Err(Error::OffShellRoots(res));
        }
        check_distinct(self, v, "v", true)?;
        let eta = self.eta();
        let sign = if set == BetheSet::I { -1.0 } else { 1.0 };
        let mut acc = LogAcc { log: self.pn_prefactor()?.ln() };
        for &vk in v {
            for &zl in &self.p.z {
                let x = self.s(vk + zl * sign);
                acc.mul(x);
                acc.mul(x);
                let y = self.s(vk + zl * sign + eta);
                acc.div("norm", y)?;
                acc.div("norm", y)?;
            }
        }
        for a in 0..m {
            for b in 0..m {
                if a == b {
                    continue;
                }
                let (va, vb) = (v[a], v[b]);
                match set {
                    BetheSet::I => acc.mul(self.s(va + vb)),
                    BetheSet::II => acc.mul(self.s(va + vb + eta * 2.0)),
                }
                acc.mul(self.s(va - vb - eta));
                acc.div("norm", self.s(va - vb))?;
                acc.div("norm", self.s(va + vb + eta))?;
            }
        }
        let sp0 = self.ell.sigma_prime_zero();
        for _ in 0..m {
            acc.div("norm", sp0)?;
        }
        let mat = self.gaudin_matrix(set, v)?;
        let (det, cond) = det_with_cond(&mat.entries);
        Ok(DetValue { value: acc.value() * det, cond, off_shell })
    }
}
