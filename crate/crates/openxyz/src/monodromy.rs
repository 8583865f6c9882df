//! Face-picture monodromy and double-row operators, reference and Bethe states,
//! Bethe equations, transfer eigenvalues and the brute-force scalar products.
//!
//! Face operators act on V^{⊗N} in the same basis as the vertex picture; the
//! dynamical weight seen by each R-factor is read off the basis state it hits.

use crate::error::{Error, Result};
use crate::linalg::{apply_sparse_left, c, inverse, kron, max_abs, one, Mat};
use crate::params::{bits_of, index_of, Model, Weight};
use crate::vertex::LaxBlock;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which of the two families of Bethe states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BetheSet {
    I,
    II,
}

impl fmt::Display for BetheSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BetheSet::I => "I",
            BetheSet::II => "II",
        })
    }
}

impl FromStr for BetheSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(BetheSet::I),
            "II" | "2" => Ok(BetheSet::II),
            _ => Err(Error::Config(format!("unknown Bethe set {s:?}"))),
        }
    }
}

/// Scalar products ⟨dual(u)|state(v)⟩, written dual-state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pairing {
    /// ⟨Ψ^(I)(u)|Ψ^(I)(v)⟩
    OneOne,
    /// ⟨Ψ^(II)(u)|Ψ^(II)(v)⟩
    TwoTwo,
    /// ⟨Ψ^(I)(u)|Ψ^(II)(v)⟩, the first partition function
    OneTwo,
    /// ⟨Ψ^(II)(u)|Ψ^(I)(v)⟩, the second partition function
    TwoOne,
}

impl Pairing {
    pub fn dual(self) -> BetheSet {
        match self {
            Pairing::OneOne | Pairing::OneTwo => BetheSet::I,
            _ => BetheSet::II,
        }
    }

    pub fn state(self) -> BetheSet {
        match self {
            Pairing::OneOne | Pairing::TwoOne => BetheSet::I,
            _ => BetheSet::II,
        }
    }

    /// The pairing of a set with itself.
    pub fn diagonal(set: BetheSet) -> Pairing {
        match set {
            BetheSet::I => Pairing::OneOne,
            BetheSet::II => Pairing::TwoTwo,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pairing::OneOne => "I-I",
            Pairing::TwoTwo => "II-II",
            Pairing::OneTwo => "I-II",
            Pairing::TwoOne => "II-I",
        }
    }
}

impl FromStr for Pairing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I-I" => Ok(Pairing::OneOne),
            "II-II" => Ok(Pairing::TwoTwo),
            "I-II" => Ok(Pairing::OneTwo),
            "II-I" => Ok(Pairing::TwoOne),
            _ => Err(Error::Config(format!("unknown pairing {s:?}"))),
        }
    }
}

fn amax<'a>(it: impl Iterator<Item = &'a C64>) -> f64 {
    it.fold(0.0, |acc, z| acc.max(z.norm()))
}

fn basis_vec(dim: usize, index: usize) -> Mat {
    let mut v = Mat::zeros(dim, 1);
    v[(index, 0)] = one();
    v
}

impl Model {
    /// T_F(l|u) on V₀ ⊗ V^{⊗N}: site k sees R(u−z_k; l − η Σ_{r<k} ĥ_r) with
    /// the ĥ_r read from the current state of the earlier sites.
    pub fn face_one_row_full(&self, l: Weight, u: C64) -> Result<Mat> {
        let n = self.n();
        let big = n + 1;
        let eta = self.eta();
        let mut t = Mat::identity(1 << big, 1 << big);
        for k in 1..=n {
            let zk = self.p.z[k - 1];
            // the weight only depends on the number of ε₂ among sites 1..k−1
            let rs: Vec<Mat> = (0..k)
                .map(|twos| {
                    let ones = (k - 1 - twos) as f64;
                    let w = l.shift(0, -eta * ones).shift(1, -eta * twos as f64);
                    self.face_r(u - zk, w)
                })
                .collect::<Result<_>>()?;
            t = apply_sparse_left(&t, |col, out| {
                let bits = bits_of(col, big);
                let twos = bits[1..k].iter().sum::<usize>();
                let r = &rs[twos];
                let (a, s) = (bits[0], bits[k]);
                for a2 in 0..2 {
                    for s2 in 0..2 {
                        let v = r[(2 * a2 + s2, 2 * a + s)];
                        if v != c(0.0, 0.0) {
                            let mut nb = bits.clone();
                            nb[0] = a2;
                            nb[k] = s2;
                            out.push((index_of(&nb), v));
                        }
                    }
                }
            });
        }
        Ok(t)
    }

    pub fn face_one_row(&self, l: Weight, u: C64) -> Result<LaxBlock> {
        Ok(LaxBlock::from_full(&self.face_one_row_full(l, u)?))
    }

    fn diag_by_label<F: Fn(Weight) -> Result<C64>>(&self, base: Weight, f: F) -> Result<Mat> {
        let d = self.dim();
        let mut m = Mat::zeros(d, d);
        for col in 0..d {
            m[(col, col)] = f(self.label(base, col))?;
        }
        Ok(m)
    }

    /// 𝒯⁻_F(m, λ|u)²₁ as one operator; the state label m is read per column.
    pub fn double_row_minus(&self, u: C64) -> Result<Mat> {
        let lam = self.lambda();
        let eta = self.eta();
        let a = self.face_one_row(lam, u)?;
        let b = self.face_one_row(lam.shift(1, eta), -u - eta)?;
        let cc = self.face_one_row(lam.shift(0, eta), -u - eta)?;
        let k = self.face_k(false, u)?;
        let body = a.get(1, 0) * b.get(1, 1) * k[0] - a.get(1, 1) * cc.get(1, 0) * k[1];
        let s21 = self.sd("double_row_minus", lam.m2 - lam.m1)?;
        let pre = self.diag_by_label(lam, |m| Ok(self.s(m.m2 - m.m1) / s21))?;
        Ok(body * pre * self.fprod(u)?)
    }

    /// 𝒯⁺_F(λ, m|u)¹₂ for the operator weight m; only columns labelled λ by m
    /// are meaningful.
    pub fn double_row_plus(&self, m: Weight, u: C64) -> Result<Mat> {
        let lam = self.lambda();
        let eta = self.eta();
        let xb = self.p.xibar;
        let a = self.face_one_row(m.shift(1, eta * 2.0), u)?;
        let b = self.face_one_row(m.shift(1, eta), -u - eta)?;
        let (l12, m12) = (lam.m12(), m.m12());
        let c1 = self.s(l12 - eta) * self.s(lam.m1 + xb + u + eta)
            / (self.sd("double_row_plus", m12 - eta)? * self.sd("double_row_plus", lam.m1 + xb - u - eta)?);
        let c2 = self.s(-l12 - eta) * self.s(lam.m2 + xb + u + eta)
            / (self.sd("double_row_plus", -m12 + eta)? * self.sd("double_row_plus", lam.m2 + xb - u - eta)?);
        let body = a.get(0, 1) * b.get(1, 1) * c1 - a.get(1, 1) * b.get(0, 1) * c2;
        Ok(body * self.fprod(u)?)
    }

    /// 𝒯⁻(m|u)^ν_μ = φ̃_{m−ημ̂+ην̂, m−ημ̂}(u) 𝕋(u) φ_{m, m−ημ̂}(−u).
    pub fn vertex_minus_from(&self, dbl: &LaxBlock, m: Weight, u: C64, nu: usize, mu: usize) -> Result<Mat> {
        let pt = self.phitilde(m.shift(mu, -self.eta()), nu, u)?;
        let ph = self.phi(m, mu, -u);
        let mut out = Mat::zeros(self.dim(), self.dim());
        for a in 0..2 {
            for b in 0..2 {
                out += dbl.get(a, b) * (pt[a] * ph[b]);
            }
        }
        Ok(out)
    }

    pub fn vertex_minus(&self, m: Weight, u: C64, nu: usize, mu: usize) -> Result<Mat> {
        self.vertex_minus_from(&self.double_row_monodromy(u)?, m, u, nu, mu)
    }

    /// 𝒯⁺(m|u)^j_i from the transposed dual double-row blocks, including the
    /// σ(m_{jk})/σ(m_{jk}−η) prefactor.
    pub fn vertex_plus_from(&self, x: &LaxBlock, m: Weight, u: C64, j: usize, i: usize) -> Result<Mat> {
        let eta = self.eta();
        let k = 1 - j;
        let mjk = m.comp(j) - m.comp(k);
        let pre = self.ratio("vertex_plus", mjk, mjk - eta)?;
        let shifted = m.shift(j, -eta).shift(i, eta);
        let ph = self.phi(shifted, i, u);
        let pb = self.phibar(m, j, -u)?;
        let mut out = Mat::zeros(self.dim(), self.dim());
        for a in 0..2 {
            for b in 0..2 {
                out += x.get(a, b) * (ph[a] * pb[b]);
            }
        }
        Ok(out * pre)
    }

    pub fn vertex_plus(&self, m: Weight, u: C64, j: usize, i: usize) -> Result<Mat> {
        self.vertex_plus_from(&self.dual_double_row(u)?, m, u, j, i)
    }

    /// ⊗_k φ_{a_{k−1}, a_k}(z_k) along the path a₀ = start, a_k = a_{k−1} − ηĥ(b_k).
    pub fn path_vec(&self, start: Weight, bits: &[usize]) -> Mat {
        let eta = self.eta();
        let mut v = Mat::from_element(1, 1, one());
        let mut a = start;
        for (k, &b) in bits.iter().enumerate() {
            let p = self.phi(a, b, self.p.z[k]);
            v = kron(&v, &Mat::from_column_slice(2, 1, &p));
            a = a.shift(b, -eta);
        }
        v
    }

    /// ⊗_k φ̃_{a_{k−1}, a_k}(z_k) as a row, for the path ending at a_N = end.
    pub fn path_covec_tilde(&self, end: Weight, bits: &[usize]) -> Result<Mat> {
        let eta = self.eta();
        let n = bits.len();
        let mut a = vec![end; n + 1];
        for k in (0..n).rev() {
            a[k] = a[k + 1].shift(bits[k], eta);
        }
        let mut v = Mat::from_element(1, 1, one());
        for k in 0..n {
            let p = self.phitilde(a[k + 1], bits[k], self.p.z[k])?;
            v = kron(&v, &Mat::from_row_slice(1, 2, &p));
        }
        Ok(v)
    }

    /// The change of basis whose column c is the intertwiner path from `start`
    /// along the bits of c.
    pub fn path_basis(&self, start: Weight) -> Mat {
        let n = self.n();
        let d = self.dim();
        let mut b = Mat::zeros(d, d);
        for col in 0..d {
            b.set_column(col, &self.path_vec(start, &bits_of(col, n)).column(0));
        }
        b
    }

    /// |Ω^(I)(λ)⟩ (all ε₁ from λ+Nη1̂) or |Ω^(II)(λ)⟩ (all ε₂ from λ).
    pub fn reference_state(&self, set: BetheSet) -> Mat {
        let n = self.n();
        let lam = self.lambda();
        match set {
            BetheSet::I => self.path_vec(lam.shift(0, self.eta() * n as f64), &vec![0; n]),
            BetheSet::II => self.path_vec(lam, &vec![1; n]),
        }
    }

    /// ⟨Ω^(I)(λ)| (ε₁ path ending at λ−Nη1̂) or ⟨Ω^(II)(λ)| (ε₂ path ending at λ).
    pub fn dual_reference(&self, set: BetheSet) -> Result<Mat> {
        let n = self.n();
        let lam = self.lambda();
        match set {
            BetheSet::I => self.path_covec_tilde(lam.shift(0, -self.eta() * n as f64), &vec![0; n]),
            BetheSet::II => self.path_covec_tilde(lam, &vec![1; n]),
        }
    }

    /// |v₁…v_M⟩ of either set, creation operators applied in the order v_M first.
    pub fn bethe_state(&self, set: BetheSet, v: &[C64]) -> Result<Mat> {
        let lam = self.lambda();
        let eta = self.eta();
        let mut s = self.reference_state(set);
        for k in (1..=v.len()).rev() {
            let kf = 2.0 * k as f64;
            let op = match set {
                BetheSet::I => self.vertex_plus(lam.shift(0, eta * kf), v[k - 1], 0, 1)?,
                BetheSet::II => self.vertex_minus(lam.shift(1, -eta * kf), v[k - 1], 1, 0)?,
            };
            s = op * s;
        }
        Ok(s)
    }

    /// ⟨u₁…u_M| of either set, as a row vector.
    pub fn dual_bethe_state(&self, set: BetheSet, u: &[C64]) -> Result<Mat> {
        let lam = self.lambda();
        let eta = self.eta();
        let mut s = self.dual_reference(set)?;
        for k in (1..=u.len()).rev() {
            let kf = 2.0 * (k - 1) as f64;
            let op = match set {
                BetheSet::I => self.vertex_minus(lam.shift(0, -eta * kf), u[k - 1], 1, 0)?,
                BetheSet::II => self.vertex_plus(lam.shift(1, eta * kf), u[k - 1], 0, 1)?,
            };
            s *= op;
        }
        Ok(s)
    }

    /// ⟨dual(u)|state(v)⟩ computed in the vertex picture.
    pub fn vertex_scalar_product(&self, kind: Pairing, u: &[C64], v: &[C64]) -> Result<C64> {
        let d = self.dual_bethe_state(kind.dual(), u)?;
        let s = self.bethe_state(kind.state(), v)?;
        Ok((d * s)[(0, 0)])
    }

    /// The same scalar product as a sandwich of face double-row operators
    /// between ⟨1…1| or ⟨2…2| and |1…1⟩ or |2…2⟩. The labels close only for
    /// N = 2M, so other lengths are rejected.
    pub fn scalar_product_oracle(&self, kind: Pairing, u: &[C64], v: &[C64]) -> Result<C64> {
        let n = self.n();
        let d = self.dim();
        if u.len() != v.len() {
            return Err(Error::InvalidParams("u and v must have the same length".into()));
        }
        if 2 * v.len() != n {
            return Err(Error::InvalidParams(format!("face sandwich needs N = 2M, got N = {n}, M = {}", v.len())));
        }
        let m = v.len();
        let lam = self.lambda();
        let eta = self.eta();
        let ones = basis_vec(d, 0);
        let twos = basis_vec(d, index_of(&vec![1; n]));
        let (mut s, end) = match kind {
            Pairing::OneTwo | Pairing::TwoTwo => (twos.clone(), if kind == Pairing::OneTwo { ones.clone() } else { twos.clone() }),
            Pairing::TwoOne => (ones.clone(), twos.clone()),
            Pairing::OneOne => (ones.clone(), ones.clone()),
        };
        for k in (1..=m).rev() {
            let kf = 2.0 * k as f64;
            s = match kind {
                Pairing::OneTwo | Pairing::TwoTwo => self.double_row_minus(v[k - 1])? * s,
                Pairing::TwoOne | Pairing::OneOne => self.double_row_plus(lam.shift(0, eta * kf), v[k - 1])? * s,
            };
        }
        for k in 1..=m {
            let kf = 2.0 * (k - 1) as f64;
            s = match kind {
                Pairing::OneTwo | Pairing::OneOne => self.double_row_minus(u[k - 1])? * s,
                Pairing::TwoOne | Pairing::TwoTwo => self.double_row_plus(lam.shift(1, eta * kf), u[k - 1])? * s,
            };
        }
        Ok((end.transpose() * s)[(0, 0)])
    }

    /// Bridge residual for 𝒯⁻: in the intertwiner path basis, the vertex operator
    /// 𝒯⁻(m_c|u)²₁ acting on column c must reproduce column c of the face operator.
    pub fn bridge_minus_residual(&self, u: C64) -> Result<f64> {
        let lam = self.lambda();
        let dbl = self.double_row_monodromy(u)?;
        let f = self.double_row_minus(u)?;
        let basis = self.path_basis(lam);
        let binv = inverse(&basis, "path basis", 1e12)?;
        let mut worst: f64 = 0.0;
        for col in 0..self.dim() {
            let m = self.label(lam, col);
            let y = self.vertex_minus_from(&dbl, m, u, 1, 0)? * basis.column(col);
            let coef = &binv * y;
            worst = worst.max(amax((coef - f.column(col)).iter()));
        }
        Ok(worst / max_abs(&f).max(1e-300))
    }

    /// Bridge residual for 𝒯⁺: each path starting at m = λ + ηΣĥ(b) is mapped
    /// into the basis of paths from m+2η2̂ with the face coefficients.
    pub fn bridge_plus_residual(&self, u: C64) -> Result<f64> {
        let lam = self.lambda();
        let n = self.n();
        let eta = self.eta();
        let x = self.dual_double_row(u)?;
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for col in 0..self.dim() {
            let bits = bits_of(col, n);
            let m = bits.iter().fold(lam, |w, &b| w.shift(b, eta));
            let fp = self.double_row_plus(m, u)?;
            let y = self.vertex_plus_from(&x, m, u, 0, 1)? * self.path_vec(m, &bits);
            let basis = self.path_basis(m.shift(1, eta * 2.0));
            let coef = inverse(&basis, "path basis", 1e12)? * y;
            worst = worst.max(amax((coef - fp.column(col)).iter()));
            scale = scale.max(amax(fp.column(col).iter()));
        }
        Ok(worst / scale.max(1e-300))
    }

    /// LHS/RHS of the Bethe equation for root `alpha`.
    pub fn bae_ratio(&self, set: BetheSet, v: &[C64], alpha: usize) -> Result<C64> {
        let (xi, xb, eta) = (self.p.xi, self.p.xibar, self.eta());
        let (l1, l2) = match set {
            BetheSet::I => (self.p.lambda1, self.p.lambda2),
            BetheSet::II => (self.p.lambda2, self.p.lambda1),
        };
        let a = v[alpha];
        let s = |x| self.s(x);
        let num = s(l2 + xi + a) * s(l2 + xb - a) * s(l1 + xb + a) * s(l1 + xi - a);
        let den = self.sd("bae", l2 + xb + a + eta)?
            * self.sd("bae", l2 + xi - a - eta)?
            * self.sd("bae", l1 + xi + a + eta)?
            * self.sd("bae", l1 + xb - a - eta)?;
        let mut rhs = c(1.0, 0.0);
        for (k, &vk) in v.iter().enumerate() {
            if k == alpha {
                continue;
            }
            rhs *= s(a + vk + eta * 2.0) * s(a - vk + eta) / (self.sd("bae", a + vk)? * self.sd("bae", a - vk - eta)?);
        }
        for &zk in &self.p.z {
            rhs *= s(a + zk) * s(a - zk) / (self.sd("bae", a + zk + eta)? * self.sd("bae", a - zk + eta)?);
        }
        if rhs.norm() <= crate::elliptic::POLE_EPS {
            return Err(Error::NearPole { what: "bae rhs", arg: a, modulus: rhs.norm() });
        }
        Ok(num / den / rhs)
    }

    /// Per-root |LHS/RHS − 1|.
    pub fn bae_residual(&self, set: BetheSet, v: &[C64]) -> Result<Vec<f64>> {
        (0..v.len()).map(|a| Ok((self.bae_ratio(set, v, a)? - 1.0).norm())).collect()
    }

    /// Λ^(1)(u) or Λ^(2)(u) for the roots `v`.
    pub fn eigenvalue(&self, set: BetheSet, u: C64, v: &[C64]) -> Result<C64> {
        let (l1, l2, xi, xb, eta) = (self.p.lambda1, self.p.lambda2, self.p.xi, self.p.xibar, self.eta());
        let s = |x| self.s(x);
        let sd = |x| self.sd("eigenvalue", x);
        let (mut t1, mut t2) = match set {
            BetheSet::I => (
                s(l2 + xb - u) * s(l1 + xb + u) * s(l1 + xi - u) * s(u * 2.0 + eta * 2.0)
                    / (sd(l2 + xb - u - eta)? * sd(l1 + xb - u - eta)? * sd(l1 + xi + u)? * sd(u * 2.0 + eta)?),
                s(l2 + xb + u + eta) * s(l1 + xi + u + eta) * s(l2 + xi - u - eta) * s(u * 2.0)
                    / (sd(l2 + xb - u - eta)? * sd(l1 + xi + u)? * sd(l2 + xi + u)? * sd(u * 2.0 + eta)?),
            ),
            BetheSet::II => (
                s(u * 2.0 + eta * 2.0) * s(l1 + xb - u) * s(l2 + xb + u) * s(l2 + xi - u)
                    / (sd(u * 2.0 + eta)? * sd(l1 + xb - u - eta)? * sd(l2 + xb - u - eta)? * sd(l2 + xi + u)?),
                s(u * 2.0) * s(l1 + xb + u + eta) * s(l2 + xi + u + eta) * s(l1 + xi - u - eta)
                    / (sd(u * 2.0 + eta)? * sd(l1 + xb - u - eta)? * sd(l2 + xi + u)? * sd(l1 + xi + u)?),
            ),
        };
        for &vk in v {
            let den = sd(u + vk + eta)? * sd(u - vk)?;
            t1 *= s(u + vk) * s(u - vk - eta) / den;
            t2 *= s(u + vk + eta * 2.0) * s(u - vk + eta) / den;
        }
        for &zk in &self.p.z {
            t2 *= s(u + zk) * s(u - zk) / (sd(u + zk + eta)? * sd(u - zk + eta)?);
        }
        Ok(t1 + t2)
    }

    /// ‖τ(u)|v⟩ − Λ(u)|v⟩‖ / ‖Λ(u)|v⟩‖ in the max norm.
    pub fn eigen_residual(&self, set: BetheSet, u: C64, v: &[C64], state: &Mat) -> Result<f64> {
        let tv = self.transfer_matrix(u)? * state;
        let lv = state * self.eigenvalue(set, u, v)?;
        Ok(max_abs(&(tv - &lv)) / max_abs(&lv).max(1e-300))
    }
}
