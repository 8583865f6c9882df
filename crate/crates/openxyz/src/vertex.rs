//! Eight-vertex R̄(u), the non-diagonal K^∓(u), monodromy matrices and τ(u).
//!
//! Quantum space V^{⊗N} uses the basis |i₁…i_N⟩ with site 1 most significant.
//! Monodromy matrices live on V₀ ⊗ V^{⊗N} with the auxiliary space in front.

use crate::error::Result;
use crate::linalg::{c, inverse, kron, max_abs, one, sparse_columns, zero, Mat};
use crate::params::{bits_of, index_of, Model};
use crate::C64;

/// A 2×2 array of operators on V^{⊗N}: `b[i][j]` is T^i_j (row i, column j of
/// the auxiliary space).
#[derive(Debug, Clone)]
pub struct LaxBlock {
    pub b: [[Mat; 2]; 2],
}

impl LaxBlock {
    pub fn from_full(t: &Mat) -> Self {
        let d = t.nrows() / 2;
        let blk = |i: usize, j: usize| t.view((i * d, j * d), (d, d)).into_owned();
        Self {
            b: [[blk(0, 0), blk(0, 1)], [blk(1, 0), blk(1, 1)]],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Mat {
        &self.b[i][j]
    }
}

pub fn pauli() -> [Mat; 4] {
    let z = zero();
    let o = one();
    let im = c(0.0, 1.0);
    [
        Mat::from_row_slice(2, 2, &[o, z, z, o]),
        Mat::from_row_slice(2, 2, &[z, o, o, z]),
        Mat::from_row_slice(2, 2, &[z, -im, im, z]),
        Mat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// The permutation on V ⊗ V.
pub fn perm4() -> Mat {
    let mut p = Mat::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            p[(2 * b + a, 2 * a + b)] = one();
        }
    }
    p
}

/// Embeds a 4×4 matrix acting on spaces `i`, `j` (in that tensor order) of `n` spaces.
pub fn embed_two(r: &Mat, i: usize, j: usize, n: usize) -> Mat {
    sparse_columns(1 << n, |col, out| {
        let bits = bits_of(col, n);
        let (a, b) = (bits[i], bits[j]);
        for a2 in 0..2 {
            for b2 in 0..2 {
                let v = r[(2 * a2 + b2, 2 * a + b)];
                if v != zero() {
                    let mut nb = bits.clone();
                    nb[i] = a2;
                    nb[j] = b2;
                    out.push((index_of(&nb), v));
                }
            }
        }
    })
}

/// Embeds a 2×2 matrix acting on space `i` of `n` spaces.
pub fn embed_one(a: &Mat, i: usize, n: usize) -> Mat {
    let id = Mat::identity(2, 2);
    let mut out = Mat::from_element(1, 1, one());
    for k in 0..n {
        out = kron(&out, if k == i { a } else { &id });
    }
    out
}

/// K^∓ share one shape: k₀·1 + k_x σˣ + k_y σʸ + k_z σᶻ with
/// k_α = σ(2w)σ_α(L)σ_α(λ₁+b)σ_α(λ₂+b) / (2σ_α(v)·D).
fn k_shape(m: &Model, w2: C64, l: C64, b: C64, v: C64, d: C64) -> Mat {
    let e = &m.ell;
    let (l1, l2) = (m.p.lambda1, m.p.lambda2);
    let coef = |alpha: (u8, u8)| {
        e.sigma(w2) * e.sigma_alpha(alpha, l) * e.sigma_alpha(alpha, l1 + b) * e.sigma_alpha(alpha, l2 + b)
            / (e.sigma_alpha(alpha, v) * d * 2.0)
    };
    let [id, sx, sy, sz] = pauli();
    id * coef((0, 0)) + sx * coef((1, 0)) + sy * (coef((1, 1)) * c(0.0, 1.0)) + sz * coef((0, 1))
}

impl Model {
    /// R̄(u) with the a, b, c, d weights built from θ^(0), θ^(1) and σ.
    pub fn rbar(&self, u: C64) -> Result<Mat> {
        let e = &self.ell;
        let eta = self.eta();
        let t0 = |x| e.theta_j(0, x);
        let t1 = |x| e.theta_j(1, x);
        let sden = self.sd("rbar", u + eta)?;
        let z = C64::new(0.0, 0.0);
        let den_ab = t1(z) * t0(eta) * sden;
        let den_cd = t1(z) * t1(eta) * sden;
        let se = e.sigma(eta);
        let a = t1(u) * t0(u + eta) * se / den_ab;
        let b = t0(u) * t1(u + eta) * se / den_ab;
        let cc = t1(u) * t1(u + eta) * se / den_cd;
        let d = t0(u) * t0(u + eta) * se / den_cd;
        let o = zero();
        Ok(Mat::from_row_slice(
            4,
            4,
            &[a, o, o, d, o, b, cc, o, o, cc, b, o, d, o, o, a],
        ))
    }

    pub fn kminus(&self, u: C64) -> Result<Mat> {
        let (l1, l2, xi) = (self.p.lambda1, self.p.lambda2, self.p.xi);
        let l = l1 + l2 - 0.5;
        let d = self.sd("kminus", -u + l)? * self.sd("kminus", l1 + xi + u)? * self.sd("kminus", l2 + xi + u)?;
        self.sd("kminus", u)?;
        Ok(k_shape(self, u * 2.0, l, xi, u, d))
    }

    pub fn kplus(&self, u: C64) -> Result<Mat> {
        let (l1, l2, xb, eta) = (self.p.lambda1, self.p.lambda2, self.p.xibar, self.eta());
        let l = l1 + l2 + eta - 0.5;
        let d = self.sd("kplus", u + eta + l1 + l2 - 0.5)?
            * self.sd("kplus", l1 + xb - u - eta)?
            * self.sd("kplus", l2 + xb - u - eta)?;
        self.sd("kplus", -u - eta)?;
        Ok(k_shape(self, -u * 2.0 - eta * 2.0, l, xb, -u - eta, d))
    }

    /// T₀(u) = R̄₀N(u−z_N)…R̄₀₁(u−z₁) on V₀ ⊗ V^{⊗N}.
    pub fn one_row_full(&self, u: C64) -> Result<Mat> {
        let n = self.n() + 1;
        let mut t = Mat::identity(1 << n, 1 << n);
        for (k, &zk) in self.p.z.iter().enumerate() {
            t = embed_two(&self.rbar(u - zk)?, 0, k + 1, n) * t;
        }
        Ok(t)
    }

    pub fn one_row_monodromy(&self, u: C64) -> Result<LaxBlock> {
        Ok(LaxBlock::from_full(&self.one_row_full(u)?))
    }

    /// T̂(u) = T(−u)⁻¹, by explicit inversion.
    pub fn hat_full(&self, u: C64) -> Result<Mat> {
        inverse(&self.one_row_full(-u)?, "hat_monodromy", 1e12)
    }

    pub fn hat_monodromy(&self, u: C64) -> Result<LaxBlock> {
        Ok(LaxBlock::from_full(&self.hat_full(u)?))
    }

    /// 𝕋(u) = T(u) K⁻(u) T̂(u) as a full matrix.
    pub fn double_row_full(&self, u: C64) -> Result<Mat> {
        let n = self.n() + 1;
        Ok(self.one_row_full(u)? * embed_one(&self.kminus(u)?, 0, n) * self.hat_full(u)?)
    }

    pub fn double_row_monodromy(&self, u: C64) -> Result<LaxBlock> {
        Ok(LaxBlock::from_full(&self.double_row_full(u)?))
    }

    /// (𝕋⁺(u))^{t₀} = T^{t₀}(u) (K⁺(u))^{t₀} T̂^{t₀}(u), returned as its blocks
    /// X^a_b = Σ_{c,d} T^c_a K⁺[d,c] T̂^b_d (quantum-space products keep their order).
    pub fn dual_double_row(&self, u: C64) -> Result<LaxBlock> {
        let t = self.one_row_monodromy(u)?;
        let th = self.hat_monodromy(u)?;
        let kp = self.kplus(u)?;
        let d = self.dim();
        let mut out: [[Mat; 2]; 2] = Default::default();
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = Mat::zeros(d, d);
                for cc in 0..2 {
                    for dd in 0..2 {
                        acc += &t.b[cc][a] * &th.b[b][dd] * kp[(dd, cc)];
                    }
                }
                out[a][b] = acc;
            }
        }
        Ok(LaxBlock { b: out })
    }

    /// τ(u) = tr₀(K⁺(u) 𝕋(u)).
    pub fn transfer_matrix(&self, u: C64) -> Result<Mat> {
        let dbl = self.double_row_monodromy(u)?;
        let kp = self.kplus(u)?;
        let mut tau = Mat::zeros(self.dim(), self.dim());
        for a in 0..2 {
            for b in 0..2 {
                tau += &dbl.b[b][a] * kp[(a, b)];
            }
        }
        Ok(tau)
    }

    /// Max-norm residual of R̄₁₂(u₁−u₂)R̄₁₃(u₁−u₃)R̄₂₃(u₂−u₃) = R̄₂₃R̄₁₃R̄₁₂.
    pub fn qybe_residual(&self, u1: C64, u2: C64, u3: C64) -> Result<f64> {
        let r12 = embed_two(&self.rbar(u1 - u2)?, 0, 1, 3);
        let r13 = embed_two(&self.rbar(u1 - u3)?, 0, 2, 3);
        let r23 = embed_two(&self.rbar(u2 - u3)?, 1, 2, 3);
        let lhs = &r12 * &r13 * &r23;
        let rhs = &r23 * &r13 * &r12;
        Ok(max_abs(&(lhs - rhs)))
    }

    /// R̄₁₂(u)R̄₂₁(−u) − id.
    pub fn vertex_unitarity_residual(&self, u: C64) -> Result<f64> {
        let p = perm4();
        let r21 = &p * self.rbar(-u)? * &p;
        Ok(max_abs(&(self.rbar(u)? * r21 - Mat::identity(4, 4))))
    }

    /// Reflection equation for K⁻, residual scaled by the largest entry.
    pub fn re_residual(&self, u1: C64, u2: C64) -> Result<f64> {
        let p = perm4();
        let id = Mat::identity(2, 2);
        let r = |u| self.rbar(u);
        let r21 = |u| -> Result<Mat> { Ok(&p * r(u)? * &p) };
        let k1 = kron(&self.kminus(u1)?, &id);
        let k2 = kron(&id, &self.kminus(u2)?);
        let lhs = r(u1 - u2)? * &k1 * r21(u1 + u2)? * &k2;
        let rhs = &k2 * r(u1 + u2)? * &k1 * r21(u1 - u2)?;
        Ok(max_abs(&(&lhs - &rhs)) / max_abs(&lhs).max(1e-300))
    }

    /// Dual reflection equation for K⁺, residual scaled by the largest entry.
    pub fn dre_residual(&self, u1: C64, u2: C64) -> Result<f64> {
        let p = perm4();
        let id = Mat::identity(2, 2);
        let eta = self.eta();
        let r = |u| self.rbar(u);
        let r21 = |u| -> Result<Mat> { Ok(&p * r(u)? * &p) };
        let k1 = kron(&self.kplus(u1)?, &id);
        let k2 = kron(&id, &self.kplus(u2)?);
        let s = -u1 - u2 - eta * 2.0;
        let lhs = r(u2 - u1)? * &k1 * r21(s)? * &k2;
        let rhs = &k2 * r(s)? * &k1 * r21(u2 - u1)?;
        Ok(max_abs(&(&lhs - &rhs)) / max_abs(&lhs).max(1e-300))
    }

    /// ‖[τ(u), τ(v)]‖ / ‖τ(u)τ(v)‖.
    pub fn transfer_commutator(&self, u: C64, v: C64) -> Result<f64> {
        let a = self.transfer_matrix(u)?;
        let b = self.transfer_matrix(v)?;
        let ab = &a * &b;
        Ok(max_abs(&(&ab - &b * &a)) / max_abs(&ab).max(1e-300))
    }
}
