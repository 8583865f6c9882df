//! SOS face R(u; m), intertwiners φ, φ̄, φ̃ and the diagonal face K-matrices.
//!
//! `R(u;m)^{kl}_{ij}` is stored at `[2k+l, 2i+j]`, so the upper pair indexes the
//! output. The dual rows φ̄, φ̃ come from inverting the 2×2 matrix of φ columns.

use crate::error::{Error, Result};
use crate::linalg::{max_abs, one, sparse_columns, zero, Mat};
use crate::params::{bits_of, index_of, Model, Weight};
use crate::C64;

/// A two-component intertwiner, as a column (φ) or a row (φ̄, φ̃).
pub type Vec2 = [C64; 2];

fn outer(a: Vec2, b: Vec2) -> Mat {
    Mat::from_row_slice(2, 2, &[a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
}

impl Model {
    pub fn face_r(&self, u: C64, m: Weight) -> Result<Mat> {
        let eta = self.eta();
        let mut r = Mat::zeros(4, 4);
        r[(0, 0)] = one();
        r[(3, 3)] = one();
        let den_u = self.sd("face_r", u + eta)?;
        for i in 0..2 {
            let j = 1 - i;
            let mij = m.comp(i) - m.comp(j);
            let den = den_u * self.sd("face_r", mij)?;
            r[(2 * i + j, 2 * i + j)] = self.s(u) * self.s(mij - eta) / den;
            r[(2 * j + i, 2 * i + j)] = self.s(eta) * self.s(u + mij) / den;
        }
        Ok(r)
    }

    /// φ_{m, m−ηĵ}(u) = (θ⁽¹⁾(u+2m_j), θ⁽²⁾(u+2m_j)).
    pub fn phi(&self, m: Weight, j: usize, u: C64) -> Vec2 {
        let x = u + m.comp(j) * 2.0;
        [self.ell.theta_j(1, x), self.ell.theta_j(2, x)]
    }

    fn dual_rows(&self, c0: Vec2, c1: Vec2, m: Weight, u: C64) -> Result<[Vec2; 2]> {
        let det = c0[0] * c1[1] - c1[0] * c0[1];
        let guard = self.s(u + m.m1 + m.m2 - 0.5) * self.s(m.m12());
        if guard.norm() <= 1e-9 || det.norm() == 0.0 {
            return Err(Error::SingularIntertwiner { m1: m.m1, m2: m.m2, u });
        }
        Ok([[c1[1] / det, -c1[0] / det], [-c0[1] / det, c0[0] / det]])
    }

    /// φ̄_{m, m−ημ̂}(u): row μ of [φ_{m,m−η1̂}(u), φ_{m,m−η2̂}(u)]⁻¹.
    pub fn phibar(&self, m: Weight, mu: usize, u: C64) -> Result<Vec2> {
        let rows = self.dual_rows(self.phi(m, 0, u), self.phi(m, 1, u), m, u)?;
        Ok(rows[mu])
    }

    /// φ̃_{m+ημ̂, m}(u): row μ of [φ_{m+η1̂,m}(u), φ_{m+η2̂,m}(u)]⁻¹.
    pub fn phitilde(&self, m: Weight, mu: usize, u: C64) -> Result<Vec2> {
        let eta = self.eta();
        let (a0, a1) = (m.shift(0, eta), m.shift(1, eta));
        let rows = self.dual_rows(self.phi(a0, 0, u), self.phi(a1, 1, u), a0, u)?;
        Ok(rows[mu])
    }

    /// Diagonal entries of 𝒦(λ|u) (minus) or 𝒦̃(λ|u) (plus).
    pub fn face_k(&self, plus: bool, u: C64) -> Result<[C64; 2]> {
        let l = self.lambda();
        let (l1, l2, eta) = (l.m1, l.m2, self.eta());
        if !plus {
            let xi = self.p.xi;
            return Ok([
                self.ratio("face_k", l1 + xi - u, l1 + xi + u)?,
                self.ratio("face_k", l2 + xi - u, l2 + xi + u)?,
            ]);
        }
        let xb = self.p.xibar;
        let l12 = l.m12();
        let s12 = self.sd("face_k", l12)?;
        Ok([
            self.s(l12 - eta) * self.s(l1 + xb + u + eta) / (s12 * self.sd("face_k", l1 + xb - u - eta)?),
            self.s(l12 + eta) * self.s(l2 + xb + u + eta) / (s12 * self.sd("face_k", l2 + xb - u - eta)?),
        ])
    }

    /// K⁻(u) rebuilt from intertwiners and 𝒦(λ|u).
    pub fn kminus_from_face(&self, u: C64) -> Result<Mat> {
        let l = self.lambda();
        let k = self.face_k(false, u)?;
        let mut out = Mat::zeros(2, 2);
        for i in 0..2 {
            out += outer(self.phi(l, i, u), self.phibar(l, i, -u)?) * k[i];
        }
        Ok(out)
    }

    /// K⁺(u) rebuilt from intertwiners and 𝒦̃(λ|u).
    pub fn kplus_from_face(&self, u: C64) -> Result<Mat> {
        let l = self.lambda();
        let eta = self.eta();
        let k = self.face_k(true, u)?;
        let mut out = Mat::zeros(2, 2);
        for i in 0..2 {
            out += outer(self.phi(l, i, -u), self.phitilde(l.shift(i, -eta), i, u)?) * k[i];
        }
        Ok(out)
    }

    /// max|K^∓ − reconstruction| / max|K^∓|.
    pub fn vertex_face_k_residual(&self, plus: bool, u: C64) -> Result<f64> {
        let (k, r) = if plus {
            (self.kplus(u)?, self.kplus_from_face(u)?)
        } else {
            (self.kminus(u)?, self.kminus_from_face(u)?)
        };
        Ok(max_abs(&(&k - r)) / max_abs(&k))
    }

    /// Operator on `n` spaces applying R(u; m − ηĵ) on the pair, where ĵ is read
    /// from the current bit at `dyn_site` (no shift if `None`).
    pub fn face_dynamic(&self, u: C64, m: Weight, pair: (usize, usize), dyn_site: Option<usize>, n: usize) -> Result<Mat> {
        let eta = self.eta();
        let rs = [self.face_r(u, m.shift(0, -eta))?, self.face_r(u, m.shift(1, -eta))?];
        let r0 = self.face_r(u, m)?;
        let (i, j) = pair;
        Ok(sparse_columns(1 << n, |col, out| {
            let bits = bits_of(col, n);
            let r = match dyn_site {
                Some(s) => &rs[bits[s]],
                None => &r0,
            };
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let v = r[(2 * a2 + b2, 2 * bits[i] + bits[j])];
                    if v != zero() {
                        let mut nb = bits.clone();
                        nb[i] = a2;
                        nb[j] = b2;
                        out.push((index_of(&nb), v));
                    }
                }
            }
        }))
    }

    /// Dynamical Yang-Baxter residual
    /// R₁₂(u₁−u₂; m−ηĥ⁽³⁾)R₁₃(u₁−u₃; m)R₂₃(u₂−u₃; m−ηĥ⁽¹⁾) = R₂₃(u₂−u₃; m)R₁₃(u₁−u₃; m−ηĥ⁽²⁾)R₁₂(u₁−u₂; m).
    pub fn mybe_residual(&self, u1: C64, u2: C64, u3: C64, m: Weight) -> Result<f64> {
        let lhs = self.face_dynamic(u1 - u2, m, (0, 1), Some(2), 3)?
            * self.face_dynamic(u1 - u3, m, (0, 2), None, 3)?
            * self.face_dynamic(u2 - u3, m, (1, 2), Some(0), 3)?;
        let rhs = self.face_dynamic(u2 - u3, m, (1, 2), None, 3)?
            * self.face_dynamic(u1 - u3, m, (0, 2), Some(1), 3)?
            * self.face_dynamic(u1 - u2, m, (0, 1), None, 3)?;
        Ok(max_abs(&(lhs - rhs)))
    }

    /// R₁₂(u;m)R₂₁(−u;m) − id.
    pub fn face_unitarity_residual(&self, u: C64, m: Weight) -> Result<f64> {
        let p = crate::vertex::perm4();
        let r21 = &p * self.face_r(-u, m)? * &p;
        Ok(max_abs(&(self.face_r(u, m)? * r21 - Mat::identity(4, 4))))
    }

    /// Crossing relation, max over all 16 index tuples:
    /// R(u;m)^{kl}_{ij} = ε_l ε_j σ(u)σ((m−ηî)₂₁)/(σ(u+η)σ(m₂₁)) R(−u−η; m−ηî)^{j̄k}_{l̄i}.
    pub fn crossing_residual(&self, u: C64, m: Weight) -> Result<f64> {
        let eta = self.eta();
        let eps = [1.0, -1.0];
        let r = self.face_r(u, m)?;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            let mi = m.shift(i, -eta);
            let rc = self.face_r(-u - eta, mi)?;
            let f = self.s(u) * self.s(mi.m2 - mi.m1) / (self.sd("crossing", u + eta)? * self.sd("crossing", m.m2 - m.m1)?);
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let lhs = r[(2 * k + l, 2 * i + j)];
                        let rhs = f * eps[l] * eps[j] * rc[(2 * (1 - j) + k, 2 * (1 - l) + i)];
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
        }
        Ok(worst)
    }

    /// det[φ_{m,m−η1̂}(u), φ_{m,m−η2̂}(u)] / (σ(u+m₁+m₂−1/2)σ(m₁₂)); constant in u and m.
    pub fn intertwiner_det_ratio(&self, m: Weight, u: C64) -> Result<C64> {
        let (a, b) = (self.phi(m, 0, u), self.phi(m, 1, u));
        let det = a[0] * b[1] - b[0] * a[1];
        Ok(det / (self.sd("intertwiner det", u + m.m1 + m.m2 - 0.5)? * self.sd("intertwiner det", m.m12())?))
    }

    /// Residual of one of the five face-vertex relations (0 = the basic one,
    /// 1..4 the dual-intertwiner variants), max over free indices and scaled by
    /// the largest left-hand side.
    pub fn face_vertex_residual(&self, relation: usize, u1: C64, u2: C64, m: Weight) -> Result<f64> {
        let eta = self.eta();
        let rb = self.rbar(u1 - u2)?;
        let fr = self.face_r(u1 - u2, m)?;
        let rr = |k: usize, l: usize, i: usize, j: usize| fr[(2 * k + l, 2 * i + j)];
        let sh = |w: Weight, a: usize, s: f64| w.shift(a, eta * s);
        let col = |v: Vec2| Mat::from_column_slice(2, 1, &v);
        let row = |v: Vec2| Mat::from_row_slice(1, 2, &v);
        let id2 = Mat::identity(2, 2);
        let k2 = crate::linalg::kron;
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let (lhs, rhs) = match relation {
                    0 => {
                        let (i, j) = (x, y);
                        let lhs = &rb * k2(&col(self.phi(m, i, u1)), &col(self.phi(sh(m, i, -1.0), j, u2)));
                        let mut rhs = Mat::zeros(4, 1);
                        for k in 0..2 {
                            for l in 0..2 {
                                rhs += k2(&col(self.phi(sh(m, l, -1.0), k, u1)), &col(self.phi(m, l, u2))) * rr(k, l, i, j);
                            }
                        }
                        (lhs, rhs)
                    }
                    1 => {
                        let (k, j) = (x, y);
                        let lhs = k2(&row(self.phitilde(m, k, u1)?), &id2) * &rb * k2(&id2, &col(self.phi(sh(m, j, 1.0), j, u2)));
                        let mut rhs = Mat::zeros(2, 2);
                        for i in 0..2 {
                            for l in 0..2 {
                                let a = self.phi(sh(sh(m, k, 1.0), l, 1.0), l, u2);
                                let b = self.phitilde(sh(m, j, 1.0), i, u1)?;
                                rhs += outer(a, b) * rr(k, l, i, j);
                            }
                        }
                        (lhs, rhs)
                    }
                    2 => {
                        let (k, l) = (x, y);
                        let lhs = k2(&row(self.phitilde(m, k, u1)?), &row(self.phitilde(sh(m, k, 1.0), l, u2)?)) * &rb;
                        let mut rhs = Mat::zeros(1, 4);
                        for i in 0..2 {
                            for j in 0..2 {
                                rhs += k2(&row(self.phitilde(sh(m, j, 1.0), i, u1)?), &row(self.phitilde(m, j, u2)?)) * rr(k, l, i, j);
                            }
                        }
                        (lhs, rhs)
                    }
                    3 => {
                        let (i, l) = (x, y);
                        let lhs = k2(&id2, &row(self.phibar(m, l, u2)?)) * &rb * k2(&col(self.phi(m, i, u1)), &id2);
                        let mut rhs = Mat::zeros(2, 2);
                        for k in 0..2 {
                            for j in 0..2 {
                                let a = self.phi(sh(m, l, -1.0), k, u1);
                                let b = self.phibar(sh(m, i, -1.0), j, u2)?;
                                rhs += outer(a, b) * rr(k, l, i, j);
                            }
                        }
                        (lhs, rhs)
                    }
                    4 => {
                        let (k, l) = (x, y);
                        let lhs = k2(&row(self.phibar(sh(m, l, -1.0), k, u1)?), &row(self.phibar(m, l, u2)?)) * &rb;
                        let mut rhs = Mat::zeros(1, 4);
                        for i in 0..2 {
                            for j in 0..2 {
                                rhs += k2(&row(self.phibar(m, i, u1)?), &row(self.phibar(sh(m, i, -1.0), j, u2)?)) * rr(k, l, i, j);
                            }
                        }
                        (lhs, rhs)
                    }
                    _ => return Err(Error::InvalidParams(format!("unknown face-vertex relation {relation}"))),
                };
                worst = worst.max(max_abs(&(&lhs - &rhs)));
                scale = scale.max(max_abs(&lhs));
            }
        }
        Ok(worst / scale.max(1e-300))
    }
}

/// Weight conservation: R^{kl}_{ij} may be nonzero only if î+ĵ = k̂+l̂.
pub fn conserves_weight(r: &Mat) -> bool {
    for k in 0..2 {
        for l in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let same = (i + j) == (k + l);
                    if !same && r[(2 * k + l, 2 * i + j)] != zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}
