//! Permutation operators R^s, the factorizing F-matrix and the F-basis
//! (polarization free) forms of the twisted monodromy and creation operators.

use crate::error::{Error, Result};
use crate::linalg::{inverse, kron_all, max_abs, one, sparse_columns, zero, Mat};
use crate::params::{bits_of, count_twos, index_of, Model, Weight};
use crate::vertex::LaxBlock;
use crate::C64;

/// Minimal word (b₁, …, b_p) with s = s_{b₁}⋯s_{b_p}, where s_b swaps
/// positions b and b+1 (0-based). `s[i]` is the image of i.
pub fn decompose(s: &[usize]) -> Vec<usize> {
    let mut seq = s.to_vec();
    let mut word = Vec::new();
    'outer: loop {
        for j in 0..seq.len().saturating_sub(1) {
            if seq[j] > seq[j + 1] {
                seq.swap(j, j + 1);
                word.push(j);
                continue 'outer;
            }
        }
        break;
    }
    word.reverse();
    word
}

/// Number of inversions of s, the length of any minimal word.
pub fn inversions(s: &[usize]) -> usize {
    let mut n = 0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if s[i] > s[j] {
                n += 1;
            }
        }
    }
    n
}

/// All permutations of 0..n in ascending lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn elem(i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(2, 2);
    m[(i, j)] = one();
    m
}

fn diag2(a: C64, b: C64) -> Mat {
    Mat::from_row_slice(2, 2, &[a, zero(), zero(), b])
}

impl Model {
    /// R_{ij}(u | l − η Σ_{k∈dyn} ĥ_k) on the N quantum sites.
    pub fn r_dynamic(&self, u: C64, l: Weight, i: usize, j: usize, dyn_sites: &[usize]) -> Result<Mat> {
        let n = self.n();
        let eta = self.eta();
        let rs: Vec<Mat> = (0..=dyn_sites.len())
            .map(|twos| {
                let ones = (dyn_sites.len() - twos) as f64;
                self.face_r(u, l.shift(0, -eta * ones).shift(1, -eta * twos as f64))
            })
            .collect::<Result<_>>()?;
        Ok(sparse_columns(1 << n, |col, out| {
            let b = bits_of(col, n);
            let twos = dyn_sites.iter().map(|&k| b[k]).sum::<usize>();
            let r = &rs[twos];
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let v = r[(2 * a2 + b2, 2 * b[i] + b[j])];
                    if v != zero() {
                        let mut nb = b.clone();
                        nb[i] = a2;
                        nb[j] = b2;
                        out.push((index_of(&nb), v));
                    }
                }
            }
        }))
    }

    /// R^s_{order}(l) composed along `word` with the rule
    /// R^{s_b s'}_o = R^{s'}_{s_b(o)} R^{s_b}_o.
    pub fn r_word(&self, word: &[usize], order: &[usize], l: Weight) -> Result<Mat> {
        let mut o = order.to_vec();
        let mut op = Mat::identity(self.dim(), self.dim());
        for &b in word {
            let z = &self.p.z;
            op = self.r_dynamic(z[o[b]] - z[o[b + 1]], l, o[b], o[b + 1], &o[..b])? * op;
            o.swap(b, b + 1);
        }
        Ok(op)
    }

    /// R^s_{1…N}(l) via the bubble-sort decomposition.
    pub fn r_s(&self, s: &[usize], l: Weight) -> Result<Mat> {
        let order: Vec<usize> = (0..self.n()).collect();
        self.r_word(&decompose(s), &order, l)
    }

    /// F_{order}(l) = Σ_s Σ_α* Π P^{s(i)}_{α_{s(i)}} R^s_{order}(l), the α
    /// sequences restricted by the ordering condition. Summed over s in
    /// ascending lexicographic order.
    pub fn f_matrix_ordered(&self, order: &[usize], l: Weight) -> Result<Mat> {
        let n = self.n();
        let d = self.dim();
        let mut f = Mat::zeros(d, d);
        for s in permutations(n) {
            let keep: Vec<bool> = (0..d)
                .map(|row| {
                    let bb = bits_of(row, n);
                    let al = |pos: usize| bb[order[pos]];
                    (0..n.saturating_sub(1)).all(|i| {
                        let (a, b) = (al(s[i]), al(s[i + 1]));
                        if s[i + 1] > s[i] {
                            b >= a
                        } else {
                            b > a
                        }
                    })
                })
                .collect();
            if !keep.iter().any(|&k| k) {
                continue;
            }
            let r = self.r_word(&decompose(&s), order, l)?;
            for row in 0..d {
                if keep[row] {
                    let src = r.row(row).into_owned();
                    let mut dst = f.row_mut(row);
                    dst += src;
                }
            }
        }
        Ok(f)
    }

    /// F_{1…N}(l), refusing a degenerate diagonal.
    pub fn f_matrix(&self, l: Weight) -> Result<Mat> {
        let order: Vec<usize> = (0..self.n()).collect();
        let f = self.f_matrix_ordered(&order, l)?;
        let mind = f.diagonal().iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        if mind <= 1e-10 {
            return Err(Error::DegenerateF(mind));
        }
        Ok(f)
    }

    /// max over s ∈ S_N of |F_{s(1…N)}(l)⁻¹ F_{1…N}(l) − R^s_{1…N}(l)|.
    pub fn factorizing_residual(&self, l: Weight) -> Result<f64> {
        let f = self.f_matrix(l)?;
        let mut worst: f64 = 0.0;
        for s in permutations(self.n()) {
            let fs = self.f_matrix_ordered(&s, l)?;
            let lhs = inverse(&fs, "F_s", 1e12)? * &f;
            worst = worst.max(max_abs(&(lhs - self.r_s(&s, l)?)));
        }
        Ok(worst)
    }

    /// T̃(l|u)^i_j = F(l) T_F(l|u)^i_j F(l − ηĵ)⁻¹.
    pub fn twisted_monodromy(&self, l: Weight, u: C64) -> Result<LaxBlock> {
        let eta = self.eta();
        let t = self.face_one_row(l, u)?;
        let f = self.f_matrix(l)?;
        let finv = [
            inverse(&self.f_matrix(l.shift(0, -eta))?, "F", 1e12)?,
            inverse(&self.f_matrix(l.shift(1, -eta))?, "F", 1e12)?,
        ];
        let mut b: [[Mat; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                b[i][j] = &f * t.get(i, j) * &finv[j];
            }
        }
        Ok(LaxBlock { b })
    }

    /// T̃²₂: Π_i diag(σ(u−z_i)/σ(u−z_i+η), 1) dressed by σ(l₂₁−η)/σ(l₂₁−η+η·n₁).
    pub fn twisted_22_closed(&self, l: Weight, u: C64) -> Result<Mat> {
        let eta = self.eta();
        let n = self.n();
        let facs: Vec<Mat> = self
            .p
            .z
            .iter()
            .map(|&zi| Ok(diag2(self.ratio("twisted 22", u - zi, u - zi + eta)?, one())))
            .collect::<Result<_>>()?;
        let mut out = kron_all(&facs);
        let l21 = l.m2 - l.m1;
        for col in 0..self.dim() {
            let n1 = (n - count_twos(col)) as f64;
            let pre = self.ratio("twisted 22", l21 - eta, l21 - eta + eta * n1)?;
            for row in 0..self.dim() {
                out[(row, col)] *= pre;
            }
        }
        Ok(out)
    }

    /// T̃²₁ as a sum of single-site raising terms.
    pub fn twisted_21_closed(&self, l: Weight, u: C64) -> Result<Mat> {
        let eta = self.eta();
        let z = &self.p.z;
        let l12 = l.m12();
        let mut out = Mat::zeros(self.dim(), self.dim());
        for i in 0..self.n() {
            let facs: Vec<Mat> = (0..self.n())
                .map(|j| {
                    if j == i {
                        return Ok(elem(0, 1));
                    }
                    let v = self.s(u - z[j]) * self.s(z[i] - z[j] + eta)
                        / (self.sd("twisted 21", u - z[j] + eta)? * self.sd("twisted 21", z[i] - z[j])?);
                    Ok(diag2(v, one()))
                })
                .collect::<Result<_>>()?;
            let coef = self.s(eta) * self.s(u - z[i] + l12) / (self.sd("twisted 21", u - z[i] + eta)? * self.sd("twisted 21", l12)?);
            out += kron_all(&facs) * coef;
        }
        Ok(out)
    }

    /// T̃¹₂ as a sum of single-site lowering terms; the scalar uses the input label.
    pub fn twisted_12_closed(&self, l: Weight, u: C64) -> Result<Mat> {
        let eta = self.eta();
        let z = &self.p.z;
        let mut out = Mat::zeros(self.dim(), self.dim());
        let l21 = l.m2 - l.m1;
        for i in 0..self.n() {
            let facs: Vec<Mat> = (0..self.n())
                .map(|j| {
                    if j == i {
                        return Ok(elem(1, 0));
                    }
                    Ok(diag2(
                        self.ratio("twisted 12", u - z[j], u - z[j] + eta)?,
                        self.ratio("twisted 12", z[j] - z[i] + eta, z[j] - z[i])?,
                    ))
                })
                .collect::<Result<_>>()?;
            let mut op = kron_all(&facs);
            for col in 0..self.dim() {
                let m = self.label(l, col);
                let m21 = m.m2 - m.m1;
                let sc = self.ratio("twisted 12", l21 - eta, m21 - eta * 2.0)? * self.s(eta) * self.s(u - z[i] + m21 - eta)
                    / (self.sd("twisted 12", u - z[i] + eta)? * self.sd("twisted 12", m21 - eta)?);
                for row in 0..self.dim() {
                    op[(row, col)] *= sc;
                }
            }
            out += op;
        }
        Ok(out)
    }

    /// Max over the three closed forms of |closed − F-conjugated| / max|F-conjugated|.
    pub fn twisted_closed_residuals(&self, l: Weight, u: C64) -> Result<[f64; 3]> {
        let t = self.twisted_monodromy(l, u)?;
        let r = |a: &Mat, b: &Mat| max_abs(&(a - b)) / max_abs(a).max(1e-300);
        Ok([
            r(t.get(1, 1), &self.twisted_22_closed(l, u)?),
            r(t.get(1, 0), &self.twisted_21_closed(l, u)?),
            r(t.get(0, 1), &self.twisted_12_closed(l, u)?),
        ])
    }

    /// The F-basis form of 𝒯⁻_F(m, λ|u)²₁: single-site raisings with a diagonal
    /// dressing σ(m₁₂)/σ(λ₁₂−η·n₁) on the input label m.
    pub fn creation_minus(&self, u: C64) -> Result<Mat> {
        let eta = self.eta();
        let lam = self.lambda();
        let (l1, l2, xi) = (lam.m1, lam.m2, self.p.xi);
        let z = &self.p.z;
        let n = self.n();
        let what = "creation_minus";
        let mut out = Mat::zeros(self.dim(), self.dim());
        for i in 0..n {
            let facs: Vec<Mat> = (0..n)
                .map(|j| {
                    if j == i {
                        return Ok(elem(0, 1));
                    }
                    let v = self.s(u - z[j]) * self.s(u + z[j] + eta) * self.s(z[i] - z[j] + eta)
                        / (self.sd(what, u - z[j] + eta)? * self.sd(what, u + z[j])? * self.sd(what, z[i] - z[j])?);
                    Ok(diag2(v, one()))
                })
                .collect::<Result<_>>()?;
            let ci = self.s(l1 + xi - z[i]) * self.s(l2 + xi + z[i]) * self.s(u * 2.0) * self.s(eta)
                / (self.sd(what, l1 + xi + u)? * self.sd(what, l2 + xi + u)? * self.sd(what, u - z[i] + eta)? * self.sd(what, u + z[i])?);
            out += kron_all(&facs) * ci;
        }
        for col in 0..self.dim() {
            let m = self.label(lam, col);
            let n1 = (n - count_twos(col)) as f64;
            let pre = self.s(m.m12()) / self.sd(what, lam.m12() - eta * n1)?;
            for row in 0..self.dim() {
                out[(row, col)] *= pre;
            }
        }
        Ok(out * self.fprod(u)?)
    }

    /// The F-basis form of 𝒯⁺_F(λ, m|u)¹₂ on states labelled λ: single-site
    /// lowerings dressed by σ(m₁₂)/σ(λ₁₂−η·n₂).
    pub fn creation_plus(&self, m: Weight, u: C64) -> Result<Mat> {
        let eta = self.eta();
        let lam = self.lambda();
        let (l1, l2, xb) = (lam.m1, lam.m2, self.p.xibar);
        let z = &self.p.z;
        let n = self.n();
        let what = "creation_plus";
        let mut out = Mat::zeros(self.dim(), self.dim());
        for i in 0..n {
            let facs: Vec<Mat> = (0..n)
                .map(|j| {
                    if j == i {
                        return Ok(elem(1, 0));
                    }
                    let a = self.s(u - z[j]) * self.s(u + z[j] + eta) / (self.sd(what, u - z[j] + eta)? * self.sd(what, u + z[j])?);
                    let b = self.ratio(what, z[j] - z[i] + eta, z[j] - z[i])?;
                    Ok(diag2(a, b))
                })
                .collect::<Result<_>>()?;
            let ci = self.s(l2 + xb - z[i]) * self.s(l1 + xb + z[i]) * self.s(u * 2.0 + eta * 2.0) * self.s(eta)
                / (self.sd(what, l1 + xb - u - eta)?
                    * self.sd(what, l2 + xb - u - eta)?
                    * self.sd(what, u + z[i])?
                    * self.sd(what, u - z[i] + eta)?);
            out += kron_all(&facs) * ci;
        }
        for col in 0..self.dim() {
            let n2 = count_twos(col) as f64;
            let pre = self.s(m.m12()) / self.sd(what, lam.m12() - eta * n2)?;
            for row in 0..self.dim() {
                out[(row, col)] *= pre;
            }
        }
        Ok(out * self.fprod(u)?)
    }

    /// |F(λ) 𝒯⁻_F F(λ)⁻¹ − creation_minus| / max.
    pub fn creation_minus_residual(&self, u: C64) -> Result<f64> {
        let lam = self.lambda();
        let f = self.f_matrix(lam)?;
        let x = &f * self.double_row_minus(u)? * inverse(&f, "F", 1e12)?;
        Ok(max_abs(&(&x - self.creation_minus(u)?)) / max_abs(&x).max(1e-300))
    }

    /// |F(m+2η2̂) 𝒯⁺_F(λ,m) F(m)⁻¹ − creation_plus| / max, on the columns whose
    /// label from m is λ.
    pub fn creation_plus_residual(&self, m: Weight, u: C64) -> Result<f64> {
        let lam = self.lambda();
        let eta = self.eta();
        let fl = self.f_matrix(m.shift(1, eta * 2.0))?;
        let fr = inverse(&self.f_matrix(m)?, "F", 1e12)?;
        let x = fl * self.double_row_plus(m, u)? * fr;
        let y = self.creation_plus(m, u)?;
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        let mut any = false;
        for col in 0..self.dim() {
            let lab = self.label(m, col);
            if (lab.m1 - lam.m1).norm() + (lab.m2 - lam.m2).norm() > 1e-12 {
                continue;
            }
            any = true;
            for row in 0..self.dim() {
                worst = worst.max((x[(row, col)] - y[(row, col)]).norm());
                scale = scale.max(x[(row, col)].norm());
            }
        }
        if !any {
            return Err(Error::InvalidParams("no basis state of weight lambda for this m".into()));
        }
        Ok(worst / scale.max(1e-300))
    }
}
