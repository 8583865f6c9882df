//! Thin helpers over nalgebra's dense complex matrices.

use crate::error::{Error, Result};
use crate::C64;
use nalgebra::DMatrix;

pub type Mat = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn one() -> C64 {
    C64::new(1.0, 0.0)
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// max|a − b| / max(max|a|, max|b|, tiny).
pub fn rel_diff(a: &Mat, b: &Mat) -> f64 {
    let scale = max_abs(a).max(max_abs(b)).max(1e-300);
    max_abs(&(a - b)) / scale
}

pub fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn kron_all(ms: &[Mat]) -> Mat {
    ms.iter()
        .fold(Mat::from_element(1, 1, one()), |acc, m| kron(&acc, m))
}

/// Infinity-norm condition number estimate ‖A‖∞‖A⁻¹‖∞.
fn cond_inf(a: &Mat, inv: &Mat) -> f64 {
    let row_norm = |m: &Mat| {
        (0..m.nrows())
            .map(|r| m.row(r).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    row_norm(a) * row_norm(inv)
}

/// Inverse through LU with partial pivoting, refusing matrices with
/// condition number above `max_cond`.
pub fn inverse(a: &Mat, what: &'static str, max_cond: f64) -> Result<Mat> {
    let inv = a
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::SingularInverse {
            what,
            cond: f64::INFINITY,
        })?;
    let cond = cond_inf(a, &inv);
    if !cond.is_finite() || cond > max_cond {
        return Err(Error::SingularInverse { what, cond });
    }
    Ok(inv)
}

/// Determinant with its condition number. The condition number is infinite
/// for a singular input.
pub fn det_with_cond(a: &Mat) -> (C64, f64) {
    let lu = a.clone().lu();
    let det = lu.determinant();
    let cond = match lu.try_inverse() {
        Some(inv) => cond_inf(a, &inv),
        None => f64::INFINITY,
    };
    (det, cond)
}

/// Eigenvalues of a general complex matrix from the diagonal of its Schur form.
pub fn eigenvalues(a: &Mat) -> Vec<C64> {
    let (_, t) = a.clone().schur().unpack();
    t.diagonal().iter().copied().collect()
}

/// A 2ᴺ×2ᴺ operator given by how it maps each basis column: `f(col)` lists
/// (row, value) pairs.
pub fn sparse_columns<F>(dim: usize, mut f: F) -> Mat
where
    F: FnMut(usize, &mut Vec<(usize, C64)>),
{
    let mut m = Mat::zeros(dim, dim);
    let mut buf = Vec::with_capacity(4);
    for col in 0..dim {
        buf.clear();
        f(col, &mut buf);
        for &(row, v) in &buf {
            m[(row, col)] += v;
        }
    }
    m
}

/// Computes `op * t` when `op` is given column-wise as in [`sparse_columns`].
pub fn apply_sparse_left<F>(t: &Mat, mut f: F) -> Mat
where
    F: FnMut(usize, &mut Vec<(usize, C64)>),
{
    let dim = t.nrows();
    let mut out = Mat::zeros(dim, t.ncols());
    let mut buf = Vec::with_capacity(4);
    for mid in 0..dim {
        buf.clear();
        f(mid, &mut buf);
        for &(row, v) in &buf {
            for colx in 0..t.ncols() {
                let x = t[(mid, colx)];
                if x != zero() {
                    out[(row, colx)] += v * x;
                }
            }
        }
    }
    out
}
