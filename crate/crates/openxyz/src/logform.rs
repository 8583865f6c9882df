//! Products of σ's with arguments affine in the roots, for the logarithmic Bethe
//! equations. Their log-derivatives feed both the Gaudin matrices and the
//! Newton Jacobian.

use crate::error::{Error, Result};
use crate::monodromy::BetheSet;
use crate::params::Model;
use crate::C64;

/// σ(c + Σ coef·v_index)^power.
#[derive(Debug, Clone)]
pub struct Term {
    pub power: f64,
    pub lin: Vec<(usize, f64)>,
    pub c: C64,
}

impl Term {
    fn arg(&self, v: &[C64]) -> C64 {
        self.lin.iter().fold(self.c, |acc, &(k, a)| acc + v[k] * a)
    }
}

/// Running complex logarithm of a product, exponentiated once at the end.
#[derive(Debug, Clone, Copy)]
pub struct LogAcc {
    pub log: C64,
}

impl Default for LogAcc {
    fn default() -> Self {
        Self { log: C64::new(0.0, 0.0) }
    }
}

impl LogAcc {
    pub fn mul(&mut self, x: C64) {
        self.log += x.ln();
    }

    pub fn div(&mut self, what: &'static str, x: C64) -> Result<()> {
        if x.norm() <= crate::elliptic::POLE_EPS {
            return Err(Error::NearPole { what, arg: x, modulus: x.norm() });
        }
        self.log -= x.ln();
        Ok(())
    }

    pub fn value(&self) -> C64 {
        self.log.exp()
    }
}

/// The bracket B_j whose logarithmic derivative enters the Gaudin matrix;
/// B_j = 1 is the j-th Bethe equation (B_j is the reciprocal of
/// [`Model::bae_ratio`]).
pub fn bracket_terms(m: &Model, set: BetheSet, v_len: usize, j: usize) -> Vec<Term> {
    let (l1, l2, xi, xb, eta) = (m.p.lambda1, m.p.lambda2, m.p.xi, m.p.xibar, m.eta());
    let t = |power: f64, a: f64, c: C64| Term { power, lin: vec![(j, a)], c };
    let mut out = match set {
        BetheSet::I => vec![
            t(1.0, 1.0, l2 + xb + eta),
            t(1.0, -1.0, l2 + xi - eta),
            t(1.0, -1.0, l1 + xb - eta),
            t(1.0, 1.0, l1 + xi + eta),
            t(-1.0, -1.0, l2 + xb),
            t(-1.0, 1.0, l2 + xi),
            t(-1.0, 1.0, l1 + xb),
            t(-1.0, -1.0, l1 + xi),
        ],
        BetheSet::II => vec![
            t(1.0, -1.0, l2 + xb - eta),
            t(1.0, 1.0, l2 + xi + eta),
            t(1.0, 1.0, l1 + xb + eta),
            t(1.0, -1.0, l1 + xi - eta),
            t(-1.0, 1.0, l2 + xb),
            t(-1.0, -1.0, l2 + xi),
            t(-1.0, -1.0, l1 + xb),
            t(-1.0, 1.0, l1 + xi),
        ],
    };
    for &zl in &m.p.z {
        out.push(t(1.0, 1.0, zl));
        out.push(t(1.0, 1.0, -zl));
        out.push(t(-1.0, 1.0, zl + eta));
        out.push(t(-1.0, 1.0, -zl + eta));
    }
    for k in 0..v_len {
        if k == j {
            continue;
        }
        let p = |power: f64, a: f64, c: C64| Term { power, lin: vec![(j, 1.0), (k, a)], c };
        out.push(p(1.0, 1.0, eta * 2.0));
        out.push(p(1.0, -1.0, eta));
        out.push(p(-1.0, 1.0, C64::new(0.0, 0.0)));
        out.push(p(-1.0, -1.0, -eta));
    }
    out
}

/// Product value of the terms, with pole guards on negative powers.
pub fn eval(m: &Model, terms: &[Term], v: &[C64]) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for t in terms {
        let s = m.s(t.arg(v));
        if t.power < 0.0 {
            if s.norm() <= crate::elliptic::POLE_EPS {
                return Err(Error::NearPole { what: "log bracket", arg: t.arg(v), modulus: s.norm() });
            }
            acc /= s;
        } else {
            acc *= s;
        }
    }
    Ok(acc)
}

/// ∂/∂v_k of the logarithm of the product.
pub fn log_derivative(m: &Model, terms: &[Term], v: &[C64], k: usize) -> Result<C64> {
    let mut d = C64::new(0.0, 0.0);
    for t in terms {
        for &(idx, a) in &t.lin {
            if idx == k {
                d += m.ell.log_deriv_sigma(t.arg(v))? * (a * t.power);
            }
        }
    }
    Ok(d)
}
