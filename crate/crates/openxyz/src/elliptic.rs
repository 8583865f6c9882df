//! Theta functions with rational characteristics and the σ family built on them.
//!
//! Everything is evaluated by direct summation of the theta series after the
//! argument has been pulled back into the strip |Im u| ≤ Im τ / 2.

use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

/// Denominators with modulus at or below this raise [`Error::NearPole`].
pub const POLE_EPS: f64 = 1e-10;

const TRUNC_START: i64 = 12;
const TRUNC_CAP: i64 = 96;
const IM_TAU_FLOOR: f64 = 0.2;

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

/// Raw series together with its u-derivative, for u already reduced.
fn series(a: f64, b: f64, u: C64, tau: C64) -> (C64, C64) {
    let ipi = i() * PI;
    let term = |n: i64| {
        let na = n as f64 + a;
        let t = (ipi * (tau * na * na + (u + b) * (2.0 * na))).exp();
        (t, t * (2.0 * na) * ipi)
    };
    let (mut s, mut ds) = term(0);
    let mut biggest = s.norm();
    let mut n = 1;
    let mut limit = TRUNC_START;
    loop {
        while n <= limit {
            let (p, dp) = term(n);
            let (q, dq) = term(-n);
            s += p + q;
            ds += dp + dq;
            biggest = biggest.max(p.norm()).max(q.norm());
            n += 1;
        }
        let (p, _) = term(limit);
        let (q, _) = term(-limit);
        let tail = p.norm() + q.norm();
        if tail < 1e-16 * s.norm().max(biggest) || limit >= TRUNC_CAP {
            return (s, ds);
        }
        limit = (2 * limit).min(TRUNC_CAP);
    }
}

/// θ[a;b](u, τ) and its derivative in u.
///
/// The argument is shifted by an integer multiple kτ so the summed series sees
/// |Im u| ≤ Im τ/2; the exact factor exp(−iπk²τ − 2iπk(u₀+b)) is multiplied back.
pub fn theta_and_derivative(a: f64, b: f64, u: C64, tau: C64) -> Result<(C64, C64)> {
    if tau.im < IM_TAU_FLOOR {
        return Err(Error::NonConvergent(tau.im));
    }
    let k = (u.im / tau.im).round();
    let u0 = u - tau * k;
    let (s, ds) = series(a, b, u0, tau);
    if k == 0.0 {
        return Ok((s, ds));
    }
    let ipi = i() * PI;
    let log_pref = -ipi * tau * (k * k) - ipi * 2.0 * k * (u0 + b);
    let pref = log_pref.exp();
    let dlog = -ipi * 2.0 * k;
    Ok((pref * s, pref * (ds + dlog * s)))
}

pub fn theta(a: f64, b: f64, u: C64, tau: C64) -> Result<C64> {
    theta_and_derivative(a, b, u, tau).map(|p| p.0)
}

/// Fixed-truncation sum over |n| ≤ nmax with no argument reduction. Used as an
/// independent reference for the adaptive evaluator.
pub fn theta_direct(a: f64, b: f64, u: C64, tau: C64, nmax: i64) -> C64 {
    let ipi = i() * PI;
    (-nmax..=nmax)
        .map(|n| {
            let na = n as f64 + a;
            (ipi * (tau * na * na + (u + b) * (2.0 * na))).exp()
        })
        .sum()
}

/// The σ family at a fixed modular parameter τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Elliptic {
    pub tau: C64,
}

impl Elliptic {
    pub fn new(tau: C64) -> Result<Self> {
        if tau.im < IM_TAU_FLOOR {
            return Err(Error::NonConvergent(tau.im));
        }
        Ok(Self { tau })
    }

    /// σ(u) = θ[1/2; 1/2](u, τ).
    pub fn sigma(&self, u: C64) -> C64 {
        theta(0.5, 0.5, u, self.tau).expect("tau validated in constructor")
    }

    /// σ_α(u) = θ[1/2 + α₁/2; 1/2 + α₂/2](u, τ).
    pub fn sigma_alpha(&self, alpha: (u8, u8), u: C64) -> C64 {
        let a = 0.5 + 0.5 * (alpha.0 % 2) as f64;
        let b = 0.5 + 0.5 * (alpha.1 % 2) as f64;
        theta(a, b, u, self.tau).expect("tau validated in constructor")
    }

    /// θ^(j)(u) = θ[1/2 − j/2; 1/2](u, 2τ). j = 0 is also accepted and coincides
    /// with θ^(2) (the R-matrix weights use that name).
    pub fn theta_j(&self, j: u8, u: C64) -> C64 {
        let a = 0.5 - 0.5 * (j % 2) as f64;
        theta(a, 0.5, u, self.tau * 2.0).expect("tau validated in constructor")
    }

    /// σ(u), failing with [`Error::NearPole`] if it is about to be divided by.
    pub fn sigma_den(&self, what: &'static str, u: C64) -> Result<C64> {
        let s = self.sigma(u);
        if s.norm() <= POLE_EPS {
            return Err(Error::NearPole {
                what,
                arg: u,
                modulus: s.norm(),
            });
        }
        Ok(s)
    }

    /// σ(num)/σ(den) with the pole guard on the denominator.
    pub fn ratio(&self, what: &'static str, num: C64, den: C64) -> Result<C64> {
        Ok(self.sigma(num) / self.sigma_den(what, den)?)
    }

    /// σ'(u)/σ(u) from the term-wise differentiated series.
    pub fn log_deriv_sigma(&self, u: C64) -> Result<C64> {
        let (s, ds) = theta_and_derivative(0.5, 0.5, u, self.tau)?;
        if s.norm() <= POLE_EPS {
            return Err(Error::NearPole {
                what: "log_deriv_sigma",
                arg: u,
                modulus: s.norm(),
            });
        }
        Ok(ds / s)
    }

    /// σ'(0). Negative real for purely imaginary τ with this characteristic.
    pub fn sigma_prime_zero(&self) -> C64 {
        theta_and_derivative(0.5, 0.5, C64::new(0.0, 0.0), self.tau)
            .expect("tau validated in constructor")
            .1
    }

    /// |LHS − RHS| of the four-term Riemann identity
    /// σ(u+x)σ(u−x)σ(v+y)σ(v−y) − σ(u+y)σ(u−y)σ(v+x)σ(v−x) = σ(u+v)σ(u−v)σ(x+y)σ(x−y).
    pub fn riemann_identity_residual(&self, u: C64, v: C64, x: C64, y: C64) -> f64 {
        let s = |w| self.sigma(w);
        let lhs = s(u + x) * s(u - x) * s(v + y) * s(v - y) - s(u + y) * s(u - y) * s(v + x) * s(v - x);
        let rhs = s(u + v) * s(u - v) * s(x + y) * s(x - y);
        (lhs - rhs).norm()
    }

    /// Residual of σ(2u) = 2σ(u)σ_(0,1)(u)σ_(1,0)(u)σ_(1,1)(u) / (σ_(0,1)(0)σ_(1,0)(0)σ_(1,1)(0)).
    pub fn duplication_residual(&self, u: C64) -> f64 {
        let z = C64::new(0.0, 0.0);
        let sa = |a, w| self.sigma_alpha(a, w);
        let rhs = self.sigma(u) * sa((0, 1), u) * sa((1, 0), u) * sa((1, 1), u) * 2.0
            / (sa((0, 1), z) * sa((1, 0), z) * sa((1, 1), z));
        (self.sigma(u * 2.0) - rhs).norm()
    }

    /// Max of the two quasi-periodicity residuals σ(u+1) = −σ(u) and
    /// σ(u+τ) = exp(−2iπ(u + 1/2 + τ/2)) σ(u).
    pub fn quasi_periodicity_residual(&self, u: C64) -> f64 {
        let s = self.sigma(u);
        let r1 = (self.sigma(u + 1.0) + s).norm();
        let f = (-i() * 2.0 * PI * (u + 0.5 + self.tau * 0.5)).exp();
        let r2 = (self.sigma(u + self.tau) - f * s).norm();
        r1.max(r2)
    }
}

/// Relative deviation of σ(u) from its τ → +i∞ leading term −2e^{iπτ/4} sin(πu).
/// Both sides vanish at u = 0 and the deviation is reported as 0 there.
pub fn trig_limit_check(u: C64, tau: C64) -> Result<f64> {
    if tau.im < 4.0 {
        return Err(Error::InvalidParams(format!(
            "trig limit check needs Im(tau) >= 4, got {}",
            tau.im
        )));
    }
    let exact = theta(0.5, 0.5, u, tau)?;
    if u.norm() == 0.0 {
        return Ok(0.0);
    }
    let approx = -(i() * PI * tau / 4.0).exp() * 2.0 * (u * PI).sin();
    Ok((exact / approx - 1.0).norm())
}
