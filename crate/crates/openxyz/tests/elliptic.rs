use openxyz::elliptic::{theta, theta_direct, trig_limit_check, Elliptic};
use openxyz::linalg::c;
use openxyz::Error;
use proptest::prelude::*;

mod common;
use common::cplx;

fn ell() -> Elliptic {
    Elliptic::new(c(0.0, 1.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn riemann(u in cplx(0.5, 0.4), v in cplx(0.5, 0.4), x in cplx(0.5, 0.4), y in cplx(0.5, 0.4)) {
        prop_assert!(ell().riemann_identity_residual(u, v, x, y) < 1e-10);
    }

    #[test]
    fn quasi_periodic(u in cplx(0.5, 0.4)) {
        prop_assert!(ell().quasi_periodicity_residual(u) < 1e-10);
    }

    #[test]
    fn duplication(u in cplx(0.5, 0.4)) {
        prop_assert!(ell().duplication_residual(u) < 1e-10);
    }

    #[test]
    fn sigma_odd(u in cplx(0.5, 0.4)) {
        let e = ell();
        prop_assert!((e.sigma(-u) + e.sigma(u)).norm() < 1e-12);
    }

    #[test]
    fn series_matches_direct_sum(u in cplx(2.0, 1.5)) {
        let tau = c(0.1, 0.8);
        for (a, b) in [(0.5, 0.5), (0.0, 0.0), (0.5, 0.0), (0.0, 0.5)] {
            let s = theta(a, b, u, tau).unwrap();
            let d = theta_direct(a, b, u, tau, 80);
            prop_assert!((s - d).norm() <= 1e-10 * (1.0 + d.norm()));
        }
    }
}

#[test]
fn zero_and_derivative() {
    let e = ell();
    assert!(e.sigma(c(0.0, 0.0)).norm() < 1e-15);
    let h = 1e-5;
    let fd = (e.sigma(c(h, 0.0)) - e.sigma(c(-h, 0.0))) / (2.0 * h);
    assert!((fd - e.sigma_prime_zero()).norm() < 1e-8);
    // real negative at tau = i
    assert!(e.sigma_prime_zero().re < 0.0 && e.sigma_prime_zero().im.abs() < 1e-14);
}

#[test]
fn log_derivative_matches_difference() {
    let e = ell();
    let u = c(0.21, 0.13);
    let h = 1e-5;
    let fd = (e.sigma(u + h).ln() - e.sigma(u - h).ln()) / (2.0 * h);
    assert!((fd - e.log_deriv_sigma(u).unwrap()).norm() < 1e-8);
}

#[test]
fn imaginary_tau_floor() {
    assert!(matches!(Elliptic::new(c(0.0, 0.1)), Err(Error::NonConvergent(_))));
    assert!(theta(0.5, 0.5, c(0.1, 0.0), c(0.3, 0.19)).is_err());
}

#[test]
fn pole_guard() {
    let e = ell();
    let r = e.sigma_den("test", c(1.0, 1.0));
    assert!(matches!(r, Err(Error::NearPole { what: "test", .. })));
    assert!(e.sigma_den("test", c(0.3, 0.0)).is_ok());
}

#[test]
fn trig_limit() {
    for u in [c(0.1, 0.0), c(0.3, 0.2), c(-0.25, 0.1)] {
        assert!(trig_limit_check(u, c(0.0, 5.0)).unwrap() < 1e-5);
    }
    assert!(trig_limit_check(c(0.1, 0.0), c(0.0, 2.0)).is_err());
}
