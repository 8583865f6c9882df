use openxyz::determinants::{DetKind, ON_SHELL_TOL};
use openxyz::linalg::{c, rel_err};
use openxyz::solver::SolverConfig;
use openxyz::{BetheSet, Error, Model, Pairing, C64};
use proptest::prelude::*;

mod common;
use common::cplx;

const U: [C64; 2] = [C64::new(0.21, 0.03), C64::new(-0.13, 0.07)];
const V: [C64; 2] = [C64::new(0.05, 0.11), C64::new(0.33, -0.04)];

fn partition_pairing(set: BetheSet) -> Pairing {
    match set {
        BetheSet::I => Pairing::OneTwo,
        BetheSet::II => Pairing::TwoOne,
    }
}

#[test]
fn partition_functions_match_oracle() {
    for (n, tol) in [(2, 1e-9), (4, 1e-8)] {
        let m = Model::seeded(n);
        let h = n / 2;
        let ub: Vec<C64> = U[..h].iter().chain(&V[..h]).copied().collect();
        for set in [BetheSet::I, BetheSet::II] {
            let d = m.partition_function(set, &ub).unwrap();
            let o = m.scalar_product_oracle(partition_pairing(set), &U[..h], &V[..h]).unwrap();
            assert!(rel_err(d.value, o) < tol, "N={n} {set}: {} vs {o}", d.value);
            assert!(d.cond.is_finite() && !d.off_shell);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn partition_function_symmetric(a in cplx(0.4, 0.3), b in cplx(0.4, 0.3)) {
        prop_assume!((a - b).norm() > 1e-2);
        let m = Model::seeded(2);
        for set in [BetheSet::I, BetheSet::II] {
            let x = m.partition_function(set, &[a, b]).unwrap().value;
            let y = m.partition_function(set, &[b, a]).unwrap().value;
            prop_assert!(rel_err(x, y) < 1e-9);
            let o = m.scalar_product_oracle(partition_pairing(set), &[a], &[b]).unwrap();
            prop_assert!(rel_err(x, o) < 1e-9);
        }
    }
}

#[test]
fn partition_matrix_kind_and_size() {
    let m = Model::seeded(4);
    let ub: Vec<C64> = U.iter().chain(&V).copied().collect();
    let dm = m.partition_matrix(BetheSet::I, &ub).unwrap();
    assert_eq!(dm.size(), 4);
    assert_eq!(m.partition_matrix(BetheSet::II, &ub).unwrap().kind, DetKind::NII);
    assert!(m.partition_function(BetheSet::I, &ub[..3]).is_err());
}

#[test]
fn colliding_arguments_rejected() {
    let m = Model::seeded(2);
    let r = m.partition_function(BetheSet::I, &[U[0], U[0]]);
    assert!(matches!(r, Err(Error::CollidingArguments(_))));
}

#[test]
fn scalar_products_and_norms_on_shell() {
    let cases = [(2usize, 1e-8), (4, 1e-6)];
    for (n, tol) in cases {
        let m = Model::seeded(n);
        let h = n / 2;
        for set in [BetheSet::I, BetheSet::II] {
            let roots = m.solve(set, h, &SolverConfig::default()).unwrap();
            assert!(!roots.is_empty());
            let r = &roots[0];
            let d = m.scalar_product_det(set, &U[..h], &r.v, false).unwrap();
            let o = m.scalar_product_oracle(Pairing::diagonal(set), &U[..h], &r.v).unwrap();
            assert!(rel_err(d.value, o) < tol, "N={n} {set}");
            let nd = m.norm_det(set, &r.v, false).unwrap();
            let no = m.scalar_product_oracle(Pairing::diagonal(set), &r.v, &r.v).unwrap();
            assert!(rel_err(nd.value, no) < tol, "N={n} {set} norm");
        }
    }
}

#[test]
fn off_shell_gate() {
    let m = Model::seeded(2);
    let v = [c(0.05, 0.11)];
    assert!(m.bae_residual(BetheSet::I, &v).unwrap()[0] > ON_SHELL_TOL);
    assert!(matches!(m.scalar_product_det(BetheSet::I, &U[..1], &v, false), Err(Error::OffShellRoots(_))));
    assert!(matches!(m.norm_det(BetheSet::I, &v, false), Err(Error::OffShellRoots(_))));
    let forced = m.scalar_product_det(BetheSet::I, &U[..1], &v, true).unwrap();
    assert!(forced.off_shell);
}

#[test]
fn gaudin_entries_match_finite_differences() {
    let m = Model::seeded(4);
    let roots = m.solve(BetheSet::I, 2, &SolverConfig::default()).unwrap();
    let v = &roots[0].v;
    for j in 0..2 {
        for a in 0..2 {
            let an = m.log_bracket_derivative(BetheSet::I, v, j, a).unwrap();
            let fd = openxyz::suites::log_bracket_fd(&m, BetheSet::I, v, j, a, 1e-6).unwrap();
            assert!(rel_err(an, fd) < 1e-6);
        }
    }
    let g = m.gaudin_matrix(BetheSet::I, v).unwrap();
    assert_eq!(g.size(), 2);
}

#[test]
fn scalar_product_tends_to_norm() {
    let m = Model::seeded(2);
    let roots = m.solve(BetheSet::II, 1, &SolverConfig::default()).unwrap();
    let v = &roots[0].v;
    let nd = m.norm_det(BetheSet::II, v, false).unwrap().value;
    let ex = openxyz::suites::richardson_norm(&m, BetheSet::II, v, 1e-4).unwrap();
    assert!(rel_err(ex, nd) < 1e-5);
}
