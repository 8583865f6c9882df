use openxyz::linalg::{c, max_abs, Mat};
use openxyz::vertex::{embed_two, perm4};
use openxyz::Model;
use proptest::prelude::*;

mod common;
use common::spectral;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn yang_baxter(u1 in spectral(), u2 in spectral(), u3 in spectral()) {
        prop_assert!(Model::seeded(2).qybe_residual(u1, u2, u3).unwrap() < 1e-10);
    }

    #[test]
    fn reflection(u1 in spectral(), u2 in spectral()) {
        let m = Model::seeded(2);
        prop_assert!(m.re_residual(u1, u2).unwrap() < 1e-10);
        prop_assert!(m.dre_residual(u1, u2).unwrap() < 1e-10);
    }

    #[test]
    fn unitarity(u in spectral()) {
        prop_assert!(Model::seeded(2).vertex_unitarity_residual(u).unwrap() < 1e-10);
    }
}

#[test]
fn r_at_zero_is_permutation() {
    let m = Model::seeded(2);
    let r = m.rbar(c(0.0, 0.0)).unwrap();
    assert!(max_abs(&(&r - perm4())) < 1e-14);
}

#[test]
fn r_symmetric_under_swap() {
    let m = Model::seeded(2);
    let p = perm4();
    let r = m.rbar(c(0.17, 0.06)).unwrap();
    assert!(max_abs(&(&p * &r * &p - &r)) < 1e-14);
}

#[test]
fn embedding_matches_kron_on_adjacent_sites() {
    let m = Model::seeded(2);
    let r = m.rbar(c(0.17, 0.06)).unwrap();
    assert!(max_abs(&(embed_two(&r, 0, 1, 2) - &r)) < 1e-15);
    let swapped = embed_two(&r, 1, 0, 2);
    let p = perm4();
    assert!(max_abs(&(swapped - &p * &r * &p)) < 1e-15);
}

#[test]
fn block_view_agrees_with_full_monodromy() {
    let m = Model::seeded(2);
    let u = c(0.27, 0.05);
    let full = m.double_row_full(u).unwrap();
    let b = m.double_row_monodromy(u).unwrap();
    let d = m.dim();
    for i in 0..2 {
        for j in 0..2 {
            let sub: Mat = full.view((i * d, j * d), (d, d)).into();
            assert!(max_abs(&(sub - b.get(i, j))) < 1e-14);
        }
    }
}

#[test]
fn transfer_matrices_commute() {
    for n in [2, 3] {
        let m = Model::seeded(n);
        assert!(m.transfer_commutator(c(0.13, 0.02), c(-0.21, 0.07)).unwrap() < 1e-9);
    }
}

#[test]
fn k_matrices_unitary_up_to_scale() {
    let m = Model::seeded(1);
    let u = c(0.19, 0.04);
    let k = m.kminus(u).unwrap() * m.kminus(-u).unwrap();
    let id = Mat::identity(2, 2) * k[(0, 0)];
    assert!(max_abs(&(&k - id)) < 1e-12 * k[(0, 0)].norm());
}
