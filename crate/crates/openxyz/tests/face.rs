use openxyz::face::conserves_weight;
use openxyz::linalg::{c, max_abs, rel_err};
use openxyz::{Error, Model, Weight};
use proptest::prelude::*;

mod common;
use common::{spectral, weight};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dynamical_yang_baxter(u1 in spectral(), u2 in spectral(), u3 in spectral(), m in weight()) {
        prop_assert!(Model::seeded(2).mybe_residual(u1, u2, u3, m).unwrap() < 1e-10);
    }

    #[test]
    fn face_unitarity_and_crossing(u in spectral(), m in weight()) {
        let md = Model::seeded(2);
        prop_assert!(md.face_unitarity_residual(u, m).unwrap() < 1e-10);
        prop_assert!(md.crossing_residual(u, m).unwrap() < 1e-10);
    }

    #[test]
    fn weight_is_conserved(u in spectral(), m in weight()) {
        prop_assert!(conserves_weight(&Model::seeded(2).face_r(u, m).unwrap()));
    }

    #[test]
    fn face_vertex_relations(u1 in spectral(), u2 in spectral(), m in weight()) {
        let md = Model::seeded(2);
        for rel in 0..5 {
            prop_assert!(md.face_vertex_residual(rel, u1, u2, m).unwrap() < 1e-9, "relation {}", rel);
        }
    }

    #[test]
    fn intertwiner_determinant_is_constant(u in spectral(), m in weight()) {
        let md = Model::seeded(2);
        let base = md.intertwiner_det_ratio(Weight::new(c(0.2, 0.1), c(-0.3, 0.05)), c(0.1, 0.0)).unwrap();
        prop_assert!(rel_err(md.intertwiner_det_ratio(m, u).unwrap(), base) < 1e-9);
    }
}

#[test]
fn intertwiner_duals_are_biorthogonal() {
    let md = Model::seeded(2);
    let m = common::l0();
    let u = c(0.27, 0.05);
    let eta = md.eta();
    for mu in 0..2 {
        let pb = md.phibar(m, mu, u).unwrap();
        let pt = md.phitilde(m, mu, u).unwrap();
        for nu in 0..2 {
            let d = if mu == nu { 1.0 } else { 0.0 };
            let a = md.phi(m, nu, u);
            let b = md.phi(m.shift(nu, eta), nu, u);
            assert!((pb[0] * a[0] + pb[1] * a[1] - d).norm() < 1e-12);
            assert!((pt[0] * b[0] + pt[1] * b[1] - d).norm() < 1e-12);
        }
    }
}

#[test]
fn k_matrices_from_intertwiners() {
    let md = Model::seeded(2);
    for u in [c(0.27, 0.05), c(-0.12, 0.2), c(0.4, -0.1)] {
        assert!(md.vertex_face_k_residual(false, u).unwrap() < 1e-9);
        assert!(md.vertex_face_k_residual(true, u).unwrap() < 1e-9);
    }
    let km = md.kminus_from_face(c(0.27, 0.05)).unwrap();
    let kv = md.kminus(c(0.27, 0.05)).unwrap();
    assert!(max_abs(&(km - kv)) < 1e-9);
}

#[test]
fn singular_intertwiner_reported() {
    let md = Model::seeded(2);
    // m1 = m2 makes the intertwiner matrix singular
    let m = Weight::new(c(0.2, 0.1), c(0.2, 0.1));
    assert!(matches!(md.phibar(m, 0, c(0.1, 0.0)), Err(Error::SingularIntertwiner { .. })));
}
