use openxyz::linalg::{c, max_abs, rel_err};
use openxyz::{BetheSet, Model, Pairing, C64};

const U: [C64; 2] = [C64::new(0.21, 0.03), C64::new(-0.13, 0.07)];
const V: [C64; 2] = [C64::new(0.05, 0.11), C64::new(0.33, -0.04)];

#[test]
fn double_row_bridges() {
    for n in [2, 3] {
        let m = Model::seeded(n);
        for u in [c(0.27, 0.05), c(-0.11, 0.08)] {
            assert!(m.bridge_minus_residual(u).unwrap() < 1e-9, "N={n}");
            assert!(m.bridge_plus_residual(u).unwrap() < 1e-9, "N={n}");
        }
    }
}

#[test]
fn vertex_and_face_scalar_products_agree() {
    for n in [2, 4] {
        let m = Model::seeded(n);
        let h = n / 2;
        for k in [Pairing::OneOne, Pairing::TwoTwo, Pairing::OneTwo, Pairing::TwoOne] {
            let a = m.vertex_scalar_product(k, &U[..h], &V[..h]).unwrap();
            let b = m.scalar_product_oracle(k, &U[..h], &V[..h]).unwrap();
            assert!(rel_err(a, b) < 1e-10, "N={n} {}", k.name());
        }
    }
}

#[test]
fn face_sandwich_requires_half_filling() {
    let m = Model::seeded(4);
    assert!(m.scalar_product_oracle(Pairing::OneOne, &U[..1], &V[..1]).is_err());
    assert!(m.scalar_product_oracle(Pairing::OneOne, &[], &[]).is_err());
}

#[test]
fn bethe_states_symmetric_in_roots() {
    let m = Model::seeded(4);
    for set in [BetheSet::I, BetheSet::II] {
        let a = m.bethe_state(set, &V).unwrap();
        let b = m.bethe_state(set, &[V[1], V[0]]).unwrap();
        assert!(max_abs(&(&a - &b)) < 1e-10 * max_abs(&a), "{set}");
    }
}

#[test]
fn pairing_names_round_trip() {
    for k in [Pairing::OneOne, Pairing::TwoTwo, Pairing::OneTwo, Pairing::TwoOne] {
        assert_eq!(k.name().parse::<Pairing>().unwrap(), k);
    }
    assert!("I-III".parse::<Pairing>().is_err());
    assert_eq!("2".parse::<BetheSet>().unwrap(), BetheSet::II);
}

#[test]
fn eigenvalue_matches_dense_spectrum_off_shell_fails() {
    let m = Model::seeded(2);
    let u = c(0.13, 0.02);
    // an arbitrary (off-shell) v is not an eigenvector
    let v = [c(0.05, 0.11)];
    let st = m.bethe_state(BetheSet::I, &v).unwrap();
    assert!(m.eigen_residual(BetheSet::I, u, &v, &st).unwrap() > 1e-4);
}
