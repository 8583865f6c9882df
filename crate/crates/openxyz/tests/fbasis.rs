use openxyz::fbasis::{decompose, inversions, permutations};
use openxyz::linalg::{c, max_abs, Mat};
use openxyz::Model;
use proptest::prelude::*;

mod common;
use common::l0;

fn apply_word(word: &[usize], n: usize) -> Vec<usize> {
    // s = s_{b1} ... s_{bp} acting on positions
    let mut img: Vec<usize> = (0..n).collect();
    for &b in word.iter().rev() {
        for x in img.iter_mut() {
            if *x == b {
                *x = b + 1;
            } else if *x == b + 1 {
                *x = b;
            }
        }
    }
    img
}

proptest! {
    #[test]
    fn decomposition_is_minimal_and_correct(s in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let w = decompose(&s);
        prop_assert_eq!(w.len(), inversions(&s));
        prop_assert_eq!(apply_word(&w, s.len()), s);
    }
}

#[test]
fn permutations_lexicographic() {
    let p = permutations(3);
    assert_eq!(p.len(), 6);
    assert_eq!(p[0], vec![0, 1, 2]);
    assert_eq!(p[5], vec![2, 1, 0]);
    assert!(p.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn f_matrix_lower_triangular_nondegenerate() {
    for n in 1..=4 {
        let m = Model::seeded(n);
        let f = m.f_matrix(l0()).unwrap();
        for r in 0..f.nrows() {
            for col in r + 1..f.ncols() {
                assert_eq!(f[(r, col)].norm(), 0.0);
            }
            assert!(f[(r, r)].norm() > 1e-10);
        }
    }
}

#[test]
fn factorizing_at_three_sites() {
    assert!(Model::seeded(3).factorizing_residual(l0()).unwrap() < 1e-9);
}

#[test]
fn r_s_independent_of_word() {
    let m = Model::seeded(3);
    let order = [0, 1, 2];
    let a = m.r_word(&[0, 1, 0], &order, l0()).unwrap();
    let b = m.r_word(&[1, 0, 1], &order, l0()).unwrap();
    assert!(max_abs(&(&a - &b)) < 1e-12 * max_abs(&a));
    let id = m.r_s(&[0, 1, 2], l0()).unwrap();
    assert!(max_abs(&(id - Mat::identity(8, 8))) < 1e-15);
}

#[test]
fn twisted_operators_closed_forms() {
    for n in [1, 2, 3] {
        let m = Model::seeded(n);
        for u in [c(0.27, 0.05), c(-0.14, 0.11)] {
            let r = m.twisted_closed_residuals(l0(), u).unwrap();
            assert!(r.iter().all(|&x| x < 1e-10), "N={n} {r:?}");
        }
    }
}

#[test]
fn twisted_22_is_diagonal() {
    let m = Model::seeded(3);
    let d = m.twisted_22_closed(l0(), c(0.27, 0.05)).unwrap();
    let off = d.clone() - Mat::from_diagonal(&d.diagonal());
    assert_eq!(max_abs(&off), 0.0);
}

#[test]
fn creation_operators_in_f_basis() {
    for n in [2, 4] {
        let m = Model::seeded(n);
        let u = c(0.27, 0.05);
        assert!(m.creation_minus_residual(u).unwrap() < 1e-9, "N={n}");
        let w = m.lambda().shift(0, m.eta() * 2.0);
        assert!(m.creation_plus_residual(w, u).unwrap() < 1e-9, "N={n}");
    }
}
