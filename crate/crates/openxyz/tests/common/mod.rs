#![allow(dead_code)]

use openxyz::linalg::c;
use openxyz::{Weight, C64};
use proptest::prelude::*;

pub fn cplx(re: f64, im: f64) -> impl Strategy<Value = C64> {
    (-re..re, -im..im).prop_map(|(a, b)| c(a, b))
}

/// Spectral parameters in a box that stays clear of the lattice for the
/// seeded model.
pub fn spectral() -> impl Strategy<Value = C64> {
    cplx(0.45, 0.35)
}

pub fn weight() -> impl Strategy<Value = Weight> {
    (cplx(0.6, 0.3), cplx(0.6, 0.3)).prop_map(|(a, b)| Weight::new(a, b))
}

pub const L0: (f64, f64, f64, f64) = (0.23, 0.05, -0.31, 0.12);

pub fn l0() -> Weight {
    Weight::new(c(L0.0, L0.1), c(L0.2, L0.3))
}
