//! Open XYZ chain with non-diagonal boundaries: eight-vertex and SOS pictures,
//! the F-basis, and determinant formulas for scalar products and norms.
//!
//! ```
//! use openxyz::params::Model;
//! use openxyz::linalg::c;
//!
//! let m = Model::seeded(2);
//! let tau = m.transfer_matrix(c(0.13, 0.02)).unwrap();
//! assert_eq!(tau.nrows(), 4);
//! ```

pub type C64 = num_complex::Complex64;

pub mod cli;
pub mod config;
pub mod determinants;
pub mod elliptic;
pub mod error;
pub mod face;
pub mod fbasis;
pub mod linalg;
pub mod logform;
pub mod monodromy;
pub mod params;
pub mod report;
pub mod solver;
pub mod suites;
pub mod vertex;

pub use error::{Error, Result};
pub use monodromy::{BetheSet, Pairing};
pub use params::{Model, ModelParams, Weight};
