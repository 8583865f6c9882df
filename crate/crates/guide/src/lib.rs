//! mdbook cannot link external crates when testing, so the chapters are
//! pulled in here and their snippets run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/conventions.md")]
pub mod conventions {}
#[doc = include_str!("../../../book/src/elliptic.md")]
pub mod elliptic {}
#[doc = include_str!("../../../book/src/vertex_face.md")]
pub mod vertex_face {}
#[doc = include_str!("../../../book/src/fbasis.md")]
pub mod fbasis {}
#[doc = include_str!("../../../book/src/determinants.md")]
pub mod determinants {}
#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
