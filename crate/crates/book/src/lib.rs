//! Guide chapters compiled as doctests, one module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/point-interactions.md")]
pub mod point_interactions {}
#[doc = include_str!("../../../book/src/spectra.md")]
pub mod spectra {}
#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality {}
#[doc = include_str!("../../../book/src/finite-range.md")]
pub mod finite_range {}
#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
