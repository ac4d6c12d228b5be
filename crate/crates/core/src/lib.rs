//! Two-body point interactions in one dimension and the map between the
//! fermionic `ε` interaction and the bosonic `δ` interaction.
//!
//! * [`point_interaction`]: parameterization, connection matrices, sector
//!   conditions and three-spike realizations.
//! * [`spectral`]: trapped and ring spectra for point and finite-range
//!   interactions.
//! * [`duality`]: the fermion/boson wave-function map and its checks.
//! * [`bethe`]: Bethe-ansatz ground states of bosons on a ring.

pub mod bethe;
pub mod duality;
pub mod error;
pub mod point_interaction;
pub mod spectral;

pub use error::{Error, Result};
