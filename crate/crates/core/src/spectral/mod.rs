//! Eigenpairs of the relative-coordinate problem
//!
//! ```text
//! −φ''(x) + (ω²/4) x² φ(x) + (interaction at 0) φ(x) = E φ(x)
//! ```
//!
//! on a truncated line (Dirichlet walls at `±W`) or a ring of length `L`.
//! The interaction is either a point interaction, handled exactly through
//! its connection matrix ([`solve_interface`], [`solve_numerov`]), or a
//! symmetric finite-range potential ([`solve_finite_range`]).

mod finite_range;
mod grid;
mod interface;
mod numerov;
mod operator;
mod spectrum;
pub mod tridiag;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_interaction::{CouplingSpec, Parity};

pub use finite_range::{
    check_convergence_floor, convergence_study, solve_finite_range, ConvergenceRow,
    ConvergenceTable, FiniteRangePotential,
};
pub use grid::{Grid, Wavefunction};
pub use interface::{solve_interface, solve_interface_raw, two_body_ring_energy, Statistics};
pub use numerov::{solve_numerov, NumerovOptions};
pub use spectrum::{write_wavefunction_csv, InteractionDescriptor, Level, SolverTag, Spectrum};

/// Spacing targeted by [`default_points_per_side`].
pub const DEFAULT_SPACING: f64 = 0.0025;

/// Fewer interior points per side than this is rejected by the solvers.
pub const MIN_POINTS_PER_SIDE: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    /// `[−half_width, half_width]` with hard walls.
    Line { half_width: f64 },
    /// Relative coordinate on a ring: `φ(x + L) = e^{iθ} φ(x)`.
    ///
    /// Wave functions here are real, so only `θ = 0` (periodic) and `θ = π`
    /// (antiperiodic) are solvable.
    Ring { length: f64, twist: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapSpec {
    pub omega: f64,
    pub geometry: Geometry,
}

impl TrapSpec {
    pub fn line(omega: f64, half_width: f64) -> Result<Self> {
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::InvalidInput(format!("omega must be >= 0, got {omega}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidInput(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        Ok(Self {
            omega,
            geometry: Geometry::Line { half_width },
        })
    }

    /// Line truncated at `max(6/√ω, 10·ℓ, 10)` where `ℓ` is the zero-range
    /// binding length of an attractive coupling (`|c|` for ε, `1/|v|` for δ).
    pub fn truncated_line(omega: f64, coupling: &CouplingSpec) -> Result<Self> {
        Self::line(omega, default_half_width(omega, coupling))
    }

    pub fn ring(length: f64, twist: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidInput(format!("ring length must be positive, got {length}")));
        }
        if !twist.is_finite() {
            return Err(Error::InvalidInput("twist must be finite".into()));
        }
        Ok(Self {
            omega: 0.0,
            geometry: Geometry::Ring {
                length,
                twist: twist.rem_euclid(std::f64::consts::TAU),
            },
        })
    }

    pub fn half_width(&self) -> f64 {
        match self.geometry {
            Geometry::Line { half_width } => half_width,
            Geometry::Ring { length, .. } => 0.5 * length,
        }
    }

    pub fn potential(&self, x: f64) -> f64 {
        0.25 * self.omega * self.omega * x * x
    }

    pub fn is_ring(&self) -> bool {
        matches!(self.geometry, Geometry::Ring { .. })
    }

    /// Grid over this trap's extent.
    pub fn grid(&self, points_per_side: usize) -> Result<Grid> {
        Grid::new(self.half_width(), points_per_side)
    }

    pub fn default_grid(&self) -> Result<Grid> {
        self.grid(default_points_per_side(self.half_width()))
    }
}

pub fn default_half_width(omega: f64, coupling: &CouplingSpec) -> f64 {
    let trap = if omega > 0.0 { 6.0 / omega.sqrt() } else { 0.0 };
    let binding = coupling.binding_length().map_or(0.0, |l| 5.0 * l);
    trap.max(binding).max(10.0)
}

/// Even point count giving a spacing of at most [`DEFAULT_SPACING`].
pub fn default_points_per_side(half_width: f64) -> usize {
    let n = (half_width / DEFAULT_SPACING).ceil() as usize;
    let n = n.max(2 * MIN_POINTS_PER_SIDE);
    n + n % 2
}

/// Symmetry class of the relative wave function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    /// Odd states (two identical fermions).
    Fermionic,
    /// Even states (two identical bosons).
    Bosonic,
    /// Both parities, or no parity at all for asymmetric interactions.
    Unrestricted,
}

impl Sector {
    pub fn parity(self) -> Option<Parity> {
        match self {
            Sector::Fermionic => Some(Parity::Odd),
            Sector::Bosonic => Some(Parity::Even),
            Sector::Unrestricted => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sector::Fermionic => "fermionic",
            Sector::Bosonic => "bosonic",
            Sector::Unrestricted => "unrestricted",
        }
    }
}

pub(crate) fn check_grid(trap: &TrapSpec, grid: &Grid) -> Result<()> {
    if grid.points_per_side() < MIN_POINTS_PER_SIDE {
        return Err(Error::Resolution(format!(
            "{} points per side, need at least {MIN_POINTS_PER_SIDE}",
            grid.points_per_side()
        )));
    }
    let w = trap.half_width();
    if (grid.half_width() - w).abs() > 1e-12 * w {
        return Err(Error::InvalidInput(format!(
            "grid half-width {} does not match the trap extent {w}",
            grid.half_width()
        )));
    }
    if trap.is_ring() && trap.omega != 0.0 {
        return Err(Error::UnsupportedRegime("a ring carries no trap (omega must be 0)".into()));
    }
    Ok(())
}

/// Far-end condition of the reduced half-line problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FarEnd {
    Dirichlet,
    Neumann,
}

/// Far-end condition for a parity sector: hard wall on the line; on the ring,
/// whatever periodic (θ = 0) or antiperiodic (θ = π) closure implies at `L/2`.
pub(crate) fn far_end(trap: &TrapSpec, parity: Parity) -> Result<FarEnd> {
    match trap.geometry {
        Geometry::Line { .. } => Ok(FarEnd::Dirichlet),
        Geometry::Ring { twist, .. } => {
            let periodic = twist.abs() < 1e-12 || (twist - std::f64::consts::TAU).abs() < 1e-12;
            let antiperiodic = (twist - std::f64::consts::PI).abs() < 1e-12;
            match (periodic, antiperiodic, parity) {
                (true, _, Parity::Even) | (_, true, Parity::Odd) => Ok(FarEnd::Neumann),
                (true, _, Parity::Odd) | (_, true, Parity::Even) => Ok(FarEnd::Dirichlet),
                _ => Err(Error::UnsupportedRegime(format!(
                    "relative twist {twist} needs complex wave functions; only 0 and pi are supported"
                ))),
            }
        }
    }
}
