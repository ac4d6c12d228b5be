use serde::{Deserialize, Serialize};

use super::grid::{Grid, Wavefunction};
use super::operator::{plain_full_line, plain_full_line_wavefunction, sector_wavefunction, HalfLine};
use super::spectrum::{InteractionDescriptor, SolverTag, Spectrum};
use super::{check_grid, far_end, solve_interface, Sector, TrapSpec};
use crate::error::{Error, Result};
use crate::point_interaction::{
    epsilon_as_chi, three_delta_strengths, CouplingSpec, EpsilonCoupling, Parity, SectorCondition,
    ThreeDeltaRealization,
};

/// Symmetric short-range interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FiniteRangePotential {
    /// `V = strength` for `|x| < range`, zero outside.
    SquareWell { strength: f64, range: f64 },
    /// Spikes at `−a, 0, a`; `u_minus = u_plus`.
    ThreeDelta(ThreeDeltaRealization),
}

impl FiniteRangePotential {
    pub fn square_well(strength: f64, range: f64) -> Result<Self> {
        if !strength.is_finite() || !(range.is_finite() && range > 0.0) {
            return Err(Error::InvalidInput(format!(
                "square well needs finite strength and positive range, got ({strength}, {range})"
            )));
        }
        Ok(Self::SquareWell { strength, range })
    }

    pub fn three_delta(r: ThreeDeltaRealization) -> Result<Self> {
        if !r.is_symmetric() {
            return Err(Error::InvalidInput(format!(
                "three-delta potential must be symmetric (u- = {}, u+ = {})",
                r.u_minus, r.u_plus
            )));
        }
        Ok(Self::ThreeDelta(r))
    }

    /// The three-spike stand-in for `ε(c)` at spacing `a`.
    pub fn epsilon_three_delta(c: EpsilonCoupling, a: f64) -> Result<Self> {
        Self::three_delta(three_delta_strengths(&epsilon_as_chi(c), a)?)
    }

    pub fn range(&self) -> f64 {
        match self {
            Self::SquareWell { range, .. } => *range,
            Self::ThreeDelta(r) => r.a,
        }
    }

    /// Values at `x = k h`, `k = 0..=n`. A spike of strength `u` on node `k`
    /// becomes `u/h` there; a square-well edge landing on a node gets half
    /// the strength.
    fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        let n = grid.points_per_side();
        let h = grid.spacing();
        let mut v = vec![0.0; n + 1];
        match *self {
            Self::SquareWell { strength, range } => {
                for (k, vk) in v.iter_mut().enumerate() {
                    let x = k as f64 * h;
                    if (x - range).abs() <= 1e-9 * h {
                        *vk = 0.5 * strength;
                    } else if x < range {
                        *vk = strength;
                    }
                }
            }
            Self::ThreeDelta(r) => {
                let j = (r.a / h).round();
                if (j * h - r.a).abs() > 1e-6 * h {
                    return Err(Error::InvalidInput(format!(
                        "spike position a = {} is not a grid node (h = {h})",
                        r.a
                    )));
                }
                let j = j as usize;
                if j > n {
                    return Err(Error::InvalidInput("spikes lie outside the grid".into()));
                }
                v[0] += r.u_zero / h;
                v[j] += r.u_plus / h;
            }
        }
        Ok(v)
    }
}

/// Lowest eigenpairs of `−d²/dx² + (ω²/4)x² + V(x)` for a regular symmetric
/// `V`, with the single-valued three-point scheme.
pub fn solve_finite_range(
    trap: &TrapSpec,
    pot: &FiniteRangePotential,
    sector: Sector,
    n_levels: usize,
    grid: &Grid,
) -> Result<Spectrum> {
    if n_levels == 0 {
        return Err(Error::InvalidInput("n_levels must be at least 1".into()));
    }
    check_grid(trap, grid)?;
    let h = grid.spacing();
    if pot.range() < 2.0 * h {
        return Err(Error::Resolution(format!(
            "range {} is below two grid spacings ({})",
            pot.range(),
            2.0 * h
        )));
    }
    let spikes = pot.sample(grid)?;
    let potential: Vec<f64> = spikes
        .iter()
        .enumerate()
        .map(|(k, s)| s + trap.potential(k as f64 * h))
        .collect();

    let pairs: Vec<(f64, Wavefunction)> = match sector.parity() {
        Some(parity) => {
            let origin = match parity {
                Parity::Odd => SectorCondition::DIRICHLET,
                Parity::Even => SectorCondition::NEUMANN,
            };
            let half = HalfLine::build(grid, &potential, origin, far_end(trap, parity)?);
            half.op
                .lowest_eigenpairs(n_levels)?
                .into_iter()
                .map(|(e, y)| Ok((e, sector_wavefunction(grid, &half.samples(&y), parity, None)?)))
                .collect::<Result<_>>()?
        }
        None => {
            if trap.is_ring() {
                return Err(Error::UnsupportedRegime(
                    "unrestricted finite-range spectra are solved on the line only".into(),
                ));
            }
            plain_full_line(grid, &potential)
                .lowest_eigenpairs(n_levels)?
                .into_iter()
                .map(|(e, y)| Ok((e, plain_full_line_wavefunction(grid, &y)?)))
                .collect::<Result<_>>()?
        }
    };
    Ok(Spectrum::assemble(
        pairs,
        sector,
        InteractionDescriptor::FiniteRange(*pot),
        SolverTag::FiniteRangeFd,
        *trap,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub a: f64,
    pub energy: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub c: f64,
    pub exact: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `ln(error)` against `ln(a)`.
    pub order: f64,
    pub warning: Option<String>,
}

impl ConvergenceTable {
    pub fn errors_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].error < w[0].error)
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "a,energy,error")?;
        for r in &self.rows {
            writeln!(out, "{},{},{}", r.a, r.energy, r.error)?;
        }
        Ok(())
    }
}

/// Fermionic ground-energy error of the three-spike stand-in for `ε(c)`
/// against the zero-range interface solution, for decreasing `a`.
pub fn convergence_study(
    c: EpsilonCoupling,
    trap: &TrapSpec,
    a_values: &[f64],
    grid: &Grid,
) -> Result<ConvergenceTable> {
    if a_values.is_empty() {
        return Err(Error::InvalidInput("no spacings given".into()));
    }
    if a_values.iter().any(|a| !(*a > 0.0)) || a_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("spacings must be positive and decreasing".into()));
    }
    let exact = solve_interface(trap, &CouplingSpec::Epsilon(c), Sector::Fermionic, 1, grid)?.levels[0].energy;
    let rows = a_values
        .iter()
        .map(|&a| {
            let pot = FiniteRangePotential::epsilon_three_delta(c, a)?;
            let energy = solve_finite_range(trap, &pot, Sector::Fermionic, 1, grid)?.levels[0].energy;
            Ok(ConvergenceRow {
                a,
                energy,
                error: (energy - exact).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let order = log_log_slope(&rows);
    let warning = check_convergence_floor(&rows);
    Ok(ConvergenceTable {
        c: c.c(),
        exact,
        rows,
        order,
        warning,
    })
}

/// Warns when the error stops shrinking between the two smallest spacings,
/// i.e. the grid floor has been reached.
pub fn check_convergence_floor(rows: &[ConvergenceRow]) -> Option<String> {
    match rows {
        [.., prev, last] if last.error >= prev.error => Some(format!(
            "error did not decrease from a = {} ({:e}) to a = {} ({:e}); grid-resolution floor reached",
            prev.a, prev.error, last.a, last.error
        )),
        _ => None,
    }
}

fn log_log_slope(rows: &[ConvergenceRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error > 0.0)
        .map(|r| (r.a.ln(), r.error.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
