use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::finite_range::FiniteRangePotential;
use super::grid::Wavefunction;
use super::tridiag::DEGENERACY_GAP;
use super::{Sector, TrapSpec};
use crate::point_interaction::CouplingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverTag {
    InterfaceFd,
    NumerovShoot,
    FiniteRangeFd,
}

impl SolverTag {
    pub fn label(self) -> &'static str {
        match self {
            SolverTag::InterfaceFd => "interface_fd",
            SolverTag::NumerovShoot => "numerov_shoot",
            SolverTag::FiniteRangeFd => "finite_range_fd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InteractionDescriptor {
    Contact(CouplingSpec),
    FiniteRange(FiniteRangePotential),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub state: Wavefunction,
    /// Within [`DEGENERACY_GAP`] of a neighbouring level.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub levels: Vec<Level>,
    pub sector: Sector,
    pub interaction: InteractionDescriptor,
    pub solver: SolverTag,
    pub trap: TrapSpec,
}

impl Spectrum {
    pub(crate) fn assemble(
        mut pairs: Vec<(f64, Wavefunction)>,
        sector: Sector,
        interaction: InteractionDescriptor,
        solver: SolverTag,
        trap: TrapSpec,
    ) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let energies: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let levels = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (energy, state))| {
                let close = |j: usize| (energies[j] - energy).abs() < DEGENERACY_GAP;
                let degenerate = (i > 0 && close(i - 1)) || (i + 1 < energies.len() && close(i + 1));
                Level {
                    energy,
                    state: state.normalized().with_canonical_sign(),
                    degenerate,
                }
            })
            .collect();
        Self {
            levels,
            sector,
            interaction,
            solver,
            trap,
        }
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `index,energy` rows.
    pub fn write_levels_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "index,energy")?;
        for (i, level) in self.levels.iter().enumerate() {
            writeln!(out, "{i},{}", level.energy)?;
        }
        Ok(())
    }

    /// `x,value` rows in grid order. The origin appears twice, left limit
    /// first.
    pub fn write_state_csv<W: Write>(&self, index: usize, out: W) -> io::Result<()> {
        write_wavefunction_csv(&self.levels[index].state, out)
    }
}

pub fn write_wavefunction_csv<W: Write>(psi: &Wavefunction, mut out: W) -> io::Result<()> {
    writeln!(out, "x,value")?;
    let grid = psi.grid();
    for (i, v) in psi.values().iter().enumerate() {
        writeln!(out, "{},{v}", grid.x(i))?;
    }
    Ok(())
}
