use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::grid::{Grid, Wavefunction};
use super::operator::{sector_wavefunction, FullLine, HalfLine};
use super::spectrum::{InteractionDescriptor, SolverTag, Spectrum};
use super::{check_grid, far_end, Geometry, Sector, TrapSpec};
use crate::error::{Error, Result};
use crate::point_interaction::{Contact, CouplingSpec, Parity};

/// Interface finite differences with Richardson-extrapolated energies.
///
/// The levels are computed on `grid` and on its two-fold refinement; each
/// reported energy is `(4 E(h/2) − E(h)) / 3`, eigenfunctions come from
/// `grid`. With a parity sector the doubled-origin system is folded onto
/// `[0+, W]`; without one (line only) the full doubled-origin system is
/// solved, which also handles interactions that mix parities.
///
/// On an untrapped line only the bound states (`E < 0`) among the lowest
/// `n_levels` are returned.
pub fn solve_interface(
    trap: &TrapSpec,
    coupling: &CouplingSpec,
    sector: Sector,
    n_levels: usize,
    grid: &Grid,
) -> Result<Spectrum> {
    let coarse = solve_interface_raw(trap, coupling, sector, n_levels, grid)?;
    let fine = solve_interface_raw(trap, coupling, sector, n_levels, &grid.refined())?;
    if coarse.len() != fine.len() {
        return Err(Error::SolverInconsistency(format!(
            "{} levels on the grid but {} on its refinement",
            coarse.len(),
            fine.len()
        )));
    }
    let mut out = coarse;
    for (level, f) in out.levels.iter_mut().zip(&fine.levels) {
        level.energy = (4.0 * f.energy - level.energy) / 3.0;
    }
    Ok(out)
}

/// [`solve_interface`] without the extrapolation: plain grid energies.
pub fn solve_interface_raw(
    trap: &TrapSpec,
    coupling: &CouplingSpec,
    sector: Sector,
    n_levels: usize,
    grid: &Grid,
) -> Result<Spectrum> {
    if n_levels == 0 {
        return Err(Error::InvalidInput("n_levels must be at least 1".into()));
    }
    check_grid(trap, grid)?;
    let contact = coupling.contact();
    let mut pairs = match (sector.parity(), trap.geometry) {
        (Some(parity), _) => sector_pairs(trap, contact, parity, n_levels, grid)?,
        (None, Geometry::Line { .. }) => {
            let op = FullLine::build(grid, |x| trap.potential(x), contact);
            op.op
                .lowest_eigenpairs(n_levels)?
                .into_iter()
                .map(|(e, y)| Ok((e, op.wavefunction(&y, e)?)))
                .collect::<Result<Vec<_>>>()?
        }
        (None, Geometry::Ring { .. }) => {
            if !contact.is_reflection_symmetric() {
                return Err(Error::UnsupportedRegime(
                    "ring spectra need a reflection-symmetric interaction".into(),
                ));
            }
            let mut both = sector_pairs(trap, contact, Parity::Even, n_levels, grid)?;
            both.extend(sector_pairs(trap, contact, Parity::Odd, n_levels, grid)?);
            both.sort_by(|a, b| a.0.total_cmp(&b.0));
            both.truncate(n_levels);
            both
        }
    };
    if trap.omega == 0.0 && !trap.is_ring() {
        pairs.retain(|(e, _)| *e < 0.0);
    }
    check_real_spectrum(&pairs)?;
    Ok(Spectrum::assemble(
        pairs,
        sector,
        InteractionDescriptor::Contact(*coupling),
        SolverTag::InterfaceFd,
        *trap,
    ))
}

fn sector_pairs(
    trap: &TrapSpec,
    contact: Contact,
    parity: Parity,
    n_levels: usize,
    grid: &Grid,
) -> Result<Vec<(f64, Wavefunction)>> {
    let origin = contact.sector_condition(parity)?;
    let far = far_end(trap, parity)?;
    let h = grid.spacing();
    let potential: Vec<f64> = (0..=grid.points_per_side())
        .map(|k| trap.potential(k as f64 * h))
        .collect();
    let half = HalfLine::build(grid, &potential, origin, far);
    half.op
        .lowest_eigenpairs(n_levels)?
        .into_iter()
        .map(|(e, y)| {
            let r = half.samples(&y);
            let slope = half.origin_slope(&r);
            Ok((e, sector_wavefunction(grid, &r, parity, Some(slope))?))
        })
        .collect()
}

fn check_real_spectrum(pairs: &[(f64, Wavefunction)]) -> Result<()> {
    // The symmetrizable structure already guarantees this; a NaN would mean
    // the factorisation broke down.
    for (e, _) in pairs {
        if !e.is_finite() {
            return Err(Error::SolverInconsistency(format!("non-finite eigenvalue {e}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistics {
    Bosons,
    Fermions,
}

impl Statistics {
    pub fn sector(self) -> Sector {
        match self {
            Statistics::Bosons => Sector::Bosonic,
            Statistics::Fermions => Sector::Fermionic,
        }
    }
}

/// Ground energy of two particles (unit mass, kinetic `−½∂²` each) on a ring
/// of circumference `length` with single-particle twist `twist`, by
/// separation into centre of mass and relative motion.
///
/// A centre-of-mass momentum `K = 2πm/L` fixes the relative twist to
/// `twist − πm`, which must be 0 or π for real relative wave functions; so
/// `twist` itself must be 0 or π. The energy is `K²/4 + E_rel`, minimised
/// over `|m| ≤ 2`.
pub fn two_body_ring_energy(
    length: f64,
    coupling: &CouplingSpec,
    twist: f64,
    statistics: Statistics,
    points_per_side: usize,
) -> Result<f64> {
    let mut best = f64::INFINITY;
    for m in -2i32..=2 {
        let k_cm = TAU * m as f64 / length;
        let relative_twist = (twist - PI * m as f64).rem_euclid(TAU);
        let trap = TrapSpec::ring(length, relative_twist)?;
        let grid = trap.grid(points_per_side)?;
        let spec = solve_interface(&trap, coupling, statistics.sector(), 1, &grid)?;
        let e = 0.25 * k_cm * k_cm + spec.levels[0].energy;
        best = best.min(e);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point_interaction::SaeParams;
    use crate::spectral::default_points_per_side;

    fn trap2() -> TrapSpec {
        TrapSpec::line(2.0, 10.0).unwrap()
    }

    fn grid(trap: &TrapSpec) -> Grid {
        trap.default_grid().unwrap()
    }

    #[test]
    fn free_fermions_see_odd_oscillator_levels() {
        let t = trap2();
        let s = solve_interface(&t, &CouplingSpec::epsilon(0.0).unwrap(), Sector::Fermionic, 3, &grid(&t))
            .unwrap();
        for (e, exact) in s.energies().iter().zip([3.0, 7.0, 11.0]) {
            assert!((e - exact).abs() < 1e-6, "{e} vs {exact}");
        }
    }

    #[test]
    fn free_bosons_see_even_oscillator_levels() {
        let t = trap2();
        let s = solve_interface(&t, &CouplingSpec::delta(0.0).unwrap(), Sector::Bosonic, 3, &grid(&t))
            .unwrap();
        for (e, exact) in s.energies().iter().zip([1.0, 5.0, 9.0]) {
            assert!((e - exact).abs() < 1e-6, "{e} vs {exact}");
        }
    }

    #[test]
    fn delta_well_bound_state() {
        let c = CouplingSpec::delta(-2.0).unwrap();
        let t = TrapSpec::truncated_line(0.0, &c).unwrap();
        let s = solve_interface(&t, &c, Sector::Bosonic, 3, &grid(&t)).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.levels[0].energy + 1.0).abs() < 1e-6);
        // Same state seen without a sector restriction.
        let s = solve_interface(&t, &c, Sector::Unrestricted, 3, &grid(&t)).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.levels[0].energy + 1.0).abs() < 1e-6);
    }

    #[test]
    fn full_line_equals_union_of_sectors() {
        let t = TrapSpec::line(2.0, 8.0).unwrap();
        let g = t.grid(1200).unwrap();
        for c in [
            CouplingSpec::epsilon(0.7).unwrap(),
            CouplingSpec::delta(-1.3).unwrap(),
            CouplingSpec::HardCore,
        ] {
            let full = solve_interface_raw(&t, &c, Sector::Unrestricted, 6, &g).unwrap();
            let odd = solve_interface_raw(&t, &c, Sector::Fermionic, 6, &g).unwrap();
            let even = solve_interface_raw(&t, &c, Sector::Bosonic, 6, &g).unwrap();
            let mut merged: Vec<f64> = odd.energies().into_iter().chain(even.energies()).collect();
            merged.sort_by(f64::total_cmp);
            for (a, b) in full.energies().iter().zip(&merged) {
                assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{c:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn hard_core_full_line_is_doubly_degenerate() {
        let t = TrapSpec::line(2.0, 8.0).unwrap();
        let g = t.grid(1000).unwrap();
        let s = solve_interface_raw(&t, &CouplingSpec::HardCore, Sector::Unrestricted, 4, &g).unwrap();
        assert!(s.levels.iter().all(|l| l.degenerate));
        let overlap = s.levels[0].state.inner(&s.levels[1].state);
        assert!(overlap.abs() < 1e-8);
    }

    #[test]
    fn asymmetric_interaction_on_the_full_line() {
        // χ(2, 1, 1, 1): not parity-invariant, still a real spectrum.
        let p = SaeParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let t = TrapSpec::line(2.0, 8.0).unwrap();
        let s = solve_interface(&t, &CouplingSpec::General(p), Sector::Unrestricted, 4, &t.grid(1600).unwrap())
            .unwrap();
        let e = s.energies();
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(
            solve_interface(&t, &CouplingSpec::General(p), Sector::Bosonic, 2, &t.grid(400).unwrap()),
            Err(Error::Sector(_))
        ));
    }

    #[test]
    fn rejects_coarse_grids_and_mismatches() {
        let t = trap2();
        let c = CouplingSpec::epsilon(1.0).unwrap();
        assert!(matches!(
            solve_interface(&t, &c, Sector::Fermionic, 1, &t.grid(150).unwrap()),
            Err(Error::Resolution(_))
        ));
        assert!(matches!(
            solve_interface(&t, &c, Sector::Fermionic, 1, &Grid::new(5.0, 400).unwrap()),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            solve_interface_raw(&t, &c, Sector::Fermionic, 500, &t.grid(300).unwrap()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn ring_free_levels() {
        // Free relative motion on a ring of length L: even periodic states
        // have k = 2πj/L.
        let l = 10.0;
        let t = TrapSpec::ring(l, 0.0).unwrap();
        let g = t.grid(default_points_per_side(l / 2.0)).unwrap();
        let s = solve_interface(&t, &CouplingSpec::delta(0.0).unwrap(), Sector::Bosonic, 3, &g).unwrap();
        for (j, e) in s.energies().iter().enumerate() {
            let k = TAU * j as f64 / l;
            assert!((e - k * k).abs() < 1e-8, "{e} vs {}", k * k);
        }
        let t = TrapSpec::ring(l, 1.0).unwrap();
        assert!(matches!(
            solve_interface(&t, &CouplingSpec::delta(0.0).unwrap(), Sector::Bosonic, 1, &g),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn eigenfunctions_are_orthonormal_and_have_parity() {
        let t = trap2();
        let g = t.grid(2000).unwrap();
        let s = solve_interface(&t, &CouplingSpec::epsilon(0.4).unwrap(), Sector::Fermionic, 4, &g).unwrap();
        for (i, a) in s.levels.iter().enumerate() {
            assert!((a.state.norm() - 1.0).abs() < 1e-10);
            assert!(a.state.parity_defect(Parity::Odd) < 1e-8);
            for b in &s.levels[i + 1..] {
                assert!(a.state.inner(&b.state).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn two_body_ring_free_bosons() {
        let e = two_body_ring_energy(10.0, &CouplingSpec::delta(0.0).unwrap(), 0.0, Statistics::Bosons, 2000)
            .unwrap();
        assert!(e.abs() < 1e-8, "{e}");
    }
}
