//! The fermion/boson map: `φ₊(x) = sgn(x) φ₋(x)` carries odd eigenstates of
//! the `ε(c)` problem onto even eigenstates of the `δ(1/c)` problem with the
//! same energies.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_interaction::{CouplingSpec, DeltaCoupling, EpsilonCoupling, Parity};
use crate::spectral::{
    solve_interface, solve_numerov, NumerovOptions, Sector, Spectrum, TrapSpec, Wavefunction,
};

/// Relative tolerance on the parity defect accepted by [`transform`].
pub const ODD_TOLERANCE: f64 = 1e-8;

/// Sup-norm tolerance for the per-level wave-function comparison.
pub const WAVEFUNCTION_TOLERANCE: f64 = 1e-4;

/// `ε(c) ↦ δ(1/c)`, with `c = 0` going to the hard core.
pub fn map_coupling(c: EpsilonCoupling) -> CouplingSpec {
    CouplingSpec::Epsilon(c)
        .dual()
        .expect("every epsilon coupling has a bosonic dual")
}

/// Inverse of [`map_coupling`]. `δ(0)` has no fermionic partner (`c = ∞`).
pub fn inverse_map_coupling(bose: &CouplingSpec) -> Result<EpsilonCoupling> {
    match bose {
        CouplingSpec::HardCore => EpsilonCoupling::new(0.0),
        CouplingSpec::Delta(v) if v.v() != 0.0 => EpsilonCoupling::new(1.0 / v.v()),
        other => Err(Error::InvalidInput(format!(
            "{} has no epsilon partner",
            other.label()
        ))),
    }
}

/// `sgn(x) φ(x)` on the doubled-origin grid. The input must be odd.
pub fn transform(phi: &Wavefunction) -> Result<Wavefunction> {
    let defect = phi.parity_defect(Parity::Odd);
    let scale = phi.sup_norm();
    if defect > ODD_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Sector(format!(
            "input is not odd: parity defect {defect:e} against sup norm {scale:e}"
        )));
    }
    Ok(phi.sign_flipped())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelPair {
    pub fermi: f64,
    pub bose: f64,
    pub relative_gap: f64,
    /// Sup-norm distance between the transformed fermionic state and the
    /// bosonic one, both normalized with the canonical sign.
    pub wavefunction_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub c: f64,
    /// `1/c`; infinite for the hard core.
    pub v: f64,
    pub omega: f64,
    pub levels: Vec<LevelPair>,
    pub energy_tolerance: f64,
    pub wavefunction_tolerance: f64,
    pub pass: bool,
}

impl DualityReport {
    fn new(c: f64, omega: f64, levels: Vec<LevelPair>, energy_tolerance: f64) -> Self {
        let pass = levels.iter().all(|l| {
            l.relative_gap <= energy_tolerance && l.wavefunction_distance <= WAVEFUNCTION_TOLERANCE
        });
        Self {
            c,
            v: if c == 0.0 { f64::INFINITY } else { 1.0 / c },
            omega,
            levels,
            energy_tolerance,
            wavefunction_tolerance: WAVEFUNCTION_TOLERANCE,
            pass,
        }
    }

    pub fn max_relative_gap(&self) -> f64 {
        self.levels.iter().map(|l| l.relative_gap).fold(0.0, f64::max)
    }

    pub fn max_wavefunction_distance(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| l.wavefunction_distance)
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "level,e_fermi,e_bose,relative_gap,wavefunction_distance,pass")?;
        for (i, l) in self.levels.iter().enumerate() {
            let ok = l.relative_gap <= self.energy_tolerance
                && l.wavefunction_distance <= self.wavefunction_tolerance;
            writeln!(
                out,
                "{i},{},{},{:e},{:e},{ok}",
                l.fermi, l.bose, l.relative_gap, l.wavefunction_distance
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for DualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "epsilon(c = {}) fermions vs delta(v = {}) bosons, omega = {}",
            self.c, self.v, self.omega
        )?;
        for (i, l) in self.levels.iter().enumerate() {
            writeln!(
                f,
                "  level {i}: E_fermi = {:.12}  E_bose = {:.12}  rel gap = {:.2e}  wf dist = {:.2e}",
                l.fermi, l.bose, l.relative_gap, l.wavefunction_distance
            )?;
        }
        write!(
            f,
            "  tolerances: energy {:e} (relative), wave function {:e}: {}",
            self.energy_tolerance,
            self.wavefunction_tolerance,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Solves the fermionic side with the interface scheme and the bosonic side
/// by Numerov shooting, then compares level by level.
pub fn verify_two_body(c: EpsilonCoupling, trap: &TrapSpec, n_levels: usize, tol: f64) -> Result<DualityReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let grid = trap.default_grid()?;
    let fermi = solve_interface(trap, &CouplingSpec::Epsilon(c), Sector::Fermionic, n_levels, &grid)?;
    let opts = NumerovOptions {
        points_per_side: grid.points_per_side(),
        ..NumerovOptions::for_trap(trap)
    };
    let bose = solve_numerov(trap, &map_coupling(c), Sector::Bosonic, n_levels, &opts)?;
    compare(c.c(), trap.omega, &fermi, &bose, tol)
}

fn compare(c: f64, omega: f64, fermi: &Spectrum, bose: &Spectrum, tol: f64) -> Result<DualityReport> {
    if fermi.len() != bose.len() {
        return Err(Error::SolverInconsistency(format!(
            "{} fermionic levels but {} bosonic levels",
            fermi.len(),
            bose.len()
        )));
    }
    let levels = fermi
        .levels
        .iter()
        .zip(&bose.levels)
        .map(|(f, b)| {
            let mapped = transform(&f.state)?.normalized().with_canonical_sign();
            let scale = f.energy.abs().max(b.energy.abs()).max(f64::MIN_POSITIVE);
            Ok(LevelPair {
                fermi: f.energy,
                bose: b.energy,
                relative_gap: (f.energy - b.energy).abs() / scale,
                wavefunction_distance: mapped.sup_distance(&b.state)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualityReport::new(c, omega, levels, tol))
}

/// Limits at a coincidence plane `x_i = x_j`: values `Ψ(x_i → x_j±)` and
/// relative derivatives `(∂_i − ∂_j)Ψ` on either side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactDatum {
    pub value_plus: f64,
    pub value_minus: f64,
    pub deriv_plus: f64,
    pub deriv_minus: f64,
}

impl ContactDatum {
    /// Fermionic datum obeying the `ε(c)` contact law with derivative `d`.
    pub fn fermionic(c: f64, d: f64) -> Self {
        Self {
            value_plus: c * d,
            value_minus: -c * d,
            deriv_plus: d,
            deriv_minus: d,
        }
    }

    /// Multiplication by `sgn(x_i − x_j)`: the minus-side limits change sign.
    pub fn sign_transformed(self) -> Self {
        Self {
            value_minus: -self.value_minus,
            deriv_minus: -self.deriv_minus,
            ..self
        }
    }

    pub fn scaled(self, s: f64) -> Self {
        Self {
            value_plus: s * self.value_plus,
            value_minus: s * self.value_minus,
            deriv_plus: s * self.deriv_plus,
            deriv_minus: s * self.deriv_minus,
        }
    }

    fn scale(&self) -> f64 {
        [self.value_plus, self.value_minus, self.deriv_plus, self.deriv_minus]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Odd contact law: `Ψ(+) = −Ψ(−) = c D(+) = c D(−)`.
    pub fn satisfies_fermionic(&self, c: f64) -> bool {
        let tol = 1e-12 * self.scale().max(c.abs() * self.scale()).max(f64::MIN_POSITIVE);
        (self.value_plus + self.value_minus).abs() <= tol
            && (self.deriv_plus - self.deriv_minus).abs() <= tol
            && (self.value_plus - c * self.deriv_plus).abs() <= tol
    }

    /// Even contact law, multiplied through by `c`:
    /// `c D(+) = −c D(−) = Ψ(+) = Ψ(−)`.
    pub fn satisfies_bosonic(&self, c: f64) -> bool {
        let tol = 1e-12 * self.scale().max(c.abs() * self.scale()).max(f64::MIN_POSITIVE);
        (self.value_plus - self.value_minus).abs() <= tol
            && (self.deriv_plus + self.deriv_minus).abs() <= tol
            && (c * self.deriv_plus - self.value_plus).abs() <= tol
    }
}

/// True when, for every datum, the fermionic law holds exactly when the
/// bosonic law holds for its sign transform, and the bosonic law holds
/// exactly when the fermionic law holds for its sign transform.
pub fn nbody_contact_equivalence_check(c: f64, trial: &[ContactDatum]) -> bool {
    trial.iter().all(|d| {
        let t = d.sign_transformed();
        d.satisfies_fermionic(c) == t.satisfies_bosonic(c) && d.satisfies_bosonic(c) == t.satisfies_fermionic(c)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistPair {
    pub particles: usize,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// Fermionic twist matching a bosonic one: `λ₋ = λ₊ + (N − 1)π mod 2π`.
pub fn twist_rule(particles: usize, lambda_plus: f64) -> Result<TwistPair> {
    if particles < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 particles, got {particles}")));
    }
    if !lambda_plus.is_finite() {
        return Err(Error::InvalidInput("twist must be finite".into()));
    }
    let shift = if particles.is_multiple_of(2) { PI } else { 0.0 };
    Ok(TwistPair {
        particles,
        lambda_plus: lambda_plus.rem_euclid(TAU),
        lambda_minus: (lambda_plus + shift).rem_euclid(TAU),
    })
}

/// Bosonic twist matching a fermionic one.
pub fn bosonic_twist(particles: usize, lambda_minus: f64) -> Result<TwistPair> {
    let forward = twist_rule(particles, lambda_minus)?;
    // (N − 1)π is its own inverse mod 2π.
    Ok(TwistPair {
        particles,
        lambda_plus: forward.lambda_minus,
        lambda_minus: forward.lambda_plus,
    })
}

/// `δ(v)` with `v = 1/c` for finite couplings, as a plain value.
pub fn dual_strength(c: EpsilonCoupling) -> Option<DeltaCoupling> {
    match map_coupling(c) {
        CouplingSpec::Delta(v) => Some(v),
        _ => None,
    }
}
