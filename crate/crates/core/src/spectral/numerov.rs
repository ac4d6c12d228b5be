//! Numerov shooting, the independent check on the interface solver.
//!
//! Solutions are integrated from the outer boundary in to the origin, where
//! their one-sided limits are matched through the connection matrix. An
//! energy is an eigenvalue when the matching function changes sign; it is
//! then refined by bisection.

use serde::{Deserialize, Serialize};

use super::grid::{Grid, Wavefunction};
use super::operator::sector_wavefunction;
use super::spectrum::{InteractionDescriptor, SolverTag, Spectrum};
use super::{check_grid, default_points_per_side, far_end, FarEnd, Geometry, Sector, TrapSpec};
use crate::error::{Error, Result};
use crate::point_interaction::{BoundaryData, ConnectionMatrix, Contact, CouplingSpec, Parity, SectorCondition};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumerovOptions {
    pub points_per_side: usize,
    /// Bisection tolerance on the energy.
    pub tol: f64,
    /// Scan step; chosen from the trap when `None`.
    pub energy_step: Option<f64>,
}

impl NumerovOptions {
    pub fn for_trap(trap: &TrapSpec) -> Self {
        Self {
            points_per_side: default_points_per_side(trap.half_width()),
            tol: 1e-10,
            energy_step: None,
        }
    }
}

/// Lowest `n_levels` eigenpairs by shooting.
///
/// Without a sector, reflection-symmetric interactions are solved per parity
/// and merged (a full-line matching function has double zeros wherever the
/// two parities are degenerate); asymmetric ones use the full-line match.
pub fn solve_numerov(
    trap: &TrapSpec,
    coupling: &CouplingSpec,
    sector: Sector,
    n_levels: usize,
    opts: &NumerovOptions,
) -> Result<Spectrum> {
    if n_levels == 0 {
        return Err(Error::InvalidInput("n_levels must be at least 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let grid = trap.grid(opts.points_per_side)?;
    check_grid(trap, &grid)?;
    let contact = coupling.contact();
    let (lo, hi) = energy_bracket(trap, &contact, n_levels);
    let step = opts.energy_step.unwrap_or_else(|| default_step(trap));

    let pairs = match sector.parity() {
        Some(parity) => shoot_sector(trap, &grid, contact, parity, n_levels, lo, hi, step, opts.tol)?,
        None if contact.is_reflection_symmetric() => {
            let mut both = shoot_sector(trap, &grid, contact, Parity::Even, n_levels, lo, hi, step, opts.tol)?;
            both.extend(shoot_sector(trap, &grid, contact, Parity::Odd, n_levels, lo, hi, step, opts.tol)?);
            both.sort_by(|a, b| a.0.total_cmp(&b.0));
            both.truncate(n_levels);
            both
        }
        None => match (trap.geometry, contact) {
            (Geometry::Line { .. }, Contact::Matrix(m)) => {
                shoot_full_line(trap, &grid, m, n_levels, lo, hi, step, opts.tol)?
            }
            _ => {
                return Err(Error::UnsupportedRegime(
                    "full-line matching needs a line geometry".into(),
                ))
            }
        },
    };
    Ok(Spectrum::assemble(
        pairs,
        sector,
        InteractionDescriptor::Contact(*coupling),
        SolverTag::NumerovShoot,
        *trap,
    ))
}

/// `[−4·max(v², 1/(4c²)) − 1, …]`, with `v` and `c` read off the connection
/// matrix (`v = m21`, `4c = m12`). The untrapped line stops just below zero.
fn energy_bracket(trap: &TrapSpec, contact: &Contact, n_levels: usize) -> (f64, f64) {
    let binding = match contact {
        Contact::Matrix(m) => {
            let from_c = if m.m12 != 0.0 { 4.0 / (m.m12 * m.m12) } else { 0.0 };
            (m.m21 * m.m21).max(from_c)
        }
        Contact::HardCore => 0.0,
    };
    let lo = -4.0 * binding - 1.0;
    let hi = match trap.geometry {
        Geometry::Line { .. } if trap.omega == 0.0 => -1e-9,
        Geometry::Line { .. } => trap.omega * (2.0 * n_levels as f64 + 4.0) + 10.0,
        Geometry::Ring { .. } => {
            let k = (n_levels as f64 + 2.0) * std::f64::consts::PI / trap.half_width();
            4.0 * k * k + 1.0
        }
    };
    (lo, hi)
}

fn default_step(trap: &TrapSpec) -> f64 {
    let box_scale = (std::f64::consts::PI / trap.half_width()).powi(2);
    (0.02 * trap.omega.max(1.0)).min(0.1 * box_scale)
}

/// Inward Numerov integration of `φ'' = (V − E) φ` from `x = W` to `x = −h`.
///
/// Returns the samples at `x = k h` for `k = 0..=n` and the limits at `0+`.
fn shoot_inward(trap: &TrapSpec, grid: &Grid, energy: f64, far: FarEnd) -> (Vec<f64>, BoundaryData) {
    let n = grid.points_per_side();
    let h = grid.spacing();
    let h2 = h * h;
    let f = |k: isize| trap.potential(k as f64 * h) - energy;
    // y[k + 1] holds the sample at x = k h, k = −1..=n.
    let mut y = vec![0.0; n + 2];
    let at = |k: isize| (k + 1) as usize;
    match far {
        FarEnd::Dirichlet => {
            y[at(n as isize)] = 0.0;
            y[at(n as isize - 1)] = 1e-12;
        }
        FarEnd::Neumann => {
            // Even about x = W (only used on rings, where V is constant).
            let fk = f(n as isize);
            y[at(n as isize)] = 1.0;
            y[at(n as isize - 1)] = (1.0 + 5.0 * h2 * fk / 12.0) / (1.0 - h2 * fk / 12.0);
        }
    }
    for k in (0..n as isize).rev() {
        let next = 2.0 * (1.0 + 5.0 * h2 * f(k) / 12.0) * y[at(k)]
            - (1.0 - h2 * f(k + 1) / 12.0) * y[at(k + 1)];
        y[at(k - 1)] = next / (1.0 - h2 * f(k - 1) / 12.0);
        let m = y[at(k - 1)].abs();
        if m > 1e150 {
            y.iter_mut().for_each(|v| *v /= m);
        }
    }
    let value = y[at(0)];
    let slope = ((1.0 - h2 * f(1) / 6.0) * y[at(1)] - (1.0 - h2 * f(-1) / 6.0) * y[at(-1)]) / (2.0 * h);
    let scale = value.abs().max(slope.abs() * h).max(f64::MIN_POSITIVE);
    let samples = y[1..].iter().map(|v| v / scale).collect();
    (samples, BoundaryData::new(value / scale, slope / scale))
}

fn sector_mismatch(cond: &SectorCondition, b: BoundaryData) -> f64 {
    cond.value_coeff * b.value + cond.slope_coeff * b.slope
}

/// Mismatch between `M·(left limits)` and the right limits. `V` is even, so
/// the left solution is the mirror image of the right one.
fn full_mismatch(m: &ConnectionMatrix, b: BoundaryData) -> f64 {
    let left = BoundaryData::new(b.value, -b.slope);
    let mapped = m.apply(left);
    mapped.value * b.slope - mapped.slope * b.value
}

/// Scans `[lo, hi]` in steps of `step` and bisects every sign change.
fn find_roots(
    mut mismatch: impl FnMut(f64) -> f64,
    n_levels: usize,
    lo: f64,
    hi: f64,
    step: f64,
    tol: f64,
) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = mismatch(a);
    while a < hi && roots.len() < n_levels {
        let b = (a + step).min(hi);
        let fb = mismatch(b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() {
            let (mut l, mut r, mut fl) = (a, b, fa);
            while r - l > tol {
                let mid = 0.5 * (l + r);
                let fm = mismatch(mid);
                if fm.signum() == fl.signum() {
                    l = mid;
                    fl = fm;
                } else {
                    r = mid;
                }
            }
            roots.push(0.5 * (l + r));
        }
        a = b;
        fa = fb;
        if b >= hi {
            break;
        }
    }
    roots
}

fn bracket_error(lo: f64, hi: f64, found: usize, requested: usize) -> Error {
    Error::Bracket {
        lo,
        hi,
        found,
        requested,
    }
}

#[allow(clippy::too_many_arguments)]
fn shoot_sector(
    trap: &TrapSpec,
    grid: &Grid,
    contact: Contact,
    parity: Parity,
    n_levels: usize,
    lo: f64,
    hi: f64,
    step: f64,
    tol: f64,
) -> Result<Vec<(f64, Wavefunction)>> {
    let cond = contact.sector_condition(parity)?;
    let far = far_end(trap, parity)?;
    let roots = find_roots(
        |e| sector_mismatch(&cond, shoot_inward(trap, grid, e, far).1),
        n_levels,
        lo,
        hi,
        step,
        tol,
    );
    let untrapped_line = trap.omega == 0.0 && !trap.is_ring();
    if roots.is_empty() || (roots.len() < n_levels && !untrapped_line) {
        return Err(bracket_error(lo, hi, roots.len(), n_levels));
    }
    roots
        .into_iter()
        .map(|e| {
            let (samples, limits) = shoot_inward(trap, grid, e, far);
            Ok((e, sector_wavefunction(grid, &samples, parity, Some(limits.slope))?))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn shoot_full_line(
    trap: &TrapSpec,
    grid: &Grid,
    m: ConnectionMatrix,
    n_levels: usize,
    lo: f64,
    hi: f64,
    step: f64,
    tol: f64,
) -> Result<Vec<(f64, Wavefunction)>> {
    let roots = find_roots(
        |e| full_mismatch(&m, shoot_inward(trap, grid, e, FarEnd::Dirichlet).1),
        n_levels,
        lo,
        hi,
        step,
        tol,
    );
    if roots.is_empty() || (roots.len() < n_levels && trap.omega != 0.0) {
        return Err(bracket_error(lo, hi, roots.len(), n_levels));
    }
    roots
        .into_iter()
        .map(|e| {
            let (samples, b) = shoot_inward(trap, grid, e, FarEnd::Dirichlet);
            let left = BoundaryData::new(b.value, -b.slope);
            let target = m.apply(left);
            let right_scale = if b.value.abs() >= b.slope.abs() * grid.spacing() {
                target.value / b.value
            } else {
                target.slope / b.slope
            };
            let mut values = vec![0.0; grid.len()];
            for (k, v) in samples.iter().enumerate() {
                values[grid.left_index(k)] = *v;
                values[grid.right_index(k)] = right_scale * v;
            }
            let psi = Wavefunction::new(*grid, values, Some((left.slope, right_scale * b.slope)))?;
            Ok((e, psi))
        })
        .collect()
}
