//! One function per command. Each returns the data it plotted and tabulated
//! so callers other than [`crate::run`] can inspect it.

use std::f64::consts::PI;
use std::fmt::Write as _;

use contact_duality::bethe::{dual_fermion_energy, ground_state, BetheState, RingSpec};
use contact_duality::duality::{bosonic_twist, transform, verify_two_body, DualityReport};
use contact_duality::point_interaction::{CouplingSpec, EpsilonCoupling};
use contact_duality::spectral::{
    convergence_study, default_half_width, default_points_per_side, solve_finite_range, solve_interface,
    solve_numerov, two_body_ring_energy, write_wavefunction_csv, ConvergenceTable, FiniteRangePotential, Grid,
    NumerovOptions, Sector, Spectrum, Statistics, TrapSpec, Wavefunction,
};

use crate::config::{
    BetheParams, ConvergeParams, DualNbodyParams, DualityParams, Fig1Params, Fig2Params, GridParams,
    InteractionKind, SectorChoice, SolverChoice, SpectrumParams,
};
use crate::figure::{FigureBundle, Panel, Series};
use crate::RunError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn solver<T>(context: impl Into<String>, r: contact_duality::Result<T>) -> Result<T, RunError> {
    r.map_err(|source| RunError::Solver {
        context: context.into(),
        source,
    })
}

fn line_trap(omega: f64, coupling: &CouplingSpec, grid: &GridParams) -> Result<(TrapSpec, Grid), RunError> {
    let w = grid.half_width.unwrap_or_else(|| default_half_width(omega, coupling));
    let trap = solver("trap", TrapSpec::line(omega, w))?;
    let n = grid.points_per_side.unwrap_or_else(|| default_points_per_side(w));
    let g = solver("grid", trap.grid(n))?;
    Ok((trap, g))
}

/// Samples with `|x| ≤ x_max`, origin limits included.
pub fn window(psi: &Wavefunction, x_max: f64) -> Vec<(f64, f64)> {
    let g = psi.grid();
    psi.values()
        .iter()
        .enumerate()
        .map(|(i, v)| (g.x(i), *v))
        .filter(|(x, _)| x.abs() <= x_max + 1e-12)
        .collect()
}

pub struct SpectrumRun {
    pub spectrum: Spectrum,
    pub coupling: CouplingSpec,
}

pub fn spectrum(p: &SpectrumParams) -> Result<SpectrumRun, RunError> {
    let coupling = match p.interaction {
        InteractionKind::Epsilon => solver("coupling", CouplingSpec::epsilon(p.strength))?,
        InteractionKind::Delta => solver("coupling", CouplingSpec::delta(p.strength))?,
        InteractionKind::HardCore => CouplingSpec::HardCore,
    };
    let sector = match p.sector {
        SectorChoice::Odd => Sector::Fermionic,
        SectorChoice::Even => Sector::Bosonic,
        SectorChoice::Both => Sector::Unrestricted,
    };
    let (trap, grid) = line_trap(p.omega, &coupling, &p.grid)?;
    let spectrum = match p.solver {
        SolverChoice::Interface => solver(
            "interface solve",
            solve_interface(&trap, &coupling, sector, p.levels, &grid),
        )?,
        SolverChoice::Numerov => {
            let opts = NumerovOptions {
                points_per_side: grid.points_per_side(),
                tol: p.tol,
                energy_step: None,
            };
            solver("numerov solve", solve_numerov(&trap, &coupling, sector, p.levels, &opts))?
        }
    };
    Ok(SpectrumRun { spectrum, coupling })
}

pub fn spectrum_text(run: &SpectrumRun) -> String {
    let s = &run.spectrum;
    let mut out = format!(
        "{} ({} sector, {} solver, omega = {})\n",
        run.coupling.label(),
        s.sector.label(),
        s.solver.label(),
        s.trap.omega
    );
    for (i, l) in s.levels.iter().enumerate() {
        let _ = writeln!(
            out,
            "  E[{i}] = {:.12}{}",
            l.energy,
            if l.degenerate { "  (degenerate)" } else { "" }
        );
    }
    out
}

pub fn spectrum_figure(run: &SpectrumRun, stamp: &str) -> FigureBundle {
    let x_max = run.spectrum.trap.half_width().min(6.0);
    let series = run
        .spectrum
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| Series::new(format!("n = {i}"), window(&l.state, x_max)))
        .collect();
    FigureBundle {
        name: "spectrum".into(),
        title: format!("{} eigenfunctions", run.coupling.label()),
        rows: 1,
        cols: 1,
        panels: vec![Panel::new(
            format!("{} sector", run.spectrum.sector.label()),
            "x",
            "phi(x)",
            series,
        )],
        stamp: stamp.into(),
        solver: run.spectrum.solver.label().into(),
        version: VERSION.into(),
    }
}

pub fn duality(p: &DualityParams) -> Result<DualityReport, RunError> {
    let c = solver("coupling", EpsilonCoupling::new(p.c))?;
    let trap = solver("trap", TrapSpec::truncated_line(p.omega, &CouplingSpec::Epsilon(c)))?;
    solver("duality check", verify_two_body(c, &trap, p.levels, p.tol))
}

pub fn converge(p: &ConvergeParams) -> Result<ConvergenceTable, RunError> {
    let c = solver("coupling", EpsilonCoupling::new(p.c))?;
    let (trap, grid) = line_trap(p.omega, &CouplingSpec::Epsilon(c), &p.grid)?;
    solver("convergence study", convergence_study(c, &trap, &p.a_values, &grid))
}

pub fn converge_text(t: &ConvergenceTable) -> String {
    let mut out = format!("three-spike epsilon(c = {}), exact ground energy {:.12}\n", t.c, t.exact);
    for r in &t.rows {
        let _ = writeln!(out, "  a = {:<8} E = {:.12}  error = {:.6e}", r.a, r.energy, r.error);
    }
    let _ = writeln!(out, "  fitted order: {:.6}", t.order);
    if let Some(w) = &t.warning {
        let _ = writeln!(out, "  warning: {w}");
    }
    out
}

pub fn converge_figure(t: &ConvergenceTable, stamp: &str) -> FigureBundle {
    let mut panel = Panel::new(
        format!("c = {}", t.c),
        "a",
        "|E(a) - E|",
        vec![Series::new(
            "error",
            t.rows.iter().filter(|r| r.error > 0.0).map(|r| (r.a, r.error)).collect(),
        )],
    );
    panel.log_log = true;
    FigureBundle {
        name: "converge".into(),
        title: "Three-spike ground-energy error".into(),
        rows: 1,
        cols: 1,
        panels: vec![panel],
        stamp: stamp.into(),
        solver: "finite_range_fd vs interface_fd".into(),
        version: VERSION.into(),
    }
}

/// One column of the square-well figure.
pub struct WellCase {
    pub strength: f64,
    pub spectrum: Spectrum,
    pub potential: Vec<(f64, f64)>,
}

pub struct Fig1 {
    pub attractive: WellCase,
    pub repulsive: WellCase,
    pub x_max: f64,
}

pub fn fig1(p: &Fig1Params) -> Result<Fig1, RunError> {
    let (trap, grid) = line_trap(p.omega, &CouplingSpec::HardCore, &p.grid)?;
    let case = |strength: f64| -> Result<WellCase, RunError> {
        let pot = solver("square well", FiniteRangePotential::square_well(strength, p.range))?;
        let spectrum = solver(
            "square-well solve",
            solve_finite_range(&trap, &pot, Sector::Fermionic, 2, &grid),
        )?;
        let h = grid.spacing();
        let n = (p.x_max / h).round() as i64;
        let potential = (-n..=n)
            .map(|k| {
                let x = k as f64 * h;
                let well = if x.abs() < p.range { strength } else { 0.0 };
                (x, well + trap.potential(x))
            })
            .collect();
        Ok(WellCase {
            strength,
            spectrum,
            potential,
        })
    };
    Ok(Fig1 {
        attractive: case(p.depth)?,
        repulsive: case(p.height)?,
        x_max: p.x_max,
    })
}

pub fn fig1_figure(f: &Fig1, stamp: &str) -> FigureBundle {
    let mut panels = Vec::new();
    let cases = [&f.attractive, &f.repulsive];
    for c in cases {
        panels.push(Panel::new(
            format!("V = {} for |x| < a", c.strength),
            "x",
            "V(x) + trap",
            vec![Series::new("potential", c.potential.clone())],
        ));
    }
    for level in 0..2 {
        for c in cases {
            let l = &c.spectrum.levels[level];
            panels.push(Panel::new(
                format!("{} state, E = {:.6}", if level == 0 { "lowest" } else { "second" }, l.energy),
                "x",
                "phi(x)",
                vec![Series::new(format!("n = {level}"), window(&l.state, f.x_max))],
            ));
        }
    }
    FigureBundle {
        name: "fig1".into(),
        title: "Odd relative wave functions in a finite-range well".into(),
        rows: 3,
        cols: 2,
        panels,
        stamp: stamp.into(),
        solver: "finite_range_fd".into(),
        version: VERSION.into(),
    }
}

pub fn fig1_text(f: &Fig1) -> String {
    let mut out = String::new();
    for c in [&f.attractive, &f.repulsive] {
        let e = c.spectrum.energies();
        let _ = writeln!(out, "V = {}: E0 = {:.12}  E1 = {:.12}", c.strength, e[0], e[1]);
    }
    out
}

/// One row of the duality figure.
pub struct Fig2Row {
    pub c: f64,
    /// Ground energy with the three-spike potential at spacing `a`.
    pub fermi_energy: f64,
    /// Ground energy of the zero-range `ε(c)` problem.
    pub fermi_zero_range: f64,
    pub bose_energy: f64,
    pub fermi: Wavefunction,
    pub bose: Wavefunction,
    /// Sup-norm distance on the whole grid between `sgn(x)·fermi` and `bose`.
    pub distance: f64,
    /// The same restricted to `|x| ≥ a`.
    pub distance_outside: f64,
}

pub struct Fig2 {
    pub a: f64,
    pub tol: f64,
    pub rows: Vec<Fig2Row>,
    pub x_max: f64,
}

impl Fig2 {
    pub fn max_distance(&self) -> f64 {
        self.rows.iter().map(|r| r.distance).fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.max_distance() <= self.tol
    }
}

pub fn fig2(p: &Fig2Params) -> Result<Fig2, RunError> {
    let rows = p
        .couplings
        .iter()
        .map(|&c| {
            let eps = solver("coupling", EpsilonCoupling::new(c))?;
            let (trap, grid) = line_trap(p.omega, &CouplingSpec::Epsilon(eps), &p.grid)?;
            let pot = solver("three-spike potential", FiniteRangePotential::epsilon_three_delta(eps, p.a))?;
            let f = solver(
                format!("three-spike solve, c = {c}"),
                solve_finite_range(&trap, &pot, Sector::Fermionic, 1, &grid),
            )?;
            let zr = solver(
                format!("zero-range solve, c = {c}"),
                solve_interface(&trap, &CouplingSpec::Epsilon(eps), Sector::Fermionic, 1, &grid),
            )?;
            let bose_coupling = contact_duality::duality::map_coupling(eps);
            let b = solver(
                format!("boson solve, v = {}", 1.0 / c),
                solve_interface(&trap, &bose_coupling, Sector::Bosonic, 1, &grid),
            )?;
            let fermi = f.levels[0].state.clone();
            let bose = b.levels[0].state.clone();
            let mapped = solver("transform", transform(&fermi))?.with_canonical_sign();
            let (mut distance, mut distance_outside) = (0.0f64, 0.0f64);
            for (i, (x, y)) in mapped.values().iter().zip(bose.values()).enumerate() {
                let d = (x - y).abs();
                distance = distance.max(d);
                if grid.x(i).abs() >= p.a - 1e-12 {
                    distance_outside = distance_outside.max(d);
                }
            }
            Ok(Fig2Row {
                c,
                fermi_energy: f.levels[0].energy,
                fermi_zero_range: zr.levels[0].energy,
                bose_energy: b.levels[0].energy,
                fermi,
                bose,
                distance,
                distance_outside,
            })
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    Ok(Fig2 {
        a: p.a,
        tol: p.tol,
        rows,
        x_max: p.x_max,
    })
}

pub fn fig2_figure(f: &Fig2, stamp: &str) -> FigureBundle {
    let mut panels = Vec::new();
    for r in &f.rows {
        panels.push(Panel::new(
            format!("(a) fermions, c = {}, a = {}", r.c, f.a),
            "x",
            "phi_-(x)",
            vec![Series::new("fermi", window(&r.fermi, f.x_max))],
        ));
        panels.push(Panel::new(
            format!("(b) bosons, v = {}", 1.0 / r.c),
            "x",
            "phi_+(x)",
            vec![Series::new("bose", window(&r.bose, f.x_max))],
        ));
    }
    FigureBundle {
        name: "fig2".into(),
        title: "Fermionic and bosonic ground states related by sgn(x)".into(),
        rows: f.rows.len(),
        cols: 2,
        panels,
        stamp: stamp.into(),
        solver: "finite_range_fd / interface_fd".into(),
        version: VERSION.into(),
    }
}

pub fn fig2_csv(f: &Fig2) -> String {
    let mut out = String::from("c,a,e_fermi_finite_a,e_fermi_zero_range,e_bose,sup_distance,sup_distance_outside,pass\n");
    for r in &f.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:e},{:e},{}",
            r.c,
            f.a,
            r.fermi_energy,
            r.fermi_zero_range,
            r.bose_energy,
            r.distance,
            r.distance_outside,
            r.distance <= f.tol
        );
    }
    out
}

pub fn fig2_text(f: &Fig2) -> String {
    let mut out = format!("three-spike fermions at a = {} against zero-range bosons\n", f.a);
    for r in &f.rows {
        let _ = writeln!(
            out,
            "  c = {}: E_fermi(a) = {:.10}  E_fermi(0) = {:.10}  E_bose = {:.10}  sup|sgn*phi_- - phi_+| = {:.3e} (|x| >= a: {:.3e})",
            r.c, r.fermi_energy, r.fermi_zero_range, r.bose_energy, r.distance, r.distance_outside
        );
    }
    let _ = writeln!(
        out,
        "  tolerance {:e}: {}",
        f.tol,
        if f.pass() { "PASS" } else { "FAIL" }
    );
    out
}

pub fn bethe(p: &BetheParams) -> Result<BetheState, RunError> {
    let coupling = if p.hard_core {
        CouplingSpec::HardCore
    } else {
        solver("coupling", CouplingSpec::delta(p.v))?
    };
    let ring = solver("ring", RingSpec::new(p.particles, p.length, coupling, p.twist))?;
    solver("Bethe solve", ground_state(&ring))
}

pub fn bethe_text(p: &BetheParams, s: &BetheState) -> String {
    let v = if p.hard_core { "inf".to_string() } else { p.v.to_string() };
    let mut out = format!(
        "N = {} bosons, L = {}, v = {v}, twist = {}\n",
        p.particles, p.length, p.twist
    );
    for (i, k) in s.quantum_numbers.iter().zip(&s.roots) {
        let _ = writeln!(out, "  I = {i:>5}  k = {k:.12}");
    }
    let _ = writeln!(
        out,
        "  E = {:.12}  P = {:.12}  residual = {:.1e}",
        s.energy, s.momentum, s.residual
    );
    out
}

pub struct DualNbody {
    pub boson_twist: f64,
    pub energy: f64,
    /// Direct relative-coordinate solve, available for two particles with a
    /// real (periodic or antiperiodic) fermionic twist.
    pub direct: Option<f64>,
}

pub fn dual_nbody(p: &DualNbodyParams) -> Result<DualNbody, RunError> {
    let c = solver("coupling", EpsilonCoupling::new(p.c))?;
    let energy = solver(
        "dual Bethe solve",
        dual_fermion_energy(p.particles, p.length, p.fermion_twist, c),
    )?;
    let boson_twist = solver("twist", bosonic_twist(p.particles, p.fermion_twist))?.lambda_plus;
    let t = p.fermion_twist.rem_euclid(2.0 * PI);
    let real_twist = t.abs() < 1e-12 || (t - PI).abs() < 1e-12;
    let direct = if p.particles == 2 && real_twist {
        let l = p.length;
        Some(solver(
            "direct two-body solve",
            two_body_ring_energy(l, &CouplingSpec::Epsilon(c), t, Statistics::Fermions, default_points_per_side(l / 2.0)),
        )?)
    } else {
        None
    };
    Ok(DualNbody {
        boson_twist,
        energy,
        direct,
    })
}

pub fn dual_nbody_csv(p: &DualNbodyParams, d: &DualNbody) -> String {
    let v = if p.c == 0.0 { f64::INFINITY } else { 1.0 / p.c };
    format!(
        "particles,length,c,v,fermion_twist,boson_twist,energy,direct\n{},{},{},{},{},{},{},{}\n",
        p.particles,
        p.length,
        p.c,
        v,
        p.fermion_twist,
        d.boson_twist,
        d.energy,
        d.direct.map(|e| e.to_string()).unwrap_or_default()
    )
}

pub fn dual_nbody_text(p: &DualNbodyParams, d: &DualNbody) -> String {
    let mut out = format!(
        "N = {} epsilon(c = {}) fermions, L = {}, fermionic twist {} -> bosonic twist {}\n  E = {:.12}\n",
        p.particles, p.c, p.length, p.fermion_twist, d.boson_twist, d.energy
    );
    if let Some(e) = d.direct {
        let _ = writeln!(out, "  direct relative solve: {e:.12} (difference {:.2e})", (e - d.energy).abs());
    }
    out
}

pub fn duality_figure(p: &DualityParams, r: &DualityReport, stamp: &str) -> Result<FigureBundle, RunError> {
    // Re-solve for the plotted states; the report keeps only numbers.
    let c = solver("coupling", EpsilonCoupling::new(p.c))?;
    let trap = solver("trap", TrapSpec::truncated_line(p.omega, &CouplingSpec::Epsilon(c)))?;
    let grid = solver("grid", trap.default_grid())?;
    let fermi = solver(
        "interface solve",
        solve_interface(&trap, &CouplingSpec::Epsilon(c), Sector::Fermionic, r.levels.len(), &grid),
    )?;
    let bose = solver(
        "interface solve",
        solve_interface(
            &trap,
            &contact_duality::duality::map_coupling(c),
            Sector::Bosonic,
            r.levels.len(),
            &grid,
        ),
    )?;
    let x_max = trap.half_width().min(6.0);
    let panels = fermi
        .levels
        .iter()
        .zip(&bose.levels)
        .enumerate()
        .map(|(i, (f, b))| {
            let mapped = solver("transform", transform(&f.state))?.with_canonical_sign();
            Ok(Panel::new(
                format!("level {i}, E = {:.6}", r.levels[i].fermi),
                "x",
                "phi(x)",
                vec![
                    Series::new("sgn(x) phi_-", window(&mapped, x_max)),
                    Series::new("phi_+", window(&b.state, x_max)),
                ],
            ))
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    Ok(FigureBundle {
        name: "duality".into(),
        title: format!("epsilon(c = {}) fermions and delta(v = {}) bosons", r.c, r.v),
        rows: panels.len(),
        cols: 1,
        panels,
        stamp: stamp.into(),
        solver: "interface_fd".into(),
        version: VERSION.into(),
    })
}

pub fn write_state(psi: &Wavefunction) -> Vec<u8> {
    let mut buf = Vec::new();
    write_wavefunction_csv(psi, &mut buf).expect("writing to memory cannot fail");
    buf
}
