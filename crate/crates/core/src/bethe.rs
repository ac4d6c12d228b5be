//! Bethe-ansatz eigenstates of `N` bosons on a ring of length `L`,
//!
//! ```text
//! H = Σ_i −½ ∂²/∂x_i² + v Σ_{i>j} δ(x_i − x_j),   Ψ(.., x_i + L, ..) = e^{iλ} Ψ,
//! ```
//!
//! for `v ≥ 0`. The quasi-momenta solve
//!
//! ```text
//! L k_j = 2π I_j + λ − Σ_{l≠j} 2 arctan((k_j − k_l)/v)
//! ```
//!
//! and `E = ½ Σ k_j²`. With the ½ in the kinetic term the arctan scale is
//! `v` itself; two particles reduce to `q tan(qL/2) = v/2`, the relative
//! problem `−φ'' + v δ(x) φ` on the ring.

use std::f64::consts::TAU;
use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::duality::bosonic_twist;
use crate::error::{Error, Result};
use crate::point_interaction::{CouplingSpec, EpsilonCoupling};

/// Target for `max_j |F_j|`.
pub const RESIDUAL_TOL: f64 = 1e-12;

/// Newton iterations allowed per solve.
pub const MAX_ITERATIONS: usize = 200;

/// Below this coupling the roots are reached by continuation from here.
pub const CONTINUATION_START: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingSpec {
    pub particles: usize,
    pub length: f64,
    /// `Delta(v)` with `v ≥ 0`, or `HardCore`.
    pub coupling: CouplingSpec,
    pub twist: f64,
}

impl RingSpec {
    pub fn new(particles: usize, length: f64, coupling: CouplingSpec, twist: f64) -> Result<Self> {
        if particles < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 particles, got {particles}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidInput(format!("ring length must be positive, got {length}")));
        }
        if !twist.is_finite() {
            return Err(Error::InvalidInput("twist must be finite".into()));
        }
        match coupling {
            CouplingSpec::HardCore => {}
            CouplingSpec::Delta(v) if v.v() >= 0.0 => {}
            CouplingSpec::Delta(v) => {
                return Err(Error::UnsupportedRegime(format!(
                    "attractive coupling v = {} needs string solutions",
                    v.v()
                )))
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "ring bosons take a delta or hard-core coupling, got {}",
                    other.label()
                )))
            }
        }
        Ok(Self {
            particles,
            length,
            coupling,
            twist,
        })
    }

    /// `v`, infinite for the hard core.
    pub fn strength(&self) -> f64 {
        match self.coupling {
            CouplingSpec::Delta(v) => v.v(),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheState {
    pub roots: Vec<f64>,
    pub quantum_numbers: Vec<f64>,
    pub energy: f64,
    pub momentum: f64,
    /// `max_j |F_j|` at the returned roots.
    pub residual: f64,
}

impl BetheState {
    /// `j,I,k` rows, then `summary,E,P`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "j,I,k")?;
        for (j, (i, k)) in self.quantum_numbers.iter().zip(&self.roots).enumerate() {
            writeln!(out, "{j},{i},{k}")?;
        }
        writeln!(out, "summary,{},{}", self.energy, self.momentum)
    }
}

/// Centered ground-state quantum numbers: integers for odd `N`,
/// half-integers for even `N`, shifted by whole units so the free momenta
/// `(2π I + λ)/L` straddle zero.
pub fn ground_quantum_numbers(particles: usize, twist: f64) -> Vec<f64> {
    let shift = -(twist / TAU).round();
    let mid = (particles as f64 - 1.0) / 2.0;
    (0..particles).map(|j| j as f64 - mid + shift).collect()
}

fn check_quantum_numbers(particles: usize, qn: &[f64]) -> Result<()> {
    if qn.len() != particles {
        return Err(Error::InvalidInput(format!(
            "{} quantum numbers for {particles} particles",
            qn.len()
        )));
    }
    let half_odd = particles.is_multiple_of(2);
    for &i in qn {
        let twice = 2.0 * i;
        let ok = twice.is_finite() && twice == twice.round() && (twice.rem_euclid(2.0) == 1.0) == half_odd;
        if !ok {
            return Err(Error::InvalidInput(format!(
                "quantum number {i} must be {} for N = {particles}",
                if half_odd { "a half-odd integer" } else { "an integer" }
            )));
        }
    }
    if qn.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("quantum numbers must be distinct and increasing".into()));
    }
    Ok(())
}

/// Roots for the given quantum numbers by damped Newton iteration from the
/// free-fermion momenta.
pub fn solve_roots(ring: &RingSpec, quantum_numbers: &[f64]) -> Result<BetheState> {
    check_quantum_numbers(ring.particles, quantum_numbers)?;
    let l = ring.length;
    let free: Vec<f64> = quantum_numbers.iter().map(|i| (TAU * i + ring.twist) / l).collect();
    let v = ring.strength();
    let roots = if v.is_infinite() {
        free
    } else if v == 0.0 {
        // Non-interacting bosons all occupy the lowest twisted momentum.
        let k0 = free.iter().sum::<f64>() / free.len() as f64;
        vec![k0; ring.particles]
    } else if v >= CONTINUATION_START {
        newton(l, ring.twist, v, quantum_numbers, free)?
    } else {
        let mut k = newton(l, ring.twist, CONTINUATION_START, quantum_numbers, free)?;
        let mut u = CONTINUATION_START;
        while u > v {
            u = (0.5 * u).max(v);
            k = newton(l, ring.twist, u, quantum_numbers, k)?;
        }
        k
    };
    let residual = if v.is_finite() && v > 0.0 {
        max_abs(&residuals(l, ring.twist, v, quantum_numbers, &roots))
    } else {
        0.0
    };
    let state = BetheState {
        energy: 0.5 * roots.iter().map(|k| k * k).sum::<f64>(),
        momentum: roots.iter().sum(),
        roots,
        quantum_numbers: quantum_numbers.to_vec(),
        residual,
    };
    check_state(ring, &state)?;
    Ok(state)
}

pub fn ground_state(ring: &RingSpec) -> Result<BetheState> {
    solve_roots(ring, &ground_quantum_numbers(ring.particles, ring.twist))
}

/// Ground energy of `N` fermions with `ε(c)` contacts and fermionic twist
/// `λ₋`, obtained from the dual bosons with `v = 1/c` and `λ₊ = λ₋ − (N−1)π`.
pub fn dual_fermion_energy(particles: usize, length: f64, fermion_twist: f64, c: EpsilonCoupling) -> Result<f64> {
    if c.c() < 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "c = {} maps to attractive bosons, whose ground states need string solutions",
            c.c()
        )));
    }
    let twist = bosonic_twist(particles, fermion_twist)?.lambda_plus;
    let coupling = crate::duality::map_coupling(c);
    Ok(ground_state(&RingSpec::new(particles, length, coupling, twist)?)?.energy)
}

fn residuals(l: f64, twist: f64, v: f64, qn: &[f64], k: &[f64]) -> Vec<f64> {
    (0..k.len())
        .map(|j| {
            let scatter: f64 = (0..k.len())
                .filter(|&m| m != j)
                .map(|m| 2.0 * ((k[j] - k[m]) / v).atan())
                .sum();
            l * k[j] + scatter - TAU * qn[j] - twist
        })
        .collect()
}

fn jacobian(l: f64, v: f64, k: &[f64]) -> DMatrix<f64> {
    let n = k.len();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        jac[(j, j)] = l;
        for m in 0..n {
            if m != j {
                let d = k[j] - k[m];
                let g = 2.0 * v / (v * v + d * d);
                jac[(j, j)] += g;
                jac[(j, m)] = -g;
            }
        }
    }
    jac
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn newton(l: f64, twist: f64, v: f64, qn: &[f64], start: Vec<f64>) -> Result<Vec<f64>> {
    let mut k = start;
    let mut f = residuals(l, twist, v, qn, &k);
    let mut res = max_abs(&f);
    for _ in 0..MAX_ITERATIONS {
        if res <= RESIDUAL_TOL {
            return Ok(k);
        }
        // The Jacobian is a graph Laplacian plus L·1, hence positive definite.
        let chol = jacobian(l, v, &k).cholesky().ok_or_else(|| {
            Error::SolverInconsistency("Bethe Jacobian lost positive definiteness".into())
        })?;
        let step = chol.solve(&DVector::from_vec(f.iter().map(|x| -x).collect()));
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = k.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            let ft = residuals(l, twist, v, qn, &trial);
            let rt = max_abs(&ft);
            if rt < res || t < 1e-10 {
                if rt >= res {
                    // No descent even for a tiny step: rounding floor.
                    return if res <= 10.0 * RESIDUAL_TOL {
                        Ok(k)
                    } else {
                        Err(Error::Convergence {
                            iterations: MAX_ITERATIONS,
                            residual: res,
                        })
                    };
                }
                k = trial;
                f = ft;
                res = rt;
                break;
            }
            t *= 0.5;
        }
    }
    if res <= RESIDUAL_TOL {
        Ok(k)
    } else {
        Err(Error::Convergence {
            iterations: MAX_ITERATIONS,
            residual: res,
        })
    }
}

fn check_state(ring: &RingSpec, s: &BetheState) -> Result<()> {
    let expected = (TAU * s.quantum_numbers.iter().sum::<f64>() + ring.particles as f64 * ring.twist) / ring.length;
    if (s.momentum - expected).abs() > 1e-10 * expected.abs().max(1.0) {
        return Err(Error::SolverInconsistency(format!(
            "total momentum {} differs from the quantized value {expected}",
            s.momentum
        )));
    }
    if ring.strength() > 0.0 && s.roots.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::SolverInconsistency("repulsive roots are not strictly increasing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{two_body_ring_energy, Statistics};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn ring(n: usize, l: f64, v: f64, twist: f64) -> RingSpec {
        let c = if v.is_infinite() {
            CouplingSpec::HardCore
        } else {
            CouplingSpec::delta(v).unwrap()
        };
        RingSpec::new(n, l, c, twist).unwrap()
    }

    #[test]
    fn tonks_girardeau_three_particles() {
        let s = ground_state(&ring(3, TAU, f64::INFINITY, 0.0)).unwrap();
        assert_eq!(s.quantum_numbers, vec![-1.0, 0.0, 1.0]);
        for (k, e) in s.roots.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((k - e).abs() < 1e-14);
        }
        assert!((s.energy - 1.0).abs() < 1e-12);
        // Large finite v approaches the same roots.
        let s = ground_state(&ring(3, TAU, 1e8, 0.0)).unwrap();
        assert!((s.energy - 1.0).abs() < 1e-6);
    }

    #[test]
    fn tonks_girardeau_four_particles() {
        let s = ground_state(&ring(4, 10.0, f64::INFINITY, 0.0)).unwrap();
        assert_eq!(s.quantum_numbers, vec![-1.5, -0.5, 0.5, 1.5]);
        assert!((s.energy - 10.0 * PI * PI / 100.0).abs() < 1e-12);
    }

    #[test]
    fn weak_coupling_condenses() {
        for v in [1e-6, 1e-3, 0.0] {
            let s = ground_state(&ring(2, 10.0, v, 0.0)).unwrap();
            assert!(s.energy < 2.0 * v.max(1e-12), "{v}: {}", s.energy);
            assert!(s.roots.iter().all(|k| k.abs() < 1e-2));
        }
    }

    #[test]
    fn two_particle_oracle() {
        for v in [0.5, 1.0, 2.0, 8.0] {
            let s = ground_state(&ring(2, 10.0, v, 0.0)).unwrap();
            assert!(s.residual <= RESIDUAL_TOL);
            let direct =
                two_body_ring_energy(10.0, &CouplingSpec::delta(v).unwrap(), 0.0, Statistics::Bosons, 2000)
                    .unwrap();
            assert!((s.energy - direct).abs() < 1e-4, "v = {v}: {} vs {direct}", s.energy);
            // Closed form: q tan(qL/2) = v/2 with E = q².
            let q = (s.roots[1] - s.roots[0]) / 2.0;
            assert!((q * (q * 5.0).tan() - v / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dual_fermions() {
        // c = 1, antiperiodic fermions against the direct relative solve.
        let e = dual_fermion_energy(2, 10.0, PI, EpsilonCoupling::new(1.0).unwrap()).unwrap();
        let direct = two_body_ring_energy(10.0, &CouplingSpec::epsilon(1.0).unwrap(), PI, Statistics::Fermions, 2000)
            .unwrap();
        assert!((e - direct).abs() < 1e-4, "{e} vs {direct}");
        let hard = dual_fermion_energy(2, 10.0, PI, EpsilonCoupling::new(0.0).unwrap()).unwrap();
        assert!((hard - (PI / 10.0).powi(2)).abs() < 1e-12);
        let weak = dual_fermion_energy(2, 10.0, PI, EpsilonCoupling::new(1e6).unwrap()).unwrap();
        assert!(weak.abs() < 1e-5);
        assert!(matches!(
            dual_fermion_energy(2, 10.0, PI, EpsilonCoupling::new(-1.0).unwrap()),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            RingSpec::new(2, 10.0, CouplingSpec::delta(-1.0).unwrap(), 0.0),
            Err(Error::UnsupportedRegime(_))
        ));
        assert!(RingSpec::new(1, 10.0, CouplingSpec::HardCore, 0.0).is_err());
        let r = ring(2, 10.0, 1.0, 0.0);
        assert!(solve_roots(&r, &[0.0, 1.0]).is_err());
        assert!(solve_roots(&r, &[0.5, -0.5]).is_err());
        assert!(solve_roots(&r, &[0.5]).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = ground_state(&ring(3, TAU, f64::INFINITY, 0.0)).unwrap();
        let mut out = Vec::new();
        s.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "j,I,k");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("summary,1"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn energy_grows_with_coupling(n in 2usize..5, l in 2.0f64..20.0, v in 0.01f64..20.0, f in 1.01f64..4.0) {
            let a = ground_state(&ring(n, l, v, 0.0)).unwrap();
            let b = ground_state(&ring(n, l, v * f, 0.0)).unwrap();
            let hc = ground_state(&ring(n, l, f64::INFINITY, 0.0)).unwrap();
            prop_assert!(a.energy <= b.energy + 1e-12);
            prop_assert!(b.energy <= hc.energy + 1e-12);
            prop_assert!(a.roots.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn observables_are_periodic_in_twist(n in 2usize..5, l in 2.0f64..20.0, v in 0.05f64..10.0, t in -3.0f64..3.0, m in -2i32..3) {
            let a = ground_state(&ring(n, l, v, t)).unwrap();
            let b = ground_state(&ring(n, l, v, t + TAU * m as f64)).unwrap();
            prop_assert!((a.energy - b.energy).abs() < 1e-10 * a.energy.max(1.0));
            for (x, y) in a.roots.iter().zip(&b.roots) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
