//! Finite-difference operators for `−d²/dx² + V`.
//!
//! Away from the origin every row is the three-point Laplacian. Boundary and
//! interface conditions enter through ghost points: a condition on
//! `φ'` at a node is imposed by the centred difference `(φ₊ − ghost)/(2h)`,
//! and the ghost is then eliminated from that node's equation. This keeps the
//! scheme second-order and the matrix tridiagonal; the price is a factor of
//! two between the two couplings of each ghost row, which the diagonal
//! similarity in [`Tridiagonal::symmetrize`] absorbs (the implied weights are
//! the trapezoid weights).

use super::grid::{Grid, Wavefunction};
use super::tridiag::Tridiagonal;
use super::FarEnd;
use crate::error::Result;
use crate::point_interaction::{ConnectionMatrix, Contact, Parity, SectorCondition};

/// Half-line `[0+, W]` problem for one parity sector.
pub(crate) struct HalfLine {
    pub op: Tridiagonal,
    /// `k` of the first unknown: 1 when `φ(0+) = 0` is imposed, else 0.
    pub first: usize,
    pub n: usize,
    pub h: f64,
    pub origin: SectorCondition,
}

impl HalfLine {
    /// `potential[k]` is `V(k h)` for `k = 0..=n`.
    pub fn build(grid: &Grid, potential: &[f64], origin: SectorCondition, far: FarEnd) -> Self {
        let n = grid.points_per_side();
        let h = grid.spacing();
        let ih2 = 1.0 / (h * h);
        let first = usize::from(origin.is_dirichlet());
        let last = match far {
            FarEnd::Dirichlet => n - 1,
            FarEnd::Neumann => n,
        };
        let dim = last + 1 - first;
        let mut op = Tridiagonal::zeros(dim);
        for j in 0..dim {
            let k = first + j;
            op.set(j, j, 2.0 * ih2 + potential[k]);
            if j > 0 {
                op.set(j, j - 1, -ih2);
            }
            if j + 1 < dim {
                op.set(j, j + 1, -ih2);
            }
        }
        if let Some(kappa) = origin.log_derivative() {
            // φ'(0+) = κ φ(0+); ghost at −h is φ(h) − 2hκ φ(0).
            op.diag[0] += 2.0 * kappa / h;
            if dim > 1 {
                op.set(0, 1, -2.0 * ih2);
            }
        }
        if far == FarEnd::Neumann && dim > 1 {
            op.set(dim - 1, dim - 2, -2.0 * ih2);
        }
        Self {
            op,
            first,
            n,
            h,
            origin,
        }
    }

    /// Samples at `x = k h`, `k = 0..=n`.
    pub fn samples(&self, y: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.n + 1];
        for (j, v) in y.iter().enumerate() {
            r[self.first + j] = *v;
        }
        r
    }

    /// Right-limit slope implied by the discretisation.
    pub fn origin_slope(&self, r: &[f64]) -> f64 {
        match self.origin.log_derivative() {
            Some(kappa) => kappa * r[0],
            None => (4.0 * r[1] - r[2]) / (2.0 * self.h),
        }
    }
}

/// Mirrors right half-line samples into a full doubled-origin wave function.
pub(crate) fn sector_wavefunction(
    grid: &Grid,
    right: &[f64],
    parity: Parity,
    right_slope: Option<f64>,
) -> Result<Wavefunction> {
    let s = parity.sign();
    let mut values = vec![0.0; grid.len()];
    for (k, v) in right.iter().enumerate() {
        values[grid.right_index(k)] = *v;
        values[grid.left_index(k)] = s * v;
    }
    // φ'(−x) = −s φ'(x).
    let slopes = right_slope.map(|q| (-s * q, q));
    Wavefunction::new(grid.to_owned(), values, slopes)
}

/// Full line `[−W, W]`, Dirichlet walls, doubled origin carrying a point
/// interaction.
pub(crate) struct FullLine {
    pub op: Tridiagonal,
    grid: Grid,
    origin: Origin,
    potential0: f64,
}

#[derive(Clone, Copy)]
enum Origin {
    /// Two unknowns `φ(0−), φ(0+)`, coupled through `m12 ≠ 0`.
    Split(ConnectionMatrix),
    /// `m12 = 0`: `φ(0+) = m11 φ(0−)` leaves one unknown.
    Tied(ConnectionMatrix),
    /// Hard core: both limits vanish and the halves decouple.
    Wall,
}

impl FullLine {
    /// `potential(x)` must be even.
    pub fn build(grid: &Grid, potential: impl Fn(f64) -> f64, contact: Contact) -> Self {
        let n = grid.points_per_side();
        let h = grid.spacing();
        let ih2 = 1.0 / (h * h);
        let origin = match contact {
            Contact::HardCore => Origin::Wall,
            Contact::Matrix(m) if m.m12 == 0.0 => Origin::Tied(m),
            Contact::Matrix(m) => Origin::Split(m),
        };
        let n_origin = match origin {
            Origin::Split(_) => 2,
            Origin::Tied(_) => 1,
            Origin::Wall => 0,
        };
        let side = n - 1;
        let dim = 2 * side + n_origin;
        let mut op = Tridiagonal::zeros(dim);
        let v0 = potential(0.0);

        // Interior rows; origin rows are overwritten below.
        for j in 0..dim {
            let x = if j < side {
                -((side - j) as f64) * h
            } else if j >= side + n_origin {
                (j - side - n_origin + 1) as f64 * h
            } else {
                0.0
            };
            op.set(j, j, 2.0 * ih2 + potential(x));
            if j > 0 {
                op.set(j, j - 1, -ih2);
            }
            if j + 1 < dim {
                op.set(j, j + 1, -ih2);
            }
        }

        let l0 = side;
        match origin {
            Origin::Split(m) => {
                let r0 = side + 1;
                let k = 2.0 / (h * m.m12);
                op.set(l0, l0, 2.0 * ih2 + m.m11 * k + v0);
                op.set(l0, l0 - 1, -2.0 * ih2);
                op.set(l0, r0, -k);
                op.set(r0, r0, 2.0 * ih2 + m.m22 * k + v0);
                op.set(r0, r0 + 1, -2.0 * ih2);
                op.set(r0, l0, -k);
            }
            Origin::Tied(m) => {
                let s = m.m11 + m.m22;
                op.set(l0, l0, 2.0 * (s + h * m.m21) / (s * h * h) + v0);
                op.set(l0, l0 - 1, -2.0 * m.m22 / s * ih2);
                op.set(l0, l0 + 1, -2.0 / s * ih2);
                op.set(l0 + 1, l0, -m.m11 * ih2);
            }
            Origin::Wall => {
                op.set(side - 1, side, 0.0);
                op.set(side, side - 1, 0.0);
            }
        }
        Self {
            op,
            grid: *grid,
            origin,
            potential0: v0,
        }
    }

    pub fn wavefunction(&self, y: &[f64], energy: f64) -> Result<Wavefunction> {
        let g = &self.grid;
        let n = g.points_per_side();
        let h = g.spacing();
        let side = n - 1;
        let mut values = vec![0.0; g.len()];
        values[1..=side].copy_from_slice(&y[..side]);
        let (origin_count, slopes) = match self.origin {
            Origin::Split(m) => {
                let (l, r) = (y[side], y[side + 1]);
                values[g.origin_left()] = l;
                values[g.origin_right()] = r;
                let dl = (r - m.m11 * l) / m.m12;
                let dr = -l / m.m12 + m.m22 / m.m12 * r;
                (2, (dl, dr))
            }
            Origin::Tied(m) => {
                let p = y[side];
                values[g.origin_left()] = p;
                values[g.origin_right()] = m.m11 * p;
                let left_neighbour = if side > 0 { y[side - 1] } else { 0.0 };
                let dl = (2.0 * p - 2.0 * left_neighbour - h * h * (energy - self.potential0) * p)
                    / (2.0 * h);
                (1, (dl, m.m21 * p + m.m22 * dl))
            }
            Origin::Wall => {
                let dl = -(4.0 * y[side - 1] - y[side - 2]) / (2.0 * h);
                let dr = (4.0 * y[side] - y[side + 1]) / (2.0 * h);
                (0, (dl, dr))
            }
        };
        for k in 1..n {
            values[g.right_index(k)] = y[side + origin_count + k - 1];
        }
        Wavefunction::new(*g, values, Some(slopes))
    }
}

/// Single-valued full-line operator for a regular potential given on the
/// half-line samples `x = k h` (mirrored to the left).
pub(crate) fn plain_full_line(grid: &Grid, potential: &[f64]) -> Tridiagonal {
    let n = grid.points_per_side();
    let h = grid.spacing();
    let ih2 = 1.0 / (h * h);
    let dim = 2 * n - 1;
    let mut op = Tridiagonal::zeros(dim);
    for j in 0..dim {
        let k = (j as isize - (n as isize - 1)).unsigned_abs();
        op.set(j, j, 2.0 * ih2 + potential[k]);
        if j > 0 {
            op.set(j, j - 1, -ih2);
        }
        if j + 1 < dim {
            op.set(j, j + 1, -ih2);
        }
    }
    op
}

pub(crate) fn plain_full_line_wavefunction(grid: &Grid, y: &[f64]) -> Result<Wavefunction> {
    let n = grid.points_per_side();
    let mut values = vec![0.0; grid.len()];
    for (j, v) in y.iter().enumerate() {
        // j = n − 1 is the origin.
        if j < n - 1 {
            values[j + 1] = *v;
        } else if j == n - 1 {
            values[grid.origin_left()] = *v;
            values[grid.origin_right()] = *v;
        } else {
            values[grid.right_index(j - (n - 1))] = *v;
        }
    }
    Wavefunction::new(*grid, values, None)
}
