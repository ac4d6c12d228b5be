use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_interaction::{BoundaryData, Parity};

/// Uniform grid on `[−W, W]` with the origin stored twice.
///
/// Index layout for `n = points_per_side`: `0..n` hold `x = −W, …, −h`,
/// index `n` is `0−`, index `n + 1` is `0+`, and `n + 2..2n + 2` hold
/// `x = h, …, W`. Reflection `x → −x` maps index `i` to `2n + 1 − i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    half_width: f64,
    points_per_side: usize,
}

impl Grid {
    pub fn new(half_width: f64, points_per_side: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidInput(format!(
                "grid half-width must be positive, got {half_width}"
            )));
        }
        if points_per_side < 2 {
            return Err(Error::Resolution(format!(
                "need at least 2 points per side, got {points_per_side}"
            )));
        }
        Ok(Self {
            half_width,
            points_per_side,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_side(&self) -> usize {
        self.points_per_side
    }

    pub fn spacing(&self) -> f64 {
        self.half_width / self.points_per_side as f64
    }

    pub fn len(&self) -> usize {
        2 * self.points_per_side + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, i: usize) -> f64 {
        let n = self.points_per_side;
        let h = self.spacing();
        if i <= n {
            -((n - i) as f64) * h
        } else {
            (i - n - 1) as f64 * h
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn mirror(&self, i: usize) -> usize {
        self.len() - 1 - i
    }

    pub fn origin_left(&self) -> usize {
        self.points_per_side
    }

    pub fn origin_right(&self) -> usize {
        self.points_per_side + 1
    }

    /// Index of `x = k h` (`k = 0` is `0+`).
    pub fn right_index(&self, k: usize) -> usize {
        self.points_per_side + 1 + k
    }

    /// Index of `x = −k h` (`k = 0` is `0−`).
    pub fn left_index(&self, k: usize) -> usize {
        self.points_per_side - k
    }

    /// Same extent, twice the points.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            points_per_side: 2 * self.points_per_side,
        }
    }

    /// Trapezoid weights. The zero-width `[0−, 0+]` interval carries nothing.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.len()];
        for i in [0, self.origin_left(), self.origin_right(), self.len() - 1] {
            w[i] = 0.5 * h;
        }
        w
    }
}

/// Real wave function sampled on a doubled-origin [`Grid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wavefunction {
    grid: Grid,
    values: Vec<f64>,
    /// `(φ'(0−), φ'(0+))` as produced by the solver, when it has them.
    origin_slopes: Option<(f64, f64)>,
    norm: f64,
}

impl Wavefunction {
    pub fn new(grid: Grid, values: Vec<f64>, origin_slopes: Option<(f64, f64)>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        let mut psi = Self {
            grid,
            values,
            origin_slopes,
            norm: 0.0,
        };
        psi.norm = psi.inner(&psi).sqrt();
        Ok(psi)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn origin_slopes(&self) -> Option<(f64, f64)> {
        self.origin_slopes
    }

    pub fn left_limit(&self) -> BoundaryData {
        BoundaryData::new(
            self.values[self.grid.origin_left()],
            self.origin_slopes.map_or(f64::NAN, |s| s.0),
        )
    }

    pub fn right_limit(&self) -> BoundaryData {
        BoundaryData::new(
            self.values[self.grid.origin_right()],
            self.origin_slopes.map_or(f64::NAN, |s| s.1),
        )
    }

    /// Trapezoid inner product.
    pub fn inner(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        self.grid
            .weights()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm;
        if n > 0.0 {
            self.values.iter_mut().for_each(|v| *v /= n);
            if let Some((l, r)) = self.origin_slopes.as_mut().map(|s| (&mut s.0, &mut s.1)) {
                *l /= n;
                *r /= n;
            }
            self.norm = self.inner(&self).sqrt();
        }
        self
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max_i |φ(x_i) − s φ(−x_i)|`, with `s = ±1` for even/odd.
    pub fn parity_defect(&self, parity: Parity) -> f64 {
        let s = parity.sign();
        (0..self.values.len())
            .map(|i| (self.values[i] - s * self.values[self.grid.mirror(i)]).abs())
            .fold(0.0, f64::max)
    }

    /// Flips the overall sign so the first clearly non-zero sample right of
    /// the origin is positive.
    pub fn with_canonical_sign(mut self) -> Self {
        let threshold = 1e-8 * self.sup_norm();
        let first = (self.grid.origin_right()..self.values.len())
            .map(|i| self.values[i])
            .find(|v| v.abs() > threshold);
        if first.is_some_and(|v| v < 0.0) {
            self.values.iter_mut().for_each(|v| *v = -*v);
            if let Some(s) = self.origin_slopes.as_mut() {
                *s = (-s.0, -s.1);
            }
        }
        self
    }

    /// Multiplies by `sgn(x)`, using the stored origin limits.
    pub fn sign_flipped(&self) -> Self {
        let mut values = self.values.clone();
        for v in &mut values[..=self.grid.origin_left()] {
            *v = -*v;
        }
        Self {
            grid: self.grid,
            values,
            origin_slopes: self.origin_slopes.map(|(l, r)| (-l, r)),
            norm: self.norm,
        }
    }

    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidInput("wave functions live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Right-limit slope estimated from the samples alone (fourth-order
    /// one-sided difference), independent of what the solver reported.
    pub fn right_slope_from_samples(&self) -> f64 {
        let h = self.grid.spacing();
        let f = |k: usize| self.values[self.grid.right_index(k)];
        (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / (12.0 * h)
    }
}
