//! Tridiagonal eigenproblems: Sturm-sequence bisection for the eigenvalues,
//! inverse iteration for the vectors.

use crate::error::{Error, Result};

/// Levels closer than this are flagged as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    pivmin: f64,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len() + 1, diag.len());
        let mut t = Self {
            diag,
            off,
            pivmin: 0.0,
        };
        let (lo, hi) = t.gershgorin();
        t.pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * lo.abs().max(hi.abs()) * 1e-3);
        t
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = self.pivmin;
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (zero-based), to a few ulps of the
    /// spectral radius.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        lo -= 1e-12 * scale;
        hi += 1e-12 * scale;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit-norm eigenvector for `lambda`, orthogonal to `against`.
    pub fn eigenvector(&self, lambda: f64, against: &[&[f64]]) -> Vec<f64> {
        let lu = ShiftedLu::factor(self, lambda);
        let n = self.dim();
        // Deterministic, non-symmetric start so both parities get seeded.
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).sin())
            .collect();
        for _ in 0..4 {
            for v in against {
                let dot: f64 = x.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(v.iter()).for_each(|(a, b)| *a -= dot * b);
            }
            normalize(&mut x);
            lu.solve(&mut x);
            normalize(&mut x);
        }
        for v in against {
            let dot: f64 = x.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            x.iter_mut().zip(v.iter()).for_each(|(a, b)| *a -= dot * b);
        }
        normalize(&mut x);
        x
    }

    /// The `count` lowest eigenpairs, ascending.
    pub fn lowest_eigenpairs(&self, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
        if count > self.dim() {
            return Err(Error::Capacity {
                requested: count,
                available: self.dim(),
            });
        }
        let values: Vec<f64> = (0..count).map(|k| self.eigenvalue(k)).collect();
        let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(count);
        for (k, &lambda) in values.iter().enumerate() {
            let cluster: Vec<&[f64]> = (0..k)
                .filter(|&j| (values[j] - lambda).abs() < DEGENERACY_GAP)
                .map(|j| pairs[j].1.as_slice())
                .collect();
            let v = self.eigenvector(lambda, &cluster);
            pairs.push((lambda, v));
        }
        Ok(pairs)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

/// LU factorisation of `T − σI` with partial pivoting (two super-diagonals).
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, sigma: f64) -> Self {
        let n = t.dim();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - sigma).collect();
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let norm = t.gershgorin().0.abs().max(t.gershgorin().1.abs()).max(1.0);
        let tiny = f64::EPSILON * norm;

        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for v in d.iter_mut() {
            if v.abs() < tiny {
                *v = tiny.copysign(*v);
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        // Inverse iteration amplifies by up to 1/ε; keep the vector finite.
        let m = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m > 1e200 {
            b.iter_mut().for_each(|v| *v /= m);
        }
    }
}

/// General real tridiagonal matrix, `lower[i] = A[i+1][i]`,
/// `upper[i] = A[i][i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            upper: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Sets `A[i][j]` for `|i − j| ≤ 1`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        match j as isize - i as isize {
            0 => self.diag[i] = value,
            1 => self.upper[i] = value,
            -1 => self.lower[j] = value,
            _ => panic!("({i}, {j}) is outside the tridiagonal band"),
        }
    }

    /// Diagonal similarity `A = D T D⁻¹` onto a symmetric `T`.
    ///
    /// Requires every product `A[i][i+1]·A[i+1][i]` to be positive (or both
    /// factors zero); that is also what makes every eigenvalue real. Returns
    /// `T` and the diagonal of `D`, so eigenvectors map back as `x = D y`.
    pub fn symmetrize(&self) -> Result<(SymTridiagonal, Vec<f64>)> {
        let n = self.dim();
        let mut scale = vec![1.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            let (u, l) = (self.upper[i], self.lower[i]);
            let product = u * l;
            if u == 0.0 && l == 0.0 {
                scale[i + 1] = scale[i];
            } else if product > 0.0 {
                off[i] = u.signum() * product.sqrt();
                scale[i + 1] = scale[i] * (l / u).sqrt();
            } else {
                return Err(Error::NonReal { row: i, product });
            }
        }
        Ok((SymTridiagonal::new(self.diag.clone(), off), scale))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Lowest eigenpairs of the (real-spectrum) nonsymmetric matrix. Vectors
    /// come back in the original basis with unit Euclidean norm.
    pub fn lowest_eigenpairs(&self, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
        let (sym, scale) = self.symmetrize()?;
        let mut pairs = sym.lowest_eigenpairs(count)?;
        for (_, v) in pairs.iter_mut() {
            v.iter_mut().zip(&scale).for_each(|(a, d)| *a *= d);
            normalize(v);
        }
        Ok(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dirichlet Laplacian `tridiag(−1, 2, −1)`; eigenvalues
    /// `2 − 2 cos(kπ/(n+1))`.
    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        for k in 0..n {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k) - exact).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn eigenvectors_are_accurate_and_orthonormal() {
        let t = laplacian(200);
        let pairs = t.lowest_eigenpairs(5).unwrap();
        for (i, (lambda, v)) in pairs.iter().enumerate() {
            let r = t.mul_vec(v);
            let res = r.iter().zip(v).map(|(a, b)| (a - lambda * b).abs()).fold(0.0, f64::max);
            assert!(res < 1e-12, "residual {res}");
            for (_, w) in pairs.iter().skip(i + 1) {
                let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                assert!(dot.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn exact_degeneracy_gets_orthogonal_vectors() {
        // Two decoupled copies of the same block.
        let mut diag = vec![2.0; 20];
        diag.extend(vec![2.0; 20]);
        let mut off = vec![-1.0; 39];
        off[19] = 0.0;
        let t = SymTridiagonal::new(diag, off);
        let pairs = t.lowest_eigenpairs(2).unwrap();
        assert!((pairs[0].0 - pairs[1].0).abs() < 1e-13);
        let dot: f64 = pairs[0].1.iter().zip(&pairs[1].1).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-10);
    }

    #[test]
    fn capacity_is_checked() {
        assert!(matches!(
            laplacian(3).lowest_eigenpairs(4),
            Err(Error::Capacity { requested: 4, available: 3 })
        ));
    }

    #[test]
    fn rejects_sign_mismatched_couplings() {
        let mut a = Tridiagonal::zeros(3);
        a.diag = vec![1.0, 1.0, 1.0];
        a.set(0, 1, 1.0);
        a.set(1, 0, -1.0);
        assert!(matches!(a.symmetrize(), Err(Error::NonReal { row: 0, .. })));
    }

    proptest! {
        #[test]
        fn symmetrization_preserves_eigenpairs(
            diag in prop::collection::vec(-3.0f64..3.0, 12),
            ratios in prop::collection::vec(0.2f64..5.0, 11),
            offs in prop::collection::vec(-2.0f64..-0.1, 11),
        ) {
            let mut a = Tridiagonal::zeros(12);
            a.diag = diag;
            for i in 0..11 {
                a.set(i, i + 1, offs[i]);
                a.set(i + 1, i, offs[i] * ratios[i]);
            }
            let pairs = a.lowest_eigenpairs(4).unwrap();
            for (lambda, v) in pairs {
                let r = a.mul_vec(&v);
                let res = r.iter().zip(&v).map(|(x, y)| (x - lambda * y).abs()).fold(0.0, f64::max);
                prop_assert!(res < 1e-9, "residual {}", res);
            }
        }
    }
}
