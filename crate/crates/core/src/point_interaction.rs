//! The four-parameter family of zero-range interactions at the origin.
//!
//! A point interaction `χ(α, β, γ, δ)` with `αγ − βδ = 1` is characterised by
//! the linear relation it imposes between the one-sided limits of the wave
//! function and its derivative at `x = 0`:
//!
//! ```text
//! φ'(0+) + α φ'(0−) = −β φ(0−)
//! φ(0+)  + γ φ(0−)  = −δ φ'(0−)
//! ```
//!
//! Written as a transfer map `(φ(0+), φ'(0+)) = M (φ(0−), φ'(0−))` this is the
//! unit-determinant [`ConnectionMatrix`] `[[−γ, −δ], [−β, −α]]`.
//!
//! Two members matter most. The ε-interaction `ε(c) = χ(−1, 0, −1, −4c)` keeps
//! the derivative continuous and makes the function itself jump; it is the only
//! zero-range interaction that acts on odd (fermionic) states. The familiar
//! Dirac spike `δ(v) = χ(−1, −v, −1, 0)` does the opposite and only sees even
//! (bosonic) states.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Tolerance on `αγ − βδ − 1` accepted by [`SaeParams::new`].
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Real self-adjoint-extension parameters `(α, β, γ, δ)` with `αγ − βδ = 1`.
///
/// `α` and `γ` are dimensionless, `β` has units of inverse length and `δ` of
/// length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaeParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl SaeParams {
    /// Validates the unit-determinant constraint and renormalises so it holds
    /// to rounding: `δ` is recomputed when `β ≠ 0`, otherwise `γ = 1/α`.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta)] {
            ensure_finite(name, v)?;
        }
        let residual = alpha * gamma - beta * delta - 1.0;
        if residual.abs() > CONSTRAINT_TOL {
            return Err(Error::InvalidInput(format!(
                "alpha*gamma - beta*delta must equal 1 (off by {residual:e})"
            )));
        }
        let (gamma, delta) = if residual == 0.0 {
            (gamma, delta)
        } else if beta != 0.0 {
            (gamma, (alpha * gamma - 1.0) / beta)
        } else {
            (1.0 / alpha, delta)
        };
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn as_tuple(&self) -> (f64, f64, f64, f64) {
        (self.alpha, self.beta, self.gamma, self.delta)
    }

    /// The interaction commutes with `x → −x` exactly when `α = γ`.
    pub fn is_reflection_symmetric(&self) -> bool {
        (self.alpha - self.gamma).abs() <= 1e-12 * (1.0 + self.alpha.abs())
    }
}

/// Strength `c` (length) of the wave-function-discontinuity interaction `ε(c)`.
///
/// `c = 0` is the free-fermion limit, where odd states simply vanish at the
/// origin; negative `c` binds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EpsilonCoupling(f64);

impl EpsilonCoupling {
    pub fn new(c: f64) -> Result<Self> {
        ensure_finite("c", c)?;
        Ok(Self(c))
    }

    pub fn c(self) -> f64 {
        self.0
    }
}

/// Strength `v` (inverse length) of the Dirac interaction `v δ(x)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DeltaCoupling(f64);

impl DeltaCoupling {
    pub fn new(v: f64) -> Result<Self> {
        ensure_finite("v", v)?;
        Ok(Self(v))
    }

    pub fn v(self) -> f64 {
        self.0
    }
}

/// A contact interaction as the solvers consume it.
///
/// `HardCore` is the `v → ∞` Dirac limit (equivalently `c = 0` seen from the
/// bosonic side). It has no finite parameter representation and is carried as
/// its own tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CouplingSpec {
    Epsilon(EpsilonCoupling),
    Delta(DeltaCoupling),
    HardCore,
    General(SaeParams),
}

impl CouplingSpec {
    pub fn epsilon(c: f64) -> Result<Self> {
        EpsilonCoupling::new(c).map(Self::Epsilon)
    }

    pub fn delta(v: f64) -> Result<Self> {
        DeltaCoupling::new(v).map(Self::Delta)
    }

    pub fn params(&self) -> Option<SaeParams> {
        match *self {
            Self::Epsilon(c) => Some(epsilon_as_chi(c)),
            Self::Delta(v) => Some(delta_as_chi(v)),
            Self::HardCore => None,
            Self::General(p) => Some(p),
        }
    }

    pub fn contact(&self) -> Contact {
        match self.params() {
            Some(p) => Contact::Matrix(connection_matrix(&p)),
            None => Contact::HardCore,
        }
    }

    /// Image under `v = 1/c`. `ε(0)` maps to the hard core and back; `δ(0)`
    /// would need `c = ∞` and is rejected, as is a general `χ`.
    pub fn dual(&self) -> Result<Self> {
        match *self {
            Self::Epsilon(c) if c.c() == 0.0 => Ok(Self::HardCore),
            Self::Epsilon(c) => Self::delta(1.0 / c.c()),
            Self::HardCore => Self::epsilon(0.0),
            Self::Delta(v) if v.v() == 0.0 => Err(Error::InvalidInput(
                "the free boson has no finite epsilon dual (c = inf)".into(),
            )),
            Self::Delta(v) => Self::epsilon(1.0 / v.v()),
            Self::General(_) => Err(Error::UnsupportedParameters(
                "duality is defined between epsilon and delta couplings only".into(),
            )),
        }
    }

    /// Effective length scale of an attractive coupling (decay length of the
    /// zero-range bound state), if there is one.
    pub fn binding_length(&self) -> Option<f64> {
        match *self {
            Self::Epsilon(c) if c.c() < 0.0 => Some(-2.0 * c.c()),
            Self::Delta(v) if v.v() < 0.0 => Some(-2.0 / v.v()),
            _ => None,
        }
    }

    /// Short stable label used in file names and stamps.
    pub fn label(&self) -> String {
        match *self {
            Self::Epsilon(c) => format!("epsilon(c={})", c.c()),
            Self::Delta(v) => format!("delta(v={})", v.v()),
            Self::HardCore => "hardcore".to_string(),
            Self::General(p) => format!(
                "chi({},{},{},{})",
                p.alpha, p.beta, p.gamma, p.delta
            ),
        }
    }
}

/// `ε(c) = χ(−1, 0, −1, −4c)`.
pub fn epsilon_as_chi(c: EpsilonCoupling) -> SaeParams {
    SaeParams {
        alpha: -1.0,
        beta: 0.0,
        gamma: -1.0,
        delta: -4.0 * c.c(),
    }
}

/// `δ(v) = χ(−1, −v, −1, 0)`.
pub fn delta_as_chi(v: DeltaCoupling) -> SaeParams {
    SaeParams {
        alpha: -1.0,
        beta: -v.v(),
        gamma: -1.0,
        delta: 0.0,
    }
}

/// Value and slope of a wave function at one side of the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub value: f64,
    pub slope: f64,
}

impl BoundaryData {
    pub fn new(value: f64, slope: f64) -> Self {
        Self { value, slope }
    }
}

/// Transfer map from the left limits `(φ(0−), φ'(0−))` to the right limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionMatrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl ConnectionMatrix {
    pub const IDENTITY: Self = Self {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    pub fn determinant(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn apply(&self, left: BoundaryData) -> BoundaryData {
        BoundaryData {
            value: self.m11 * left.value + self.m12 * left.slope,
            slope: self.m21 * left.value + self.m22 * left.slope,
        }
    }

    pub fn is_reflection_symmetric(&self) -> bool {
        (self.m11 - self.m22).abs() <= 1e-12 * (1.0 + self.m11.abs())
    }

    /// Restriction to functions of the given parity, expressed as a single
    /// linear condition on the right-hand limits.
    ///
    /// Fails when the interaction does not leave the parity sector invariant
    /// (only the zero function satisfies both rows).
    pub fn sector_condition(&self, parity: Parity) -> Result<SectorCondition> {
        // Left limits in terms of right ones: (s p, −s q).
        let s = parity.sign();
        let r1 = [1.0 - s * self.m11, s * self.m12];
        let r2 = [-s * self.m21, 1.0 + s * self.m22];
        let n1 = r1[0].hypot(r1[1]);
        let n2 = r2[0].hypot(r2[1]);
        let cross = r1[0] * r2[1] - r1[1] * r2[0];
        if cross.abs() > 1e-10 * n1.max(n2).max(1.0).powi(2) {
            return Err(Error::Sector(format!(
                "interaction mixes parities; the {parity:?} sector is not invariant"
            )));
        }
        let row = if n1 >= n2 { r1 } else { r2 };
        Ok(SectorCondition::normalized(row[0], row[1]))
    }
}

/// `[[−γ, −δ], [−β, −α]]`; its determinant is `αγ − βδ = 1`.
pub fn connection_matrix(p: &SaeParams) -> ConnectionMatrix {
    ConnectionMatrix {
        m11: -p.gamma,
        m12: -p.delta,
        m21: -p.beta,
        m22: -p.alpha,
    }
}

/// Reflection parity of a relative wave function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// `value_coeff · φ(0+) + slope_coeff · φ'(0+) = 0`, normalised to unit length
/// with the leading non-zero coefficient positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorCondition {
    pub value_coeff: f64,
    pub slope_coeff: f64,
}

impl SectorCondition {
    pub const DIRICHLET: Self = Self {
        value_coeff: 1.0,
        slope_coeff: 0.0,
    };
    pub const NEUMANN: Self = Self {
        value_coeff: 0.0,
        slope_coeff: 1.0,
    };

    pub fn normalized(a: f64, b: f64) -> Self {
        let n = a.hypot(b);
        let (mut a, mut b) = (a / n, b / n);
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            a = -a;
            b = -b;
        }
        // Flush rounding dust so Dirichlet/Neumann compare exactly.
        if a.abs() < 1e-15 {
            a = 0.0;
        }
        if b.abs() < 1e-15 {
            b = 0.0;
        }
        Self {
            value_coeff: a,
            slope_coeff: b,
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        self.slope_coeff == 0.0
    }

    /// Logarithmic derivative `φ'(0+)/φ(0+)` implied by the condition, or
    /// `None` for Dirichlet.
    pub fn log_derivative(&self) -> Option<f64> {
        (!self.is_dirichlet()).then(|| -self.value_coeff / self.slope_coeff)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.value_coeff - other.value_coeff).abs() <= tol
            && (self.slope_coeff - other.slope_coeff).abs() <= tol
    }
}

/// The origin condition handed to the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contact {
    Matrix(ConnectionMatrix),
    HardCore,
}

impl Contact {
    pub fn sector_condition(&self, parity: Parity) -> Result<SectorCondition> {
        match self {
            Contact::Matrix(m) => m.sector_condition(parity),
            Contact::HardCore => Ok(SectorCondition::DIRICHLET),
        }
    }

    pub fn is_reflection_symmetric(&self) -> bool {
        match self {
            Contact::Matrix(m) => m.is_reflection_symmetric(),
            Contact::HardCore => true,
        }
    }
}

/// Strengths of three Dirac spikes at `−a`, `0`, `+a` whose `a → 0` limit is
/// a given point interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeDeltaRealization {
    pub a: f64,
    pub u_minus: f64,
    pub u_zero: f64,
    pub u_plus: f64,
}

impl ThreeDeltaRealization {
    pub fn is_symmetric(&self) -> bool {
        (self.u_minus - self.u_plus).abs() <= 1e-12 * (1.0 + self.u_plus.abs())
    }
}

/// Finite-`a` spike strengths for `χ(α, β, γ, δ)`.
///
/// For `δ ≠ 0`: `u± = −1/a + (α−1)/δ`, `u∓ = −1/a + (γ−1)/δ` and
/// `u₀ = (1 − αγ)/(β a²)` (zero when `β = 0`, where the constraint forces
/// `αγ = 1`). The Dirac class `δ = 0, α = γ = −1` is a single spike of
/// strength `−β` at the origin. Other `δ = 0` parameter sets have no known
/// three-spike realization and are rejected.
pub fn three_delta_strengths(p: &SaeParams, a: f64) -> Result<ThreeDeltaRealization> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidInput(format!("spacing a must be positive, got {a}")));
    }
    if p.delta != 0.0 {
        let u_zero = if p.beta != 0.0 {
            (1.0 - p.alpha * p.gamma) / (p.beta * a * a)
        } else {
            0.0
        };
        return Ok(ThreeDeltaRealization {
            a,
            u_minus: -1.0 / a + (p.gamma - 1.0) / p.delta,
            u_zero,
            u_plus: -1.0 / a + (p.alpha - 1.0) / p.delta,
        });
    }
    if p.alpha == -1.0 && p.gamma == -1.0 {
        return Ok(ThreeDeltaRealization {
            a,
            u_minus: 0.0,
            u_zero: -p.beta,
            u_plus: 0.0,
        });
    }
    Err(Error::UnsupportedParameters(format!(
        "no three-delta realization for delta = 0 with (alpha, gamma) = ({}, {})",
        p.alpha, p.gamma
    )))
}

/// Does the interaction leave functions of this parity untouched?
///
/// True iff the sector's origin condition coincides with the free one:
/// Dirichlet for odd states, Neumann for even states.
pub fn annihilation_check(coupling: &CouplingSpec, parity: Parity) -> bool {
    let free = match parity {
        Parity::Odd => SectorCondition::DIRICHLET,
        Parity::Even => SectorCondition::NEUMANN,
    };
    coupling
        .contact()
        .sector_condition(parity)
        .map(|cond| cond.approx_eq(&free, 1e-12))
        .unwrap_or(false)
}

/// Fermionic-sector canonical form of a general `χ`.
///
/// `χ(1, β, 1, 0)` imposes the same condition on odd functions as
/// `ε(1/β)`, and `χ(−1, 0, −1, δ)` is `ε(−δ/4)` outright. The original
/// parameters are kept alongside, since the two differ on even functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionicCanonical {
    pub coupling: EpsilonCoupling,
    pub original: SaeParams,
}

pub fn canonicalize_fermionic(p: &SaeParams) -> Option<FermionicCanonical> {
    let near = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + y.abs());
    let c = if near(p.alpha, -1.0) && near(p.gamma, -1.0) && p.beta == 0.0 {
        -p.delta / 4.0
    } else if near(p.alpha, 1.0) && near(p.gamma, 1.0) && p.delta == 0.0 && p.beta != 0.0 {
        1.0 / p.beta
    } else {
        return None;
    };
    Some(FermionicCanonical {
        coupling: EpsilonCoupling::new(c).ok()?,
        original: *p,
    })
}
