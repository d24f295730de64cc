//! Barrier parameters, the potential itself, and the per-region parameter
//! algebra that maps the Schrödinger equation on either side of the origin
//! onto a hypergeometric equation.
//!
//! Units are atomic with ħ = 1, so the radial equation reads
//! `ψ'' + 2m(E - V)ψ = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid barrier parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("energy must be finite and positive for scattering, got {0}")]
    NonPositiveEnergy(f64),
}

/// Physical inputs of the symmetric barrier-type shifted Deng-Fan problem.
///
/// `q` shapes the region `x < 0` and `q_tilde` the region `x > 0`. The
/// shape constant `b = e^{a x_e} - q` always uses `q`, on both sides.
///
/// Fields missing from a serialized form take their [`BarrierParams::table1`] values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BarrierParams {
    /// Dissociation energy (well depth).
    pub v0: f64,
    /// Inverse potential range.
    pub a: f64,
    /// Equilibrium distance.
    pub x_e: f64,
    pub q: f64,
    pub q_tilde: f64,
    /// Particle mass.
    #[serde(alias = "mass")]
    pub m: f64,
}

impl BarrierParams {
    pub fn new(v0: f64, a: f64, x_e: f64, q: f64, q_tilde: f64, m: f64) -> Result<Self, ModelError> {
        let params = Self { v0, a, x_e, q, q_tilde, m };
        params.validate()?;
        Ok(params)
    }

    /// Parameter set of the published reference table:
    /// `V0 = 1.25`, `a = x_e = q = q_tilde = 0.8`, `m = 1`.
    pub const fn table1() -> Self {
        Self {
            v0: 1.25,
            a: 0.8,
            x_e: 0.8,
            q: 0.8,
            q_tilde: 0.8,
            m: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<(), ModelError> {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter { name, value, reason })
            }
        }
        check("v0", self.v0, self.v0 >= 0.0, "must be >= 0")?;
        check("a", self.a, self.a > 0.0, "must be > 0")?;
        check("x_e", self.x_e, self.x_e >= 0.0, "must be >= 0")?;
        check("q", self.q, self.q > 0.0 && self.q < 1.0, "must lie in (0, 1)")?;
        check(
            "q_tilde",
            self.q_tilde,
            self.q_tilde > 0.0 && self.q_tilde < 1.0,
            "must lie in (0, 1)",
        )?;
        check("m", self.m, self.m > 0.0, "must be > 0")
    }

    pub fn symmetric(&self) -> bool {
        self.q == self.q_tilde
    }

    /// Deformation parameter governing the given region.
    pub fn deformation(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.q,
            Side::Right => self.q_tilde,
        }
    }

    /// `b = e^{a x_e} - q`.
    pub fn b(&self) -> f64 {
        compute_b(self)
    }

    pub fn potential(&self, x: f64) -> f64 {
        potential(x, self)
    }

    /// Barrier top `V(0)`, evaluated from the right (`q_tilde`) branch.
    pub fn v_max(&self) -> f64 {
        potential(0.0, self)
    }

    pub fn shape(&self) -> DerivedShape {
        DerivedShape {
            b: self.b(),
            v_max: self.v_max(),
        }
    }

    /// Asymptotic wave number `k = sqrt(2 m E)`.
    pub fn wave_number(&self, energy: f64) -> f64 {
        (2.0 * self.m * energy).sqrt()
    }
}

impl Default for BarrierParams {
    fn default() -> Self {
        Self::table1()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedShape {
    pub b: f64,
    pub v_max: f64,
}

pub fn compute_b(params: &BarrierParams) -> f64 {
    (params.a * params.x_e).exp() - params.q
}

/// `V(x) = V0 b [ b / (e^{a|x|} - q_s)^2 - 2 / (e^{a|x|} - q_s) ]` where
/// `q_s` is `q` for `x < 0` and `q_tilde` for `x >= 0`.
pub fn potential(x: f64, params: &BarrierParams) -> f64 {
    let qs = if x < 0.0 { params.q } else { params.q_tilde };
    let b = compute_b(params);
    let d = (params.a * x.abs()).exp() - qs;
    if d.is_infinite() {
        return 0.0;
    }
    params.v0 * b * (b / (d * d) - 2.0 / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Root of `tau^2 - tau + epsilon = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TauBranch {
    /// `tau = 1/2 + sqrt(1 - 4 epsilon) / 2`
    #[default]
    Plus,
    /// `tau = 1/2 - sqrt(1 - 4 epsilon) / 2`
    Minus,
}

impl TauBranch {
    pub fn flipped(self) -> Self {
        match self {
            TauBranch::Plus => TauBranch::Minus,
            TauBranch::Minus => TauBranch::Plus,
        }
    }
}

/// Derived quantities for one region.
///
/// For [`Side::Right`] the `chi1..chi3` fields hold what is conventionally
/// written `chi4..chi6`, and `alpha, beta, gamma` the tilded parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideCoefficients {
    pub side: Side,
    pub energy: f64,
    pub chi1: f64,
    pub chi2: f64,
    pub chi3: f64,
    pub epsilon: f64,
    pub k: f64,
    pub sigma: Complex64,
    pub tau: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl SideCoefficients {
    /// Same solution basis with the sign of `sqrt(-chi1)` reversed, i.e.
    /// `alpha` and `beta` exchanged.
    pub fn with_swapped_alpha_beta(mut self) -> Self {
        std::mem::swap(&mut self.alpha, &mut self.beta);
        self
    }
}

pub fn side_coefficients(
    energy: f64,
    params: &BarrierParams,
    side: Side,
    tau_branch: TauBranch,
) -> Result<SideCoefficients, ModelError> {
    params.validate()?;
    if !(energy.is_finite() && energy > 0.0) {
        return Err(ModelError::NonPositiveEnergy(energy));
    }
    let BarrierParams { v0, a, m, .. } = *params;
    let qs = params.deformation(side);
    let b = params.b();
    let a2 = a * a;

    let chi1 = 2.0 * m * energy / a2 - 2.0 * m * v0 * b * b / (a2 * qs * qs) - 4.0 * m * v0 * b / (a2 * qs);
    let chi2 = 4.0 * m * v0 * b / (a2 * qs) - 4.0 * m * energy / a2;
    let chi3 = 2.0 * m * energy / a2;
    let epsilon = chi1 + chi2 + chi3;

    // 1 - 4 epsilon >= 1 whenever V0 >= 0, so tau is real.
    let disc = (1.0 - 4.0 * epsilon).sqrt();
    let tau = match tau_branch {
        TauBranch::Plus => 0.5 + 0.5 * disc,
        TauBranch::Minus => 0.5 - 0.5 * disc,
    };

    let k = params.wave_number(energy);
    let sigma = Complex64::new(0.0, k / a);
    let root = Complex64::new(-chi1, 0.0).sqrt();
    let alpha = sigma + tau - root;
    let beta = sigma + tau + root;
    let gamma = 1.0 + 2.0 * sigma;

    Ok(SideCoefficients {
        side,
        energy,
        chi1,
        chi2,
        chi3,
        epsilon,
        k,
        sigma,
        tau,
        alpha,
        beta,
        gamma,
    })
}
