//! Closed-form reflection and transmission.
//!
//! Left of the origin the solution is `A1 (incident) + A2 (reflected)` in
//! the hypergeometric basis built on `y_L = q e^{ax}`; right of it only the
//! transmitted `A4` branch on `y_R = q_tilde e^{-ax}` survives. Matching
//! `psi` and `dpsi/dx` at `x = 0` fixes `A2/A1` and `A4/A1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{map_ordered, Execution};
use crate::hyp2f1::{hyp2f1, Hyp2F1Error};
use crate::model::{side_coefficients, BarrierParams, ModelError, Side, SideCoefficients, TauBranch};

/// Determinants at or below this magnitude are singular outright.
pub const SINGULAR_ABS: f64 = 1e-300;

/// A determinant this small relative to its two products has lost all
/// significant digits to cancellation.
pub const SINGULAR_REL: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatterError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("hypergeometric evaluation for zeta{zeta} failed at E = {energy}: {source}")]
    Hypergeometric {
        zeta: u8,
        energy: f64,
        #[source]
        source: Hyp2F1Error,
    },
    #[error("matching system is singular at E = {energy} (|det| = {det:e})")]
    SingularMatching { energy: f64, det: f64 },
    #[error("invalid energy grid: {0}")]
    InvalidGrid(String),
}

/// How the derivative-continuity row of the matching system is built.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingMode {
    /// Continuity of `dpsi/dx`, with `dy_L/dx = a y_L` and `dy_R/dx = -a y_R`.
    #[default]
    #[serde(alias = "corrected_matching")]
    Corrected,
    /// The literal closed-form ratios, which equate `dpsi_L/dy_L` with
    /// `dpsi_R/dy_R`. Singular whenever `q == q_tilde`.
    #[serde(alias = "paper_literal")]
    Paper,
}

impl MatchingMode {
    pub fn name(self) -> &'static str {
        match self {
            MatchingMode::Corrected => "corrected",
            MatchingMode::Paper => "paper",
        }
    }
}

/// Choice of solution basis on each side. Physical outputs do not depend
/// on it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Basis {
    pub left_tau: TauBranch,
    pub right_tau: TauBranch,
    pub swap_left_alpha_beta: bool,
    pub swap_right_alpha_beta: bool,
}

impl Basis {
    pub fn uniform(tau: TauBranch) -> Self {
        Self {
            left_tau: tau,
            right_tau: tau,
            ..Self::default()
        }
    }
}

/// Everything entering the 2x2 matching system at the origin.
///
/// `c1..c3` are the wavefunction values of the three basis functions and
/// `c4..c6` their derivatives with respect to the local variable `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchCoefficients {
    pub energy: f64,
    pub left: SideCoefficients,
    pub right: SideCoefficients,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    pub rho4: f64,
    pub zeta: [Complex64; 6],
    pub lambda: [Complex64; 3],
    pub c: [Complex64; 6],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    pub energy: f64,
    /// `A2 / A1`.
    pub r_amp: Complex64,
    /// `A4 / A1`.
    pub t_amp: Complex64,
    pub reflection: f64,
    pub transmission: f64,
    /// `|R + T - 1|`.
    pub unitarity_residual: f64,
    pub mode: MatchingMode,
}

pub fn match_coefficients(
    energy: f64,
    params: &BarrierParams,
    tau_branch: TauBranch,
) -> Result<MatchCoefficients, ScatterError> {
    match_coefficients_in(energy, params, &Basis::uniform(tau_branch))
}

pub fn match_coefficients_in(
    energy: f64,
    params: &BarrierParams,
    basis: &Basis,
) -> Result<MatchCoefficients, ScatterError> {
    let mut left = side_coefficients(energy, params, Side::Left, basis.left_tau)?;
    let mut right = side_coefficients(energy, params, Side::Right, basis.right_tau)?;
    if basis.swap_left_alpha_beta {
        left = left.with_swapped_alpha_beta();
    }
    if basis.swap_right_alpha_beta {
        right = right.with_swapped_alpha_beta();
    }

    let (rho1, rho3) = (params.q, params.q_tilde);
    let (rho2, rho4) = (1.0 - rho1, 1.0 - rho3);

    let f = |zeta: u8, a: Complex64, b: Complex64, c: Complex64, z: f64| {
        hyp2f1(a, b, c, z.into()).map_err(|source| ScatterError::Hypergeometric { zeta, energy, source })
    };

    let (al, bl, gl) = (left.alpha, left.beta, left.gamma);
    let (ar, br, gr) = (right.alpha, right.beta, right.gamma);
    let zeta = [
        f(1, al, bl, gl, rho1)?,
        f(2, al + 1.0 - gl, bl + 1.0 - gl, 2.0 - gl, rho1)?,
        f(3, ar + 1.0 - gr, br + 1.0 - gr, 2.0 - gr, rho3)?,
        f(4, al + 1.0, bl + 1.0, gl + 1.0, rho1)?,
        f(5, al + 2.0 - gl, bl + 2.0 - gl, 3.0 - gl, rho1)?,
        // Derivative partner of zeta3: every parameter shifted up by one.
        f(6, ar + 2.0 - gr, br + 2.0 - gr, 3.0 - gr, rho3)?,
    ];
    let lambda = [
        al * bl / gl,
        (al + 1.0 - gl) * (bl + 1.0 - gl) / (2.0 - gl),
        (ar + 1.0 - gr) * (br + 1.0 - gr) / (2.0 - gr),
    ];

    let (sl, tl) = (left.sigma, left.tau);
    let (sr, tr) = (right.sigma, right.tau);
    // y^s (1-y)^t at the matching point, and its logarithmic derivative.
    let prefactor = |y: f64, s: Complex64, t: f64| Complex64::from(y).powc(s) * (1.0 - y).powf(t);
    let log_slope = |y: f64, s: Complex64, t: f64| s / y - t / (1.0 - y);

    let p1 = prefactor(rho1, sl, tl);
    let p2 = prefactor(rho1, -sl, tl);
    let p3 = prefactor(rho3, -sr, tr);

    let c1 = p1 * zeta[0];
    let c2 = p2 * zeta[1];
    let c3 = p3 * zeta[2];
    let c4 = p1 * (log_slope(rho1, sl, tl) * zeta[0] + lambda[0] * zeta[3]);
    let c5 = p2 * (log_slope(rho1, -sl, tl) * zeta[1] + lambda[1] * zeta[4]);
    let c6 = p3 * (log_slope(rho3, -sr, tr) * zeta[2] + lambda[2] * zeta[5]);

    Ok(MatchCoefficients {
        energy,
        left,
        right,
        rho1,
        rho2,
        rho3,
        rho4,
        zeta,
        lambda,
        c: [c1, c2, c3, c4, c5, c6],
    })
}

fn check_det(det: Complex64, p: Complex64, q: Complex64, energy: f64) -> Result<(), ScatterError> {
    let scale = p.norm() + q.norm();
    if !(det.norm() > SINGULAR_ABS) || det.norm() <= SINGULAR_REL * scale {
        return Err(ScatterError::SingularMatching {
            energy,
            det: det.norm(),
        });
    }
    Ok(())
}

/// Closed-form amplitude ratios
/// `A2/A1 = (c3 c4 - c1 c6) / (c2 c6 - c3 c5)` and
/// `A4/A1 = (c2 c4 - c1 c5) / (c2 c6 - c3 c5)`.
pub fn literal_ratios(mc: &MatchCoefficients) -> Result<(Complex64, Complex64), ScatterError> {
    let [c1, c2, c3, c4, c5, c6] = mc.c;
    let (p, q) = (c2 * c6, c3 * c5);
    let det = p - q;
    check_det(det, p, q, mc.energy)?;
    Ok(((c3 * c4 - c1 * c6) / det, (c2 * c4 - c1 * c5) / det))
}

pub fn solve_amplitudes(mc: &MatchCoefficients, mode: MatchingMode) -> Result<ScatteringResult, ScatterError> {
    let (r_amp, t_amp) = match mode {
        MatchingMode::Paper => literal_ratios(mc)?,
        MatchingMode::Corrected => {
            let [c1, c2, c3, c4, c5, c6] = mc.c;
            // Unknowns (r, t) = (A2/A1, A4/A1):
            //   c2 r - c3 t = -c1                      (psi continuous)
            //   rho1 c5 r + rho3 c6 t = -rho1 c4       (dpsi/dx continuous)
            // The common factor a from dy/dx has been divided out.
            let (m00, m01) = (c2, -c3);
            let (m10, m11) = (mc.rho1 * c5, mc.rho3 * c6);
            let (b0, b1) = (-c1, -mc.rho1 * c4);
            let (p, q) = (m00 * m11, m01 * m10);
            let det = p - q;
            check_det(det, p, q, mc.energy)?;
            ((b0 * m11 - m01 * b1) / det, (m00 * b1 - b0 * m10) / det)
        }
    };
    // Equal asymptotic wave numbers on both sides and |q^{i k/a}| = 1, so
    // flux ratios are plain squared moduli.
    let reflection = r_amp.norm_sqr();
    let transmission = t_amp.norm_sqr();
    Ok(ScatteringResult {
        energy: mc.energy,
        r_amp,
        t_amp,
        reflection,
        transmission,
        unitarity_residual: (reflection + transmission - 1.0).abs(),
        mode,
    })
}

/// Reflection and transmission at one energy in the default basis.
pub fn solve(energy: f64, params: &BarrierParams, mode: MatchingMode) -> Result<ScatteringResult, ScatterError> {
    let mc = match_coefficients(energy, params, TauBranch::Plus)?;
    solve_amplitudes(&mc, mode)
}

pub fn validate_grid(energies: &[f64]) -> Result<(), ScatterError> {
    if energies.is_empty() {
        return Err(ScatterError::InvalidGrid("empty".into()));
    }
    if let Some(e) = energies.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(ScatterError::InvalidGrid(format!("energy {e} is not positive")));
    }
    if let Some(w) = energies.windows(2).find(|w| w[1] <= w[0]) {
        return Err(ScatterError::InvalidGrid(format!(
            "energies must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Solves every energy of a strictly increasing grid. Per-point failures
/// are returned inline; only a malformed grid fails the whole call.
pub fn scan(
    energies: &[f64],
    params: &BarrierParams,
    mode: MatchingMode,
) -> Result<Vec<Result<ScatteringResult, ScatterError>>, ScatterError> {
    scan_with(energies, params, mode, Execution::default())
}

pub fn scan_with(
    energies: &[f64],
    params: &BarrierParams,
    mode: MatchingMode,
    exec: Execution,
) -> Result<Vec<Result<ScatteringResult, ScatterError>>, ScatterError> {
    validate_grid(energies)?;
    params.validate()?;
    Ok(map_ordered(energies, exec, |&e| solve(e, params, mode)))
}
