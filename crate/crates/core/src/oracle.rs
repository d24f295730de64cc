//! Direct numerical integration of `psi'' + 2m(E - V(x)) psi = 0` with
//! scattering boundary conditions, independent of the hypergeometric route.
//!
//! A pure transmitted wave `e^{ikx}` is imposed at `x = +L` and integrated
//! backward to `x = -L`, where the solution is split into incident and
//! reflected plane waves `A e^{ikx} + B e^{-ikx}`. Then `T = 1/|A|^2` and
//! `R = |B/A|^2`; `|R + T - 1|` measures how well the integrator conserved
//! flux.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::BarrierParams;

/// Largest flux residual accepted from a run.
pub const FLUX_TOL: f64 = 1e-6;

/// Default bound on `|V(+-L)| / max(E, 1)`.
pub const DEFAULT_DECAY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid integration config: {0}")]
    InvalidConfig(&'static str),
    #[error("energy must be finite and positive, got {0}")]
    NonPositiveEnergy(f64),
    #[error("mass must be finite and positive, got {0}")]
    InvalidMass(f64),
    #[error("|V| = {value:e} at x = +-{x_max} exceeds {limit:e}; enlarge x_max")]
    BoundaryNotDecayed { x_max: f64, value: f64, limit: f64 },
    #[error("flux residual {flux_residual:e} exceeds {FLUX_TOL:e}; reduce the step (T = {transmission}, R = {reflection})")]
    StepTooCoarse {
        flux_residual: f64,
        transmission: f64,
        reflection: f64,
    },
    #[error("integration produced a non-finite wavefunction")]
    NonFinite,
    #[error("plane-wave basis is degenerate for k = {0}")]
    DegenerateBasis(f64),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Rk4,
    Numerov,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationConfig {
    /// Half-width `L` of the domain `[-L, L]`.
    pub x_max: f64,
    pub step: f64,
    pub decay_tol: f64,
    pub method: Method,
    /// Points where the potential may jump. Both methods restart their
    /// stepping on each one and never sample across it.
    pub breakpoints: Vec<f64>,
}

impl IntegrationConfig {
    pub fn new(x_max: f64, step: f64) -> Result<Self, OracleError> {
        let cfg = Self {
            x_max,
            step,
            decay_tol: DEFAULT_DECAY_TOL,
            method: Method::Rk4,
            breakpoints: Vec::new(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    /// Defaults for the shifted Deng-Fan barrier at energy `E`:
    /// `L = max(40/a, 10 x_e)`, doubled until `|V(+-L)| <= 1e-12 max(E, 1)`,
    /// and `step = min(0.001, 0.02/k)`. The origin is a breakpoint because
    /// the potential jumps there when `q != q_tilde`.
    pub fn for_barrier(energy: f64, params: &BarrierParams) -> Self {
        let limit = DEFAULT_DECAY_TOL * energy.max(1.0);
        let mut x_max = (40.0 / params.a).max(10.0 * params.x_e);
        for _ in 0..32 {
            if boundary_potential(&|x| params.potential(x), x_max) <= limit {
                break;
            }
            x_max *= 2.0;
        }
        let k = params.wave_number(energy);
        let step = if k > 0.0 { (0.02 / k).min(0.001) } else { 0.001 };
        Self {
            x_max,
            step,
            decay_tol: DEFAULT_DECAY_TOL,
            method: Method::Rk4,
            breakpoints: vec![0.0],
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.x_max.is_finite() && self.x_max > 0.0) {
            return Err(OracleError::InvalidConfig("x_max must be > 0"));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(OracleError::InvalidConfig("step must be > 0"));
        }
        if self.step > self.x_max / 100.0 {
            return Err(OracleError::InvalidConfig("step must be <= x_max / 100"));
        }
        if !(self.decay_tol > 0.0) {
            return Err(OracleError::InvalidConfig("decay_tol must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub reflection: f64,
    pub transmission: f64,
    /// `|R + T - 1|`.
    pub flux_residual: f64,
    /// Largest `|V|` at the two domain edges.
    pub boundary_potential: f64,
    pub steps: usize,
}

fn boundary_potential<V: Fn(f64) -> f64>(potential: &V, x_max: f64) -> f64 {
    potential(x_max).abs().max(potential(-x_max).abs())
}

/// Splits `(psi, dpsi)` at `x` into `psi = A e^{ikx} + B e^{-ikx}`.
pub fn plane_wave_decompose(
    psi: Complex64,
    dpsi: Complex64,
    k: f64,
    x: f64,
) -> Result<(Complex64, Complex64), OracleError> {
    if !(k.is_finite() && k > 0.0) {
        return Err(OracleError::DegenerateBasis(k));
    }
    let ik = Complex64::new(0.0, k);
    let phase = Complex64::from_polar(1.0, k * x);
    let a = 0.5 * (psi + dpsi / ik) / phase;
    let b = 0.5 * (psi - dpsi / ik) * phase;
    Ok((a, b))
}

/// Same split from wavefunction samples at two points of a force-free region.
fn two_point_decompose(
    psi1: Complex64,
    x1: f64,
    psi2: Complex64,
    x2: f64,
    k: f64,
) -> Result<(Complex64, Complex64), OracleError> {
    let e = |x: f64| Complex64::from_polar(1.0, k * x);
    // [e(x1)  e(-x1)] [A]   [psi1]
    // [e(x2)  e(-x2)] [B] = [psi2]
    let det = e(x1) * e(-x2) - e(-x1) * e(x2);
    if det.norm() < 1e-12 {
        return Err(OracleError::DegenerateBasis(k));
    }
    let a = (psi1 * e(-x2) - e(-x1) * psi2) / det;
    let b = (e(x1) * psi2 - psi1 * e(x2)) / det;
    Ok((a, b))
}

/// Reference `R` and `T` for an arbitrary bounded potential that has
/// decayed at `+-cfg.x_max`.
pub fn integrate_scatter<V>(energy: f64, potential: V, m: f64, cfg: &IntegrationConfig) -> Result<OracleResult, OracleError>
where
    V: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(energy.is_finite() && energy > 0.0) {
        return Err(OracleError::NonPositiveEnergy(energy));
    }
    if !(m.is_finite() && m > 0.0) {
        return Err(OracleError::InvalidMass(m));
    }
    let limit = cfg.decay_tol * energy.max(1.0);
    let edge = boundary_potential(&potential, cfg.x_max);
    if !(edge <= limit) {
        return Err(OracleError::BoundaryNotDecayed {
            x_max: cfg.x_max,
            value: edge,
            limit,
        });
    }

    let k = (2.0 * m * energy).sqrt();
    let (a, b, steps) = match cfg.method {
        Method::Rk4 => rk4_sweep(energy, &potential, m, k, cfg)?,
        Method::Numerov => numerov_sweep(energy, &potential, m, k, cfg)?,
    };

    let a2 = a.norm_sqr();
    if !(a2.is_finite() && a2 > 0.0) {
        return Err(OracleError::NonFinite);
    }
    let transmission = 1.0 / a2;
    let reflection = b.norm_sqr() / a2;
    let flux_residual = (reflection + transmission - 1.0).abs();
    if !(flux_residual <= FLUX_TOL) {
        return Err(OracleError::StepTooCoarse {
            flux_residual,
            transmission,
            reflection,
        });
    }
    Ok(OracleResult {
        reflection,
        transmission,
        flux_residual,
        boundary_potential: edge,
        steps,
    })
}

/// Oracle run for the shifted Deng-Fan barrier with default settings.
pub fn barrier_scatter(energy: f64, params: &BarrierParams) -> Result<OracleResult, OracleError> {
    barrier_scatter_with(energy, params, &IntegrationConfig::for_barrier(energy, params))
}

pub fn barrier_scatter_with(
    energy: f64,
    params: &BarrierParams,
    cfg: &IntegrationConfig,
) -> Result<OracleResult, OracleError> {
    integrate_scatter(energy, |x| params.potential(x), params.m, cfg)
}

/// Segment edges from `+L` down to `-L`, including interior breakpoints.
fn segment_edges(cfg: &IntegrationConfig) -> Vec<f64> {
    let mut inner: Vec<f64> = cfg
        .breakpoints
        .iter()
        .copied()
        .filter(|b| b.is_finite() && b.abs() < cfg.x_max)
        .collect();
    inner.sort_by(|a, b| b.total_cmp(a));
    inner.dedup();
    let mut edges = Vec::with_capacity(inner.len() + 2);
    edges.push(cfg.x_max);
    edges.extend(inner);
    edges.push(-cfg.x_max);
    edges
}

type Sweep = (Complex64, Complex64, usize);

/// Potential sampler for one segment `[lo, hi]`, never looking past its
/// edges.
fn segment_g<'a, V: Fn(f64) -> f64>(energy: f64, potential: &'a V, m: f64, lo: f64, hi: f64) -> impl Fn(f64) -> f64 + 'a {
    // Sample endpoints from inside the segment so a jump at an edge is seen
    // from the correct side.
    let nudge = 1e-12 * hi.abs().max(lo.abs()).max(1.0);
    move |x: f64| 2.0 * m * (energy - potential(x.clamp(lo + nudge, hi - nudge)))
}

/// One classical RK4 step of `psi'' = -g(x) psi` from `x` to `x + h`.
fn rk4_step<G: Fn(f64) -> f64>(psi: Complex64, dpsi: Complex64, x: f64, h: f64, g: &G) -> (Complex64, Complex64) {
    let (g0, gm, g1) = (g(x), g(x + 0.5 * h), g(x + h));
    let k1p = dpsi;
    let k1d = -g0 * psi;
    let k2p = dpsi + 0.5 * h * k1d;
    let k2d = -gm * (psi + 0.5 * h * k1p);
    let k3p = dpsi + 0.5 * h * k2d;
    let k3d = -gm * (psi + 0.5 * h * k2p);
    let k4p = dpsi + h * k3d;
    let k4d = -g1 * (psi + h * k3p);
    (
        psi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        dpsi + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d),
    )
}

fn rk4_sweep<V: Fn(f64) -> f64>(energy: f64, potential: &V, m: f64, k: f64, cfg: &IntegrationConfig) -> Result<Sweep, OracleError> {
    let start = Complex64::from_polar(1.0, k * cfg.x_max);
    let mut psi = start;
    let mut dpsi = Complex64::new(0.0, k) * start;
    let mut steps = 0;

    for w in segment_edges(cfg).windows(2) {
        let (hi, lo) = (w[0], w[1]);
        let n = ((hi - lo) / cfg.step).ceil().max(1.0) as usize;
        let h = -(hi - lo) / n as f64;
        let g = segment_g(energy, potential, m, lo, hi);
        for j in 0..n {
            let x = hi + j as f64 * h;
            (psi, dpsi) = rk4_step(psi, dpsi, x, h, &g);
        }
        steps += n;
        if !(psi.norm().is_finite() && dpsi.norm().is_finite()) {
            return Err(OracleError::NonFinite);
        }
    }
    let (a, b) = plane_wave_decompose(psi, dpsi, k, -cfg.x_max)?;
    Ok((a, b, steps))
}

/// Numerov on each segment. At an interior breakpoint the slope is
/// recovered to fourth order from the last three nodes and the next segment
/// is restarted with a short RK4 hop, so jumps or kinks in the potential do
/// not degrade the order.
fn numerov_sweep<V: Fn(f64) -> f64>(
    energy: f64,
    potential: &V,
    m: f64,
    k: f64,
    cfg: &IntegrationConfig,
) -> Result<Sweep, OracleError> {
    const RESTART_SUBSTEPS: usize = 8;
    let edges = segment_edges(cfg);
    let last = edges.len() - 2;
    let mut psi_edge = Complex64::from_polar(1.0, k * cfg.x_max);
    let mut dpsi_edge = Complex64::new(0.0, k) * psi_edge;
    let mut steps = 0;

    for (s, w) in edges.windows(2).enumerate() {
        let (hi, lo) = (w[0], w[1]);
        let n = ((hi - lo) / cfg.step).ceil().max(2.0) as usize;
        let h = (hi - lo) / n as f64;
        let g = segment_g(energy, potential, m, lo, hi);
        let node = |j: usize| if j == n { lo } else { hi - j as f64 * h };
        let wgt = |x: f64| 1.0 + h * h * g(x) / 12.0;

        let mut prev = psi_edge;
        let mut cur = if s == 0 {
            Complex64::from_polar(1.0, k * node(1))
        } else {
            let sub = -h / RESTART_SUBSTEPS as f64;
            let (mut p, mut d) = (psi_edge, dpsi_edge);
            for i in 0..RESTART_SUBSTEPS {
                (p, d) = rk4_step(p, d, hi + i as f64 * sub, sub, &g);
            }
            p
        };
        let mut before_prev = prev;
        for j in 1..n {
            let next = ((12.0 - 10.0 * wgt(node(j))) * cur - wgt(node(j - 1)) * prev) / wgt(node(j + 1));
            before_prev = prev;
            prev = cur;
            cur = next;
        }
        steps += n;
        if !(cur.norm().is_finite() && prev.norm().is_finite()) {
            return Err(OracleError::NonFinite);
        }
        if s == last {
            let (a, b) = two_point_decompose(cur, lo, prev, node(n - 1), k)?;
            return Ok((a, b, steps));
        }
        // Upward one-sided slope at `lo` from psi and psi'' = -g psi.
        let (p0, p1, p2) = (cur, prev, before_prev);
        let (f0, f1, f2) = (-g(lo) * p0, -g(lo + h) * p1, -g(lo + 2.0 * h) * p2);
        let d4 = (f2 - 2.0 * f1 + f0) / (h * h);
        let d3 = (f1 - f0) / h - 0.5 * h * d4;
        psi_edge = p0;
        dpsi_edge = (p1 - p0) / h - 0.5 * h * f0 - h * h / 6.0 * d3 - h * h * h / 24.0 * d4;
    }
    unreachable!("segment_edges always yields at least one segment")
}
