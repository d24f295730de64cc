//! Energy grids and the built-in parameter presets.

use serde::{Deserialize, Serialize};

use crate::model::BarrierParams;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `n` points from `lo` to `hi` inclusive. A single point sits at `lo`.
pub fn points(lo: f64, hi: f64, n: usize, spacing: Spacing) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = (n - 1) as f64;
            match spacing {
                Spacing::Linear => (0..n).map(|i| lo + (hi - lo) * i as f64 / last).collect(),
                Spacing::Log => {
                    let (a, b) = (lo.ln(), hi.ln());
                    (0..n)
                        .map(|i| match i {
                            0 => lo,
                            i if i == n - 1 => hi,
                            i => (a + (b - a) * i as f64 / last).exp(),
                        })
                        .collect()
                }
            }
        }
    }
}

/// Energy window, either absolute or in units of each barrier's `V(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGrid {
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
    #[serde(default)]
    pub spacing: Spacing,
    #[serde(default)]
    pub relative_to_vmax: bool,
}

impl EnergyGrid {
    pub fn energies(&self, params: &BarrierParams) -> Vec<f64> {
        let scale = if self.relative_to_vmax { params.v_max() } else { 1.0 };
        points(self.e_min * scale, self.e_max * scale, self.n_points, self.spacing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Table1,
    Fig3,
    Fig4,
}

/// Well depths compared in the low-energy preset.
pub const FIG4_V0: [f64; 3] = [1.15, 1.25, 1.35];

impl Preset {
    pub fn grid(self) -> EnergyGrid {
        match self {
            Preset::Table1 => EnergyGrid {
                e_min: 0.005,
                e_max: 0.100,
                n_points: 20,
                spacing: Spacing::Linear,
                relative_to_vmax: false,
            },
            Preset::Fig3 => EnergyGrid {
                e_min: 0.01,
                e_max: 5.0,
                n_points: 500,
                spacing: Spacing::Linear,
                relative_to_vmax: true,
            },
            // Log spacing resolves the structure just above E = 0.
            Preset::Fig4 => EnergyGrid {
                e_min: 1e-7,
                e_max: 0.5,
                n_points: 2000,
                spacing: Spacing::Log,
                relative_to_vmax: true,
            },
        }
    }

    pub fn params(self) -> BarrierParams {
        BarrierParams::table1()
    }

    /// Values of `V0` swept by the preset; empty means the base value only.
    pub fn v0_list(self) -> Vec<f64> {
        match self {
            Preset::Fig4 => FIG4_V0.to_vec(),
            _ => Vec::new(),
        }
    }
}
