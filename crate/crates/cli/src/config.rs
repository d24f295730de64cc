//! Run configuration: built-in defaults, JSON config files and presets.

use std::path::Path;

use anyhow::{bail, Context, Result};
use dengfan::grid::{EnergyGrid, Preset, Spacing};
use dengfan::oracle::Method;
use dengfan::{BarrierParams, MatchingMode};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Everything a run needs. Serialized field names are the JSON config schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: BarrierParams,
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
    /// Read `e_min`/`e_max` in units of each barrier's `V_max`.
    pub relative_to_vmax: bool,
    pub mode: MatchingMode,
    pub output_format: OutputFormat,
    pub oracle_enabled: bool,
    /// One series per value; empty means `params.v0` only.
    pub v0_list: Vec<f64>,
    /// One series per value, applied to both `q` and `q_tilde`.
    pub q_list: Vec<f64>,
    /// Potential sampling window; defaults to `[-10/a, 10/a]`.
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub oracle_step: Option<f64>,
    pub oracle_method: Method,
}

impl Default for RunConfig {
    fn default() -> Self {
        let grid = Preset::Table1.grid();
        Self {
            params: BarrierParams::table1(),
            e_min: grid.e_min,
            e_max: grid.e_max,
            n_points: grid.n_points,
            spacing: grid.spacing,
            relative_to_vmax: grid.relative_to_vmax,
            mode: MatchingMode::Corrected,
            output_format: OutputFormat::Csv,
            oracle_enabled: false,
            v0_list: Vec::new(),
            q_list: Vec::new(),
            x_min: None,
            x_max: None,
            oracle_step: None,
            oracle_method: Method::Rk4,
        }
    }
}

/// A labelled parameter set; lists in the config expand into several.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: Option<String>,
    pub params: BarrierParams,
}

impl RunConfig {
    /// Reads a config file. Both a bare config object and the JSON output of
    /// a previous run (config under a `config` key) are accepted.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut value: serde_json::Value = serde_json::from_str(text)?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn apply_preset(&mut self, preset: Preset) {
        let grid = preset.grid();
        self.params = preset.params();
        self.set_grid(&grid);
        self.v0_list = preset.v0_list();
        self.q_list.clear();
    }

    fn set_grid(&mut self, grid: &EnergyGrid) {
        self.e_min = grid.e_min;
        self.e_max = grid.e_max;
        self.n_points = grid.n_points;
        self.spacing = grid.spacing;
        self.relative_to_vmax = grid.relative_to_vmax;
    }

    pub fn grid(&self) -> EnergyGrid {
        EnergyGrid {
            e_min: self.e_min,
            e_max: self.e_max,
            n_points: self.n_points,
            spacing: self.spacing,
            relative_to_vmax: self.relative_to_vmax,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n_points == 0 {
            bail!("n_points must be at least 1");
        }
        if !(self.e_min > 0.0 && self.e_min.is_finite()) {
            bail!("e_min must be positive, got {}", self.e_min);
        }
        if !(self.e_max.is_finite() && (self.e_max > self.e_min || (self.n_points == 1 && self.e_max >= self.e_min))) {
            bail!("need e_min < e_max, got {} and {}", self.e_min, self.e_max);
        }
        for series in self.series() {
            series.params.validate()?;
        }
        if let (Some(lo), Some(hi)) = (self.x_min, self.x_max) {
            if !(lo < hi || (self.n_points == 1 && lo <= hi)) {
                bail!("need x_min < x_max, got {lo} and {hi}");
            }
        }
        if let Some(step) = self.oracle_step {
            if step.is_nan() || step <= 0.0 {
                bail!("oracle_step must be positive, got {step}");
            }
        }
        Ok(())
    }

    /// Parameter sets to run, in output order: every `v0` for each `q`.
    pub fn series(&self) -> Vec<Series> {
        let v0s: Vec<Option<f64>> = if self.v0_list.is_empty() {
            vec![None]
        } else {
            self.v0_list.iter().copied().map(Some).collect()
        };
        let qs: Vec<Option<f64>> = if self.q_list.is_empty() {
            vec![None]
        } else {
            self.q_list.iter().copied().map(Some).collect()
        };
        let mut out = Vec::new();
        for q in &qs {
            for v0 in &v0s {
                let mut params = self.params;
                let mut label = Vec::new();
                if let Some(v0) = v0 {
                    params.v0 = *v0;
                    label.push(format!("v0={v0}"));
                }
                if let Some(q) = q {
                    params.q = *q;
                    params.q_tilde = *q;
                    label.push(format!("q={q}"));
                }
                out.push(Series {
                    label: (!label.is_empty()).then(|| label.join(",")),
                    params,
                });
            }
        }
        out
    }

    pub fn x_range(&self, params: &BarrierParams) -> (f64, f64) {
        let half = 10.0 / params.a;
        (self.x_min.unwrap_or(-half), self.x_max.unwrap_or(half))
    }
}
