//! The three subcommands. Each computes into plain row structs and then
//! renders them as CSV or JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use dengfan::exec::{map_ordered, Execution};
use dengfan::grid::{points, Spacing};
use dengfan::oracle::{barrier_scatter_with, IntegrationConfig};
use dengfan::reference::{check_table1, TableCheck};
use dengfan::scatter::{solve, validate_grid};
use dengfan::{BarrierParams, MatchingMode};
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig, Series};

pub const TOL_DT: f64 = 1e-6;
pub const TOL_DR: f64 = 1e-6;
pub const TOL_UNITARITY: f64 = 1e-9;

/// Whether a command produced all its numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NumericalFailure,
}

/// Where rendered output goes.
pub struct Sink {
    pub output: Option<PathBuf>,
}

impl Sink {
    /// Writes one document per series for CSV (a file per series when there
    /// are several and an output path is given) or a single JSON document.
    fn emit(&self, docs: &[(Option<String>, String)]) -> Result<()> {
        match &self.output {
            None => {
                let mut out = String::new();
                for (label, body) in docs {
                    if let (Some(label), true) = (label, docs.len() > 1) {
                        let _ = writeln!(out, "# series: {label}");
                    }
                    out.push_str(body);
                }
                print!("{out}");
                Ok(())
            }
            Some(path) if docs.len() == 1 => write_file(path, &docs[0].1),
            Some(path) => {
                for (label, body) in docs {
                    write_file(&series_path(path, label.as_deref().unwrap_or("series")), body)?;
                }
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

/// `out.csv` with label `v0=1.25,q=0.8` becomes `out_v0-1.25_q-0.8.csv`.
pub fn series_path(path: &Path, label: &str) -> PathBuf {
    let tag: String = label
        .chars()
        .map(|c| match c {
            '=' => '-',
            ',' => '_',
            c => c,
        })
        .collect();
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

/// 9 significant digits.
fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct Document<'a, R> {
    config: &'a RunConfig,
    series: Vec<SeriesOut<R>>,
}

#[derive(Serialize)]
struct SeriesOut<R> {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    params: BarrierParams,
    v_max: f64,
    rows: Vec<R>,
}

fn to_json<R: Serialize>(config: &RunConfig, series: Vec<SeriesOut<R>>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Document { config, series })?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialRow {
    pub x: f64,
    #[serde(rename = "V")]
    pub v: f64,
}

pub fn potential_rows(config: &RunConfig, params: &BarrierParams) -> Vec<PotentialRow> {
    let (lo, hi) = config.x_range(params);
    points(lo, hi, config.n_points, Spacing::Linear)
        .into_iter()
        .map(|x| PotentialRow { x, v: params.potential(x) })
        .collect()
}

pub fn potential(config: &RunConfig, sink: &Sink) -> Result<Status> {
    let series: Vec<SeriesOut<PotentialRow>> = config
        .series()
        .into_iter()
        .map(|Series { label, params }| SeriesOut {
            rows: potential_rows(config, &params),
            label,
            v_max: params.v_max(),
            params,
        })
        .collect();
    let finite = series.iter().all(|s| s.rows.iter().all(|r| r.v.is_finite()));
    let docs = match config.output_format {
        OutputFormat::Json => vec![(None, to_json(config, series)?)],
        OutputFormat::Csv => series
            .into_iter()
            .map(|s| {
                let mut body = String::from("x,V\n");
                for r in &s.rows {
                    let _ = writeln!(body, "{},{}", num(r.x), num(r.v));
                }
                (s.label, body)
            })
            .collect(),
    };
    sink.emit(&docs)?;
    Ok(if finite { Status::Ok } else { Status::NumericalFailure })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatterRow {
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "E_over_Vmax")]
    pub e_over_vmax: f64,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitarity_residual: Option<f64>,
    #[serde(rename = "T_oracle", skip_serializing_if = "Option::is_none")]
    pub t_oracle: Option<f64>,
    #[serde(rename = "R_oracle", skip_serializing_if = "Option::is_none")]
    pub r_oracle: Option<f64>,
    #[serde(rename = "delta_T", skip_serializing_if = "Option::is_none")]
    pub delta_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ScatterRow {
    fn delta_r(&self) -> Option<f64> {
        Some((self.r? - self.r_oracle?).abs())
    }
}

fn oracle_config(config: &RunConfig, energy: f64, params: &BarrierParams) -> IntegrationConfig {
    let mut cfg = IntegrationConfig::for_barrier(energy, params).with_method(config.oracle_method);
    if let Some(step) = config.oracle_step {
        cfg = cfg.with_step(step);
    }
    cfg
}

fn scatter_row(config: &RunConfig, params: &BarrierParams, v_max: f64, energy: f64, oracle: bool) -> ScatterRow {
    let mut errors = Vec::new();
    let analytic = solve(energy, params, config.mode).map_err(|e| errors.push(e.to_string())).ok();
    let numeric = oracle
        .then(|| {
            barrier_scatter_with(energy, params, &oracle_config(config, energy, params))
                .map_err(|e| errors.push(format!("oracle: {e}")))
                .ok()
        })
        .flatten();
    let t = analytic.as_ref().map(|a| a.transmission);
    let t_oracle = numeric.map(|o| o.transmission);
    ScatterRow {
        energy,
        e_over_vmax: energy / v_max,
        t,
        r: analytic.as_ref().map(|a| a.reflection),
        unitarity_residual: analytic.as_ref().map(|a| a.unitarity_residual),
        t_oracle,
        r_oracle: numeric.map(|o| o.reflection),
        delta_t: t.zip(t_oracle).map(|(a, b)| (a - b).abs()),
        error: (!errors.is_empty()).then(|| errors.join("; ")),
    }
}

pub fn scatter_rows(config: &RunConfig, params: &BarrierParams, oracle: bool, exec: Execution) -> Result<Vec<ScatterRow>> {
    let energies = config.grid().energies(params);
    validate_grid(&energies)?;
    let v_max = params.v_max();
    Ok(map_ordered(&energies, exec, |&e| scatter_row(config, params, v_max, e, oracle)))
}

fn scatter_series(config: &RunConfig, oracle: bool, exec: Execution) -> Result<Vec<SeriesOut<ScatterRow>>> {
    config
        .series()
        .into_iter()
        .map(|Series { label, params }| {
            let rows = scatter_rows(config, &params, oracle, exec)
                .with_context(|| format!("series {}", label.as_deref().unwrap_or("(base)")))?;
            Ok(SeriesOut { label, v_max: params.v_max(), params, rows })
        })
        .collect()
}

fn scatter_csv(rows: &[ScatterRow], oracle: bool) -> String {
    let with_error = rows.iter().any(|r| r.error.is_some());
    let mut out = String::from("E,E_over_Vmax,T,R,unitarity_residual");
    if oracle {
        out.push_str(",T_oracle,R_oracle,delta_T");
    }
    if with_error {
        out.push_str(",error");
    }
    out.push('\n');
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    for r in rows {
        let mut fields = vec![num(r.energy), num(r.e_over_vmax), opt(r.t), opt(r.r), opt(r.unitarity_residual)];
        if oracle {
            fields.extend([opt(r.t_oracle), opt(r.r_oracle), opt(r.delta_t)]);
        }
        if with_error {
            fields.push(csv_field(r.error.as_deref().unwrap_or("")));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn scatter(config: &RunConfig, sink: &Sink, exec: Execution) -> Result<Status> {
    let oracle = config.oracle_enabled;
    let series = scatter_series(config, oracle, exec)?;
    let failed = series.iter().flat_map(|s| &s.rows).any(|r| r.error.is_some());
    for s in &series {
        for r in s.rows.iter().filter(|r| r.error.is_some()) {
            eprintln!("{}E = {}: {}", prefix(&s.label), num(r.energy), r.error.as_deref().unwrap_or(""));
        }
    }
    let docs = match config.output_format {
        OutputFormat::Json => vec![(None, to_json(config, series)?)],
        OutputFormat::Csv => series.into_iter().map(|s| (s.label, scatter_csv(&s.rows, oracle))).collect(),
    };
    sink.emit(&docs)?;
    Ok(if failed { Status::NumericalFailure } else { Status::Ok })
}

fn prefix(label: &Option<String>) -> String {
    label.as_ref().map(|l| format!("[{l}] ")).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize)]
pub struct Offender {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
    pub energy: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeCheck {
    pub mode: MatchingMode,
    pub reproduced: bool,
    pub max_dt: f64,
    pub max_dr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl From<TableCheck> for ModeCheck {
    fn from(c: TableCheck) -> Self {
        Self {
            mode: c.mode,
            reproduced: c.reproduced(),
            max_dt: c.max_dt,
            max_dr: c.max_dr,
            error: c.error,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub points: usize,
    pub max_delta_t: f64,
    pub max_delta_r: f64,
    pub max_unitarity_residual: f64,
    pub tol_delta_t: f64,
    pub tol_delta_r: f64,
    pub tol_unitarity: f64,
    pub table1: Vec<ModeCheck>,
    pub offending: Vec<Offender>,
    pub passed: bool,
}

pub fn verify_report(config: &RunConfig, exec: Execution) -> Result<VerifyReport> {
    let series = scatter_series(config, true, exec)?;
    let (mut max_dt, mut max_dr, mut max_res, mut points) = (0.0f64, 0.0f64, 0.0f64, 0);
    let mut offending = Vec::new();
    for s in &series {
        for r in &s.rows {
            points += 1;
            let dt = r.delta_t.unwrap_or(f64::INFINITY);
            let dr = r.delta_r().unwrap_or(f64::INFINITY);
            let res = r.unitarity_residual.unwrap_or(f64::INFINITY);
            max_dt = max_dt.max(dt);
            max_dr = max_dr.max(dr);
            max_res = max_res.max(res);
            let reason = if let Some(e) = &r.error {
                Some(e.clone())
            } else if !(dt <= TOL_DT && dr <= TOL_DR && res <= TOL_UNITARITY) {
                Some(format!("|dT| = {dt:.3e}, |dR| = {dr:.3e}, |R+T-1| = {res:.3e}"))
            } else {
                None
            };
            if let Some(reason) = reason {
                offending.push(Offender { series: s.label.clone(), energy: r.energy, reason });
            }
        }
    }
    let table1 = [MatchingMode::Corrected, MatchingMode::Paper]
        .into_iter()
        .map(|m| check_table1(m).into())
        .collect();
    Ok(VerifyReport {
        config: config.clone(),
        points,
        max_delta_t: max_dt,
        max_delta_r: max_dr,
        max_unitarity_residual: max_res,
        tol_delta_t: TOL_DT,
        tol_delta_r: TOL_DR,
        tol_unitarity: TOL_UNITARITY,
        table1,
        passed: offending.is_empty(),
        offending,
    })
}

fn verify_text(r: &VerifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "verify: {} points, mode {}, oracle {}",
        r.points,
        r.config.mode.name(),
        match r.config.oracle_method {
            dengfan::oracle::Method::Rk4 => "rk4",
            dengfan::oracle::Method::Numerov => "numerov",
        }
    );
    let _ = writeln!(out, "max |T - T_oracle|: {:.3e} (tol {:e})", r.max_delta_t, r.tol_delta_t);
    let _ = writeln!(out, "max |R - R_oracle|: {:.3e} (tol {:e})", r.max_delta_r, r.tol_delta_r);
    let _ = writeln!(out, "max |R + T - 1|: {:.3e} (tol {:e})", r.max_unitarity_residual, r.tol_unitarity);
    let reproducing: Vec<&str> = r.table1.iter().filter(|c| c.reproduced).map(|c| c.mode.name()).collect();
    let _ = writeln!(
        out,
        "table 1 reproduced by: {}",
        if reproducing.is_empty() { "no mode".to_string() } else { reproducing.join(", ") + " mode" }
    );
    for c in &r.table1 {
        match &c.error {
            Some(e) => {
                let _ = writeln!(out, "  {}: fails ({e})", c.mode.name());
            }
            None => {
                let _ = writeln!(out, "  {}: max |dT| {:.3e}, max |dR| {:.3e}", c.mode.name(), c.max_dt, c.max_dr);
            }
        }
    }
    if !r.offending.is_empty() {
        let _ = writeln!(out, "offending energies:");
        for o in &r.offending {
            let _ = writeln!(out, "  {}E = {}: {}", prefix(&o.series), num(o.energy), o.reason);
        }
    }
    let _ = writeln!(out, "result: {}", if r.passed { "PASS" } else { "FAIL" });
    out
}

pub fn verify(config: &RunConfig, sink: &Sink, exec: Execution) -> Result<Status> {
    let report = verify_report(config, exec)?;
    let body = match config.output_format {
        OutputFormat::Csv => verify_text(&report),
        OutputFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
    };
    sink.emit(&[(None, body)])?;
    Ok(if report.passed { Status::Ok } else { Status::NumericalFailure })
}
