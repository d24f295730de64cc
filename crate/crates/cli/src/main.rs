//! `dengfan`: transmission and reflection through the shifted Deng-Fan
//! barrier, from the command line.
//!
//! Exit codes: 0 success, 1 usage, config or I/O error, 2 numerical failure
//! or tolerance breach.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use dengfan::exec::Execution;
use dengfan::grid::{Preset, Spacing};
use dengfan::oracle::Method;
use dengfan::MatchingMode;

use commands::{Sink, Status};
use config::{OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "dengfan", version, about = "Scattering by the symmetric shifted Deng-Fan barrier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample V(x) on [x_min, x_max]
    Potential(RunArgs),
    /// T and R over an energy grid
    Scatter(RunArgs),
    /// Compare the closed form against direct integration
    Verify(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Corrected,
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rk4,
    Numerov,
}

/// Settings are layered: defaults, then `--config`, then a preset, then
/// the remaining flags.
#[derive(Args)]
struct RunArgs {
    /// JSON run configuration
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Table 1 grid: E = 0.005..0.1, 20 points
    #[arg(long, group = "preset")]
    table1: bool,
    /// E/V_max = 0.01..5, 500 points
    #[arg(long, group = "preset")]
    fig3: bool,
    /// E/V_max up to 0.5 on a log grid, 2000 points, V0 = 1.15, 1.25, 1.35
    #[arg(long, group = "preset")]
    fig4: bool,

    /// Well depth; several values give one series each
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    v0: Vec<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long = "xe")]
    x_e: Option<f64>,
    /// Deformation for x < 0; several values set q = q_tilde per series
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    q: Vec<f64>,
    /// Deformation for x > 0
    #[arg(long = "q-tilde")]
    q_tilde: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,

    #[arg(long)]
    emin: Option<f64>,
    #[arg(long)]
    emax: Option<f64>,
    /// Number of energies (or x samples for `potential`)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    spacing: Option<SpacingArg>,
    /// Read --emin/--emax in units of V_max
    #[arg(long, conflicts_with = "absolute")]
    relative: bool,
    /// Read --emin/--emax as absolute energies
    #[arg(long)]
    absolute: bool,

    #[arg(long, allow_negative_numbers = true)]
    xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xmax: Option<f64>,

    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Add direct-integration columns
    #[arg(long)]
    oracle: bool,
    #[arg(long = "oracle-step")]
    oracle_step: Option<f64>,
    #[arg(long = "oracle-method", value_enum)]
    oracle_method: Option<MethodArg>,

    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write here instead of stdout; CSV with several series writes one file each
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Compute on the calling thread only
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn preset(&self) -> Option<Preset> {
        match (self.table1, self.fig3, self.fig4) {
            (true, _, _) => Some(Preset::Table1),
            (_, true, _) => Some(Preset::Fig3),
            (_, _, true) => Some(Preset::Fig4),
            _ => None,
        }
    }

    fn build(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(p) = self.preset() {
            c.apply_preset(p);
        }
        match self.v0.as_slice() {
            [] => {}
            [v0] => {
                c.params.v0 = *v0;
                c.v0_list.clear();
            }
            list => c.v0_list = list.to_vec(),
        }
        match self.q.as_slice() {
            [] => {}
            [q] => {
                c.params.q = *q;
                c.q_list.clear();
            }
            list => c.q_list = list.to_vec(),
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut c.params.a, self.a);
        set(&mut c.params.x_e, self.x_e);
        set(&mut c.params.q_tilde, self.q_tilde);
        set(&mut c.params.m, self.mass);
        set(&mut c.e_min, self.emin);
        set(&mut c.e_max, self.emax);
        if let Some(n) = self.n {
            c.n_points = n;
        }
        if let Some(s) = self.spacing {
            c.spacing = match s {
                SpacingArg::Linear => Spacing::Linear,
                SpacingArg::Log => Spacing::Log,
            };
        }
        if self.relative {
            c.relative_to_vmax = true;
        }
        if self.absolute {
            c.relative_to_vmax = false;
        }
        c.x_min = self.xmin.or(c.x_min);
        c.x_max = self.xmax.or(c.x_max);
        if let Some(m) = self.mode {
            c.mode = match m {
                ModeArg::Corrected => MatchingMode::Corrected,
                ModeArg::Paper => MatchingMode::Paper,
            };
        }
        if self.oracle {
            c.oracle_enabled = true;
        }
        c.oracle_step = self.oracle_step.or(c.oracle_step);
        if let Some(m) = self.oracle_method {
            c.oracle_method = match m {
                MethodArg::Rk4 => Method::Rk4,
                MethodArg::Numerov => Method::Numerov,
            };
        }
        if let Some(f) = self.format {
            c.output_format = f;
        }
        c.validate()?;
        Ok(c)
    }

    fn sink(&self) -> Sink {
        Sink { output: self.output.clone() }
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Potential(args) => commands::potential(&args.build()?, &args.sink()),
        Command::Scatter(args) => commands::scatter(&args.build()?, &args.sink(), args.execution()),
        Command::Verify(args) => {
            let config = RunConfig { oracle_enabled: true, ..args.build()? };
            commands::verify(&config, &args.sink(), args.execution())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::NumericalFailure) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
