//! `shc`: batch front end for the heat content library.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or configuration
//! error, 3 numerical failure.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use shc_core::mc::{with_workers, worker_count};

use config::{Check, Command, CurveQuantity, Format, RunConfig, TGrid};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<shc_core::Error> for CliError {
    fn from(e: shc_core::Error) -> Self {
        use shc_core::Error::*;
        match e {
            Domain(_) | UnsupportedDomain(_) | PointOutsideDomain(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "shc", version, about = "Spectral heat content of subordinate killed Brownian motion")]
pub struct Cli {
    /// TOML file with a run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Density of the subordinator on a logarithmic grid.
    Density(DensityArgs),
    /// A heat content curve on a geometric time grid.
    Curve(CurveArgs),
    /// Run a named verification; exits 1 if any verdict fails.
    Verify(VerifyArgs),
    /// Constants and deterministic checks for one domain and alpha.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Time of the subordinator.
    #[arg(long)]
    pub t: Option<f64>,
    /// Relative tolerance of each density value.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct GridArgs {
    /// Domain, `interval:a,b` or `ball3:r`.
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub tail_order: Option<u32>,
    #[arg(long)]
    pub n_samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Finest monitoring grid of the jump-process estimators.
    #[arg(long)]
    pub n_grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub quantity: Option<CurveQuantity>,
    /// Prepend the row `t = 0` for heat content curves.
    #[arg(long)]
    pub include_origin: bool,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Option<Check>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub grid: GridArgs,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl GridArgs {
    fn apply(&self, cfg: &mut RunConfig, default_grid: TGrid) -> Result<(), CliError> {
        if let Some(d) = &self.domain {
            cfg.domain = d.parse().map_err(|e: shc_core::Error| CliError::Usage(e.to_string()))?;
        }
        set(&mut cfg.alpha, self.alpha);
        if self.t_max.is_some() || self.t_min.is_some() || self.points.is_some() {
            let mut g = cfg.t_grid.unwrap_or(default_grid);
            set(&mut g.t_max, self.t_max);
            set(&mut g.t_min, self.t_min);
            set(&mut g.points, self.points);
            cfg.t_grid = Some(g);
        }
        set(&mut cfg.quadrature.rel_tol, self.rel_tol);
        set(&mut cfg.quadrature.abs_tol, self.abs_tol);
        set(&mut cfg.quadrature.tail_order, self.tail_order);
        set(&mut cfg.mc.n_samples, self.n_samples);
        set(&mut cfg.mc.seed, self.seed);
        set(&mut cfg.mc.n_grid, self.n_grid);
        Ok(())
    }
}

impl Cli {
    /// Defaults, then the config file, then flags.
    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        set(&mut cfg.format, self.format);
        match &self.command {
            Sub::Density(a) => {
                cfg.command = Command::Density;
                set(&mut cfg.alpha, a.alpha);
                set(&mut cfg.density.x_min, a.x_min);
                set(&mut cfg.density.x_max, a.x_max);
                set(&mut cfg.density.points, a.points);
                set(&mut cfg.density.t, a.t);
                set(&mut cfg.density.tol, a.tol);
            }
            Sub::Curve(a) => {
                cfg.command = Command::Curve;
                set(&mut cfg.quantity, a.quantity);
                cfg.include_origin |= a.include_origin;
                a.grid.apply(&mut cfg, TGrid { t_max: 1e-1, t_min: 1e-4, points: 10 })?;
            }
            Sub::Verify(a) => {
                cfg.command = Command::Verify;
                if a.check.is_some() {
                    cfg.check = a.check;
                }
                if cfg.check.is_none() {
                    return Err(CliError::Usage("verify needs a check name".into()));
                }
                a.grid.apply(&mut cfg, TGrid { t_max: 1e-3, t_min: 1e-7, points: 9 })?;
            }
            Sub::Report(a) => {
                cfg.command = Command::Report;
                a.grid.apply(&mut cfg, TGrid { t_max: 1e-3, t_min: 1e-7, points: 9 })?;
            }
        }
        Ok(cfg)
    }
}

/// Executes a resolved configuration on the worker pool.
pub fn execute(cfg: &RunConfig) -> Result<commands::Output, CliError> {
    with_workers(worker_count(), || match cfg.command {
        Command::Density => commands::density(cfg),
        Command::Curve => commands::curve(cfg),
        Command::Verify => commands::verify(cfg),
        Command::Report => commands::report(cfg),
    })
}
