//! Command-line surface and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qhe_core::{validate_closed_forms, GridSpec};

use crate::config::{Format, SweepConfig};
use crate::error::{CliError, CliResult};
use crate::output::{write_file, Document};
use crate::params::{CycleKind, Model, NameStyle, Orientation, Physics};
use crate::recipes::{recipe, RECIPES};
use crate::sweep::run_sweep;

#[derive(Debug, Parser)]
#[command(
    name = "qhe",
    version,
    about = "Quantum Stirling and Otto engines on cavity-QED working substances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one cycle and print the result as JSON.
    Cycle(CycleArgs),
    /// Sweep one parameter as described by a TOML config.
    Sweep(SweepArgs),
    /// Regenerate figure data from built-in recipes.
    Figures(FiguresArgs),
    /// Compare every closed form against the dense-diagonalization oracle.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CycleArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long, value_enum)]
    pub cycle: CycleKind,
    #[arg(long, value_enum, default_value_t = Orientation::Standard)]
    pub orientation: Orientation,
    #[arg(long)]
    pub t_hot: Option<f64>,
    #[arg(long)]
    pub t_cold: Option<f64>,
    /// Photon number of the sector (>= 1 for four-level).
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub omega_a: Option<f64>,
    #[arg(long)]
    pub omega_c: Option<f64>,
    /// Atom-atom dipole coupling (four-level).
    #[arg(long)]
    pub k: Option<f64>,
    /// Ising coupling (four-level).
    #[arg(long)]
    pub j: Option<f64>,
    #[arg(long)]
    pub g_start: Option<f64>,
    #[arg(long)]
    pub g_end: Option<f64>,
    #[arg(long)]
    pub g_cold: Option<f64>,
    #[arg(long)]
    pub g_hot: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's `output`; standard output when neither is set.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Recipe name or `all`.
    #[arg(long)]
    pub which: String,
    #[arg(long, default_value = "figures")]
    pub out_dir: PathBuf,
    /// Override a recipe parameter, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Number of random parameter draws.
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Report destination; standard output when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn emit(text: &str) -> CliResult<()> {
    std::io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io(format!("cannot write to standard output: {e}")))
}

pub fn cmd_cycle(a: &CycleArgs) -> CliResult<()> {
    let physics = Physics {
        t_hot: a.t_hot,
        t_cold: a.t_cold,
        n: a.n,
        omega_a: a.omega_a,
        omega_c: a.omega_c,
        k: a.k,
        j: a.j,
        g_start: a.g_start,
        g_end: a.g_end,
        g_cold: a.g_cold,
        g_hot: a.g_hot,
    };
    let result = physics
        .engine(a.model, a.cycle, a.orientation, NameStyle::Flag)?
        .run()?;
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(&result).expect("json")
    ))
}

pub fn cmd_sweep(a: &SweepArgs) -> CliResult<()> {
    let config = SweepConfig::load(&a.config)?;
    let table = run_sweep(&config)?;
    let format = config.format;
    let out = a
        .output
        .clone()
        .or_else(|| config.output.clone().map(PathBuf::from));
    let text = Document::single(config, table).render(format);
    match out {
        Some(path) => write_file(&path, &text),
        None => emit(&text),
    }
}

pub fn cmd_figures(a: &FiguresArgs) -> CliResult<()> {
    let names: Vec<&str> = if a.which == "all" {
        RECIPES.to_vec()
    } else {
        vec![a.which.as_str()]
    };
    let mut panels = Vec::new();
    for name in names {
        panels.extend(recipe(name)?);
    }
    for raw in &a.overrides {
        let (key, value) = raw
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("--set expects key=value, got `{raw}`")))?;
        for p in &mut panels {
            p.apply(key.trim(), value.trim())?;
        }
    }
    std::fs::create_dir_all(&a.out_dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", a.out_dir.display())))?;
    for p in &panels {
        let path = a
            .out_dir
            .join(format!("{}.{}", p.name(), a.format.extension()));
        write_file(&path, &p.run()?.render(a.format))?;
        emit(&format!("{}\n", path.display()))?;
    }
    Ok(())
}

pub fn cmd_validate(a: &ValidateArgs) -> CliResult<()> {
    let grid =
        GridSpec::new(a.grid, a.seed).map_err(|_| CliError::usage("--grid: must be >= 1"))?;
    let report = validate_closed_forms(grid).map_err(|e| CliError::validation(e.to_string()))?;
    let json = format!("{}\n", report.to_json());
    match &a.report {
        Some(path) => write_file(path, &json)?,
        None => emit(&json)?,
    }
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    if report.overall {
        Ok(())
    } else {
        Err(CliError::validation(format!(
            "validation failed: {}",
            failed.join(", ")
        )))
    }
}

pub fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Cycle(a) => cmd_cycle(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Figures(a) => cmd_figures(a),
        Command::Validate(a) => cmd_validate(a),
    }
}
