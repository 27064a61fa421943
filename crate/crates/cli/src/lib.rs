//! `qhe` command-line driver: single cycles, TOML-configured sweeps, figure
//! recipes and the oracle validation report.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or configuration error,
//! 3 validation failure.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod params;
pub mod recipes;
pub mod sweep;

use clap::Parser;

pub use error::{CliError, CliResult, ExitKind};

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match cli::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli::dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}
