//! Sweep configuration files (flat TOML, unknown keys rejected).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::params::{CycleKind, Engine, Model, NameStyle, Orientation, Param, Physics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// One swept parameter over a grid, everything else fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: Model,
    pub cycle: CycleKind,
    pub sweep: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
    #[serde(default)]
    pub orientation: Orientation,
    #[serde(default)]
    pub format: Format,
    /// Destination file; not part of the hashed parameters.
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
    /// Adds `C_hot`, `C_cold`, `delta_C` and `scaled_work` columns
    /// (four-level model, coupling sweeps only).
    #[serde(default)]
    pub concurrence: bool,
    pub t_hot: Option<f64>,
    pub t_cold: Option<f64>,
    pub n: Option<u32>,
    pub omega_a: Option<f64>,
    pub omega_c: Option<f64>,
    pub k: Option<f64>,
    pub j: Option<f64>,
    pub g_start: Option<f64>,
    pub g_end: Option<f64>,
    pub g_cold: Option<f64>,
    pub g_hot: Option<f64>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let config: Self =
            toml::from_str(text).map_err(|e| CliError::usage(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError {
            message: format!("{}: {}", path.display(), e.message),
            ..e
        })
    }

    /// Canonical TOML of the parameters (field order fixed, `output` omitted).
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Overrides one key, with the same parsing and checks as the file.
    /// Values that are not valid TOML literals are taken as strings.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let mut table: toml::Table = toml::from_str(&self.canonical()).expect("round trip");
        if let Some(out) = &self.output {
            table.insert("output".into(), toml::Value::String(out.clone()));
        }
        let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_string()));
        table.insert(key.to_string(), parsed);
        let updated: Self = table
            .try_into()
            .map_err(|e| CliError::usage(format!("--set {key}={value}: {e}")))?;
        updated.validate()?;
        *self = updated;
        Ok(())
    }

    pub fn swept(&self) -> CliResult<Param> {
        let p = Param::from_key(&self.sweep).ok_or_else(|| {
            let valid: Vec<_> = Param::ALL.iter().map(|p| p.key()).collect();
            CliError::usage(format!(
                "key `sweep`: unknown parameter `{}` (valid: {}; `n` cannot be swept)",
                self.sweep,
                valid.join(", ")
            ))
        })?;
        if !p.applies(self.model, self.cycle) {
            return Err(CliError::usage(format!(
                "key `sweep`: `{}` does not apply to model {} with cycle {}",
                self.sweep, self.model, self.cycle
            )));
        }
        Ok(p)
    }

    pub fn physics(&self) -> Physics {
        Physics {
            t_hot: self.t_hot,
            t_cold: self.t_cold,
            n: self.n,
            omega_a: self.omega_a,
            omega_c: self.omega_c,
            k: self.k,
            j: self.j,
            g_start: self.g_start,
            g_end: self.g_end,
            g_cold: self.g_cold,
            g_hot: self.g_hot,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let swept = self.swept()?;
        for (name, v) in [("start", self.start), ("stop", self.stop)] {
            if !v.is_finite() {
                return Err(CliError::usage(format!("key `{name}`: must be finite")));
            }
        }
        if self.count == 0 {
            return Err(CliError::usage("key `count`: must be >= 1"));
        }
        if self.count > 1 && self.start >= self.stop {
            return Err(CliError::usage(
                "key `stop`: must exceed `start` when count > 1",
            ));
        }
        if self.scale == Scale::Log && self.start <= 0.0 {
            return Err(CliError::usage("key `start`: log scale requires start > 0"));
        }
        if self.concurrence {
            if self.model != Model::FourLevel {
                return Err(CliError::usage(
                    "key `concurrence`: requires model four-level",
                ));
            }
            if !swept.is_coupling() {
                return Err(CliError::usage(
                    "key `concurrence`: requires a coupling sweep",
                ));
            }
        }
        self.physics()
            .check(self.model, self.cycle, Some(swept), NameStyle::Key)?;
        // a representative point catches cross-parameter errors (temperature ordering)
        self.engine_at(self.start)?;
        Ok(())
    }

    /// Grid of swept values, ascending; the end points are exact.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.count;
        if n == 1 {
            return vec![self.start];
        }
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * f,
                    Scale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * f).exp(),
                }
            })
            .collect()
    }

    pub fn engine_at(&self, value: f64) -> CliResult<Engine> {
        let mut physics = self.physics();
        physics.set(self.swept()?, value);
        physics.engine(self.model, self.cycle, self.orientation, NameStyle::Key)
    }
}
