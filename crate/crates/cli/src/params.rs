//! Physical parameter sets shared by flags, config files and recipes.

use std::fmt;

use qhe_core::{
    run_otto, run_stirling, CycleResult, Error, FourLevelParams, JcParams, OttoSpec, StirlingSpec,
    SubstanceSpec, Temperature,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Jc,
    FourLevel,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Jc => "jc",
            Model::FourLevel => "four-level",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CycleKind {
    Stirling,
    Otto,
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CycleKind::Stirling => "stirling",
            CycleKind::Otto => "otto",
        })
    }
}

/// Which coupling each bath sees. `Swapped` exchanges the two coupling
/// values before the cycle runs (`g_start ↔ g_end`, `g_cold ↔ g_hot`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    #[default]
    Standard,
    Swapped,
}

/// How parameter names appear in diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameStyle {
    Flag,
    Key,
}

/// Real-valued physical parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    THot,
    TCold,
    OmegaA,
    OmegaC,
    K,
    J,
    GStart,
    GEnd,
    GCold,
    GHot,
}

impl Param {
    pub const ALL: [Param; 10] = [
        Param::THot,
        Param::TCold,
        Param::OmegaA,
        Param::OmegaC,
        Param::K,
        Param::J,
        Param::GStart,
        Param::GEnd,
        Param::GCold,
        Param::GHot,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Param::THot => "t_hot",
            Param::TCold => "t_cold",
            Param::OmegaA => "omega_a",
            Param::OmegaC => "omega_c",
            Param::K => "k",
            Param::J => "j",
            Param::GStart => "g_start",
            Param::GEnd => "g_end",
            Param::GCold => "g_cold",
            Param::GHot => "g_hot",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.key() == key)
    }

    pub fn is_coupling(self) -> bool {
        matches!(
            self,
            Param::GStart | Param::GEnd | Param::GCold | Param::GHot
        )
    }

    pub fn applies(self, model: Model, cycle: CycleKind) -> bool {
        match self {
            Param::THot | Param::TCold => true,
            Param::OmegaA | Param::OmegaC => model == Model::Jc,
            Param::K | Param::J => model == Model::FourLevel,
            Param::GStart | Param::GEnd => cycle == CycleKind::Stirling,
            Param::GCold | Param::GHot => cycle == CycleKind::Otto,
        }
    }

    pub fn display(self, style: NameStyle) -> String {
        display_name(self.key(), style)
    }
}

pub fn display_name(key: &str, style: NameStyle) -> String {
    match style {
        NameStyle::Flag => format!("--{}", key.replace('_', "-")),
        NameStyle::Key => format!("key `{key}`"),
    }
}

/// Fixed physical parameters; unset entries are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Physics {
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

impl Physics {
    pub fn get(&self, p: Param) -> Option<f64> {
        match p {
            Param::THot => self.t_hot,
            Param::TCold => self.t_cold,
            Param::OmegaA => self.omega_a,
            Param::OmegaC => self.omega_c,
            Param::K => self.k,
            Param::J => self.j,
            Param::GStart => self.g_start,
            Param::GEnd => self.g_end,
            Param::GCold => self.g_cold,
            Param::GHot => self.g_hot,
        }
    }

    pub fn set(&mut self, p: Param, v: f64) {
        let slot = match p {
            Param::THot => &mut self.t_hot,
            Param::TCold => &mut self.t_cold,
            Param::OmegaA => &mut self.omega_a,
            Param::OmegaC => &mut self.omega_c,
            Param::K => &mut self.k,
            Param::J => &mut self.j,
            Param::GStart => &mut self.g_start,
            Param::GEnd => &mut self.g_end,
            Param::GCold => &mut self.g_cold,
            Param::GHot => &mut self.g_hot,
        };
        *slot = Some(v);
    }

    /// Checks that exactly the parameters of `model`/`cycle` are present
    /// (ignoring `free`, which will be bound later) and that each lies in
    /// its domain.
    pub fn check(
        &self,
        model: Model,
        cycle: CycleKind,
        free: Option<Param>,
        style: NameStyle,
    ) -> CliResult<()> {
        for p in Param::ALL {
            let value = self.get(p);
            if !p.applies(model, cycle) {
                if value.is_some() {
                    return Err(CliError::usage(format!(
                        "{} does not apply to model {model} with cycle {cycle}",
                        p.display(style)
                    )));
                }
                continue;
            }
            if Some(p) == free {
                if value.is_some() {
                    return Err(CliError::usage(format!(
                        "{} is the swept parameter and must not also be fixed",
                        p.display(style)
                    )));
                }
                continue;
            }
            match value {
                None => {
                    return Err(CliError::usage(format!("missing {}", p.display(style))));
                }
                Some(v) => check_domain(p, v, style)?,
            }
        }
        match self.n {
            None => Err(CliError::usage(format!(
                "missing {}",
                display_name("n", style)
            ))),
            Some(0) if model == Model::FourLevel => Err(CliError::usage(format!(
                "{}: must be >= 1 for the four-level model",
                display_name("n", style)
            ))),
            Some(_) => Ok(()),
        }
    }

    /// Builds the engine. Call [`Physics::check`] first for named diagnostics.
    pub fn engine(
        &self,
        model: Model,
        cycle: CycleKind,
        orientation: Orientation,
        style: NameStyle,
    ) -> CliResult<Engine> {
        self.check(model, cycle, None, style)?;
        let value = |p: Param| self.get(p).expect("checked");
        let n = self.n.expect("checked");
        let substance: SubstanceSpec = match model {
            Model::Jc => JcParams::new(value(Param::OmegaA), value(Param::OmegaC), n, 0.0)
                .map_err(|e| core_error(e, style))?
                .into(),
            Model::FourLevel => FourLevelParams::new(0.0, value(Param::K), value(Param::J), n)
                .map_err(|e| core_error(e, style))?
                .into(),
        };
        let t_hot =
            Temperature::named("t_hot", value(Param::THot)).map_err(|e| core_error(e, style))?;
        let t_cold =
            Temperature::named("t_cold", value(Param::TCold)).map_err(|e| core_error(e, style))?;
        let swap = |a: f64, b: f64| match orientation {
            Orientation::Standard => (a, b),
            Orientation::Swapped => (b, a),
        };
        let engine = match cycle {
            CycleKind::Stirling => {
                let (start, end) = swap(value(Param::GStart), value(Param::GEnd));
                StirlingSpec::new(substance, t_hot, t_cold, start, end).map(Engine::Stirling)
            }
            CycleKind::Otto => {
                let (cold, hot) = swap(value(Param::GCold), value(Param::GHot));
                OttoSpec::new(substance, t_hot, t_cold, cold, hot).map(Engine::Otto)
            }
        };
        engine.map_err(|e| core_error(e, style))
    }
}

fn check_domain(p: Param, v: f64, style: NameStyle) -> CliResult<()> {
    let name = p.display(style);
    if !v.is_finite() {
        return Err(CliError::usage(format!("{name}: must be finite, got {v}")));
    }
    let bad = match p {
        Param::THot | Param::TCold | Param::OmegaA | Param::OmegaC => {
            (v <= 0.0).then_some("must be > 0")
        }
        Param::GStart | Param::GEnd | Param::GCold | Param::GHot => {
            (v < 0.0).then_some("coupling must be >= 0")
        }
        Param::K | Param::J => None,
    };
    match bad {
        Some(reason) => Err(CliError::usage(format!("{name}: {reason}, got {v}"))),
        None => Ok(()),
    }
}

/// Rewrites a core error with parameter names in `style`.
pub fn core_error(e: Error, style: NameStyle) -> CliError {
    match e {
        Error::InvalidParameter { name, reason } => {
            CliError::usage(format!("{}: {reason}", display_name(name, style)))
        }
        Error::TemperatureOrder { t_hot, t_cold } => CliError::usage(format!(
            "temperature ordering: {} ({t_hot}) must exceed {} ({t_cold})",
            Param::THot.display(style),
            Param::TCold.display(style)
        )),
        other => CliError::usage(other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Engine {
    Stirling(StirlingSpec),
    Otto(OttoSpec),
}

impl Engine {
    pub fn run(&self) -> CliResult<CycleResult> {
        match self {
            Engine::Stirling(s) => run_stirling(s),
            Engine::Otto(o) => run_otto(o),
        }
        .map_err(|e| CliError::usage(e.to_string()))
    }
}
