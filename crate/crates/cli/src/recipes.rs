//! Figure recipes: reference parameters as defaults, overridable per key.

use crate::config::{Format, Scale, SweepConfig};
use crate::error::{CliError, CliResult};
use crate::output::Document;
use crate::params::{CycleKind, Model, Orientation, Param};
use crate::sweep::{compare, run_sweep};

pub const RECIPES: [&str; 8] = [
    "jc-stirling",
    "jc-stirling-photons",
    "jc-otto",
    "jc-compare",
    "fourlevel-stirling",
    "fourlevel-otto",
    "fourlevel-compare",
    "concurrence",
];

/// One output file.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Panel {
    Single {
        name: String,
        config: SweepConfig,
    },
    Compare {
        name: String,
        stirling: SweepConfig,
        otto: SweepConfig,
    },
}

impl Panel {
    pub fn name(&self) -> &str {
        match self {
            Panel::Single { name, .. } | Panel::Compare { name, .. } => name,
        }
    }

    fn configs_mut(&mut self) -> Vec<&mut SweepConfig> {
        match self {
            Panel::Single { config, .. } => vec![config],
            Panel::Compare { stirling, otto, .. } => vec![stirling, otto],
        }
    }

    /// Applies `key=value` to every config the key is meaningful for.
    pub fn apply(&mut self, key: &str, value: &str) -> CliResult<()> {
        let mut applied = false;
        for c in self.configs_mut() {
            let relevant = match Param::from_key(key) {
                Some(p) => p.applies(c.model, c.cycle) && p.key() != c.sweep,
                None => true,
            };
            if relevant {
                c.set(key, value)?;
                applied = true;
            }
        }
        if applied {
            Ok(())
        } else {
            Err(CliError::usage(format!(
                "--set {key}: not a fixed parameter of panel {}",
                self.name()
            )))
        }
    }

    pub fn run(&self) -> CliResult<Document> {
        match self {
            Panel::Single { name, config } => Ok(Document {
                panel: Some(name.clone()),
                configs: vec![(config.cycle.to_string(), config.clone())],
                table: run_sweep(config)?,
            }),
            Panel::Compare {
                name,
                stirling,
                otto,
            } => Ok(Document {
                panel: Some(name.clone()),
                configs: vec![
                    ("stirling".into(), stirling.clone()),
                    ("otto".into(), otto.clone()),
                ],
                table: compare(&run_sweep(stirling)?, &run_sweep(otto)?)?,
            }),
        }
    }
}

fn sweep(
    model: Model,
    cycle: CycleKind,
    swept: Param,
    start: f64,
    stop: f64,
    count: usize,
) -> SweepConfig {
    SweepConfig {
        model,
        cycle,
        sweep: swept.key().into(),
        start,
        stop,
        count,
        scale: Scale::Linear,
        orientation: Orientation::Standard,
        format: Format::Csv,
        output: None,
        concurrence: false,
        t_hot: Some(4.0),
        t_cold: Some(1.0),
        n: None,
        omega_a: None,
        omega_c: None,
        k: None,
        j: None,
        g_start: None,
        g_end: None,
        g_cold: None,
        g_hot: None,
    }
}

/// Coupling grid `0.05, 0.06, …, 5`.
const FINE: (f64, f64, usize) = (0.05, 5.0, 496);

fn jc(
    cycle: CycleKind,
    swept: Param,
    grid: (f64, f64, usize),
    n: u32,
    omega_a: f64,
    omega_c: f64,
) -> SweepConfig {
    SweepConfig {
        n: Some(n),
        omega_a: Some(omega_a),
        omega_c: Some(omega_c),
        ..sweep(Model::Jc, cycle, swept, grid.0, grid.1, grid.2)
    }
}

fn four(
    cycle: CycleKind,
    swept: Param,
    grid: (f64, f64, usize),
    n: u32,
    k: f64,
    j: f64,
) -> SweepConfig {
    SweepConfig {
        n: Some(n),
        k: Some(k),
        j: Some(j),
        ..sweep(Model::FourLevel, cycle, swept, grid.0, grid.1, grid.2)
    }
}

fn jc_stirling(n: u32, omega_a: f64) -> SweepConfig {
    SweepConfig {
        g_end: Some(0.1),
        ..jc(
            CycleKind::Stirling,
            Param::GStart,
            (0.1, 20.0, 200),
            n,
            omega_a,
            1.0,
        )
    }
}

fn single(name: &str, config: SweepConfig) -> Panel {
    Panel::Single {
        name: name.into(),
        config,
    }
}

/// Panels of a recipe, or a usage error listing the valid recipes.
pub fn recipe(name: &str) -> CliResult<Vec<Panel>> {
    let panels = match name {
        "jc-stirling" => vec![
            single("jc-stirling", jc_stirling(3, 3.0)),
            single("jc-stirling-resonant", jc_stirling(3, 1.0)),
        ],
        "jc-stirling-photons" => [1, 3, 10]
            .into_iter()
            .map(|n| single(&format!("jc-stirling-photons-n{n}"), jc_stirling(n, 3.0)))
            .collect(),
        "jc-otto" => vec![single(
            "jc-otto",
            SweepConfig {
                g_cold: Some(0.1),
                ..jc(CycleKind::Otto, Param::GHot, FINE, 3, 3.0, 0.5)
            },
        )],
        "jc-compare" => vec![Panel::Compare {
            name: "jc-compare".into(),
            stirling: SweepConfig {
                g_end: Some(0.1),
                ..jc(CycleKind::Stirling, Param::GStart, FINE, 3, 3.0, 0.5)
            },
            otto: SweepConfig {
                g_cold: Some(0.1),
                ..jc(CycleKind::Otto, Param::GHot, FINE, 3, 3.0, 0.5)
            },
        }],
        "fourlevel-stirling" => vec![single(
            "fourlevel-stirling",
            SweepConfig {
                g_end: Some(1.0),
                ..four(
                    CycleKind::Stirling,
                    Param::GStart,
                    (1.05, 10.0, 180),
                    1,
                    1.0,
                    0.2,
                )
            },
        )],
        "fourlevel-otto" => vec![single(
            "fourlevel-otto",
            SweepConfig {
                g_cold: Some(1.0),
                ..four(CycleKind::Otto, Param::GHot, FINE, 1, 1.0, 0.2)
            },
        )],
        "fourlevel-compare" => vec![Panel::Compare {
            name: "fourlevel-compare".into(),
            stirling: SweepConfig {
                g_end: Some(1.0),
                ..four(CycleKind::Stirling, Param::GStart, FINE, 3, 0.1, 1.0)
            },
            otto: SweepConfig {
                g_cold: Some(1.0),
                ..four(CycleKind::Otto, Param::GHot, FINE, 3, 0.1, 1.0)
            },
        }],
        "concurrence" => vec![single(
            "concurrence",
            SweepConfig {
                g_start: Some(1.0),
                concurrence: true,
                ..four(
                    CycleKind::Stirling,
                    Param::GEnd,
                    (1.25, 5.0, 76),
                    3,
                    0.1,
                    1.0,
                )
            },
        )],
        _ => {
            return Err(CliError::usage(format!(
                "unknown recipe `{name}`; valid recipes: {}, all",
                RECIPES.join(", ")
            )))
        }
    };
    Ok(panels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_recipe_is_valid() {
        for name in RECIPES {
            for panel in recipe(name).unwrap() {
                match &panel {
                    Panel::Single { config, .. } => config.validate().unwrap(),
                    Panel::Compare { stirling, otto, .. } => {
                        stirling.validate().unwrap();
                        otto.validate().unwrap();
                        assert_eq!(stirling.grid(), otto.grid());
                    }
                }
            }
        }
    }

    #[test]
    fn fine_grid_hits_hundredths() {
        let c = recipe("jc-otto").unwrap().remove(0);
        let Panel::Single { config, .. } = c else {
            panic!()
        };
        let g = config.grid();
        assert!((g[6] - 0.11).abs() < 1e-12);
        assert!((g[240] - 2.45).abs() < 1e-12);
    }

    #[test]
    fn overrides_reach_relevant_engines_only() {
        let mut p = recipe("jc-compare").unwrap().remove(0);
        p.apply("n", "5").unwrap();
        p.apply("g_end", "0.2").unwrap();
        let Panel::Compare { stirling, otto, .. } = &p else {
            panic!()
        };
        assert_eq!((stirling.n, otto.n), (Some(5), Some(5)));
        assert_eq!((stirling.g_end, otto.g_end), (Some(0.2), None));
        assert!(p.apply("k", "1").is_err());
    }

    #[test]
    fn unknown_recipe_lists_valid_ones() {
        let err = recipe("nonsense").unwrap_err();
        assert_eq!(err.code(), 2);
        assert!(RECIPES.iter().all(|r| err.message.contains(r)));
    }
}
