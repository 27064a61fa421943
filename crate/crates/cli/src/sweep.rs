//! Grid evaluation. Points run in parallel; rows come back in grid order.

use qhe_core::{
    concurrence_x_state, reduced_thermal_state, CycleResult, FourLevelParams, Temperature,
};
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::error::{CliError, CliResult};

/// Environment variable capping the worker count.
pub const WORKERS_ENV: &str = "QHE_WORKERS";

/// Column names and rows; `None` renders as an empty field.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub const CYCLE_COLUMNS: [&str; 5] = ["Q_h", "Q_c", "W", "eta", "eta_carnot"];
pub const CONCURRENCE_COLUMNS: [&str; 4] = ["C_hot", "C_cold", "delta_C", "scaled_work"];

/// Runs `f` on a pool capped by [`WORKERS_ENV`] when set.
pub fn with_workers<T: Send>(f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(f()),
        Ok(raw) => {
            let n: usize = raw.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
                CliError::usage(format!(
                    "{WORKERS_ENV}: expected a positive integer, got `{raw}`"
                ))
            })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::usage(format!("{WORKERS_ENV}: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

struct Point {
    value: f64,
    result: CycleResult,
    concurrence: Option<(f64, f64)>,
}

fn evaluate(config: &SweepConfig, value: f64) -> CliResult<Point> {
    let result = config.engine_at(value)?.run()?;
    let concurrence = if config.concurrence {
        let p = FourLevelParams::new(
            value,
            config.k.expect("validated"),
            config.j.expect("validated"),
            config.n.expect("validated"),
        )
        .map_err(|e| CliError::usage(e.to_string()))?;
        let c = |t: f64| -> CliResult<f64> {
            let t = Temperature::new(t).map_err(|e| CliError::usage(e.to_string()))?;
            let rho = reduced_thermal_state(&p, t).map_err(|e| CliError::usage(e.to_string()))?;
            concurrence_x_state(&rho).map_err(|e| CliError::usage(e.to_string()))
        };
        Some((
            c(config.t_hot.expect("validated"))?,
            c(config.t_cold.expect("validated"))?,
        ))
    } else {
        None
    };
    Ok(Point {
        value,
        result,
        concurrence,
    })
}

pub fn run_sweep(config: &SweepConfig) -> CliResult<Table> {
    config.validate()?;
    let grid = config.grid();
    let points: Vec<Point> = with_workers(|| {
        grid.par_iter()
            .map(|&v| evaluate(config, v))
            .collect::<CliResult<Vec<_>>>()
    })??;

    let mut columns = vec![config.sweep.clone()];
    columns.extend(CYCLE_COLUMNS.iter().map(|c| c.to_string()));
    if config.concurrence {
        columns.extend(CONCURRENCE_COLUMNS.iter().map(|c| c.to_string()));
    }
    let max_work = points
        .iter()
        .map(|p| p.result.work.abs())
        .fold(0.0, f64::max);
    let rows = points
        .iter()
        .map(|p| {
            let r = &p.result;
            let mut row = vec![
                Some(p.value),
                Some(r.q_hot),
                Some(r.q_cold),
                Some(r.work),
                r.efficiency,
                Some(r.carnot),
            ];
            if let Some((hot, cold)) = p.concurrence {
                let scaled = if max_work > 0.0 {
                    r.work / max_work
                } else {
                    0.0
                };
                row.extend([Some(hot), Some(cold), Some(cold - hot), Some(scaled)]);
            }
            row
        })
        .collect();
    Ok(Table { columns, rows })
}

/// Side-by-side Stirling and Otto work over the same grid:
/// `g, W_stirling, eta_stirling, W_otto, eta_otto`.
pub fn compare(stirling: &Table, otto: &Table) -> CliResult<Table> {
    let g_s = stirling.column(&stirling.columns[0]).expect("first column");
    let g_o = otto.column(&otto.columns[0]).expect("first column");
    if g_s != g_o {
        return Err(CliError::usage("comparison panels must share one grid"));
    }
    let (ws, es) = (
        stirling.column("W").expect("W"),
        stirling.column("eta").expect("eta"),
    );
    let (wo, eo) = (
        otto.column("W").expect("W"),
        otto.column("eta").expect("eta"),
    );
    Ok(Table {
        columns: ["g", "W_stirling", "eta_stirling", "W_otto", "eta_otto"]
            .iter()
            .map(|c| c.to_string())
            .collect(),
        rows: (0..g_s.len())
            .map(|i| vec![g_s[i], ws[i], es[i], wo[i], eo[i]])
            .collect(),
    })
}
