//! Quasi-static Stirling and Otto cycles with a per-stroke heat ledger.
//!
//! Sign convention: `heat` is energy flowing into the working substance,
//! `work` is work output by the substance. Each stroke satisfies
//! `work = heat − ΔU`, so the cycle work equals the summed heat.

use serde::Serialize;

use crate::substance::{Spectrum, SubstanceSpec};
use crate::thermo::{
    ground_referenced, populations, thermo_potentials, GroundReferenced, Temperature,
    ThermoPotentials,
};
use crate::{Error, Result, Scalar};

/// Engine runs reject `t_hot − t_cold` at or below this gap.
pub const MIN_TEMPERATURE_GAP: f64 = 1e-15;

fn check_temperatures<S: Scalar>(
    t_hot: Temperature<S>,
    t_cold: Temperature<S>,
    allow_equal: bool,
) -> Result<()> {
    let gap = t_hot.value() - t_cold.value();
    let ok = if allow_equal {
        gap >= S::zero()
    } else {
        gap > S::lit(MIN_TEMPERATURE_GAP)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::TemperatureOrder {
            t_hot: t_hot.value().to_f64().unwrap_or(f64::NAN),
            t_cold: t_cold.value().to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// `1 − T_c/T_h`.
pub fn carnot_efficiency<S: Scalar>(t_hot: Temperature<S>, t_cold: Temperature<S>) -> Result<S> {
    check_temperatures(t_hot, t_cold, true)?;
    Ok(S::one() - t_cold.value() / t_hot.value())
}

/// Stirling cycle: isotherm at `t_hot` from `g_start` to `g_end`, isochore
/// to `t_cold`, isotherm back to `g_start`, isochore to `t_hot`.
///
/// Anchor states: A = (T_h, g_start), B = (T_h, g_end), C = (T_c, g_end),
/// D = (T_c, g_start).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StirlingSpec<S = f64> {
    pub t_hot: Temperature<S>,
    pub t_cold: Temperature<S>,
    pub g_start: S,
    pub g_end: S,
    pub substance: SubstanceSpec<S>,
}

impl<S: Scalar> StirlingSpec<S> {
    pub fn new(
        substance: SubstanceSpec<S>,
        t_hot: Temperature<S>,
        t_cold: Temperature<S>,
        g_start: S,
        g_end: S,
    ) -> Result<Self> {
        Self::build(substance, t_hot, t_cold, g_start, g_end, false)
    }

    /// Accepts `t_hot == t_cold`; used by null-cycle checks.
    pub fn new_validation(
        substance: SubstanceSpec<S>,
        t_hot: Temperature<S>,
        t_cold: Temperature<S>,
        g_start: S,
        g_end: S,
    ) -> Result<Self> {
        Self::build(substance, t_hot, t_cold, g_start, g_end, true)
    }

    fn build(
        substance: SubstanceSpec<S>,
        t_hot: Temperature<S>,
        t_cold: Temperature<S>,
        g_start: S,
        g_end: S,
        allow_equal: bool,
    ) -> Result<Self> {
        check_temperatures(t_hot, t_cold, allow_equal)?;
        coupling("g_start", &substance, g_start)?;
        coupling("g_end", &substance, g_end)?;
        Ok(Self {
            t_hot,
            t_cold,
            g_start,
            g_end,
            substance,
        })
    }

    pub fn with_g_start(&self, g: S) -> Result<Self> {
        coupling("g_start", &self.substance, g)?;
        Ok(Self {
            g_start: g,
            ..*self
        })
    }

    pub fn with_g_end(&self, g: S) -> Result<Self> {
        coupling("g_end", &self.substance, g)?;
        Ok(Self { g_end: g, ..*self })
    }
}

/// Which Stirling coupling a sweep replaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StirlingSide {
    /// `g_start` (states A and D).
    Start,
    /// `g_end` (states B and C).
    End,
}

impl<S: Scalar> StirlingSpec<S> {
    pub fn with_side(&self, side: StirlingSide, g: S) -> Result<Self> {
        match side {
            StirlingSide::Start => self.with_g_start(g),
            StirlingSide::End => self.with_g_end(g),
        }
    }
}

/// Otto cycle: thermalize with the cold bath at `g_cold`, adiabat to
/// `g_hot`, thermalize with the hot bath, adiabat back.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OttoSpec<S = f64> {
    pub t_hot: Temperature<S>,
    pub t_cold: Temperature<S>,
    pub g_cold: S,
    pub g_hot: S,
    pub substance: SubstanceSpec<S>,
}

impl<S: Scalar> OttoSpec<S> {
    pub fn new(
        substance: SubstanceSpec<S>,
        t_hot: Temperature<S>,
        t_cold: Temperature<S>,
        g_cold: S,
        g_hot: S,
    ) -> Result<Self> {
        Self::build(substance, t_hot, t_cold, g_cold, g_hot, false)
    }

    /// Accepts `t_hot == t_cold`; used by null-cycle checks.
    pub fn new_validation(
        substance: SubstanceSpec<S>,
        t_hot: Temperature<S>,
        t_cold: Temperature<S>,
        g_cold: S,
        g_hot: S,
    ) -> Result<Self> {
        Self::build(substance, t_hot, t_cold, g_cold, g_hot, true)
    }

    fn build(
        substance: SubstanceSpec<S>,
        t_hot: Temperature<S>,
        t_cold: Temperature<S>,
        g_cold: S,
        g_hot: S,
        allow_equal: bool,
    ) -> Result<Self> {
        check_temperatures(t_hot, t_cold, allow_equal)?;
        coupling("g_cold", &substance, g_cold)?;
        coupling("g_hot", &substance, g_hot)?;
        Ok(Self {
            t_hot,
            t_cold,
            g_cold,
            g_hot,
            substance,
        })
    }

    pub fn with_g_hot(&self, g: S) -> Result<Self> {
        coupling("g_hot", &self.substance, g)?;
        Ok(Self { g_hot: g, ..*self })
    }

    pub fn with_g_cold(&self, g: S) -> Result<Self> {
        coupling("g_cold", &self.substance, g)?;
        Ok(Self { g_cold: g, ..*self })
    }
}

fn coupling<S: Scalar>(
    name: &'static str,
    substance: &SubstanceSpec<S>,
    g: S,
) -> Result<SubstanceSpec<S>> {
    substance.with_coupling(g).map_err(|e| match e {
        Error::InvalidParameter { reason, .. } => Error::InvalidParameter { name, reason },
        other => other,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stroke<S = f64> {
    pub name: &'static str,
    pub heat: S,
    pub work: S,
}

/// State at a corner of the cycle. `potentials` is present only when the
/// state is thermal (Otto states reached by an adiabat are not).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anchor<S = f64> {
    pub name: &'static str,
    pub coupling: S,
    pub internal_energy: S,
    pub potentials: Option<ThermoPotentials<S>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrokeLedger<S = f64> {
    pub strokes: [Stroke<S>; 4],
    pub anchors: [Anchor<S>; 4],
}

impl<S: Scalar> StrokeLedger<S> {
    pub fn total_heat(&self) -> S {
        self.strokes.iter().fold(S::zero(), |acc, s| acc + s.heat)
    }

    pub fn total_work(&self) -> S {
        self.strokes.iter().fold(S::zero(), |acc, s| acc + s.work)
    }

    /// `Σ |heat|`, the natural scale for relative conservation errors.
    pub fn heat_scale(&self) -> S {
        self.strokes
            .iter()
            .fold(S::zero(), |acc, s| acc + s.heat.abs())
    }

    /// Largest `|U|` over the anchors, the rounding scale of stroke works.
    pub fn energy_scale(&self) -> S {
        self.anchors
            .iter()
            .fold(S::zero(), |acc, a| acc.max(a.internal_energy.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleResult<S = f64> {
    #[serde(rename = "Q_h")]
    pub q_hot: S,
    #[serde(rename = "Q_c")]
    pub q_cold: S,
    #[serde(rename = "W")]
    pub work: S,
    /// `W / Q_h`, absent unless `Q_h > 0`.
    #[serde(rename = "eta")]
    pub efficiency: Option<S>,
    #[serde(rename = "eta_carnot")]
    pub carnot: S,
    pub positive_work: bool,
    pub ledger: StrokeLedger<S>,
}

impl<S: Scalar> CycleResult<S> {
    fn assemble(q_hot: S, q_cold: S, carnot: S, ledger: StrokeLedger<S>) -> Self {
        let work = q_hot + q_cold;
        Self {
            q_hot,
            q_cold,
            work,
            efficiency: (q_hot > S::zero()).then(|| work / q_hot),
            carnot,
            positive_work: work > S::zero(),
            ledger,
        }
    }
}

/// `Σ E_i (after_i − before_i)`.
///
/// Energies are measured from the lowest level. Both population vectors are
/// normalized, so this is exact in real arithmetic; it drops the near-unit
/// ground population difference and the large common offset.
fn dot_diff<S: Scalar>(energies: &[S], after: &[S], before: &[S]) -> S {
    let e_min = energies.iter().copied().fold(S::infinity(), S::min);
    energies
        .iter()
        .zip(after.iter().zip(before))
        .fold(S::zero(), |acc, (&e, (&a, &b))| acc + (e - e_min) * (a - b))
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

struct Corner<S> {
    spectrum: Spectrum<S>,
    pots: ThermoPotentials<S>,
    ground: GroundReferenced<S>,
    pops: Vec<S>,
}

fn corner<S: Scalar>(substance: SubstanceSpec<S>, g: S, t: Temperature<S>) -> Result<Corner<S>> {
    let spectrum = substance.with_coupling(g)?.spectrum();
    let pots = thermo_potentials(&spectrum, t);
    let ground = ground_referenced(&spectrum, t);
    let pops = populations(&spectrum, t).populations_by_label();
    Ok(Corner {
        spectrum,
        pots,
        ground,
        pops,
    })
}

/// `(ΔU + T ln(Z_to/Z_from), T ln(Z_to/Z_from))` for an isotherm.
///
/// Evaluated with ground-referenced potentials: the `E_min` offsets cancel
/// between `ΔU` and `T Δln Z`, leaving `ΔŨ + T Δln Z̃`.
fn isotherm<S: Scalar>(from: &Corner<S>, to: &Corner<S>, t: Temperature<S>) -> (S, S) {
    let (f, g) = (&from.ground, &to.ground);
    let t = t.value();
    let heat = (g.excitation_energy - f.excitation_energy) + t * (g.ln_z_shifted - f.ln_z_shifted);
    let work = t * (g.ln_z_shifted - f.ln_z_shifted) - (g.e_min - f.e_min);
    (heat, work)
}

/// Runs the Stirling cycle.
///
/// Isothermal heats use `ΔU + T ln(Z_end/Z_start)`, which equals `TΔS`;
/// isochoric heats are `Σ E_i Δp_i` at the fixed coupling.
pub fn run_stirling<S: Scalar>(spec: &StirlingSpec<S>) -> Result<CycleResult<S>> {
    let (th, tc) = (spec.t_hot, spec.t_cold);
    let a = corner(spec.substance, spec.g_start, th)?;
    let b = corner(spec.substance, spec.g_end, th)?;
    let c = corner(spec.substance, spec.g_end, tc)?;
    let d = corner(spec.substance, spec.g_start, tc)?;
    let e_start = a.spectrum.energies_by_label();
    let e_end = b.spectrum.energies_by_label();

    let (q_ab, w_ab) = isotherm(&a, &b, th);
    let q_bc = dot_diff(&e_end, &c.pops, &b.pops);
    let (q_cd, w_cd) = isotherm(&c, &d, tc);
    let q_da = dot_diff(&e_start, &a.pops, &d.pops);

    let zero = S::zero();
    let ledger = StrokeLedger {
        strokes: [
            Stroke {
                name: "AB",
                heat: q_ab,
                work: w_ab,
            },
            Stroke {
                name: "BC",
                heat: q_bc,
                work: zero,
            },
            Stroke {
                name: "CD",
                heat: q_cd,
                work: w_cd,
            },
            Stroke {
                name: "DA",
                heat: q_da,
                work: zero,
            },
        ],
        anchors: [
            thermal_anchor("A", spec.g_start, a.pots),
            thermal_anchor("B", spec.g_end, b.pots),
            thermal_anchor("C", spec.g_end, c.pots),
            thermal_anchor("D", spec.g_start, d.pots),
        ],
    };
    Ok(CycleResult::assemble(
        q_ab + q_da,
        q_bc + q_cd,
        carnot_efficiency(th, tc)?,
        ledger,
    ))
}

fn thermal_anchor<S: Scalar>(name: &'static str, g: S, pots: ThermoPotentials<S>) -> Anchor<S> {
    Anchor {
        name,
        coupling: g,
        internal_energy: pots.u,
        potentials: Some(pots),
    }
}

/// Runs the Otto cycle.
///
/// Adiabats carry populations unchanged from level to level by label, so
/// they exchange no heat.
pub fn run_otto<S: Scalar>(spec: &OttoSpec<S>) -> Result<CycleResult<S>> {
    let (th, tc) = (spec.t_hot, spec.t_cold);
    let cold = corner(spec.substance, spec.g_cold, tc)?;
    let hot = corner(spec.substance, spec.g_hot, th)?;
    let e_c = cold.spectrum.energies_by_label();
    let e_h = hot.spectrum.energies_by_label();

    let u_b = dot(&e_h, &cold.pops);
    let u_d = dot(&e_c, &hot.pops);
    let gap: Vec<S> = e_c.iter().zip(&e_h).map(|(&c, &h)| c - h).collect();
    let w_ab = dot(&gap, &cold.pops);
    let w_cd = -dot(&gap, &hot.pops);
    let q_hot = dot_diff(&e_h, &hot.pops, &cold.pops);
    let q_cold = dot_diff(&e_c, &cold.pops, &hot.pops);

    let zero = S::zero();
    let ledger = StrokeLedger {
        strokes: [
            Stroke {
                name: "ab",
                heat: zero,
                work: w_ab,
            },
            Stroke {
                name: "bc",
                heat: q_hot,
                work: zero,
            },
            Stroke {
                name: "cd",
                heat: zero,
                work: w_cd,
            },
            Stroke {
                name: "da",
                heat: q_cold,
                work: zero,
            },
        ],
        anchors: [
            thermal_anchor("a", spec.g_cold, cold.pots),
            Anchor {
                name: "b",
                coupling: spec.g_hot,
                internal_energy: u_b,
                potentials: None,
            },
            thermal_anchor("c", spec.g_hot, hot.pots),
            Anchor {
                name: "d",
                coupling: spec.g_cold,
                internal_energy: u_d,
                potentials: None,
            },
        ],
    };
    Ok(CycleResult::assemble(
        q_hot,
        q_cold,
        carnot_efficiency(th, tc)?,
        ledger,
    ))
}

/// Closed interval of grid values over which the work stays positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorkWindow<S = f64> {
    pub lower: S,
    pub upper: S,
}

/// Maximal runs of an ascending `g_hot` grid where the Otto work is positive.
///
/// Window edges are grid values, so their resolution is the grid step.
pub fn positive_work_window<S: Scalar>(
    spec: &OttoSpec<S>,
    grid: &[S],
) -> Result<Vec<WorkWindow<S>>> {
    check_grid(grid)?;
    let mut windows = Vec::new();
    let mut open: Option<WorkWindow<S>> = None;
    for &g in grid {
        let w = run_otto(&spec.with_g_hot(g)?)?.work;
        if w > S::zero() {
            open = Some(match open {
                Some(win) => WorkWindow { upper: g, ..win },
                None => WorkWindow { lower: g, upper: g },
            });
        } else if let Some(win) = open.take() {
            windows.push(win);
        }
    }
    windows.extend(open);
    Ok(windows)
}

/// Rejects empty or non-ascending grids.
pub fn check_grid<S: Scalar>(grid: &[S]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(index) = grid
        .windows(2)
        .position(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::UnsortedGrid { index: index + 1 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substance::{FourLevelParams, JcParams};
    use crate::thermo::entropy;

    fn t(x: f64) -> Temperature {
        Temperature::new(x).unwrap()
    }

    fn jc(omega_c: f64) -> SubstanceSpec {
        JcParams::new(3.0, omega_c, 3, 0.1).unwrap().into()
    }

    #[test]
    fn carnot_values() {
        assert_eq!(carnot_efficiency(t(4.0), t(1.0)).unwrap(), 0.75);
        assert_eq!(carnot_efficiency(t(2.0), t(2.0)).unwrap(), 0.0);
        assert!((carnot_efficiency(t(300.0), t(100.0)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(carnot_efficiency(t(1.0), t(2.0)).is_err());
    }

    #[test]
    fn stirling_reference_asymptote() {
        let spec = StirlingSpec::new(jc(1.0), t(4.0), t(1.0), 20.0, 0.1).unwrap();
        let r = run_stirling(&spec).unwrap();
        let k0: f64 = 0.5 * 4.16f64.sqrt();
        let asymptote = 3.0 * 2f64.ln() + 4.0 * (k0 / 4.0).cosh().ln() - (k0 / 1.0).cosh().ln();
        assert!((r.work - 1.759).abs() < 0.02 * 1.759);
        assert!((r.work - asymptote).abs() < 1e-3);
        assert!(r.positive_work);
        assert!(r.efficiency.unwrap() <= r.carnot);
    }

    #[test]
    fn stirling_ledger_structure() {
        let spec = StirlingSpec::new(jc(1.0), t(4.0), t(1.0), 2.0, 0.1).unwrap();
        let r = run_stirling(&spec).unwrap();
        let l = &r.ledger;
        assert_eq!(r.work, r.q_hot + r.q_cold);
        assert!((l.total_heat() - r.work).abs() < 1e-12 * l.heat_scale());
        assert!((l.total_work() - r.work).abs() < 1e-12 * l.energy_scale().max(1.0));
        // isothermal heat equals T ΔS
        let sub = spec.substance;
        let sa = entropy(&sub.with_coupling(2.0).unwrap().spectrum(), t(4.0));
        let sb = entropy(&sub.with_coupling(0.1).unwrap().spectrum(), t(4.0));
        assert!((l.strokes[0].heat - 4.0 * (sb - sa)).abs() < 1e-10);
        // closed-form work
        let z = |i: usize| l.anchors[i].potentials.unwrap().ln_z;
        let w = 4.0 * (z(1) - z(0)) + 1.0 * (z(3) - z(2));
        assert!((w - r.work).abs() < 1e-12);
        assert!(l.anchors.iter().all(|a| a.potentials.is_some()));
    }

    #[test]
    fn stirling_null_cycles() {
        let spec = StirlingSpec::new(jc(1.0), t(4.0), t(1.0), 0.1, 0.1).unwrap();
        assert_eq!(run_stirling(&spec).unwrap().work, 0.0);
        let same_t = StirlingSpec::new_validation(jc(1.0), t(2.0), t(2.0), 3.0, 0.1).unwrap();
        assert!(run_stirling(&same_t).unwrap().work.abs() < 1e-12);
    }

    #[test]
    fn temperature_ordering_rejected() {
        assert!(matches!(
            StirlingSpec::new(jc(1.0), t(1.0), t(4.0), 1.0, 0.1),
            Err(Error::TemperatureOrder { .. })
        ));
        assert!(StirlingSpec::new(jc(1.0), t(2.0), t(2.0), 1.0, 0.1).is_err());
        assert!(OttoSpec::new(jc(1.0), t(1.0), t(1.0), 1.0, 0.1).is_err());
        assert!(OttoSpec::new_validation(jc(1.0), t(1.0), t(1.0), 1.0, 0.1).is_ok());
        assert!(matches!(
            OttoSpec::new(jc(1.0), t(4.0), t(1.0), -1.0, 0.1),
            Err(Error::InvalidParameter { name: "g_cold", .. })
        ));
    }

    #[test]
    fn otto_window_signs() {
        let base = OttoSpec::new(jc(0.5), t(4.0), t(1.0), 0.1, 2.0).unwrap();
        let r = run_otto(&base).unwrap();
        assert!(r.work > 0.0);
        assert_eq!(r.ledger.strokes[0].heat, 0.0);
        assert_eq!(r.ledger.strokes[2].heat, 0.0);
        assert!((r.ledger.total_work() - r.work).abs() < 1e-12 * r.ledger.energy_scale().max(1.0));
        assert!(run_otto(&base.with_g_hot(3.0).unwrap()).unwrap().work < 0.0);
        let null = run_otto(&base.with_g_hot(0.1).unwrap()).unwrap();
        assert!(null.work.abs() < 1e-12);
        assert!(null.ledger.anchors[1].potentials.is_none());
    }

    #[test]
    fn otto_two_level_efficiency() {
        let spec = OttoSpec::new(jc(0.5), t(4.0), t(1.0), 0.1, 1.5).unwrap();
        let r = run_otto(&spec).unwrap();
        let k = |g: f64| JcParams::new(3.0, 0.5, 3, g).unwrap().half_gap();
        let eta = r.efficiency.unwrap();
        assert!((eta - (1.0 - k(0.1) / k(1.5))).abs() < 1e-10);
    }

    #[test]
    fn window_on_reference_grid() {
        let spec = OttoSpec::new(jc(0.5), t(4.0), t(1.0), 0.1, 1.0).unwrap();
        let grid: Vec<f64> = (0..=495).map(|i| 0.05 + 0.01 * i as f64).collect();
        let w = positive_work_window(&spec, &grid).unwrap();
        assert_eq!(w.len(), 1);
        assert!((w[0].lower - 0.11).abs() < 1e-9);
        assert!((w[0].upper - 2.4534).abs() < 0.01 * 2.4534);
    }

    #[test]
    fn window_vanishes_for_nearly_equal_temperatures() {
        let spec = OttoSpec::new(jc(0.5), t(1.0001), t(1.0), 2.5, 1.0).unwrap();
        let grid: Vec<f64> = (0..=495).map(|i| 0.05 + 0.01 * i as f64).collect();
        let w = positive_work_window(&spec, &grid).unwrap();
        // any surviving window hugs g_cold to within a grid step
        for win in w {
            assert!(win.lower >= 2.5 - 1e-9 && win.upper <= 2.52);
        }
    }

    #[test]
    fn four_level_window_starts_at_fixed_coupling() {
        let sub = FourLevelParams::new(1.0, 1.0, 0.2, 1).unwrap().into();
        let spec = OttoSpec::new(sub, t(4.0), t(1.0), 1.0, 1.0).unwrap();
        let grid: Vec<f64> = (0..=495).map(|i| 0.05 + 0.01 * i as f64).collect();
        let w = positive_work_window(&spec, &grid).unwrap();
        assert!(!w.is_empty());
        assert!((w[0].lower - 1.0).abs() <= 0.01 + 1e-9);
    }

    #[test]
    fn grid_errors() {
        let spec = OttoSpec::new(jc(0.5), t(4.0), t(1.0), 0.1, 1.0).unwrap();
        assert_eq!(positive_work_window(&spec, &[]), Err(Error::EmptyGrid));
        assert_eq!(
            positive_work_window(&spec, &[0.1, 0.3, 0.2]),
            Err(Error::UnsortedGrid { index: 2 })
        );
    }
}
