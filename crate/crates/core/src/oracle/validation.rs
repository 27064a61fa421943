//! Systematic comparison of every closed form against the oracle over a
//! seeded random parameter grid.
//!
//! Two kinds of checks are reported. Implementation checks must pass for the
//! report to pass. Reference-formula checks evaluate literal reference
//! expressions; the ones known to be inconsistent carry a note starting with
//! [`DOCUMENTED_DISCREPANCY`] and never affect the overall verdict.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{eigh_symmetric, thermal_weights, Matrix};
use crate::cycle::{run_otto, run_stirling, CycleResult, OttoSpec, StirlingSpec};
use crate::entanglement::{concurrence_wootters, concurrence_x_state, reduced_thermal_state};
use crate::substance::{
    four_level_alpha, four_level_block_hamiltonian, four_level_spectrum, jc_block_hamiltonian,
    jc_spectrum, FourLevelParams, JcParams, SubstanceSpec,
};
use crate::thermo::{populations, thermo_potentials, Temperature};
use crate::{Error, Result};

/// Note prefix marking a reference-formula check that is expected to fail.
pub const DOCUMENTED_DISCREPANCY: &str = "documented discrepancy";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub draws: usize,
    pub seed: u64,
}

impl GridSpec {
    pub fn new(draws: usize, seed: u64) -> Result<Self> {
        if draws == 0 {
            return Err(Error::EmptyGrid);
        }
        Ok(Self { draws, seed })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationCheck {
    pub name: String,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: String,
    #[serde(skip)]
    pub documented: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDescription {
    pub draws: usize,
    pub g: &'static str,
    pub k: &'static str,
    pub j: &'static str,
    pub n_jc: &'static str,
    pub n_four_level: &'static str,
    pub omega: &'static str,
    pub temperature: &'static str,
    pub reference_temperature: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
    pub grid: GridDescription,
    pub seed: u64,
    pub overall: bool,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn check(&self, name: &str) -> Option<&ValidationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Implementation checks that failed.
    pub fn failures(&self) -> impl Iterator<Item = &ValidationCheck> {
        self.checks.iter().filter(|c| !c.documented && !c.pass)
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    samples: usize,
    note: &'static str,
    documented: bool,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64, note: &'static str) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
            samples: 0,
            note,
            documented: false,
        }
    }

    fn documented(mut self) -> Self {
        self.documented = true;
        self
    }

    /// Non-finite errors count as the largest representable error.
    fn observe(&mut self, err: f64) {
        let err = if err.is_finite() { err.abs() } else { f64::MAX };
        self.worst = self.worst.max(err);
        self.samples += 1;
    }

    fn finish(self) -> ValidationCheck {
        let pass = self.samples > 0 && self.worst <= self.tolerance;
        let note = if self.documented {
            let outcome = if pass {
                "unexpectedly within tolerance"
            } else {
                "reference formula disagrees with the oracle as expected"
            };
            format!(
                "{DOCUMENTED_DISCREPANCY}: {}; {outcome} ({} samples)",
                self.note, self.samples
            )
        } else {
            format!("{} ({} samples)", self.note, self.samples)
        };
        ValidationCheck {
            name: self.name.to_string(),
            max_abs_error: self.worst,
            tolerance: self.tolerance,
            pass,
            note,
            documented: self.documented,
        }
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn temperature(x: f64) -> Temperature {
    Temperature::new(x).expect("positive temperature")
}

struct Draw {
    jc: JcParams,
    four: FourLevelParams,
    t: Temperature,
    t_hot: Temperature,
    t_cold: Temperature,
    g_other: f64,
    t_reference: Temperature,
}

fn draw(rng: &mut ChaCha8Rng) -> Result<Draw> {
    let omega_a = 5.0 - rng.gen_range(0.0..5.0);
    let omega_c = 5.0 - rng.gen_range(0.0..5.0);
    let n_jc = rng.gen_range(0..=10);
    let g_jc = rng.gen_range(0.0..=10.0);
    let g4 = rng.gen_range(0.0..=10.0);
    let k = rng.gen_range(-2.0..=2.0);
    let j = rng.gen_range(-2.0..=2.0);
    let n4 = rng.gen_range(1..=10);
    let log_t: f64 = rng.gen_range(0.05f64.ln()..=50f64.ln());
    let t_hot = rng.gen_range(0.1..=20.0);
    let ratio = rng.gen_range(0.05..=0.95);
    let g_other = rng.gen_range(0.0..=10.0);
    let log_ref: f64 = rng.gen_range(0.0..=20f64.ln());
    Ok(Draw {
        jc: JcParams::new(omega_a, omega_c, n_jc, g_jc)?,
        four: FourLevelParams::new(g4, k, j, n4)?,
        t: temperature(log_t.exp()),
        t_hot: temperature(t_hot),
        t_cold: temperature(t_hot * ratio),
        g_other,
        t_reference: temperature(log_ref.exp()),
    })
}

fn conservation_error(r: &CycleResult) -> f64 {
    (r.ledger.total_heat() - r.work).abs() / r.ledger.heat_scale().max(f64::MIN_POSITIVE)
}

fn work_balance_error(r: &CycleResult) -> f64 {
    (r.ledger.total_work() - r.work).abs() / r.ledger.energy_scale().max(1.0)
}

fn second_law_excess(r: &CycleResult) -> f64 {
    match r.efficiency {
        Some(eta) if r.positive_work => (eta - r.carnot).max(0.0),
        _ => 0.0,
    }
}

/// Literal reference expressions, evaluated as written.
mod reference {
    use super::*;

    /// Doublet without the ½ on the square root.
    pub fn jc_levels(p: &JcParams) -> Vec<f64> {
        let a = (p.n() as f64 + 0.5) * p.omega_c();
        let r = (p.detuning().powi(2) + 4.0 * p.g().powi(2) * (p.n() as f64 + 1.0)).sqrt();
        vec![a - r, a + r]
    }

    /// `U = (2/Z) e^{A/T} (A cosh(k/T) − k sinh(k/T))`.
    pub fn jc_internal_energy(p: &JcParams, t: f64) -> f64 {
        let a = (p.n() as f64 + 0.5) * p.omega_c();
        let k = p.half_gap();
        let z = 2.0 * (-a / t).exp() * (k / t).cosh();
        2.0 / z * (a / t).exp() * (a * (k / t).cosh() - k * (k / t).sinh())
    }

    pub fn four_level_z(p: &FourLevelParams, t: f64) -> f64 {
        let (k, j) = (p.k(), p.j());
        let alpha = four_level_alpha(p);
        (-j / t).exp() + ((j + 2.0 * k) / t).exp() + 2.0 * (-k / t).exp() * (alpha / t).cosh()
    }

    /// `J e^{−J/T} − (J+2k) e^{(J+2k)/T} + 2 e^{−k/T}(k cosh − α sinh)`,
    /// which is `Σ E e^{−E/T}` and gives `U` after division by `Z`.
    pub fn four_level_energy_sum(p: &FourLevelParams, t: f64) -> f64 {
        let (k, j) = (p.k(), p.j());
        let a = four_level_alpha(p);
        j * (-j / t).exp() - (j + 2.0 * k) * ((j + 2.0 * k) / t).exp()
            + 2.0 * (-k / t).exp() * (k * (a / t).cosh() - a * (a / t).sinh())
    }

    /// Variant with unit level prefactors on the first two terms.
    pub fn four_level_internal_energy(p: &FourLevelParams, t: f64) -> f64 {
        let (k, j) = (p.k(), p.j());
        let a = four_level_alpha(p);
        let b = 1.0 / t;
        ((-b * j).exp()
            + (b * (j + 2.0 * k)).exp()
            + (-b * k).exp() * (k * (b * a).cosh() - a * (b * a).sinh()))
            / four_level_z(p, t)
    }

    /// Sector eigenvectors with their stated eigenvalues, over
    /// `{|n+1,gg⟩, |n,ge⟩, |n,eg⟩, |n−1,ee⟩}`.
    pub fn four_level_eigenvectors(p: &FourLevelParams) -> Vec<(f64, [f64; 4])> {
        let (g, k, j) = (p.g(), p.k(), p.j());
        let n = p.n() as f64;
        let a = four_level_alpha(p);
        let r = (2.0 * n + 1.0).sqrt();
        let s = 0.5f64.sqrt();
        let mut out = vec![
            (j, [-n.sqrt() / r, 0.0, 0.0, (n + 1.0).sqrt() / r]),
            (-(j + 2.0 * k), [0.0, -s, s, 0.0]),
        ];
        for (sign, energy) in [(1.0, k + a), (-1.0, k - a)] {
            let m = a + sign * (k - j);
            if m.abs() < 1e-12 {
                continue;
            }
            let norm = 0.5 / (a * m).sqrt();
            out.push((
                energy,
                [
                    -2.0 * g * (n + 1.0).sqrt() * norm,
                    m * norm,
                    m * norm,
                    2.0 * g * n.sqrt() * norm,
                ],
            ));
        }
        out
    }

    /// Reduced two-atom state from the reference matrix elements and `1/Z`.
    pub fn reduced_state(p: &FourLevelParams, t: f64) -> Option<Matrix<f64>> {
        let (k, j) = (p.k(), p.j());
        let n = p.n() as f64;
        let a = four_level_alpha(p);
        if a == 0.0 {
            return None;
        }
        let b = 1.0 / t;
        let plus = (-b * k).exp() * ((b * a).cosh() + (k - j) / a * (b * a).sinh());
        let minus = (-b * k).exp() * ((b * a).cosh() - (k - j) / a * (b * a).sinh());
        let d = 2.0 * n + 1.0;
        let z = four_level_z(p, t);
        let r11 = ((-b * j).exp() / d + (n + 1.0) / d * plus) / z;
        let r22 = 0.5 * ((b * (j + 2.0 * k)).exp() + minus) / z;
        let r44 = ((-b * j).exp() / d + n / d * plus) / z;
        Some(Matrix::from_rows(&[
            [r11, 0.0, 0.0, 0.0],
            [0.0, r22, -r22, 0.0],
            [0.0, -r22, r22, 0.0],
            [0.0, 0.0, 0.0, r44],
        ]))
    }
}

/// Runs every check over `grid.draws` seeded random draws.
///
/// Deterministic: the same grid and seed give an identical report.
pub fn validate_closed_forms(grid: GridSpec) -> Result<ValidationReport> {
    if grid.draws == 0 {
        return Err(Error::EmptyGrid);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);

    let mut jc_spec = Tally::new(
        "jc_spectrum_vs_oracle",
        1e-10,
        "closed-form doublet vs Jacobi eigenvalues of the 2x2 block",
    );
    let mut four_spec = Tally::new(
        "four_level_spectrum_vs_oracle",
        1e-10,
        "closed-form levels with alpha = sqrt(2g^2(2n+1) + (J-k)^2) vs Jacobi eigenvalues of the 4x4 block",
    );
    let mut eig_quality = Tally::new(
        "oracle_eigendecomposition",
        1e-9,
        "max of orthonormality error and reconstruction error relative to the matrix norm",
    );
    let mut norm = Tally::new(
        "population_normalization",
        1e-12,
        "|sum p - 1| for both substances",
    );
    let mut entropy_id = Tally::new("entropy_identity", 1e-10, "|S - (U/T + ln Z)|");
    let mut free_id = Tally::new("free_energy_identity", 1e-10, "|F - (U - T S)|");
    let mut oracle_pops = Tally::new(
        "populations_vs_oracle_density",
        1e-10,
        "Boltzmann populations vs eigenvalues of the oracle thermal density",
    );
    let mut conservation = Tally::new(
        "ledger_conservation",
        1e-12,
        "stroke heat sum vs W = Q_h + Q_c, relative to sum |Q|; both cycles, both substances",
    );
    let mut work_balance = Tally::new(
        "stroke_work_balance",
        1e-12,
        "stroke work sum vs W, relative to max(1, max |U| over anchors)",
    );
    let mut second_law = Tally::new(
        "second_law",
        1e-9,
        "max(eta - eta_carnot, 0) over cycles with W > 0 and Q_h > 0",
    );
    let mut isothermal = Tally::new(
        "stirling_isothermal_entropy",
        1e-10,
        "isothermal heat vs T * delta S",
    );
    let mut stirling_work = Tally::new(
        "stirling_closed_form_work",
        1e-10,
        "W vs T_h ln(Z_B/Z_A) + T_c ln(Z_D/Z_C)",
    );
    let mut otto_eta = Tally::new(
        "otto_two_level_efficiency",
        1e-10,
        "JC Otto efficiency vs 1 - k(g_cold)/k(g_hot) where Q_h > 0",
    );
    let mut null = Tally::new(
        "null_cycles",
        1e-12,
        "|W| for equal couplings (both cycles) and for a single-temperature Stirling cycle",
    );
    let mut reduced = Tally::new(
        "reduced_state_invariants",
        1e-10,
        "max of |trace - 1|, off-X magnitude and negative eigenvalue of the reduced two-atom state",
    );
    let mut wootters = Tally::new(
        "wootters_vs_x_state",
        1e-10,
        "general Wootters concurrence vs X-state formula",
    );

    let mut ref_jc_levels = Tally::new(
        "reference_jc_eigenvalues",
        1e-10,
        "reference doublet without the 1/2 on the square root",
    )
    .documented();
    let mut ref_jc_u = Tally::new(
        "reference_two_level_internal_energy",
        1e-10,
        "reference two-level internal energy with exp(+A/T) in place of exp(-A/T)",
    )
    .documented();
    let mut ref_z = Tally::new(
        "reference_four_level_partition_function",
        1e-10,
        "|ln Z_reference - ln Z_oracle|; the reference four-level Z is consistent",
    );
    let mut ref_energy_sum = Tally::new(
        "reference_four_level_energy_sum",
        1e-10,
        "reference sum of E exp(-E/T) divided by Z vs U, relative to max(1, |U|)",
    );
    let mut ref_u4 = Tally::new(
        "reference_four_level_internal_energy",
        1e-10,
        "second reference four-level U, missing level-energy prefactors, relative to max(1, |U|)",
    )
    .documented();
    let mut ref_vectors = Tally::new(
        "reference_four_level_eigenvectors",
        1e-10,
        "max |H psi - E psi| over the reference sector eigenvectors; psi3/psi4 component signs are inconsistent",
    )
    .documented();
    let mut ref_rho = Tally::new(
        "reference_reduced_state_vs_oracle",
        1e-10,
        "reference reduced-state elements vs the oracle partial trace; reference prefactors are not trace-consistent",
    )
    .documented();

    for _ in 0..grid.draws {
        let d = draw(&mut rng)?;

        // spectra
        let jc_closed = jc_spectrum(&d.jc);
        let jc_block = jc_block_hamiltonian(&d.jc).entries;
        let jc_oracle = eigh_symmetric(&jc_block)?;
        jc_spec.observe(max_diff(&jc_closed.energies(), &jc_oracle.values));
        let four_closed = four_level_spectrum(&d.four);
        let four_block = four_level_block_hamiltonian(&d.four).entries;
        let four_oracle = eigh_symmetric(&four_block)?;
        four_spec.observe(max_diff(&four_closed.energies(), &four_oracle.values));
        for (eig, m) in [(&jc_oracle, &jc_block), (&four_oracle, &four_block)] {
            let rel = eig.reconstruct().sub(m).max_abs() / m.max_abs().max(f64::MIN_POSITIVE);
            eig_quality.observe(eig.orthonormality_error().max(rel));
        }

        // thermodynamics
        for (spectrum, oracle_values) in [
            (&jc_closed, &jc_oracle.values),
            (&four_closed, &four_oracle.values),
        ] {
            let ens = populations(spectrum, d.t);
            norm.observe(ens.populations.iter().sum::<f64>() - 1.0);
            let p = thermo_potentials(spectrum, d.t);
            let t = d.t.value();
            entropy_id.observe(p.s - (p.u / t + p.ln_z));
            free_id.observe(p.f - (p.u - t * p.s));
            oracle_pops.observe(max_diff(
                &ens.populations,
                &thermal_weights(oracle_values, d.t),
            ));
        }

        // cycles
        for substance in [SubstanceSpec::from(d.jc), SubstanceSpec::from(d.four)] {
            let g = substance.coupling();
            let stirling = StirlingSpec::new(substance, d.t_hot, d.t_cold, g, d.g_other)?;
            let rs = run_stirling(&stirling)?;
            let otto = OttoSpec::new(substance, d.t_hot, d.t_cold, g, d.g_other)?;
            let ro = run_otto(&otto)?;
            for r in [&rs, &ro] {
                conservation.observe(conservation_error(r));
                work_balance.observe(work_balance_error(r));
                second_law.observe(second_law_excess(r));
            }
            stirling_checks(&stirling, &rs, &mut isothermal, &mut stirling_work);
            null.observe(run_stirling(&stirling.with_g_end(g)?)?.work);
            null.observe(run_otto(&otto.with_g_hot(g)?)?.work);
            let single_t = StirlingSpec::new_validation(substance, d.t_hot, d.t_hot, g, d.g_other)?;
            null.observe(run_stirling(&single_t)?.work);
        }
        let otto_jc = OttoSpec::new(d.jc.into(), d.t_hot, d.t_cold, d.jc.g(), d.g_other)?;
        let r = run_otto(&otto_jc)?;
        if let Some(eta) = r.efficiency {
            let k_cold = d.jc.half_gap();
            let k_hot = d.jc.with_g(d.g_other)?.half_gap();
            otto_eta.observe(eta - (1.0 - k_cold / k_hot));
        }

        // entanglement
        let rho = reduced_thermal_state(&d.four, d.t)?;
        let invariant = (rho.trace() - 1.0)
            .abs()
            .max(rho.off_x_magnitude())
            .max((-rho.min_eigenvalue()?).max(0.0));
        reduced.observe(invariant);
        wootters.observe(concurrence_wootters(&rho)? - concurrence_x_state(&rho)?);

        // literal reference expressions
        let t_ref = d.t_reference.value();
        ref_jc_levels.observe(max_diff(&reference::jc_levels(&d.jc), &jc_oracle.values));
        let u_jc = thermo_potentials(&jc_closed, d.t_reference).u;
        ref_jc_u.observe(reference::jc_internal_energy(&d.jc, t_ref) - u_jc);
        let p4 = thermo_potentials(&four_closed, d.t_reference);
        ref_z.observe(reference::four_level_z(&d.four, t_ref).ln() - p4.ln_z);
        let scale = p4.u.abs().max(1.0);
        ref_energy_sum
            .observe((reference::four_level_energy_sum(&d.four, t_ref) / p4.z - p4.u) / scale);
        ref_u4.observe((reference::four_level_internal_energy(&d.four, t_ref) - p4.u) / scale);
        for (energy, v) in reference::four_level_eigenvectors(&d.four) {
            let residual = (0..4)
                .map(|i| {
                    let hv: f64 = (0..4).map(|j| four_block[(i, j)] * v[j]).sum();
                    (hv - energy * v[i]).abs()
                })
                .fold(0.0, f64::max);
            ref_vectors.observe(residual);
        }
        if let Some(expected) = reference::reduced_state(&d.four, t_ref) {
            let oracle = reduced_thermal_state(&d.four, d.t_reference)?;
            ref_rho.observe(expected.sub(&oracle.entries).max_abs());
        }
    }

    let checks: Vec<ValidationCheck> = [
        jc_spec,
        four_spec,
        eig_quality,
        norm,
        entropy_id,
        free_id,
        oracle_pops,
        conservation,
        work_balance,
        second_law,
        isothermal,
        stirling_work,
        otto_eta,
        null,
        reduced,
        wootters,
        ref_jc_levels,
        ref_jc_u,
        ref_z,
        ref_energy_sum,
        ref_u4,
        ref_vectors,
        ref_rho,
    ]
    .into_iter()
    .map(Tally::finish)
    .collect();
    let overall = checks.iter().all(|c| c.documented || c.pass);
    Ok(ValidationReport {
        checks,
        grid: GridDescription {
            draws: grid.draws,
            g: "uniform [0, 10]",
            k: "uniform [-2, 2]",
            j: "uniform [-2, 2]",
            n_jc: "uniform {0..10}",
            n_four_level: "uniform {1..10}",
            omega: "uniform (0, 5]",
            temperature: "log-uniform [0.05, 50]; cycles: t_hot uniform [0.1, 20], t_cold = t_hot * uniform [0.05, 0.95]",
            reference_temperature: "log-uniform [1, 20]",
        },
        seed: grid.seed,
        overall,
    })
}

fn stirling_checks(spec: &StirlingSpec, r: &CycleResult, isothermal: &mut Tally, work: &mut Tally) {
    let pot = |i: usize| {
        r.ledger.anchors[i]
            .potentials
            .expect("stirling anchors are thermal")
    };
    let (a, b, c, d) = (pot(0), pot(1), pot(2), pot(3));
    let (th, tc) = (spec.t_hot.value(), spec.t_cold.value());
    isothermal.observe(r.ledger.strokes[0].heat - th * (b.s - a.s));
    isothermal.observe(r.ledger.strokes[2].heat - tc * (d.s - c.s));
    work.observe(r.work - (th * (b.ln_z - a.ln_z) + tc * (d.ln_z - c.ln_z)));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes_and_flags_discrepancies() {
        let report = validate_closed_forms(GridSpec::new(50, 7).unwrap()).unwrap();
        for c in &report.checks {
            if !c.documented {
                assert!(c.pass, "{} failed: {:e}", c.name, c.max_abs_error);
            }
        }
        assert!(report.overall);
        let rho = report.check("reference_reduced_state_vs_oracle").unwrap();
        assert!(!rho.pass);
        assert!(rho.note.starts_with(DOCUMENTED_DISCREPANCY));
        assert!(
            report
                .check("reference_four_level_partition_function")
                .unwrap()
                .pass
        );
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = validate_closed_forms(GridSpec::new(20, 3).unwrap()).unwrap();
        let b = validate_closed_forms(GridSpec::new(20, 3).unwrap()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn empty_grid_rejected() {
        assert_eq!(GridSpec::new(0, 1), Err(Error::EmptyGrid));
        assert_eq!(
            validate_closed_forms(GridSpec { draws: 0, seed: 1 }),
            Err(Error::EmptyGrid)
        );
    }

    #[test]
    fn reference_eigenvectors_first_two_are_exact() {
        let p = FourLevelParams::new(0.8, 0.3, 0.6, 2).unwrap();
        let h = four_level_block_hamiltonian(&p).entries;
        let vecs = reference::four_level_eigenvectors(&p);
        for (energy, v) in vecs.iter().take(2) {
            for i in 0..4 {
                let hv: f64 = (0..4).map(|j| h[(i, j)] * v[j]).sum();
                assert!((hv - energy * v[i]).abs() < 1e-12);
            }
        }
        // psi3 normalization is right even though its component signs are not
        let norm: f64 = vecs[2].1.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
