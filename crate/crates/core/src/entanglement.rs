//! Two-atom reduced thermal state of the four-level substance and its
//! concurrence.

use serde::Serialize;

use crate::cycle::{check_grid, run_stirling, StirlingSide, StirlingSpec};
use crate::oracle::{
    eigh_symmetric, mixture, partial_trace_field, singular_values, thermal_weights, FieldAtomState,
    Matrix,
};
use crate::substance::{four_level_block_hamiltonian, FourLevelParams, SubstanceSpec};
use crate::thermo::Temperature;
use crate::{Error, Result, Scalar};

const TRACE_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
/// Entries outside the X pattern must stay below this magnitude.
pub const X_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensitySource {
    ClosedForm,
    Oracle,
}

/// Real two-qubit density matrix in the basis `{gg, ge, eg, ee}`.
#[derive(Debug, Clone, Serialize)]
pub struct TwoQubitDensity<S = f64> {
    pub entries: Matrix<S>,
    pub source: DensitySource,
}

impl<S: Scalar> TwoQubitDensity<S> {
    /// Checks unit trace, symmetry and positivity.
    pub fn new(entries: Matrix<S>, source: DensitySource) -> Result<Self> {
        if entries.dim() != 4 {
            return Err(Error::InvalidDensity(format!(
                "dimension {} != 4",
                entries.dim()
            )));
        }
        let trace = entries.trace();
        if !(trace - S::one()).abs().within(S::tol(TRACE_TOL)) {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let asym = entries.asymmetry();
        if !asym.within(S::tol(SYMMETRY_TOL)) {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian, deviation {asym}"
            )));
        }
        let lowest = eigh_symmetric(&entries)?.values[0];
        if lowest < -S::tol(PSD_TOL) {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {lowest}"
            )));
        }
        Ok(Self { entries, source })
    }

    pub fn trace(&self) -> S {
        self.entries.trace()
    }

    pub fn min_eigenvalue(&self) -> Result<S> {
        Ok(eigh_symmetric(&self.entries)?.values[0])
    }

    /// Largest magnitude outside the diagonal and the anti-diagonal.
    pub fn off_x_magnitude(&self) -> S {
        let mut worst = S::zero();
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    worst = worst.max(self.entries[(i, j)].abs());
                }
            }
        }
        worst
    }

    pub fn is_x_state(&self) -> bool {
        self.off_x_magnitude() <= S::tol(X_TOL)
    }
}

/// `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)` for real `ρ`.
///
/// `σ_y ⊗ σ_y` is the real anti-diagonal `(−1, 1, 1, −1)`, so the flip is
/// an index reversal with signs.
pub fn spin_flip<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let mut out = Matrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            let v = m[(3 - i, 3 - j)];
            out[(i, j)] = if SIGN[i] * SIGN[j] < 0.0 { -v } else { v };
        }
    }
    out
}

/// Concurrence of an X-shaped state:
/// `2·max{0, |ρ23| − √(ρ11ρ44), |ρ14| − √(ρ22ρ33)}`.
///
/// The reduced states produced here have `ρ14 = 0`, so only the first term
/// can be active for them.
pub fn concurrence_x_state<S: Scalar>(rho: &TwoQubitDensity<S>) -> Result<S> {
    if !rho.is_x_state() {
        return Err(Error::NotXState {
            magnitude: rho.off_x_magnitude().to_f64().unwrap_or(f64::NAN),
        });
    }
    let r = &rho.entries;
    let d = |i: usize| r[(i, i)].max(S::zero());
    let inner = r[(1, 2)].abs() - (d(0) * d(3)).sqrt();
    let outer = r[(0, 3)].abs() - (d(1) * d(2)).sqrt();
    Ok(S::lit(2.0) * S::zero().max(inner).max(outer))
}

/// Wootters concurrence `max{0, √λ1 − √λ2 − √λ3 − √λ4}` with `λ_i` the
/// eigenvalues of `ρρ̃`, descending.
///
/// `√λ_i` are computed as the singular values of `√ρ · √ρ̃`, which avoids
/// taking square roots of tiny eigenvalues.
pub fn concurrence_wootters<S: Scalar>(rho: &TwoQubitDensity<S>) -> Result<S> {
    let eig = eigh_symmetric(&rho.entries)?;
    let roots: Vec<S> = eig
        .values
        .iter()
        .map(|&v| v.max(S::zero()).sqrt())
        .collect();
    let sqrt_rho = mixture(&eig, &roots);
    let product = sqrt_rho.matmul(&spin_flip(&sqrt_rho));
    let sv = singular_values(&product)?;
    Ok(S::zero().max(sv[0] - sv[1] - sv[2] - sv[3]))
}

/// Thermal state of the four-level sector at `t`, with the cavity field
/// traced out.
///
/// Built from the Jacobi eigenvectors of the explicit block Hamiltonian and
/// Boltzmann weights of its eigenvalues.
pub fn reduced_thermal_state<S: Scalar>(
    p: &FourLevelParams<S>,
    t: Temperature<S>,
) -> Result<TwoQubitDensity<S>> {
    let eig = eigh_symmetric(&four_level_block_hamiltonian(p).entries)?;
    let weights = thermal_weights(&eig.values, t);
    let states: Vec<_> = (0..4)
        .map(|i| FieldAtomState::from_sector(&eig.vector(i)))
        .collect();
    partial_trace_field(&states, &weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationPoint<S = f64> {
    pub g: S,
    #[serde(rename = "C_hot")]
    pub c_hot: S,
    #[serde(rename = "C_cold")]
    pub c_cold: S,
    /// `C_cold − C_hot`.
    #[serde(rename = "delta_C")]
    pub delta_c: S,
    pub work: S,
    /// `work / max|work|` over the sweep.
    pub scaled_work: S,
}

/// Concurrence at both bath temperatures and the Stirling work along a
/// coupling grid.
///
/// `side` picks which Stirling coupling takes the grid value; the other one
/// stays as given in `stirling`. Concurrences are evaluated at the grid
/// coupling.
pub fn correlation_work_profile<S: Scalar>(
    stirling: &StirlingSpec<S>,
    side: StirlingSide,
    grid: &[S],
) -> Result<Vec<CorrelationPoint<S>>> {
    check_grid(grid)?;
    let SubstanceSpec::FourLevel(base) = stirling.substance else {
        return Err(Error::Unsupported(
            "correlation profile requires the four-level substance".into(),
        ));
    };
    let mut points = grid
        .iter()
        .map(|&g| {
            let p = base.with_g(g)?;
            let c_hot = concurrence_x_state(&reduced_thermal_state(&p, stirling.t_hot)?)?;
            let c_cold = concurrence_x_state(&reduced_thermal_state(&p, stirling.t_cold)?)?;
            let work = run_stirling(&stirling.with_side(side, g)?)?.work;
            Ok(CorrelationPoint {
                g,
                c_hot,
                c_cold,
                delta_c: c_cold - c_hot,
                work,
                scaled_work: S::zero(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let peak = points
        .iter()
        .fold(S::zero(), |acc, p| acc.max(p.work.abs()));
    if peak > S::zero() {
        for p in &mut points {
            p.scaled_work = p.work / peak;
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: f64) -> Temperature {
        Temperature::new(x).unwrap()
    }

    fn density(rows: [[f64; 4]; 4]) -> TwoQubitDensity {
        TwoQubitDensity::new(Matrix::from_rows(&rows), DensitySource::ClosedForm).unwrap()
    }

    fn singlet() -> TwoQubitDensity {
        density([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.5, -0.5, 0.0],
            [0.0, -0.5, 0.5, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
    }

    #[test]
    fn density_validation() {
        let bad_trace = Matrix::diagonal(&[0.5, 0.5, 0.5, 0.0]);
        assert!(TwoQubitDensity::new(bad_trace, DensitySource::Oracle).is_err());
        let not_psd = Matrix::diagonal(&[1.5, -0.5, 0.0, 0.0]);
        assert!(TwoQubitDensity::new(not_psd, DensitySource::Oracle).is_err());
        let mut asym = Matrix::diagonal(&[0.25; 4]);
        asym[(0, 1)] = 0.1;
        assert!(TwoQubitDensity::new(asym, DensitySource::Oracle).is_err());
    }

    #[test]
    fn x_formula_reference_states() {
        assert_eq!(concurrence_x_state(&singlet()).unwrap(), 1.0);
        let diag = density([
            [0.1, 0.0, 0.0, 0.0],
            [0.0, 0.2, 0.0, 0.0],
            [0.0, 0.0, 0.3, 0.0],
            [0.0, 0.0, 0.0, 0.4],
        ]);
        assert_eq!(concurrence_x_state(&diag).unwrap(), 0.0);
        let edge = density([
            [0.25, 0.0, 0.0, 0.0],
            [0.0, 0.25, -0.25, 0.0],
            [0.0, -0.25, 0.25, 0.0],
            [0.0, 0.0, 0.0, 0.25],
        ]);
        assert_eq!(concurrence_x_state(&edge).unwrap(), 0.0);
    }

    #[test]
    fn x_formula_rejects_general_state() {
        let plus_plus = density([[0.25; 4]; 4]);
        assert!(matches!(
            concurrence_x_state(&plus_plus),
            Err(Error::NotXState { .. })
        ));
        assert!(concurrence_wootters(&plus_plus).unwrap() < 1e-12);
    }

    #[test]
    fn wootters_reference_states() {
        assert!((concurrence_wootters(&singlet()).unwrap() - 1.0).abs() < 1e-14);
        let gg = density([[1.0, 0.0, 0.0, 0.0], [0.0; 4], [0.0; 4], [0.0; 4]]);
        assert_eq!(concurrence_wootters(&gg).unwrap(), 0.0);
        // Bell state (|gg⟩ + |ee⟩)/√2 exercises the outer X term
        let bell = density([
            [0.5, 0.0, 0.0, 0.5],
            [0.0; 4],
            [0.0; 4],
            [0.5, 0.0, 0.0, 0.5],
        ]);
        assert!((concurrence_wootters(&bell).unwrap() - 1.0).abs() < 1e-14);
        assert!((concurrence_x_state(&bell).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spin_flip_is_an_involution() {
        let m = Matrix::from_rows(&[
            [0.1, 0.02, -0.03, 0.04],
            [0.02, 0.2, 0.05, -0.01],
            [-0.03, 0.05, 0.3, 0.06],
            [0.04, -0.01, 0.06, 0.4],
        ]);
        assert_eq!(spin_flip(&spin_flip(&m)), m);
        let s = spin_flip(&singlet().entries);
        assert_eq!(s, singlet().entries);
    }

    #[test]
    fn high_temperature_is_maximally_mixed() {
        let p = FourLevelParams::new(1.0, 1.0, 0.2, 1).unwrap();
        let rho = reduced_thermal_state(&p, t(1e6)).unwrap();
        assert!(rho.entries.sub(&Matrix::diagonal(&[0.25; 4])).max_abs() < 1e-5);
        assert_eq!(rho.source, DensitySource::Oracle);
    }

    #[test]
    fn singlet_ground_state_limit() {
        let p = FourLevelParams::new(0.01, 1.0, 0.2, 1).unwrap();
        let rho = reduced_thermal_state(&p, t(1e-3)).unwrap();
        assert!(rho.entries.sub(&singlet().entries).max_abs() < 1e-6);
        assert!((concurrence_x_state(&rho).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn reduced_state_is_x_shaped_and_formulas_agree() {
        let p = FourLevelParams::new(0.5, 0.1, 1.0, 3).unwrap();
        for temp in [0.3, 1.0, 4.0] {
            let rho = reduced_thermal_state(&p, t(temp)).unwrap();
            assert!(rho.is_x_state());
            let x = concurrence_x_state(&rho).unwrap();
            let w = concurrence_wootters(&rho).unwrap();
            assert!((x - w).abs() < 1e-10, "T={temp}: {x} vs {w}");
        }
    }

    #[test]
    fn profile_normalization_and_errors() {
        let sub = FourLevelParams::new(1.0, 0.1, 1.0, 3).unwrap().into();
        let spec = StirlingSpec::new(sub, t(4.0), t(1.0), 1.0, 1.0).unwrap();
        let one = correlation_work_profile(&spec, StirlingSide::End, &[2.0]).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].scaled_work == -1.0 || one[0].scaled_work == 1.0);
        let null = correlation_work_profile(&spec, StirlingSide::End, &[1.0]).unwrap();
        assert_eq!(null[0].scaled_work, 0.0);
        assert_eq!(
            correlation_work_profile(&spec, StirlingSide::End, &[]).unwrap_err(),
            Error::EmptyGrid
        );
        let jc = crate::substance::JcParams::new(3.0, 1.0, 3, 0.1)
            .unwrap()
            .into();
        let jc_spec = StirlingSpec::new(jc, t(4.0), t(1.0), 1.0, 1.0).unwrap();
        assert!(correlation_work_profile(&jc_spec, StirlingSide::End, &[1.0]).is_err());
    }
}
