//! Thermal states built directly from a Hamiltonian, and the partial trace
//! over the cavity field.

use super::{eigh_symmetric, EigenDecomposition, Matrix};
use crate::entanglement::{DensitySource, TwoQubitDensity};
use crate::thermo::Temperature;
use crate::{Error, Result, Scalar};

/// Normalized `exp(−(λ_i − λ_min)/T)`.
///
/// Kept separate from the thermo module so the oracle path shares no code
/// with the closed forms it checks.
pub fn thermal_weights<S: Scalar>(values: &[S], t: Temperature<S>) -> Vec<S> {
    let lo = values.iter().copied().fold(S::infinity(), S::min);
    let raw: Vec<S> = values
        .iter()
        .map(|&v| ((lo - v) / t.value()).exp())
        .collect();
    let total = raw.iter().fold(S::zero(), |acc, &w| acc + w);
    raw.into_iter().map(|w| w / total).collect()
}

/// `Σ_i w_i |v_i⟩⟨v_i|` over the eigenpairs of `eig`.
pub fn mixture<S: Scalar>(eig: &EigenDecomposition<S>, weights: &[S]) -> Matrix<S> {
    let n = eig.vectors.dim();
    let mut rho = Matrix::zeros(n);
    for (col, &w) in weights.iter().enumerate() {
        for i in 0..n {
            let vi = w * eig.vectors[(i, col)];
            for j in 0..n {
                rho[(i, j)] = rho[(i, j)] + vi * eig.vectors[(j, col)];
            }
        }
    }
    rho
}

/// `ρ = exp(−M/T) / tr exp(−M/T)`.
pub fn thermal_density_from_hamiltonian<S: Scalar>(
    m: &Matrix<S>,
    t: Temperature<S>,
) -> Result<Matrix<S>> {
    let eig = eigh_symmetric(m)?;
    let w = thermal_weights(&eig.values, t);
    Ok(mixture(&eig, &w))
}

/// Number of field values spanned by the two-atom sector: `{n+1, n, n−1}`.
pub const FIELD_DIM: usize = 3;

/// Pure state of field ⊗ two atoms, restricted to the field values
/// `{n+1, n, n−1}` (indices 0, 1, 2) and atom basis `{gg, ge, eg, ee}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldAtomState<S = f64> {
    pub amplitudes: [[S; 4]; FIELD_DIM],
}

impl<S: Scalar> FieldAtomState<S> {
    /// Embeds a sector vector over `{|n+1,gg⟩, |n,ge⟩, |n,eg⟩, |n−1,ee⟩}`.
    pub fn from_sector(v: &[S]) -> Self {
        assert_eq!(v.len(), 4, "four-level sector vector");
        let mut amplitudes = [[S::zero(); 4]; FIELD_DIM];
        amplitudes[0][0] = v[0];
        amplitudes[1][1] = v[1];
        amplitudes[1][2] = v[2];
        amplitudes[2][3] = v[3];
        Self { amplitudes }
    }

    pub fn norm_sqr(&self) -> S {
        self.amplitudes
            .iter()
            .flatten()
            .fold(S::zero(), |acc, &a| acc + a * a)
    }
}

/// `Σ_f ⟨f| (Σ_i w_i |ψ_i⟩⟨ψ_i|) |f⟩`, the two-atom state with the field
/// traced out.
pub fn partial_trace_field<S: Scalar>(
    states: &[FieldAtomState<S>],
    weights: &[S],
) -> Result<TwoQubitDensity<S>> {
    if states.len() != weights.len() || states.is_empty() {
        return Err(Error::Unnormalized(format!(
            "{} states but {} weights",
            states.len(),
            weights.len()
        )));
    }
    let total = weights.iter().fold(S::zero(), |acc, &w| acc + w);
    if !(total - S::one()).abs().within(S::tol(1e-12)) || weights.iter().any(|&w| w < S::zero()) {
        return Err(Error::Unnormalized(format!("weights sum to {total}")));
    }
    for (i, s) in states.iter().enumerate() {
        let norm = s.norm_sqr();
        if !(norm - S::one()).abs().within(S::tol(1e-10)) {
            return Err(Error::Unnormalized(format!(
                "state {i} has squared norm {norm}"
            )));
        }
    }
    let mut rho = Matrix::zeros(4);
    for (state, &w) in states.iter().zip(weights) {
        for field in &state.amplitudes {
            for a in 0..4 {
                let wa = w * field[a];
                if wa == S::zero() {
                    continue;
                }
                for b in 0..4 {
                    rho[(a, b)] = rho[(a, b)] + wa * field[b];
                }
            }
        }
    }
    TwoQubitDensity::new(rho, DensitySource::Oracle)
}
