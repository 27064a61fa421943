//! Canonical-ensemble thermodynamics of a discrete spectrum (k_B = 1).
//!
//! Every exponential is taken relative to the ground energy, so the
//! populations and the entropy are exactly invariant under a uniform shift of
//! the spectrum and nothing overflows at low temperature.

use serde::Serialize;

use crate::substance::Spectrum;
use crate::{Error, Result, Scalar};

/// Strictly positive, finite temperature in energy units.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Temperature<S = f64>(S);

impl<S: Scalar> Temperature<S> {
    pub fn new(value: S) -> Result<Self> {
        Self::named("temperature", value)
    }

    /// Like [`Temperature::new`] but reports errors under `name`.
    pub fn named(name: &'static str, value: S) -> Result<Self> {
        if !value.is_finite() || value <= S::zero() {
            return Err(Error::param(
                name,
                format!("must be positive and finite, got {value}"),
            ));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> S {
        self.0
    }

    pub fn beta(self) -> S {
        self.0.recip()
    }
}

/// Normalized Boltzmann weights plus the pieces needed for the potentials.
#[derive(Debug, Clone)]
struct Boltzmann<S> {
    probabilities: Vec<S>,
    /// `ln Σ exp(−(E_i − E_min)/T)`.
    ln_z_shifted: S,
    e_min: S,
}

impl<S: Scalar> Boltzmann<S> {
    fn new(energies: &[S], t: Temperature<S>) -> Self {
        let e_min = energies.iter().copied().fold(S::infinity(), S::min);
        let ground = energies.iter().position(|&e| e == e_min);
        let weights: Vec<S> = energies
            .iter()
            .map(|&e| (-(e - e_min) / t.value()).exp())
            .collect();
        // Z_shifted = 1 + excess; ln_1p keeps ln Z_shifted accurate when every
        // excited weight is below machine epsilon.
        let excess = weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != ground)
            .fold(S::zero(), |acc, (_, &w)| acc + w);
        let z = S::one() + excess;
        Self {
            probabilities: weights.iter().map(|&w| w / z).collect(),
            ln_z_shifted: excess.ln_1p(),
            e_min,
        }
    }

    /// `Σ p (E − E_min)`.
    fn excitation_energy(&self, energies: &[S]) -> S {
        energies
            .iter()
            .zip(&self.probabilities)
            .fold(S::zero(), |acc, (&e, &p)| acc + (e - self.e_min) * p)
    }

    fn ln_z(&self, t: Temperature<S>) -> S {
        self.ln_z_shifted - self.e_min / t.value()
    }

    fn internal_energy(&self, energies: &[S]) -> S {
        energies
            .iter()
            .zip(&self.probabilities)
            .fold(S::zero(), |acc, (&e, &p)| acc + e * p)
    }

    /// `−Σ p ln p` with `ln p_i = −(E_i − E_min)/T − ln Z_shifted`.
    fn entropy(&self, energies: &[S], t: Temperature<S>) -> S {
        energies
            .iter()
            .zip(&self.probabilities)
            .fold(S::zero(), |acc, (&e, &p)| {
                if p == S::zero() {
                    acc
                } else {
                    acc + p * ((e - self.e_min) / t.value() + self.ln_z_shifted)
                }
            })
    }
}

/// Spectrum at a temperature, with Boltzmann populations aligned to
/// `spectrum.levels()`.
#[derive(Debug, Clone, Serialize)]
pub struct ThermalEnsemble<S = f64> {
    pub spectrum: Spectrum<S>,
    pub temperature: Temperature<S>,
    pub populations: Vec<S>,
}

impl<S: Scalar> ThermalEnsemble<S> {
    /// Populations in canonical label order.
    pub fn populations_by_label(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.populations.len()];
        for (level, &p) in self.spectrum.levels().iter().zip(&self.populations) {
            out[level.slot] = p;
        }
        out
    }
}

/// Partition function, internal energy, entropy and free energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoPotentials<S = f64> {
    #[serde(rename = "Z")]
    pub z: S,
    /// `ln Z`, finite even where `Z` itself over- or underflows.
    pub ln_z: S,
    #[serde(rename = "U")]
    pub u: S,
    #[serde(rename = "S")]
    pub s: S,
    #[serde(rename = "F")]
    pub f: S,
}

/// Boltzmann probabilities for raw energies (no labels).
pub fn boltzmann_probabilities<S: Scalar>(energies: &[S], t: Temperature<S>) -> Vec<S> {
    Boltzmann::new(energies, t).probabilities
}

/// `Z = Σ exp(−E_i/T)`.
pub fn partition_function<S: Scalar>(s: &Spectrum<S>, t: Temperature<S>) -> S {
    ln_partition_function(s, t).exp()
}

pub fn ln_partition_function<S: Scalar>(s: &Spectrum<S>, t: Temperature<S>) -> S {
    Boltzmann::new(&s.energies(), t).ln_z(t)
}

pub fn populations<S: Scalar>(s: &Spectrum<S>, t: Temperature<S>) -> ThermalEnsemble<S> {
    ThermalEnsemble {
        spectrum: s.clone(),
        temperature: t,
        populations: boltzmann_probabilities(&s.energies(), t),
    }
}

/// `U = Σ E_i p_i`.
pub fn internal_energy<S: Scalar>(s: &Spectrum<S>, t: Temperature<S>) -> S {
    let e = s.energies();
    Boltzmann::new(&e, t).internal_energy(&e)
}

/// Gibbs entropy `−Σ p_i ln p_i`.
pub fn entropy<S: Scalar>(s: &Spectrum<S>, t: Temperature<S>) -> S {
    let e = s.energies();
    Boltzmann::new(&e, t).entropy(&e, t)
}

/// Potentials measured from the ground level: `Σ p (E − E_min)` and
/// `ln Σ exp(−(E − E_min)/T)`. Differences of these stay accurate when the
/// excited populations are far below machine epsilon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GroundReferenced<S> {
    pub e_min: S,
    pub excitation_energy: S,
    pub ln_z_shifted: S,
}

pub(crate) fn ground_referenced<S: Scalar>(
    s: &Spectrum<S>,
    t: Temperature<S>,
) -> GroundReferenced<S> {
    let e = s.energies();
    let b = Boltzmann::new(&e, t);
    GroundReferenced {
        e_min: b.e_min,
        excitation_energy: b.excitation_energy(&e),
        ln_z_shifted: b.ln_z_shifted,
    }
}

pub fn thermo_potentials<S: Scalar>(s: &Spectrum<S>, t: Temperature<S>) -> ThermoPotentials<S> {
    let e = s.energies();
    let b = Boltzmann::new(&e, t);
    let ln_z = b.ln_z(t);
    ThermoPotentials {
        z: ln_z.exp(),
        ln_z,
        u: b.internal_energy(&e),
        s: b.entropy(&e, t),
        f: -t.value() * ln_z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substance::{four_level_spectrum, jc_spectrum, FourLevelParams, JcParams};

    fn t(x: f64) -> Temperature {
        Temperature::new(x).unwrap()
    }

    fn jc_reference() -> Spectrum {
        jc_spectrum(&JcParams::new(3.0, 1.0, 3, 0.1).unwrap())
    }

    #[test]
    fn temperature_domain() {
        assert!(Temperature::new(0.0).is_err());
        assert!(Temperature::new(-1.0).is_err());
        assert!(Temperature::new(f64::INFINITY).is_err());
        assert!(matches!(
            Temperature::named("t_hot", f64::NAN),
            Err(Error::InvalidParameter { name: "t_hot", .. })
        ));
        assert_eq!(t(4.0).beta(), 0.25);
    }

    #[test]
    fn degenerate_pair() {
        let s = Spectrum::from_energies(&[0.0, 0.0]).unwrap();
        for temp in [0.01, 1.0, 100.0] {
            assert_eq!(partition_function(&s, t(temp)), 2.0);
        }
        assert_eq!(populations(&s, t(1.0)).populations, vec![0.5, 0.5]);
        assert_eq!(internal_energy(&s, t(1.0)), 0.0);
        assert!((entropy(&s, t(1.0)) - 2f64.ln()).abs() < 1e-15);
        let p = thermo_potentials(&s, t(1.0));
        assert!((p.f + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn jc_reference_values() {
        let s = jc_reference();
        let p = thermo_potentials(&s, t(4.0));
        assert!((p.z - 0.86097).abs() < 1e-4);
        assert!((p.u - 3.24550).abs() < 1e-4);
        assert!((p.s - 0.66170).abs() < 1e-3);
        assert!((p.f - 0.59871).abs() < 1e-3);
        // two-level closed form U = A − k tanh(k/T)
        let (a, k) = (3.5, 0.5 * 4.16f64.sqrt());
        assert!((p.u - (a - k * (k / 4.0).tanh())).abs() < 1e-12);
        let pops = populations(&s, t(4.0)).populations;
        assert!((pops[0] - 0.62478).abs() < 1e-4 && (pops[1] - 0.37522).abs() < 1e-4);
    }

    #[test]
    fn jc_zero_temperature_limit() {
        let s = jc_reference();
        let pops = populations(&s, t(1e-6)).populations;
        assert!((pops[0] - 1.0).abs() < 1e-12 && pops[1] < 1e-12);
        assert!(entropy(&s, t(1e-6)).abs() < 1e-6);
    }

    #[test]
    fn four_level_partition_function() {
        let s = four_level_spectrum(&FourLevelParams::new(1.0, 1.0, 0.2, 1).unwrap());
        assert!((partition_function(&s, t(1.0)) - 14.7116).abs() < 1e-3);
    }

    #[test]
    fn symmetric_spectrum_high_temperature() {
        let s = Spectrum::from_energies(&[-1.0, 1.0]).unwrap();
        assert!(internal_energy(&s, t(1000.0)).abs() < 2e-3);
    }

    #[test]
    fn shift_invariance_without_overflow() {
        let s = jc_reference();
        let shifted = s.shifted(1e6);
        let (a, b) = (populations(&s, t(1.0)), populations(&shifted, t(1.0)));
        for (x, y) in a.populations.iter().zip(&b.populations) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!((entropy(&s, t(1.0)) - entropy(&shifted, t(1.0))).abs() < 1e-10);
        let lz = ln_partition_function(&shifted, t(1.0));
        assert!((lz - (ln_partition_function(&s, t(1.0)) - 1e6)).abs() < 1e-6);
    }

    #[test]
    fn populations_by_label_follow_slots() {
        let s = Spectrum::from_labeled(&[("hi", 1.0), ("lo", 0.0)]).unwrap();
        let ens = populations(&s, t(1.0));
        let by_label = ens.populations_by_label();
        assert!(by_label[0] < by_label[1]);
    }
}
