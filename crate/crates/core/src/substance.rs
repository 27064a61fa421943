//! Working substances: closed-form spectra and explicit sector Hamiltonians.
//!
//! Both models are restricted to one excitation-conserving sector, so the
//! relevant Hamiltonian is a 2×2 (single atom) or 4×4 (two atoms) real
//! symmetric block. Units: ħ = k_B = 1.

use serde::Serialize;

use crate::oracle::Matrix;
use crate::{Error, Result, Scalar};

fn finite<S: Scalar>(name: &'static str, x: S) -> Result<S> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::param(name, "must be finite"))
    }
}

fn non_negative<S: Scalar>(name: &'static str, x: S) -> Result<S> {
    finite(name, x)?;
    if x < S::zero() {
        return Err(Error::param(name, format!("must be >= 0, got {x}")));
    }
    Ok(x)
}

fn positive<S: Scalar>(name: &'static str, x: S) -> Result<S> {
    finite(name, x)?;
    if x <= S::zero() {
        return Err(Error::param(name, format!("must be > 0, got {x}")));
    }
    Ok(x)
}

/// Single two-level atom coupled to one cavity mode (Jaynes-Cummings).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JcParams<S = f64> {
    omega_a: S,
    omega_c: S,
    n: u32,
    g: S,
}

impl<S: Scalar> JcParams<S> {
    pub fn new(omega_a: S, omega_c: S, n: u32, g: S) -> Result<Self> {
        Ok(Self {
            omega_a: positive("omega_a", omega_a)?,
            omega_c: positive("omega_c", omega_c)?,
            n,
            g: non_negative("g", g)?,
        })
    }

    pub fn omega_a(&self) -> S {
        self.omega_a
    }

    pub fn omega_c(&self) -> S {
        self.omega_c
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn g(&self) -> S {
        self.g
    }

    /// `ω_a − ω_c`.
    pub fn detuning(&self) -> S {
        self.omega_a - self.omega_c
    }

    pub fn with_g(&self, g: S) -> Result<Self> {
        Ok(Self {
            g: non_negative("g", g)?,
            ..*self
        })
    }

    /// Sector centre `(n + ½)ω_c`.
    pub fn center(&self) -> S {
        (S::lit(self.n as f64) + S::lit(0.5)) * self.omega_c
    }

    /// Half splitting `½√(Δ² + 4g²(n+1))`.
    pub fn half_gap(&self) -> S {
        let coupling = S::lit(2.0) * self.g * S::lit(self.n as f64 + 1.0).sqrt();
        S::lit(0.5) * self.detuning().hypot(coupling)
    }
}

/// Two two-level atoms in a shared cavity with dipole-dipole and Ising terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourLevelParams<S = f64> {
    g: S,
    k: S,
    j: S,
    n: u32,
}

impl<S: Scalar> FourLevelParams<S> {
    /// `k` is the dipole-dipole strength, `j` the Ising strength. The sector
    /// contains `|n−1, ee⟩`, so `n ≥ 1`.
    pub fn new(g: S, k: S, j: S, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "four-level sector requires n >= 1"));
        }
        Ok(Self {
            g: non_negative("g", g)?,
            k: finite("k", k)?,
            j: finite("j", j)?,
            n,
        })
    }

    pub fn g(&self) -> S {
        self.g
    }

    pub fn k(&self) -> S {
        self.k
    }

    pub fn j(&self) -> S {
        self.j
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn with_g(&self, g: S) -> Result<Self> {
        Ok(Self {
            g: non_negative("g", g)?,
            ..*self
        })
    }
}

/// One energy level. `slot` is the level's position in the model's
/// canonical label order and survives re-sorting by energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level<S = f64> {
    pub label: &'static str,
    pub slot: usize,
    pub energy: S,
}

/// Energy levels sorted ascending; ties keep label order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum<S = f64> {
    levels: Vec<Level<S>>,
}

impl<S: Scalar> Spectrum<S> {
    /// Builds a spectrum from `(label, energy)` pairs given in canonical
    /// label order.
    pub fn from_labeled(pairs: &[(&'static str, S)]) -> Result<Self> {
        let mut levels: Vec<Level<S>> = pairs
            .iter()
            .enumerate()
            .map(|(slot, &(label, energy))| Level {
                label,
                slot,
                energy,
            })
            .collect();
        if let Some(bad) = levels.iter().find(|l| !l.energy.is_finite()) {
            return Err(Error::param(
                "energy",
                format!("level {} is not finite", bad.label),
            ));
        }
        levels.sort_by(|a, b| {
            a.energy
                .partial_cmp(&b.energy)
                .expect("finite energies")
                .then(a.slot.cmp(&b.slot))
        });
        Ok(Self { levels })
    }

    /// Unlabeled spectrum; labels are `"L0"`, `"L1"`, ... (at most 16 levels).
    pub fn from_energies(energies: &[S]) -> Result<Self> {
        const NAMES: [&str; 16] = [
            "L0", "L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "L9", "L10", "L11", "L12", "L13",
            "L14", "L15",
        ];
        if energies.is_empty() || energies.len() > NAMES.len() {
            return Err(Error::param("energy", "between 1 and 16 levels required"));
        }
        let pairs: Vec<_> = energies.iter().zip(NAMES).map(|(&e, l)| (l, e)).collect();
        Self::from_labeled(&pairs)
    }

    pub fn levels(&self) -> &[Level<S>] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Energies ascending.
    pub fn energies(&self) -> Vec<S> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// Energies in canonical label order, for transporting populations
    /// across coupling changes.
    pub fn energies_by_label(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.levels.len()];
        for l in &self.levels {
            out[l.slot] = l.energy;
        }
        out
    }

    pub fn energy_of(&self, label: &str) -> Option<S> {
        self.levels
            .iter()
            .find(|l| l.label == label)
            .map(|l| l.energy)
    }

    pub fn min_energy(&self) -> S {
        self.levels[0].energy
    }

    pub fn max_energy(&self) -> S {
        self.levels[self.levels.len() - 1].energy
    }

    /// Same labels with every energy shifted by `delta`.
    pub fn shifted(&self, delta: S) -> Self {
        Self {
            levels: self
                .levels
                .iter()
                .map(|l| Level {
                    energy: l.energy + delta,
                    ..*l
                })
                .collect(),
        }
    }
}

/// Explicit Hamiltonian of the invariant sector.
#[derive(Debug, Clone, Serialize)]
pub struct HermitianBlock<S = f64> {
    pub entries: Matrix<S>,
    pub basis_labels: Vec<&'static str>,
}

impl<S: Scalar> HermitianBlock<S> {
    pub fn dim(&self) -> usize {
        self.entries.dim()
    }
}

/// Closed-form Jaynes-Cummings doublet `{A − k, A + k}` with
/// `A = (n+½)ω_c` and `k = ½√(Δ² + 4g²(n+1))`.
pub fn jc_spectrum<S: Scalar>(p: &JcParams<S>) -> Spectrum<S> {
    let a = p.center();
    let k = p.half_gap();
    Spectrum::from_labeled(&[("E-", a - k), ("E+", a + k)]).expect("finite parameters")
}

/// 2×2 block in the basis `{|n+1, g⟩, |n, e⟩}`.
pub fn jc_block_hamiltonian<S: Scalar>(p: &JcParams<S>) -> HermitianBlock<S> {
    let n = S::lit(p.n as f64);
    let half_wa = S::lit(0.5) * p.omega_a;
    let off = p.g * (n + S::one()).sqrt();
    let entries = Matrix::from_rows(&[
        [p.omega_c * (n + S::one()) - half_wa, off],
        [off, p.omega_c * n + half_wa],
    ]);
    HermitianBlock {
        entries,
        basis_labels: vec!["|n+1,g>", "|n,e>"],
    }
}

/// `α = √(2g²(2n+1) + (J−k)²)`.
pub fn four_level_alpha<S: Scalar>(p: &FourLevelParams<S>) -> S {
    let coupling = p.g * S::lit(2.0 * (2.0 * p.n as f64 + 1.0)).sqrt();
    (p.j - p.k).hypot(coupling)
}

/// `{E1 = J, E2 = −(J+2k), E3 = k+α, E4 = k−α}`, sorted ascending.
pub fn four_level_spectrum<S: Scalar>(p: &FourLevelParams<S>) -> Spectrum<S> {
    let alpha = four_level_alpha(p);
    let two = S::lit(2.0);
    Spectrum::from_labeled(&[
        ("E1", p.j),
        ("E2", -(p.j + two * p.k)),
        ("E3", p.k + alpha),
        ("E4", p.k - alpha),
    ])
    .expect("finite parameters")
}

/// 4×4 block in the basis `{|n+1,gg⟩, |n,ge⟩, |n,eg⟩, |n−1,ee⟩}`.
pub fn four_level_block_hamiltonian<S: Scalar>(p: &FourLevelParams<S>) -> HermitianBlock<S> {
    let z = S::zero();
    let n = S::lit(p.n as f64);
    let up = p.g * (n + S::one()).sqrt();
    let down = p.g * n.sqrt();
    let dipole = S::lit(2.0) * p.k;
    let j = p.j;
    let entries = Matrix::from_rows(&[
        [j, up, up, z],
        [up, -j, dipole, down],
        [up, dipole, -j, down],
        [z, down, down, j],
    ]);
    HermitianBlock {
        entries,
        basis_labels: vec!["|n+1,gg>", "|n,ge>", "|n,eg>", "|n-1,ee>"],
    }
}

/// Either working substance, with the atom-field coupling as the control
/// parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum SubstanceSpec<S = f64> {
    Jc(JcParams<S>),
    FourLevel(FourLevelParams<S>),
}

impl<S: Scalar> SubstanceSpec<S> {
    pub fn coupling(&self) -> S {
        match self {
            SubstanceSpec::Jc(p) => p.g(),
            SubstanceSpec::FourLevel(p) => p.g(),
        }
    }

    pub fn with_coupling(&self, g: S) -> Result<Self> {
        Ok(match self {
            SubstanceSpec::Jc(p) => SubstanceSpec::Jc(p.with_g(g)?),
            SubstanceSpec::FourLevel(p) => SubstanceSpec::FourLevel(p.with_g(g)?),
        })
    }

    pub fn spectrum(&self) -> Spectrum<S> {
        match self {
            SubstanceSpec::Jc(p) => jc_spectrum(p),
            SubstanceSpec::FourLevel(p) => four_level_spectrum(p),
        }
    }

    pub fn block_hamiltonian(&self) -> HermitianBlock<S> {
        match self {
            SubstanceSpec::Jc(p) => jc_block_hamiltonian(p),
            SubstanceSpec::FourLevel(p) => four_level_block_hamiltonian(p),
        }
    }
}

impl<S> From<JcParams<S>> for SubstanceSpec<S> {
    fn from(p: JcParams<S>) -> Self {
        SubstanceSpec::Jc(p)
    }
}

impl<S> From<FourLevelParams<S>> for SubstanceSpec<S> {
    fn from(p: FourLevelParams<S>) -> Self {
        SubstanceSpec::FourLevel(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::eigh_symmetric;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn jc_reference_spectrum() {
        let p = JcParams::new(3.0, 1.0, 3, 0.1).unwrap();
        let e = jc_spectrum(&p).energies();
        assert!(close(e[0], 2.480196, 1e-6) && close(e[1], 4.519804, 1e-6));
        let oracle = eigh_symmetric(&jc_block_hamiltonian(&p).entries).unwrap();
        assert!(close(oracle.values[0], e[0], 1e-12) && close(oracle.values[1], e[1], 1e-12));
    }

    #[test]
    fn jc_uncoupled_and_degenerate() {
        let p = JcParams::new(3.0, 1.0, 3, 0.0).unwrap();
        assert_eq!(jc_spectrum(&p).energies(), vec![2.5, 4.5]);
        let p = JcParams::new(1.0, 1.0, 0, 0.0).unwrap();
        let s = jc_spectrum(&p);
        assert_eq!(s.energies(), vec![0.5, 0.5]);
        assert_eq!(s.levels()[0].label, "E-");
    }

    #[test]
    fn jc_block_entries() {
        let p = JcParams::new(3.0, 1.0, 3, 0.1).unwrap();
        let h = jc_block_hamiltonian(&p);
        assert_eq!(h.entries.rows(), vec![vec![2.5, 0.2], vec![0.2, 4.5]]);
        assert!(h.entries.is_symmetric());
        assert_eq!(h.dim(), h.basis_labels.len());
        let h0 = jc_block_hamiltonian(&p.with_g(0.0).unwrap());
        assert_eq!(h0.entries[(0, 1)], 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            JcParams::new(0.0, 1.0, 1, 0.1),
            Err(Error::InvalidParameter {
                name: "omega_a",
                ..
            })
        ));
        assert!(JcParams::new(1.0, 1.0, 1, -0.1).is_err());
        assert!(JcParams::new(1.0, f64::NAN, 1, 0.1).is_err());
        assert!(matches!(
            FourLevelParams::new(1.0, 1.0, 0.2, 0),
            Err(Error::InvalidParameter { name: "n", .. })
        ));
        assert!(FourLevelParams::new(1.0, f64::INFINITY, 0.2, 1).is_err());
    }

    #[test]
    fn alpha_values() {
        let p = FourLevelParams::new(1.0, 1.0, 0.2, 1).unwrap();
        assert!(close(four_level_alpha(&p), 6.64f64.sqrt(), 1e-12));
        assert!(close(four_level_alpha(&p), 2.576820, 1e-6));
        let p0 = p.with_g(0.0).unwrap();
        assert_eq!(four_level_alpha(&p0), (p0.j() - p0.k()).abs());
        assert!(close(four_level_alpha(&p0), 0.8, 1e-15));
        let pj = FourLevelParams::new(1.0, 0.5, 0.5, 1).unwrap();
        assert!(close(four_level_alpha(&pj), 6f64.sqrt(), 1e-12));
    }

    #[test]
    fn four_level_reference_spectrum() {
        let p = FourLevelParams::new(1.0, 1.0, 0.2, 1).unwrap();
        let e = four_level_spectrum(&p).energies();
        let want = [-2.2, -1.576820, 0.2, 3.576820];
        for (a, b) in e.iter().zip(want) {
            assert!(close(*a, b, 1e-6), "{e:?}");
        }
        let oracle = eigh_symmetric(&four_level_block_hamiltonian(&p).entries).unwrap();
        for (a, b) in oracle.values.iter().zip(&e) {
            assert!(close(*a, *b, 1e-10));
        }
    }

    #[test]
    fn four_level_degenerate_limits() {
        let s = four_level_spectrum(&FourLevelParams::new(0.0, 1.0, 0.2, 1).unwrap());
        let e = s.energies();
        assert!(close(e[0], -2.2, 1e-15) && close(e[1], 0.2, 1e-15));
        assert!(close(e[2], 0.2, 1e-15) && close(e[3], 1.8, 1e-15));

        let s = four_level_spectrum(&FourLevelParams::new(0.0, 0.5, 0.5, 1).unwrap());
        assert_eq!(s.energies(), vec![-1.5, 0.5, 0.5, 0.5]);
        let labels: Vec<_> = s.levels().iter().map(|l| l.label).collect();
        assert_eq!(labels, vec!["E2", "E1", "E3", "E4"]);
    }

    #[test]
    fn four_level_block_entries() {
        let p = FourLevelParams::new(1.0, 1.0, 0.2, 1).unwrap();
        let h = four_level_block_hamiltonian(&p).entries;
        let r2 = 2f64.sqrt();
        let want = [
            [0.2, r2, r2, 0.0],
            [r2, -0.2, 2.0, 1.0],
            [r2, 2.0, -0.2, 1.0],
            [0.0, 1.0, 1.0, 0.2],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!(close(h[(i, j)], want[i][j], 1e-15));
            }
        }
        // singlet (0, 1, -1, 0)/√2 has eigenvalue −(J + 2k)
        let s = [0.0, 1.0, -1.0, 0.0];
        for i in 0..4 {
            let hv: f64 = (0..4).map(|j| h[(i, j)] * s[j]).sum();
            assert!(close(hv, -2.2 * s[i], 1e-14));
        }
        let h0 = four_level_block_hamiltonian(&p.with_g(0.0).unwrap()).entries;
        assert_eq!(h0[(0, 1)], 0.0);
        assert_eq!(h0[(1, 2)], 2.0);
        assert_eq!(h0[(2, 3)], 0.0);
    }

    #[test]
    fn label_order_survives_crossing() {
        // at large g, E4 = k − α drops below E2
        let p = FourLevelParams::new(5.0, 1.0, 0.2, 1).unwrap();
        let s = four_level_spectrum(&p);
        assert_eq!(s.levels()[0].label, "E4");
        let by_label = s.energies_by_label();
        assert_eq!(by_label[0], 0.2);
        assert_eq!(s.energy_of("E2"), Some(-2.2));
    }

    #[test]
    fn single_precision_spectrum() {
        let p = JcParams::<f32>::new(3.0, 1.0, 3, 0.1).unwrap();
        let e = jc_spectrum(&p).energies();
        assert!((e[0] - 2.480196).abs() < 1e-5);
    }
}
