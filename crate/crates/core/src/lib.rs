//! Quantum heat engines on coupled light-matter working substances.
//!
//! Two substances are modelled: a single two-level atom in a cavity
//! (Jaynes-Cummings doublet) and two coupled two-level atoms in a cavity
//! (four-level sector). For each, closed-form spectra feed canonical
//! thermodynamics, quantum Stirling and Otto cycles, and the thermal
//! concurrence of the atom pair. The [`oracle`] module recomputes everything
//! from explicit Hamiltonians by dense diagonalization.
//!
//! The core is generic over the scalar type; [`Real`] and the `*64` / `*32`
//! aliases pin it.

pub mod cycle;
pub mod entanglement;
mod error;
pub mod oracle;
mod scalar;
pub mod substance;
pub mod thermo;

pub use cycle::{
    carnot_efficiency, check_grid, positive_work_window, run_otto, run_stirling, Anchor,
    CycleResult, OttoSpec, StirlingSide, StirlingSpec, Stroke, StrokeLedger, WorkWindow,
};
pub use entanglement::{
    concurrence_wootters, concurrence_x_state, correlation_work_profile, reduced_thermal_state,
    spin_flip, CorrelationPoint, DensitySource, TwoQubitDensity,
};
pub use error::{Error, Result};
pub use oracle::{validate_closed_forms, GridSpec, Matrix, ValidationCheck, ValidationReport};
pub use scalar::Scalar;
pub use substance::{
    four_level_alpha, four_level_block_hamiltonian, four_level_spectrum, jc_block_hamiltonian,
    jc_spectrum, FourLevelParams, HermitianBlock, JcParams, Level, Spectrum, SubstanceSpec,
};
pub use thermo::{
    entropy, internal_energy, ln_partition_function, partition_function, populations,
    thermo_potentials, Temperature, ThermalEnsemble, ThermoPotentials,
};

/// Default scalar.
pub type Real = f64;

pub type JcParams64 = JcParams<f64>;
pub type FourLevelParams64 = FourLevelParams<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type Temperature64 = Temperature<f64>;
pub type StirlingSpec64 = StirlingSpec<f64>;
pub type OttoSpec64 = OttoSpec<f64>;
pub type CycleResult64 = CycleResult<f64>;
pub type TwoQubitDensity64 = TwoQubitDensity<f64>;

pub type JcParams32 = JcParams<f32>;
pub type FourLevelParams32 = FourLevelParams<f32>;
pub type Spectrum32 = Spectrum<f32>;
pub type Temperature32 = Temperature<f32>;
pub type StirlingSpec32 = StirlingSpec<f32>;
pub type OttoSpec32 = OttoSpec<f32>;
pub type CycleResult32 = CycleResult<f32>;
pub type TwoQubitDensity32 = TwoQubitDensity<f32>;
