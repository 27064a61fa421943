//! Brute-force reference path: dense Jacobi eigensolver, thermal densities
//! straight from Hamiltonians, partial trace, and the closed-form validation
//! report.

mod density;
mod eigen;
mod matrix;
mod validation;

pub use density::{
    mixture, partial_trace_field, thermal_density_from_hamiltonian, thermal_weights,
    FieldAtomState, FIELD_DIM,
};
pub use eigen::{eigh_symmetric, singular_values, EigenDecomposition, MAX_DIM, MAX_SWEEPS};
pub use matrix::Matrix;
pub use validation::{
    validate_closed_forms, GridDescription, GridSpec, ValidationCheck, ValidationReport,
    DOCUMENTED_DISCREPANCY,
};
