//! Bell-type correlations between two atoms that exchange one photon through
//! a cavity standing wave, including the translational motion of the atoms
//! across the field.
//!
//! The closed route evolves Gaussian packets analytically and assembles the
//! two-qubit density matrix from four motional overlaps; [`oracle`] solves the
//! same problem by brute force in a truncated Fock basis.

pub mod bell;
pub mod density;
pub mod error;
pub mod gaussian;
pub mod oracle;
pub mod params;
pub mod scan;

pub use bell::{bell_diagnostics, horodecki_m, pauli_correlation_matrix, BellDiagnostics};
pub use density::{
    assemble_rho, closed_form_rho, compute_coefficients, OverlapCoefficients, PhaseConvention,
    TwoQubitDensity,
};
pub use error::{Error, Result};
pub use params::{parse_config, Method, ModelParams, PacketSpec, RunSpec, Scenario};
