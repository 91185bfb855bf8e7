//! Cross-Kerr polarization phase gate in a tripod EIT medium.
//!
//! The crate follows one pipeline: atomic and laser parameters ([`TripodParams`])
//! give linear and third-order susceptibilities ([`model`]), which give the
//! vacuum, linear and nonlinear phase shifts of the probe and trigger pulses
//! ([`propagation`]). The phases assemble into the two-qubit truth table and the
//! conditional phase ([`gate`]). [`oracle`] solves the four-level master equation
//! directly and extracts effective susceptibilities as an independent check, and
//! [`search`] solves for the medium length or density that reaches a target
//! conditional phase.
//!
//! Frequencies (Rabi frequencies, detunings, rates) are expressed in units of
//! the optical coherence decay rate γ; lengths, densities and wavelengths are SI.
//!
//! ```
//! use tripod_qpg::{presets, propagation::{phase_table, VelocityModel}};
//!
//! let params = presets::quantum();
//! let table = phase_table(&params, VelocityModel::Matched).unwrap();
//! assert_eq!(table.phi_conditional, table.phi_nlin_p + table.phi_nlin_t);
//! ```

pub mod cli;
pub mod constants;
pub mod error;
pub mod gate;
pub mod model;
pub mod oracle;
pub mod presets;
pub mod propagation;
pub mod search;

pub use error::{Error, Result};
pub use model::{Beam, ComplexDetunings, DipoleMoments, SusceptibilityReport, TripodParams};
pub use propagation::{GroupVelocities, PhaseTable, VelocityModel};
