use thiserror::Error;

use crate::model::Beam;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("pole in {beam} susceptibility: |{denominator}| = {magnitude:e} (γ-scaled)")]
    Pole {
        beam: Beam,
        denominator: &'static str,
        magnitude: f64,
    },

    #[error("unphysical {beam} group velocity {velocity:e} m/s (group index {group_index:e})")]
    Dispersion {
        beam: Beam,
        velocity: f64,
        group_index: f64,
    },

    #[error("no EIT transparency window for the {beam}: {reason}")]
    NoWindow { beam: Beam, reason: String },

    #[error("steady state is not unique (condition estimate {condition:e})")]
    SingularSteadyState { condition: f64 },

    #[error("steady-state system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("steady state failed validation: {0}")]
    UnphysicalState(String),

    #[error("susceptibility fit residual {residual:e} exceeds {threshold:e}")]
    Fit { residual: f64, threshold: f64 },

    #[error("weak field {omega}γ exceeds the perturbative limit {limit}γ")]
    Perturbativity { omega: f64, limit: f64 },

    #[error("target phase {target} rad not reached: phase at the bracket limit {limit:e} is {phase_at_limit} rad")]
    NoBracket {
        target: f64,
        limit: f64,
        phase_at_limit: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams { .. } | Error::Config(_) => 1,
            Error::NoBracket { .. } => 3,
            _ => 2,
        }
    }
}
