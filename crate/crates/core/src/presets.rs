//! The two parameter sets of the gate proposal: a single-photon ("quantum")
//! regime and an intense-pulse ("classical") regime.

use crate::constants::{RB87_D2_GAMMA, RB87_D2_WAVELENGTH};
use crate::model::TripodParams;

/// Ω_P = Ω_T = 0.1γ, Ω = γ, δ = (20.01, 20, 20.02)γ, l = 1.6 mm, N = 3×10¹³ cm⁻³.
pub fn quantum() -> TripodParams {
    TripodParams {
        omega_p: 0.1,
        omega_t: 0.1,
        omega_c: 1.0,
        delta1: 20.01,
        delta2: 20.0,
        delta3: 20.02,
        gamma_j0: [1.0; 3],
        gamma_kj: [1e-2; 3],
        gamma_si: RB87_D2_GAMMA,
        density: 3e19,
        length: 1.6e-3,
        lambda_p: RB87_D2_WAVELENGTH,
        lambda_t: RB87_D2_WAVELENGTH,
        tau_p: 1e-6,
        tau_t: 1e-6,
        zeeman_split: 20.0,
    }
}

/// Ω_P = Ω_T = γ, Ω = 4.5γ, δ = (10.01, 10, 10.02)γ, l = 0.7 cm, N = 3×10¹² cm⁻³.
pub fn classical() -> TripodParams {
    TripodParams {
        omega_p: 1.0,
        omega_t: 1.0,
        omega_c: 4.5,
        delta1: 10.01,
        delta2: 10.0,
        delta3: 10.02,
        density: 3e18,
        length: 7e-3,
        ..quantum()
    }
}

pub fn by_name(name: &str) -> Option<TripodParams> {
    match name {
        "quantum" => Some(quantum()),
        "classical" => Some(classical()),
        _ => None,
    }
}
