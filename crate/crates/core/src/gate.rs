//! Polarization phase gate: truth table, action on two-qubit states and
//! the entanglement witness used to decide universality.
//!
//! Two-qubit amplitudes are ordered `(−−, −+, ++, +−)`, probe polarization
//! first, matching the rows of the truth table.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::propagation::PhaseTable;

pub const NORM_TOLERANCE: f64 = 1e-12;
/// Conditional phases closer than this to a multiple of 2π are treated as zero.
pub const UNIVERSALITY_TOLERANCE: f64 = 1e-6;

/// Single-photon polarization state `a₊|σ⁺⟩ + a₋|σ⁻⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationQubit {
    a_plus: Complex64,
    a_minus: Complex64,
}

impl PolarizationQubit {
    /// Fails unless `|a₊|² + |a₋|² = 1` within 10⁻¹².
    pub fn new(a_plus: Complex64, a_minus: Complex64) -> Result<Self> {
        let norm = a_plus.norm_sqr() + a_minus.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParams {
                field: "qubit",
                reason: format!("squared norm {norm} is not 1"),
            });
        }
        Ok(Self { a_plus, a_minus })
    }

    pub fn plus() -> Self {
        Self {
            a_plus: Complex64::new(1.0, 0.0),
            a_minus: Complex64::new(0.0, 0.0),
        }
    }

    pub fn minus() -> Self {
        Self {
            a_plus: Complex64::new(0.0, 0.0),
            a_minus: Complex64::new(1.0, 0.0),
        }
    }

    /// `(|σ⁺⟩ + |σ⁻⟩)/√2`.
    pub fn balanced() -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            a_plus: a,
            a_minus: a,
        }
    }

    pub fn a_plus(&self) -> Complex64 {
        self.a_plus
    }

    pub fn a_minus(&self) -> Complex64 {
        self.a_minus
    }
}

/// Amplitudes over `(|σ⁻σ⁻⟩, |σ⁻σ⁺⟩, |σ⁺σ⁺⟩, |σ⁺σ⁻⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    pub amplitudes: [Complex64; 4],
}

impl TwoQubitState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let state = Self { amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParams {
                field: "state",
                reason: format!("squared norm {norm} is not 1"),
            });
        }
        Ok(state)
    }

    pub fn product(probe: PolarizationQubit, trigger: PolarizationQubit) -> Self {
        Self {
            amplitudes: [
                probe.a_minus * trigger.a_minus,
                probe.a_minus * trigger.a_plus,
                probe.a_plus * trigger.a_plus,
                probe.a_plus * trigger.a_minus,
            ],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Phase acquired by each basis row (rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruthTable {
    pub theta_mm: f64,
    pub theta_mp: f64,
    pub theta_pp: f64,
    pub theta_pm: f64,
}

impl TruthTable {
    pub fn rows(&self) -> [f64; 4] {
        [self.theta_mm, self.theta_mp, self.theta_pp, self.theta_pm]
    }

    /// `θ₊₋ + θ₋₊ − θ₊₊ − θ₋₋`.
    pub fn conditional_phase(&self) -> f64 {
        (self.theta_pm + self.theta_mp) - (self.theta_pp + self.theta_mm)
    }

    /// Same table with a global phase added to every row.
    pub fn shifted(&self, offset: f64) -> Self {
        Self {
            theta_mm: self.theta_mm + offset,
            theta_mp: self.theta_mp + offset,
            theta_pp: self.theta_pp + offset,
            theta_pm: self.theta_pm + offset,
        }
    }

    /// Table whose only nonzero row is `θ₊₋ = φ`.
    pub fn from_conditional_phase(phi: f64) -> Self {
        Self {
            theta_mm: 0.0,
            theta_mp: 0.0,
            theta_pp: 0.0,
            theta_pm: phi,
        }
    }
}

/// Only a σ⁺ probe sees the EIT medium and only a σ⁻ trigger does; the
/// cross-phase appears when both do.
pub fn build_truth_table(pt: &PhaseTable) -> TruthTable {
    TruthTable {
        theta_mm: pt.phi0_p + pt.phi_lin_t,
        theta_mp: pt.phi0_p + pt.phi0_t,
        theta_pp: pt.phi_lin_p + pt.phi0_t,
        theta_pm: (pt.phi_lin_p + pt.phi_nlin_p) + (pt.phi_lin_t + pt.phi_nlin_t),
    }
}

/// Each row amplitude is multiplied by `e^{−iθ_row}`.
pub fn apply_gate(
    probe: PolarizationQubit,
    trigger: PolarizationQubit,
    tt: &TruthTable,
) -> TwoQubitState {
    let input = TwoQubitState::product(probe, trigger);
    let mut amplitudes = input.amplitudes;
    for (a, theta) in amplitudes.iter_mut().zip(tt.rows()) {
        *a *= Complex64::from_polar(1.0, -theta);
    }
    TwoQubitState { amplitudes }
}

/// Pure-state concurrence `2|a₋₋a₊₊ − a₋₊a₊₋|`.
pub fn concurrence(s: &TwoQubitState) -> f64 {
    let [mm, mp, pp, pm] = s.amplitudes;
    (2.0 * (mm * pp - mp * pm).norm()).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Universality {
    pub universal: bool,
    pub conditional_phase: f64,
    /// Concurrence of the gate output for balanced inputs on both qubits.
    /// Reported as 0 when the gate is not universal: the residual
    /// concurrence is then below `sin(10⁻⁶/2)` and only rounding noise.
    pub witness: f64,
}

/// Distance of `phi` from the nearest multiple of 2π.
pub fn phase_mod_two_pi(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    r.min(TAU - r)
}

pub fn is_universal(tt: &TruthTable) -> Universality {
    let phi = tt.conditional_phase();
    let universal = phase_mod_two_pi(phi) > UNIVERSALITY_TOLERANCE;
    let output = apply_gate(
        PolarizationQubit::balanced(),
        PolarizationQubit::balanced(),
        tt,
    );
    Universality {
        universal,
        conditional_phase: phi,
        witness: if universal { concurrence(&output) } else { 0.0 },
    }
}
