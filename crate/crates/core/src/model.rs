//! Tripod medium parameters and its linear and third-order susceptibilities.
//!
//! Level labels follow the tripod scheme: `|0⟩` is the excited state, `|1⟩`,
//! `|2⟩`, `|3⟩` are the ground Zeeman sublevels. The probe drives `|1⟩ ↔ |0⟩`,
//! the coupling field `|2⟩ ↔ |0⟩` and the trigger `|3⟩ ↔ |0⟩`. Detunings are
//! `δ_j = ω_0 − ω_j − ω_j^(L)`, so a laser tuned below its transition has
//! `δ_j > 0`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{
    EPSILON_0, HBAR, POLE_THRESHOLD, RB87_D2_GAMMA, RB87_D2_WAVELENGTH, SPEED_OF_LIGHT,
};
use crate::error::{Error, Result};

/// One of the two qubit-carrying pulses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Beam {
    Probe,
    Trigger,
}

impl Beam {
    pub fn other(self) -> Beam {
        match self {
            Beam::Probe => Beam::Trigger,
            Beam::Trigger => Beam::Probe,
        }
    }
}

impl fmt::Display for Beam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Beam::Probe => "probe",
            Beam::Trigger => "trigger",
        })
    }
}

fn default_gamma_j0() -> [f64; 3] {
    [1.0; 3]
}
fn default_gamma_kj() -> [f64; 3] {
    [1e-2; 3]
}
fn default_gamma_si() -> f64 {
    RB87_D2_GAMMA
}
fn default_wavelength() -> f64 {
    RB87_D2_WAVELENGTH
}
fn default_tau() -> f64 {
    1e-6
}
fn default_zeeman() -> f64 {
    20.0
}

/// Physical inputs of the tripod medium.
///
/// Rabi frequencies, detunings and rates are in units of γ (`gamma_si`).
/// `gamma_kj` holds the ground dephasings in the order `[γ12, γ13, γ23]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripodParams {
    pub omega_p: f64,
    pub omega_t: f64,
    pub omega_c: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    #[serde(default = "default_gamma_j0")]
    pub gamma_j0: [f64; 3],
    #[serde(default = "default_gamma_kj")]
    pub gamma_kj: [f64; 3],
    #[serde(default = "default_gamma_si")]
    pub gamma_si: f64,
    /// Atom number density in m⁻³.
    pub density: f64,
    /// Medium length in m.
    pub length: f64,
    #[serde(default = "default_wavelength")]
    pub lambda_p: f64,
    #[serde(default = "default_wavelength")]
    pub lambda_t: f64,
    #[serde(default = "default_tau")]
    pub tau_p: f64,
    #[serde(default = "default_tau")]
    pub tau_t: f64,
    #[serde(default = "default_zeeman")]
    pub zeeman_split: f64,
}

fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParams {
        field,
        reason: reason.into(),
    }
}

fn check_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("{value} is not finite")))
    }
}

fn check_non_negative(field: &'static str, value: f64) -> Result<()> {
    check_finite(field, value)?;
    if value < 0.0 {
        return Err(invalid(field, format!("{value} must be ≥ 0")));
    }
    Ok(())
}

fn check_positive(field: &'static str, value: f64) -> Result<()> {
    check_finite(field, value)?;
    if value <= 0.0 {
        return Err(invalid(field, format!("{value} must be > 0")));
    }
    Ok(())
}

impl TripodParams {
    /// Checks every field invariant. Density and length may be zero (empty medium).
    pub fn validate(&self) -> Result<()> {
        check_non_negative("omega_p", self.omega_p)?;
        check_non_negative("omega_t", self.omega_t)?;
        check_non_negative("omega_c", self.omega_c)?;
        check_finite("delta1", self.delta1)?;
        check_finite("delta2", self.delta2)?;
        check_finite("delta3", self.delta3)?;
        for g in self.gamma_j0 {
            check_positive("gamma_j0", g)?;
        }
        for g in self.gamma_kj {
            check_non_negative("gamma_kj", g)?;
        }
        check_positive("gamma_si", self.gamma_si)?;
        check_non_negative("density", self.density)?;
        check_non_negative("length", self.length)?;
        check_positive("lambda_p", self.lambda_p)?;
        check_positive("lambda_t", self.lambda_t)?;
        check_positive("tau_p", self.tau_p)?;
        check_positive("tau_t", self.tau_t)?;
        check_non_negative("zeeman_split", self.zeeman_split)?;
        Ok(())
    }

    pub fn wavelength(&self, beam: Beam) -> f64 {
        match beam {
            Beam::Probe => self.lambda_p,
            Beam::Trigger => self.lambda_t,
        }
    }

    /// Vacuum wavenumber 2π/λ of the beam, in m⁻¹.
    pub fn wavenumber(&self, beam: Beam) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength(beam)
    }

    /// Carrier angular frequency 2πc/λ of the beam, in rad/s.
    pub fn angular_frequency(&self, beam: Beam) -> f64 {
        SPEED_OF_LIGHT * self.wavenumber(beam)
    }

    /// Rabi frequency of the beam in units of γ.
    pub fn rabi(&self, beam: Beam) -> f64 {
        match beam {
            Beam::Probe => self.omega_p,
            Beam::Trigger => self.omega_t,
        }
    }

    pub fn duration(&self, beam: Beam) -> f64 {
        match beam {
            Beam::Probe => self.tau_p,
            Beam::Trigger => self.tau_t,
        }
    }

    /// Detuning of the transition driven by the beam (δ1 or δ3), in units of γ.
    pub fn detuning(&self, beam: Beam) -> f64 {
        match beam {
            Beam::Probe => self.delta1,
            Beam::Trigger => self.delta3,
        }
    }

    pub fn detuning_mut(&mut self, beam: Beam) -> &mut f64 {
        match beam {
            Beam::Probe => &mut self.delta1,
            Beam::Trigger => &mut self.delta3,
        }
    }
}

/// The five complex detunings entering the susceptibilities, in units of γ.
///
/// `d10 = δ1 + iγ10`, `d30 = δ3 + iγ30`, `d_kj = δ_j − δ_k − iγ_kj`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDetunings {
    pub d10: Complex64,
    pub d30: Complex64,
    pub d12: Complex64,
    pub d13: Complex64,
    pub d23: Complex64,
}

pub fn complex_detunings(p: &TripodParams) -> ComplexDetunings {
    let [g10, _, g30] = p.gamma_j0;
    let [g12, g13, g23] = p.gamma_kj;
    ComplexDetunings {
        d10: Complex64::new(p.delta1, g10),
        d30: Complex64::new(p.delta3, g30),
        d12: Complex64::new(p.delta2 - p.delta1, -g12),
        d13: Complex64::new(p.delta3 - p.delta1, -g13),
        d23: Complex64::new(p.delta3 - p.delta2, -g23),
    }
}

/// Squared dipole matrix elements |μ|² in (C·m)².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleMoments {
    pub mu_p_sq: f64,
    pub mu_t_sq: f64,
}

impl DipoleMoments {
    pub fn get(&self, beam: Beam) -> f64 {
        match beam {
            Beam::Probe => self.mu_p_sq,
            Beam::Trigger => self.mu_t_sq,
        }
    }
}

/// |μ|² from the radiative rate of the transition, Γ_rad = 2γ:
/// `|μ|² = 3π ε0 ħ c³ Γ_rad / ω³`.
pub fn dipole_from_linewidth(p: &TripodParams) -> DipoleMoments {
    let gamma_rad = 2.0 * p.gamma_si;
    let mu_sq = |beam| {
        let omega = p.angular_frequency(beam);
        3.0 * std::f64::consts::PI * EPSILON_0 * HBAR * SPEED_OF_LIGHT.powi(3) * gamma_rad
            / omega.powi(3)
    };
    DipoleMoments {
        mu_p_sq: mu_sq(Beam::Probe),
        mu_t_sq: mu_sq(Beam::Trigger),
    }
}

/// Complex χ⁽¹⁾ (dimensionless) and χ⁽³⁾ (m²/V²) for both beams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SusceptibilityReport {
    pub chi1_p: Complex64,
    pub chi1_t: Complex64,
    pub chi3_p: Complex64,
    pub chi3_t: Complex64,
}

impl SusceptibilityReport {
    pub fn chi1(&self, beam: Beam) -> Complex64 {
        match beam {
            Beam::Probe => self.chi1_p,
            Beam::Trigger => self.chi1_t,
        }
    }

    pub fn chi3(&self, beam: Beam) -> Complex64 {
        match beam {
            Beam::Probe => self.chi3_p,
            Beam::Trigger => self.chi3_t,
        }
    }
}

fn guard(beam: Beam, denominator: &'static str, value: Complex64) -> Result<Complex64> {
    let magnitude = value.norm();
    if magnitude < POLE_THRESHOLD {
        return Err(Error::Pole {
            beam,
            denominator,
            magnitude,
        });
    }
    Ok(value)
}

/// The Λ-subsystem denominators, γ-scaled:
/// probe side `Δ10Δ12 − |Ω|²`, trigger side `Δ30Δ23* − |Ω|²`.
struct Denominators {
    probe: Complex64,
    trigger: Complex64,
}

fn lambda_denominators(p: &TripodParams, d: &ComplexDetunings, beam: Beam) -> Result<Denominators> {
    let coupling = p.omega_c * p.omega_c;
    Ok(Denominators {
        probe: guard(beam, "Δ10·Δ12 − |Ω|²", d.d10 * d.d12 - coupling)?,
        trigger: guard(beam, "Δ30·Δ23* − |Ω|²", d.d30 * d.d23.conj() - coupling)?,
    })
}

/// Dimensionless γ-scaled shape of χ⁽¹⁾ (everything but `N|μ|²/(ħε0γ)`).
fn chi1_shape(p: &TripodParams, beam: Beam) -> Result<Complex64> {
    let d = complex_detunings(p);
    let coupling = p.omega_c * p.omega_c;
    match beam {
        Beam::Probe => {
            let den = guard(beam, "Δ10·Δ12 − |Ω|²", d.d10 * d.d12 - coupling)?;
            Ok(d.d12 / den)
        }
        Beam::Trigger => {
            let den = guard(beam, "Δ30·Δ23* − |Ω|²", d.d30 * d.d23.conj() - coupling)?;
            Ok(d.d23.conj() / den)
        }
    }
}

/// γ-scaled shape of χ⁽³⁾ (everything but `N|μ_P|²|μ_T|²/(ħ³ε0γ³)`).
fn chi3_shape(p: &TripodParams, beam: Beam) -> Result<Complex64> {
    let d = complex_detunings(p);
    let den = lambda_denominators(p, &d, beam)?;
    match beam {
        Beam::Probe => {
            let d13 = guard(beam, "Δ13", d.d13)?;
            // Δ30*Δ23 − |Ω|² is the conjugate of the trigger-side denominator.
            let trig = den.trigger.conj();
            Ok(0.5 * (d.d12 / d13) / den.probe * (d.d12 / den.probe + d.d23 / trig))
        }
        Beam::Trigger => {
            let d13 = guard(beam, "Δ13*", d.d13.conj())?;
            let probe = den.probe.conj();
            let d23c = d.d23.conj();
            Ok(0.5 * (d23c / d13) / den.trigger * (d.d12.conj() / probe + d23c / den.trigger))
        }
    }
}

fn linear_prefactor(p: &TripodParams, mu_sq: f64) -> f64 {
    p.density * mu_sq / (HBAR * EPSILON_0 * p.gamma_si)
}

fn kerr_prefactor(p: &TripodParams, dipoles: &DipoleMoments) -> f64 {
    p.density * dipoles.mu_p_sq * dipoles.mu_t_sq / (HBAR.powi(3) * EPSILON_0 * p.gamma_si.powi(3))
}

/// χ⁽¹⁾ of the beam with explicit dipole moments.
pub fn chi1_with(p: &TripodParams, dipoles: &DipoleMoments, beam: Beam) -> Result<Complex64> {
    Ok(chi1_shape(p, beam)? * linear_prefactor(p, dipoles.get(beam)))
}

/// χ⁽³⁾ of the beam (m²/V²) with explicit dipole moments.
pub fn chi3_with(p: &TripodParams, dipoles: &DipoleMoments, beam: Beam) -> Result<Complex64> {
    Ok(chi3_shape(p, beam)? * kerr_prefactor(p, dipoles))
}

pub fn chi1(p: &TripodParams, beam: Beam) -> Result<Complex64> {
    chi1_with(p, &dipole_from_linewidth(p), beam)
}

pub fn chi3(p: &TripodParams, beam: Beam) -> Result<Complex64> {
    chi3_with(p, &dipole_from_linewidth(p), beam)
}

/// Linear probe response of the Λ subsystem `N|μ_P|²/(ħε0) · Δ12/(Δ10Δ12 − |Ω|²)`.
pub fn chi1_probe(p: &TripodParams) -> Result<Complex64> {
    chi1(p, Beam::Probe)
}

/// Linear trigger response `N|μ_T|²/(ħε0) · Δ23*/(Δ30Δ23* − |Ω|²)`.
pub fn chi1_trigger(p: &TripodParams) -> Result<Complex64> {
    chi1(p, Beam::Trigger)
}

/// Cross-Kerr susceptibility of the probe, driven by the trigger intensity.
pub fn chi3_probe(p: &TripodParams) -> Result<Complex64> {
    chi3(p, Beam::Probe)
}

/// Cross-Kerr susceptibility of the trigger, driven by the probe intensity.
pub fn chi3_trigger(p: &TripodParams) -> Result<Complex64> {
    chi3(p, Beam::Trigger)
}

pub fn susceptibilities(p: &TripodParams) -> Result<SusceptibilityReport> {
    let dipoles = dipole_from_linewidth(p);
    Ok(SusceptibilityReport {
        chi1_p: chi1_with(p, &dipoles, Beam::Probe)?,
        chi1_t: chi1_with(p, &dipoles, Beam::Trigger)?,
        chi3_p: chi3_with(p, &dipoles, Beam::Probe)?,
        chi3_t: chi3_with(p, &dipoles, Beam::Trigger)?,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::presets;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm()
    }

    #[test]
    fn detunings_of_quantum_set() {
        let d = complex_detunings(&presets::quantum());
        let eps = 1e-12;
        assert!((d.d10 - c(20.01, 1.0)).norm() < eps);
        assert!((d.d30 - c(20.02, 1.0)).norm() < eps);
        assert!((d.d12 - c(-0.01, -0.01)).norm() < eps);
        assert!((d.d13 - c(0.01, -0.01)).norm() < eps);
        assert!((d.d23 - c(0.02, -0.01)).norm() < eps);
    }

    #[test]
    fn detunings_zero_case() {
        let mut p = presets::quantum();
        p.delta1 = 0.0;
        p.delta2 = 0.0;
        p.delta3 = 0.0;
        p.gamma_kj = [0.0; 3];
        let d = complex_detunings(&p);
        assert_eq!(d.d10, c(0.0, 1.0));
        assert_eq!(d.d30, c(0.0, 1.0));
        assert_eq!(d.d12, c(0.0, 0.0));
        assert_eq!(d.d13, c(0.0, 0.0));
        assert_eq!(d.d23, c(0.0, 0.0));
    }

    #[test]
    fn two_photon_resonance_gives_zero_d12() {
        let mut p = presets::quantum();
        p.delta1 = 5.0;
        p.delta2 = 5.0;
        p.gamma_kj[0] = 0.0;
        assert_eq!(complex_detunings(&p).d12, c(0.0, 0.0));
    }

    #[test]
    fn detuning_imaginary_parts_follow_rates() {
        let p = presets::classical();
        let d = complex_detunings(&p);
        assert_eq!(d.d10.im, p.gamma_j0[0]);
        assert_eq!(d.d30.im, p.gamma_j0[2]);
        assert_eq!(d.d12.im, -p.gamma_kj[0]);
        assert_eq!(d.d13.im, -p.gamma_kj[1]);
        assert_eq!(d.d23.im, -p.gamma_kj[2]);
    }

    #[test]
    fn dipole_golden_value() {
        // 3π ε0 ħ c³ (2γ)/ω³ at 780.24 nm and γ = 2π·3.03 MHz, evaluated at 40 digits.
        let d = dipole_from_linewidth(&presets::quantum());
        let golden = 6.416_431_159_577_016_8e-58;
        assert!((d.mu_p_sq - golden).abs() < 1e-14 * golden);
        assert_eq!(d.mu_p_sq, d.mu_t_sq);
        let mu = d.mu_p_sq.sqrt();
        assert!(mu > 1e-29 && mu < 1e-28);
    }

    #[test]
    fn dipole_linear_in_linewidth() {
        let mut p = presets::quantum();
        let base = dipole_from_linewidth(&p).mu_p_sq;
        p.gamma_si *= 2.0;
        assert_eq!(dipole_from_linewidth(&p).mu_p_sq, 2.0 * base);
    }

    #[test]
    fn quantum_set_golden_susceptibilities() {
        let r = susceptibilities(&presets::quantum()).unwrap();
        // Independent 40-digit evaluation of the same closed forms.
        assert!(close(
            r.chi1_p,
            c(0.010_381_541_864_915_443, 0.007_266_041_299_540_875_5),
            1e-12
        ));
        assert!(close(
            r.chi1_t,
            c(-0.025_750_164_410_076_282, -0.027_064_737_367_948_044),
            1e-12
        ));
        assert!(close(
            r.chi3_p,
            c(-2.402_544_145_142_061_6e-6, -6.036_769_152_272_272_3e-7),
            1e-11
        ));
        assert!(close(
            r.chi3_t,
            c(2.817_189_750_738_856e-6, 6.737_849_201_322_263_2e-6),
            1e-11
        ));
    }

    #[test]
    fn classical_set_golden_susceptibilities() {
        let r = susceptibilities(&presets::classical()).unwrap();
        assert!(close(
            r.chi3_p,
            c(-4.220_735_023_565_602_7e-10, -2.094_572_930_499_980_1e-10),
            1e-11
        ));
        assert!(close(
            r.chi3_t,
            c(5.322_549_026_072_431_8e-10, 5.360_767_286_377_759_2e-10),
            1e-11
        ));
    }

    #[test]
    fn exact_two_photon_resonance_kills_probe_response() {
        let mut p = presets::quantum();
        p.delta1 = p.delta2;
        p.gamma_kj[0] = 0.0;
        assert_eq!(chi3_probe(&p).unwrap(), c(0.0, 0.0));
        assert_eq!(chi1_probe(&p).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn exact_trigger_resonance_kills_trigger_kerr() {
        let mut p = presets::quantum();
        p.delta3 = p.delta2;
        p.gamma_kj[2] = 0.0;
        assert_eq!(chi3_trigger(&p).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn chi3_is_linear_in_density() {
        let p = presets::quantum();
        let mut q = p.clone();
        q.density *= 10.0;
        for beam in [Beam::Probe, Beam::Trigger] {
            let a = chi3(&p, beam).unwrap();
            let b = chi3(&q, beam).unwrap();
            assert!(close(b, a * 10.0, 1e-15));
        }
        let mut q = p.clone();
        q.density *= 4.0;
        assert_eq!(chi3_probe(&q).unwrap(), chi3_probe(&p).unwrap() * 4.0);
    }

    #[test]
    fn chi3_scales_with_dipole_product() {
        let p = presets::quantum();
        let d = dipole_from_linewidth(&p);
        let s = 3.0;
        let scaled = DipoleMoments {
            mu_p_sq: d.mu_p_sq * s,
            mu_t_sq: d.mu_t_sq * s,
        };
        for beam in [Beam::Probe, Beam::Trigger] {
            let a = chi3_with(&p, &d, beam).unwrap();
            let b = chi3_with(&p, &scaled, beam).unwrap();
            assert!(close(b, a * (s * s), 1e-14));
        }
    }

    #[test]
    fn two_level_limit_of_probe_response() {
        let mut p = presets::quantum();
        p.omega_c = 0.0;
        p.delta1 = 0.0;
        let chi = chi1_probe(&p).unwrap();
        let d = dipole_from_linewidth(&p);
        let expected = Complex64::new(0.0, p.gamma_j0[0] * p.gamma_si).inv()
            * (p.density * d.mu_p_sq / (HBAR * EPSILON_0));
        assert!(close(chi, expected, 1e-12));
    }

    #[test]
    fn pole_is_reported_with_denominator_name() {
        let mut p = presets::quantum();
        p.gamma_kj = [0.0; 3];
        p.delta1 = 0.0;
        p.delta2 = 0.0;
        p.delta3 = 0.0;
        p.omega_c = 0.0;
        match chi1_probe(&p) {
            Err(Error::Pole { denominator, .. }) => assert_eq!(denominator, "Δ10·Δ12 − |Ω|²"),
            other => panic!("expected pole, got {other:?}"),
        }
        p.omega_c = 1.0;
        match chi3_probe(&p) {
            Err(Error::Pole { denominator, .. }) => assert_eq!(denominator, "Δ13"),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn strong_coupling_asymptotics() {
        let mut p = presets::quantum();
        for omega in [100.0, 200.0, 400.0] {
            p.omega_c = omega;
            let a = chi3_probe(&p).unwrap().norm();
            p.omega_c = 2.0 * omega;
            let b = chi3_probe(&p).unwrap().norm();
            assert!(((b / a) * 16.0 - 1.0).abs() < 0.05, "ratio {}", b / a);
        }
    }

    #[test]
    fn identical_inputs_are_bit_identical() {
        let p = presets::quantum();
        assert_eq!(
            susceptibilities(&p).unwrap(),
            susceptibilities(&p.clone()).unwrap()
        );
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut p = presets::quantum();
        p.gamma_si = 0.0;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParams {
                field: "gamma_si",
                ..
            })
        ));
        let mut p = presets::quantum();
        p.omega_c = -1.0;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParams {
                field: "omega_c",
                ..
            })
        ));
        let mut p = presets::quantum();
        p.length = 0.0;
        assert!(p.validate().is_ok());
    }
}
