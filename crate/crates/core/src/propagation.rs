//! Pulse propagation through the medium: group velocities, pulse overlap,
//! vacuum/linear/nonlinear phase shifts and the EIT transparency window.

use std::f64::consts::{FRAC_2_SQRT_PI, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::model::{self, Beam, DipoleMoments, TripodParams};

/// Finite-difference step in the beam detuning for dχ/dω, in units of γ.
pub const DISPERSION_STEP: f64 = 1e-3;

/// Half-width of the transparency-window scan around two-photon resonance (γ).
pub const WINDOW_SCAN_HALF_WIDTH: f64 = 5.0;
/// Transparency-window scan resolution (γ).
pub const WINDOW_SCAN_STEP: f64 = 1e-3;

/// How the pulse-overlap parameters ζ are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VelocityModel {
    /// Group velocities from the χ⁽¹⁾ dispersion of each beam.
    #[default]
    Dispersion,
    /// Probe and trigger travel at the same group velocity, so ζ = 0.
    Matched,
}

/// Convention relating χ⁽¹⁾ to the refractive index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexConvention {
    /// n = 1 + Re χ / 2.
    Si,
    /// n = 1 + 2π Re χ.
    Gaussian,
}

impl IndexConvention {
    fn index_shift(self, chi_re: f64) -> f64 {
        match self {
            IndexConvention::Si => 0.5 * chi_re,
            IndexConvention::Gaussian => 2.0 * PI * chi_re,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupVelocities {
    pub vg_p: f64,
    pub vg_t: f64,
}

impl GroupVelocities {
    pub fn get(&self, beam: Beam) -> f64 {
        match beam {
            Beam::Probe => self.vg_p,
            Beam::Trigger => self.vg_t,
        }
    }
}

fn chi1_re_at(p: &TripodParams, beam: Beam, detuning: f64) -> Result<f64> {
    let mut shifted = p.clone();
    *shifted.detuning_mut(beam) = detuning;
    Ok(model::chi1(&shifted, beam)?.re)
}

/// Group index `1 + Re χ/2 + (ω/2)·d Re χ/dω` of the beam.
///
/// The derivative is taken with respect to the laser frequency. Since
/// `δ = ω_0 − ω_j − ω_L`, `d/dω_L = −(1/γ)·d/dδ`.
pub fn group_index(p: &TripodParams, beam: Beam) -> Result<f64> {
    group_index_with_step(p, beam, DISPERSION_STEP)
}

pub(crate) fn group_index_with_step(p: &TripodParams, beam: Beam, step: f64) -> Result<f64> {
    let delta = p.detuning(beam);
    let chi_re = model::chi1(p, beam)?.re;
    let plus = chi1_re_at(p, beam, delta + step)?;
    let minus = chi1_re_at(p, beam, delta - step)?;
    let dchi_ddelta = (plus - minus) / (2.0 * step);
    let dchi_domega = -dchi_ddelta / p.gamma_si;
    Ok(1.0 + 0.5 * chi_re + 0.5 * p.angular_frequency(beam) * dchi_domega)
}

pub fn group_velocity(p: &TripodParams, beam: Beam) -> Result<f64> {
    let group_index = group_index(p, beam)?;
    let velocity = SPEED_OF_LIGHT / group_index;
    if !velocity.is_finite() || velocity <= 0.0 || velocity > SPEED_OF_LIGHT {
        return Err(Error::Dispersion {
            beam,
            velocity,
            group_index,
        });
    }
    Ok(velocity)
}

pub fn group_velocities(p: &TripodParams) -> Result<GroupVelocities> {
    Ok(GroupVelocities {
        vg_p: group_velocity(p, Beam::Probe)?,
        vg_t: group_velocity(p, Beam::Trigger)?,
    })
}

/// Overlap parameter of the beam's pulse with the other one.
///
/// `ζ_P = (1 − v_P/v_T)·√2·l/(v_P·τ_T)` and `ζ_T = (1 − v_T/v_P)·√2·l/(v_T·τ_P)`.
pub fn zeta(p: &TripodParams, vg: &GroupVelocities, beam: Beam) -> f64 {
    let own = vg.get(beam);
    let other = vg.get(beam.other());
    (1.0 - own / other) * SQRT_2 * p.length / (own * p.duration(beam.other()))
}

/// `erf(z)/z`, continued to `2/√π` at `z = 0`.
pub fn erf_over_zeta(z: f64) -> f64 {
    if z == 0.0 {
        FRAC_2_SQRT_PI
    } else {
        libm::erf(z) / z
    }
}

/// Vacuum phase `k·l`.
pub fn phi_vacuum(p: &TripodParams, beam: Beam) -> f64 {
    p.wavenumber(beam) * p.length
}

/// Linear phase `k·l·(1 + Re χ⁽¹⁾/2)`.
pub fn phi_linear(p: &TripodParams, beam: Beam) -> Result<f64> {
    phi_linear_with(p, beam, IndexConvention::Si)
}

pub fn phi_linear_with(p: &TripodParams, beam: Beam, convention: IndexConvention) -> Result<f64> {
    let chi = model::chi1(p, beam)?;
    Ok(p.wavenumber(beam) * p.length * (1.0 + convention.index_shift(chi.re)))
}

/// Field-intensity factor `π^{3/2}·ħ²|Ω|²/(4|μ|²)` of the partner beam.
fn overlap_intensity(p: &TripodParams, dipoles: &DipoleMoments, partner: Beam) -> f64 {
    let rabi = p.rabi(partner) * p.gamma_si;
    PI.powf(1.5) * HBAR * HBAR * rabi * rabi / (4.0 * dipoles.get(partner))
}

/// Cross-phase shift of `beam` induced by the partner pulse, for a given
/// overlap parameter ζ of `beam`.
pub fn phi_nonlinear(p: &TripodParams, zeta: f64, beam: Beam) -> Result<f64> {
    let dipoles = model::dipole_from_linewidth(p);
    let chi3 = model::chi3_with(p, &dipoles, beam)?;
    Ok(p.wavenumber(beam)
        * p.length
        * overlap_intensity(p, &dipoles, beam.other())
        * erf_over_zeta(zeta)
        * chi3.re)
}

/// All phase shifts of both beams plus the conditional phase.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseTable {
    pub phi0_p: f64,
    pub phi0_t: f64,
    pub phi_lin_p: f64,
    pub phi_lin_t: f64,
    pub phi_nlin_p: f64,
    pub phi_nlin_t: f64,
    /// `phi_nlin_p + phi_nlin_t`.
    pub phi_conditional: f64,
    pub zeta_p: f64,
    pub zeta_t: f64,
    /// Present when the dispersion model was used.
    pub group_velocities: Option<GroupVelocities>,
}

pub fn phase_table(p: &TripodParams, velocities: VelocityModel) -> Result<PhaseTable> {
    phase_table_with(p, velocities, IndexConvention::Si)
}

pub fn phase_table_with(
    p: &TripodParams,
    velocities: VelocityModel,
    convention: IndexConvention,
) -> Result<PhaseTable> {
    let (zeta_p, zeta_t, group_velocities) = match velocities {
        VelocityModel::Matched => (0.0, 0.0, None),
        VelocityModel::Dispersion => {
            let vg = group_velocities(p)?;
            (
                zeta(p, &vg, Beam::Probe),
                zeta(p, &vg, Beam::Trigger),
                Some(vg),
            )
        }
    };
    let phi_nlin_p = phi_nonlinear(p, zeta_p, Beam::Probe)?;
    let phi_nlin_t = phi_nonlinear(p, zeta_t, Beam::Trigger)?;
    Ok(PhaseTable {
        phi0_p: phi_vacuum(p, Beam::Probe),
        phi0_t: phi_vacuum(p, Beam::Trigger),
        phi_lin_p: phi_linear_with(p, Beam::Probe, convention)?,
        phi_lin_t: phi_linear_with(p, Beam::Trigger, convention)?,
        phi_nlin_p,
        phi_nlin_t,
        phi_conditional: phi_nlin_p + phi_nlin_t,
        zeta_p,
        zeta_t,
        group_velocities,
    })
}

/// Full width (γ) of the transparency window of the beam.
///
/// Im χ⁽¹⁾ is scanned over the beam detuning within ±5γ of two-photon
/// resonance (beam detuning = δ2). The window is the widest interval centred
/// on resonance in which Im χ⁽¹⁾ stays at or below half its maximum over the
/// scan; edges are located by linear interpolation between scan points.
pub fn transparency_window(p: &TripodParams, beam: Beam) -> Result<f64> {
    let half_points = (WINDOW_SCAN_HALF_WIDTH / WINDOW_SCAN_STEP).round() as usize;
    let centre = p.delta2;
    let mut scan = p.clone();
    let absorption = (0..=2 * half_points)
        .map(|i| {
            let offset = (i as f64 - half_points as f64) * WINDOW_SCAN_STEP;
            *scan.detuning_mut(beam) = centre + offset;
            model::chi1(&scan, beam).map(|chi| chi.im)
        })
        .collect::<Result<Vec<f64>>>()?;

    let peak = absorption.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let half = 0.5 * peak;
    if peak <= 0.0 || absorption[half_points] >= half {
        return Err(Error::NoWindow {
            beam,
            reason: format!(
                "Im χ at two-photon resonance ({:e}) is not below half the scan maximum ({:e})",
                absorption[half_points], peak
            ),
        });
    }

    let crossing = |indices: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut prev = half_points;
        for i in indices {
            if absorption[i] > half {
                let (a, b) = (absorption[prev], absorption[i]);
                let frac = (half - a) / (b - a);
                let steps = (prev as f64 - half_points as f64).abs() + frac;
                return Some(steps * WINDOW_SCAN_STEP);
            }
            prev = i;
        }
        None
    };
    let left = crossing(&mut (0..half_points).rev());
    let right = crossing(&mut (half_points + 1..=2 * half_points));
    let half_width = match (left, right) {
        (Some(l), Some(r)) => l.min(r),
        (Some(d), None) | (None, Some(d)) => d,
        (None, None) => {
            return Err(Error::NoWindow {
                beam,
                reason: "absorption never exceeds half maximum inside the scan".into(),
            })
        }
    };
    Ok(2.0 * half_width)
}

/// Margin between the Zeeman splitting and the probe transparency half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizationMargin {
    pub window: f64,
    pub ratio: f64,
    /// True when the splitting exceeds the half-window by at least a factor 10.
    pub valid: bool,
}

pub const MIN_ZEEMAN_RATIO: f64 = 10.0;

pub fn wrong_polarization_check(p: &TripodParams) -> Result<PolarizationMargin> {
    let window = transparency_window(p, Beam::Probe)?;
    let ratio = p.zeeman_split / (0.5 * window);
    Ok(PolarizationMargin {
        window,
        ratio,
        valid: ratio >= MIN_ZEEMAN_RATIO,
    })
}
