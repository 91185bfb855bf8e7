//! Steady state of the four-level tripod master equation and brute-force
//! extraction of effective χ⁽¹⁾/χ⁽³⁾ from weak-field scans.
//!
//! Levels: 0 excited, 1/2/3 ground. The probe drives 1–0, the coupling
//! field 2–0 and the trigger 3–0. In the rotating frame (γ units)
//! `H = −Σ δ_j|j⟩⟨j| + Σ Ω_j(|0⟩⟨j| + |j⟩⟨0|)`.
//!
//! Dissipation is written directly as rates on matrix elements: the excited
//! population decays into `|j⟩` at `Γ_j`, optical coherences `ρ0j` decay at
//! `γ_j0` (radiative part plus extra dephasing), ground coherences `ρkj` at
//! `γ_kj`. An optional ground reset at rate `r` (atoms leaving the beam and
//! being replaced by a ½/½ mixture of `|1⟩` and `|3⟩`) adds `r` to every rate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::model::{self, Beam, TripodParams};

pub const DIM: usize = 4;
const N: usize = DIM * DIM;

pub const SINGULAR_CONDITION: f64 = 1e15;
pub const MAX_CONDITION: f64 = 1e12;
pub const STATE_TOLERANCE: f64 = 1e-10;
pub const FIT_THRESHOLD: f64 = 1e-6;
/// Largest weak-field Rabi frequency (γ) accepted for an extraction.
pub const PERTURBATIVE_LIMIT: f64 = 0.05;
pub const DEFAULT_WEAK_FIELD: f64 = 0.01;
pub const DEFAULT_SCAN_MAX: f64 = 0.02;
/// Scan points as fractions of the scan maximum.
pub const SCAN_FRACTIONS: [f64; 4] = [0.0, 0.25, 0.5, 1.0];

/// Ground populations prepared for extraction: ½ in `|1⟩`, ½ in `|3⟩`.
pub const PREPARED_POPULATIONS: [f64; 4] = [0.0, 0.5, 0.0, 0.5];

/// 4×4 density matrix, `rho[a][b] = ⟨a|ρ|b⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    pub rho: [[Complex64; DIM]; DIM],
}

impl DensityMatrix4 {
    pub fn trace(&self) -> Complex64 {
        (0..DIM).map(|a| self.rho[a][a]).sum()
    }

    pub fn population(&self, level: usize) -> f64 {
        self.rho[level][level].re
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..DIM {
            for b in 0..DIM {
                worst = worst.max((self.rho[a][b] - self.rho[b][a].conj()).norm());
            }
        }
        worst
    }

    fn from_vector(x: &DVector<Complex64>) -> Self {
        let mut rho = [[Complex64::new(0.0, 0.0); DIM]; DIM];
        for a in 0..DIM {
            for b in 0..DIM {
                rho[a][b] = x[idx(a, b)];
            }
        }
        Self { rho }
    }

    fn to_vector(self) -> DVector<Complex64> {
        DVector::from_fn(N, |i, _| self.rho[i / DIM][i % DIM])
    }
}

/// Dissipation choices not fixed by [`TripodParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleModel {
    /// Decay rates `Γ_j` of the excited state into `|j⟩`. `None` means
    /// `Γ_j = 2γ_j0/3`, so that equal `γ_j0` are purely radiative.
    pub branching: Option<[f64; 3]>,
    pub ground_reset: f64,
}

impl Default for OracleModel {
    fn default() -> Self {
        Self {
            branching: None,
            ground_reset: 0.0,
        }
    }
}

impl OracleModel {
    fn rates(&self, p: &TripodParams) -> Result<[f64; 3]> {
        let gamma = self
            .branching
            .unwrap_or([0, 1, 2].map(|j| 2.0 * p.gamma_j0[j] / 3.0));
        if gamma.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::InvalidParams {
                field: "branching",
                reason: format!("decay rates must be finite and non-negative, got {gamma:?}"),
            });
        }
        let radiative = 0.5 * gamma.iter().sum::<f64>();
        for (j, &g) in p.gamma_j0.iter().enumerate() {
            if g < radiative * (1.0 - 1e-12) {
                return Err(Error::InvalidParams {
                    field: "gamma_j0",
                    reason: format!(
                        "γ_{}0 = {g} is below the radiative coherence decay ΣΓ/2 = {radiative}",
                        j + 1
                    ),
                });
            }
        }
        if !(self.ground_reset.is_finite() && self.ground_reset >= 0.0) {
            return Err(Error::InvalidParams {
                field: "ground_reset",
                reason: format!("must be finite and non-negative, got {}", self.ground_reset),
            });
        }
        Ok(gamma)
    }
}

fn idx(a: usize, b: usize) -> usize {
    DIM * a + b
}

fn coherence_rate(p: &TripodParams, a: usize, b: usize) -> f64 {
    match (a.min(b), a.max(b)) {
        (0, j) => p.gamma_j0[j - 1],
        (1, 2) => p.gamma_kj[0],
        (1, 3) => p.gamma_kj[1],
        (2, 3) => p.gamma_kj[2],
        _ => unreachable!("diagonal element has no coherence rate"),
    }
}

fn hamiltonian(p: &TripodParams) -> [[f64; DIM]; DIM] {
    let mut h = [[0.0; DIM]; DIM];
    let detunings = [p.delta1, p.delta2, p.delta3];
    let rabi = [p.omega_p, p.omega_c, p.omega_t];
    for j in 1..DIM {
        h[j][j] = -detunings[j - 1];
        h[0][j] = rabi[j - 1];
        h[j][0] = rabi[j - 1];
    }
    h
}

/// Liouvillian `L` with `dρ/dt = L·vec(ρ)`, `vec` row-major. The reset source
/// term is state-independent only through the trace, so it is included as
/// `(r/2)·Σ_b ρ_bb` feeding `ρ11` and `ρ33`.
pub fn liouvillian(p: &TripodParams, model: &OracleModel) -> Result<DMatrix<Complex64>> {
    let gamma = model.rates(p)?;
    let r = model.ground_reset;
    let h = hamiltonian(p);
    let i = Complex64::i();
    let mut l = DMatrix::<Complex64>::zeros(N, N);
    for a in 0..DIM {
        for b in 0..DIM {
            let row = idx(a, b);
            for k in 0..DIM {
                if h[a][k] != 0.0 {
                    l[(row, idx(k, b))] += -i * h[a][k];
                }
                if h[k][b] != 0.0 {
                    l[(row, idx(a, k))] += i * h[k][b];
                }
            }
            if a == b {
                if a == 0 {
                    l[(row, idx(0, 0))] -= Complex64::from(gamma.iter().sum::<f64>());
                } else {
                    l[(row, idx(0, 0))] += Complex64::from(gamma[a - 1]);
                }
                l[(row, row)] -= Complex64::from(r);
                if a == 1 || a == 3 {
                    for c in 0..DIM {
                        l[(row, idx(c, c))] += Complex64::from(0.5 * r);
                    }
                }
            } else {
                l[(row, row)] -= Complex64::from(coherence_rate(p, a, b) + r);
            }
        }
    }
    Ok(l)
}

fn condition_estimate(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0f64, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn solve(m: DMatrix<Complex64>, rhs: DVector<Complex64>) -> Result<DVector<Complex64>> {
    let condition = condition_estimate(&m);
    if condition.is_nan() || condition >= SINGULAR_CONDITION {
        return Err(Error::SingularSteadyState { condition });
    }
    if condition > MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    m.lu()
        .solve(&rhs)
        .ok_or(Error::SingularSteadyState { condition })
}

fn check_state(rho: &DensityMatrix4, residual: f64) -> Result<()> {
    let fail = |what: String| Err(Error::UnphysicalState(what));
    let herm = rho.hermiticity_error();
    if herm > STATE_TOLERANCE {
        return fail(format!("hermiticity error {herm:e}"));
    }
    let trace = rho.trace();
    if (trace - 1.0).norm() > STATE_TOLERANCE {
        return fail(format!("trace {trace}"));
    }
    for level in 0..DIM {
        let pop = rho.population(level);
        if !(-STATE_TOLERANCE..=1.0 + STATE_TOLERANCE).contains(&pop) {
            return fail(format!("population of level {level} is {pop}"));
        }
    }
    if residual > STATE_TOLERANCE {
        return fail(format!("fixed-point residual {residual:e}"));
    }
    Ok(())
}

/// Infinity norm of selected rows of `L·vec(ρ)`.
fn residual(
    l: &DMatrix<Complex64>,
    rho: &DensityMatrix4,
    rows: impl Iterator<Item = usize>,
) -> f64 {
    let drho = l * rho.to_vector();
    rows.map(|r| drho[r].norm()).fold(0.0, f64::max)
}

pub fn steady_state(p: &TripodParams) -> Result<DensityMatrix4> {
    steady_state_with(p, &OracleModel::default())
}

/// Unique trace-one solution of `L·vec(ρ) = 0`; the trace condition replaces
/// the `ρ00` equation.
pub fn steady_state_with(p: &TripodParams, model: &OracleModel) -> Result<DensityMatrix4> {
    p.validate()?;
    let l = liouvillian(p, model)?;
    let mut m = l.clone();
    let mut rhs = DVector::<Complex64>::zeros(N);
    for c in 0..N {
        m[(0, c)] = Complex64::from(0.0);
    }
    for a in 0..DIM {
        m[(0, idx(a, a))] = Complex64::from(1.0);
    }
    rhs[0] = Complex64::from(1.0);
    let rho = DensityMatrix4::from_vector(&solve(m, rhs)?);
    check_state(&rho, residual(&l, &rho, 0..N))?;
    Ok(rho)
}

/// Coherences in steady state with populations pinned to `populations`.
///
/// This describes a prepared ground-state mixture probed on a time scale
/// short compared with optical pumping: the population equations are
/// replaced by `ρ_aa = populations[a]`, every coherence equation is kept.
pub fn clamped_steady_state(
    p: &TripodParams,
    model: &OracleModel,
    populations: [f64; DIM],
) -> Result<DensityMatrix4> {
    p.validate()?;
    let total: f64 = populations.iter().sum();
    if (total - 1.0).abs() > STATE_TOLERANCE || populations.iter().any(|x| *x < 0.0) {
        return Err(Error::InvalidParams {
            field: "populations",
            reason: format!("must be non-negative and sum to 1, got {populations:?}"),
        });
    }
    let l = liouvillian(p, model)?;
    let mut m = l.clone();
    let mut rhs = DVector::<Complex64>::zeros(N);
    for (a, &pop) in populations.iter().enumerate() {
        let row = idx(a, a);
        for c in 0..N {
            m[(row, c)] = Complex64::from(0.0);
        }
        m[(row, row)] = Complex64::from(1.0);
        rhs[row] = Complex64::from(pop);
    }
    let rho = DensityMatrix4::from_vector(&solve(m, rhs)?);
    let coherences = (0..N).filter(|r| r / DIM != r % DIM);
    check_state(&rho, residual(&l, &rho, coherences))?;
    Ok(rho)
}

/// Result of a weak-field scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiExtraction {
    pub chi1_est: Complex64,
    /// Coefficient of `|E|²` of the partner field (m²/V²).
    pub chi3_est: Complex64,
    /// RMS misfit relative to the largest `|χ_eff|`.
    pub fit_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionSettings {
    pub weak_field: f64,
    pub scan_max: f64,
    pub model: OracleModel,
}

impl Default for ExtractionSettings {
    fn default() -> Self {
        Self {
            weak_field: DEFAULT_WEAK_FIELD,
            scan_max: DEFAULT_SCAN_MAX,
            model: OracleModel::default(),
        }
    }
}

impl ExtractionSettings {
    fn check(&self) -> Result<()> {
        for omega in [self.weak_field, self.scan_max] {
            if !(omega.is_finite() && omega >= 0.0) {
                return Err(Error::InvalidParams {
                    field: "weak_field",
                    reason: format!(
                        "weak-field amplitudes must be finite and non-negative, got {omega}"
                    ),
                });
            }
            if omega > PERTURBATIVE_LIMIT {
                return Err(Error::Perturbativity {
                    omega,
                    limit: PERTURBATIVE_LIMIT,
                });
            }
        }
        if self.weak_field == 0.0 {
            return Err(Error::InvalidParams {
                field: "weak_field",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }
}

/// `ρ_j0 / Ω_j` for the beam's transition, with the beam at the weak-field
/// amplitude and the partner at `partner` (γ).
fn raw_response(
    p: &TripodParams,
    beam: Beam,
    settings: &ExtractionSettings,
    partner: f64,
) -> Result<Complex64> {
    let mut q = p.clone();
    let level = match beam {
        Beam::Probe => {
            q.omega_p = settings.weak_field;
            q.omega_t = partner;
            1
        }
        Beam::Trigger => {
            q.omega_t = settings.weak_field;
            q.omega_p = partner;
            3
        }
    };
    let rho = clamped_steady_state(&q, &settings.model, PREPARED_POPULATIONS)?;
    Ok(rho.rho[level][0] / settings.weak_field)
}

/// Global calibration constant `C` such that `C·ρ10/Ω_P` equals
/// `chi1_probe` at the reference point with no trigger field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub constant: Complex64,
}

impl Calibration {
    pub fn at_reference(reference: &TripodParams, settings: &ExtractionSettings) -> Result<Self> {
        settings.check()?;
        let raw = raw_response(reference, Beam::Probe, settings, 0.0)?;
        let analytic = model::chi1_probe(reference)?;
        if raw.norm() == 0.0 {
            return Err(Error::SingularSteadyState {
                condition: f64::INFINITY,
            });
        }
        Ok(Self {
            constant: analytic / raw,
        })
    }
}

/// `|E|² = ħ²Ω²/|μ|²` in V²/m² for a Rabi frequency in γ units.
pub fn field_intensity(p: &TripodParams, beam: Beam, rabi: f64) -> f64 {
    let mu_sq = model::dipole_from_linewidth(p).get(beam);
    let omega = rabi * p.gamma_si;
    HBAR * HBAR * omega * omega / mu_sq
}

/// Ordinary least squares `y = c0 + c1·x` with complex `y` and real `x`.
fn fit_line(x: &[f64], y: &[Complex64]) -> (Complex64, Complex64, f64) {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<Complex64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mean_x).powi(2)).sum();
    let (slope, intercept) = if sxx == 0.0 {
        (Complex64::new(0.0, 0.0), mean_y)
    } else {
        let sxy: Complex64 = x
            .iter()
            .zip(y)
            .map(|(xi, yi)| (yi - mean_y) * (xi - mean_x))
            .sum();
        let slope = sxy / sxx;
        (slope, mean_y - slope * mean_x)
    };
    let scale = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let rms = (x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - intercept - slope * xi).norm_sqr())
        .sum::<f64>()
        / n)
        .sqrt();
    let residual = if scale > 0.0 { rms / scale } else { 0.0 };
    (intercept, slope, residual)
}

/// Fits `χ_eff(|E|²) = χ1 + χ3·|E|²` over the partner-field scan.
pub fn extract_chi(
    p: &TripodParams,
    beam: Beam,
    calibration: &Calibration,
    settings: &ExtractionSettings,
) -> Result<ChiExtraction> {
    settings.check()?;
    let partner = beam.other();
    let mut x = Vec::with_capacity(SCAN_FRACTIONS.len());
    let mut y = Vec::with_capacity(SCAN_FRACTIONS.len());
    for fraction in SCAN_FRACTIONS {
        let omega = fraction * settings.scan_max;
        x.push(field_intensity(p, partner, omega));
        y.push(calibration.constant * raw_response(p, beam, settings, omega)?);
    }
    let (chi1_est, chi3_est, fit_residual) = fit_line(&x, &y);
    if fit_residual > FIT_THRESHOLD {
        return Err(Error::Fit {
            residual: fit_residual,
            threshold: FIT_THRESHOLD,
        });
    }
    Ok(ChiExtraction {
        chi1_est,
        chi3_est,
        fit_residual,
    })
}

/// Analytic vs extracted χ at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleComparison {
    pub beam: Beam,
    pub analytic_chi1: Complex64,
    pub analytic_chi3: Complex64,
    pub extracted: ChiExtraction,
}

impl OracleComparison {
    pub fn chi1_relative_error(&self) -> f64 {
        relative_error(self.extracted.chi1_est, self.analytic_chi1)
    }

    pub fn chi3_relative_error(&self) -> f64 {
        relative_error(self.extracted.chi3_est, self.analytic_chi3)
    }
}

pub fn relative_error(estimate: Complex64, reference: Complex64) -> f64 {
    if reference.norm() == 0.0 {
        estimate.norm()
    } else {
        (estimate - reference).norm() / reference.norm()
    }
}

pub fn compare(
    p: &TripodParams,
    beam: Beam,
    calibration: &Calibration,
    settings: &ExtractionSettings,
) -> Result<OracleComparison> {
    Ok(OracleComparison {
        beam,
        analytic_chi1: model::chi1(p, beam)?,
        analytic_chi3: model::chi3(p, beam)?,
        extracted: extract_chi(p, beam, calibration, settings)?,
    })
}

/// χ⁽³⁾ detuning-shape ratios `χ3(δ1 = first)/χ3(δ1 = other)`, extracted and
/// analytic. The calibration constant cancels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeRatio {
    pub beam: Beam,
    pub delta1_ref: f64,
    pub delta1: f64,
    pub extracted: Complex64,
    pub analytic: Complex64,
}

impl ShapeRatio {
    /// Larger of the relative errors of the real and imaginary parts.
    pub fn component_error(&self) -> f64 {
        let re = (self.extracted.re - self.analytic.re).abs() / self.analytic.re.abs();
        let im = (self.extracted.im - self.analytic.im).abs() / self.analytic.im.abs();
        re.max(im)
    }
}

pub fn shape_ratios(
    p: &TripodParams,
    beam: Beam,
    delta1_values: &[f64],
    settings: &ExtractionSettings,
) -> Result<Vec<ShapeRatio>> {
    let calibration = Calibration::at_reference(p, settings)?;
    let points = delta1_values
        .iter()
        .map(|&d1| {
            let mut q = p.clone();
            q.delta1 = d1;
            let extracted = extract_chi(&q, beam, &calibration, settings)?.chi3_est;
            Ok((d1, extracted, model::chi3(&q, beam)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (d_ref, e_ref, a_ref) = points[0];
    Ok(points[1..]
        .iter()
        .map(|&(d1, e, a)| ShapeRatio {
            beam,
            delta1_ref: d_ref,
            delta1: d1,
            extracted: e_ref / e,
            analytic: a_ref / a,
        })
        .collect())
}
