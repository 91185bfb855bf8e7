//! Root finding for the length or density that reaches a target conditional
//! phase, and one-parameter sweeps of the whole pipeline.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gate::{self, Universality};
use crate::model::{self, Beam, SusceptibilityReport, TripodParams};
use crate::propagation::{self, PhaseTable, VelocityModel};

pub const PHASE_TOLERANCE: f64 = 1e-9;
pub const MAX_LENGTH: f64 = 1.0;
pub const MAX_DENSITY: f64 = 1e22;
const MAX_BISECTIONS: usize = 200;
/// Grid points used to test φ for monotonicity over the bracket.
const MONOTONICITY_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unknown {
    Length,
    Density,
}

impl Unknown {
    pub fn limit(self) -> f64 {
        match self {
            Unknown::Length => MAX_LENGTH,
            Unknown::Density => MAX_DENSITY,
        }
    }

    fn set(self, p: &mut TripodParams, value: f64) {
        match self {
            Unknown::Length => p.length = value,
            Unknown::Density => p.density = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub unknown: Unknown,
    pub value: f64,
    pub phase: f64,
    pub iterations: usize,
    /// Set when φ was found to decrease somewhere on the bracket, in which
    /// case the returned root need not be the smallest one.
    pub non_monotone: bool,
    pub phases: PhaseTable,
}

fn phase_at(
    p: &TripodParams,
    unknown: Unknown,
    value: f64,
    mode: VelocityModel,
) -> Result<PhaseTable> {
    let mut q = p.clone();
    unknown.set(&mut q, value);
    propagation::phase_table(&q, mode)
}

/// Bisection for `φ(x) = target` on `[0, limit]`, testing the midpoint first.
pub fn solve_for(
    p: &TripodParams,
    unknown: Unknown,
    target: f64,
    mode: VelocityModel,
) -> Result<SearchResult> {
    p.validate()?;
    if !(target.is_finite() && target >= 0.0) {
        return Err(Error::InvalidParams {
            field: "target",
            reason: format!("target phase must be finite and non-negative, got {target}"),
        });
    }
    let limit = unknown.limit();
    let done = |value: f64, table: PhaseTable, iterations, non_monotone| SearchResult {
        unknown,
        value,
        phase: table.phi_conditional,
        iterations,
        non_monotone,
        phases: table,
    };
    if target == 0.0 {
        return Ok(done(0.0, phase_at(p, unknown, 0.0, mode)?, 0, false));
    }

    let at_limit = phase_at(p, unknown, limit, mode)?;
    if at_limit.phi_conditional < target {
        return Err(Error::NoBracket {
            target,
            limit,
            phase_at_limit: at_limit.phi_conditional,
        });
    }

    let mut non_monotone = false;
    let mut previous = f64::NEG_INFINITY;
    for i in 1..=MONOTONICITY_SAMPLES {
        let x = limit * i as f64 / MONOTONICITY_SAMPLES as f64;
        let phi = phase_at(p, unknown, x, mode)?.phi_conditional;
        if phi < previous {
            non_monotone = true;
            break;
        }
        previous = phi;
    }

    let (mut lo, mut hi) = (0.0, limit);
    let mut best: Option<(f64, PhaseTable)> = None;
    for iteration in 1..=MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let table = phase_at(p, unknown, mid, mode)?;
        let miss = table.phi_conditional - target;
        let closer = best
            .as_ref()
            .is_none_or(|(_, t)| miss.abs() < (t.phi_conditional - target).abs());
        if miss.abs() < PHASE_TOLERANCE {
            return Ok(done(mid, table, iteration, non_monotone));
        }
        if miss < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if closer {
            best = Some((mid, table));
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    // Bracket collapsed to adjacent floats without meeting the tolerance.
    let (value, table) = best.expect("at least one bisection step");
    Err(Error::NoBracket {
        target,
        limit: value,
        phase_at_limit: table.phi_conditional,
    })
}

pub fn find_length(p: &TripodParams, target: f64, mode: VelocityModel) -> Result<SearchResult> {
    solve_for(p, Unknown::Length, target, mode)
}

pub fn find_density(p: &TripodParams, target: f64, mode: VelocityModel) -> Result<SearchResult> {
    solve_for(p, Unknown::Density, target, mode)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Length,
    Density,
    OmegaC,
    Delta1,
    Delta2,
    Delta3,
    OmegaP,
    OmegaT,
}

impl SweepParam {
    pub const ALL: [SweepParam; 8] = [
        SweepParam::Length,
        SweepParam::Density,
        SweepParam::OmegaC,
        SweepParam::Delta1,
        SweepParam::Delta2,
        SweepParam::Delta3,
        SweepParam::OmegaP,
        SweepParam::OmegaT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Length => "length",
            SweepParam::Density => "density",
            SweepParam::OmegaC => "omega_c",
            SweepParam::Delta1 => "delta1",
            SweepParam::Delta2 => "delta2",
            SweepParam::Delta3 => "delta3",
            SweepParam::OmegaP => "omega_p",
            SweepParam::OmegaT => "omega_t",
        }
    }

    pub fn set(self, p: &mut TripodParams, value: f64) {
        let field = match self {
            SweepParam::Length => &mut p.length,
            SweepParam::Density => &mut p.density,
            SweepParam::OmegaC => &mut p.omega_c,
            SweepParam::Delta1 => &mut p.delta1,
            SweepParam::Delta2 => &mut p.delta2,
            SweepParam::Delta3 => &mut p.delta3,
            SweepParam::OmegaP => &mut p.omega_p,
            SweepParam::OmegaT => &mut p.omega_t,
        };
        *field = value;
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep parameter `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepScale {
    #[default]
    Linear,
    Log,
}

impl FromStr for SweepScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(SweepScale::Linear),
            "log" => Ok(SweepScale::Log),
            _ => Err(Error::Config(format!(
                "unknown sweep scale `{s}` (expected linear or log)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    param: SweepParam,
    start: f64,
    stop: f64,
    points: usize,
    scale: SweepScale,
}

impl SweepSpec {
    pub fn new(
        param: SweepParam,
        start: f64,
        stop: f64,
        points: usize,
        scale: SweepScale,
    ) -> Result<Self> {
        let invalid = |field, reason: String| Err(Error::InvalidParams { field, reason });
        if !(start.is_finite() && stop.is_finite()) {
            return invalid(
                "start",
                format!("sweep bounds must be finite, got [{start}, {stop}]"),
            );
        }
        if start >= stop {
            return invalid("stop", format!("start {start} must be below stop {stop}"));
        }
        if points < 2 {
            return invalid("points", format!("need at least 2 points, got {points}"));
        }
        if scale == SweepScale::Log && start <= 0.0 {
            return invalid(
                "start",
                format!("log sweep needs positive bounds, got start {start}"),
            );
        }
        Ok(Self {
            param,
            start,
            stop,
            points,
            scale,
        })
    }

    pub fn param(&self) -> SweepParam {
        self.param
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Grid value at `index`; both end points are hit exactly.
    pub fn value(&self, index: usize) -> f64 {
        if index == 0 {
            return self.start;
        }
        if index + 1 == self.points {
            return self.stop;
        }
        let t = index as f64 / (self.points - 1) as f64;
        match self.scale {
            SweepScale::Linear => self.start + (self.stop - self.start) * t,
            SweepScale::Log => {
                let (a, b) = (self.start.ln(), self.stop.ln());
                (a + (b - a) * t).exp()
            }
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    PoleError,
    DispersionError,
    Error,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::PoleError => "pole_error",
            RowStatus::DispersionError => "dispersion_error",
            RowStatus::Error => "error",
        }
    }
}

/// Pipeline output at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub susceptibilities: SusceptibilityReport,
    pub phases: PhaseTable,
    pub universality: Universality,
    /// Probe transparency window (γ); `None` when no window exists.
    pub window: Option<f64>,
}

pub fn evaluate_point(p: &TripodParams, mode: VelocityModel) -> Result<PointReport> {
    p.validate()?;
    let susceptibilities = model::susceptibilities(p)?;
    let phases = propagation::phase_table(p, mode)?;
    let universality = gate::is_universal(&gate::build_truth_table(&phases));
    let window = propagation::transparency_window(p, Beam::Probe).ok();
    Ok(PointReport {
        susceptibilities,
        phases,
        universality,
        window,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub status: RowStatus,
    pub report: Option<PointReport>,
    pub message: Option<String>,
}

fn sweep_row(p: &TripodParams, spec: &SweepSpec, mode: VelocityModel, index: usize) -> SweepRow {
    let value = spec.value(index);
    let mut q = p.clone();
    spec.param.set(&mut q, value);
    match evaluate_point(&q, mode) {
        Ok(report) => SweepRow {
            index,
            value,
            status: RowStatus::Ok,
            report: Some(report),
            message: None,
        },
        Err(err) => SweepRow {
            index,
            value,
            status: match err {
                Error::Pole { .. } => RowStatus::PoleError,
                Error::Dispersion { .. } => RowStatus::DispersionError,
                _ => RowStatus::Error,
            },
            report: None,
            message: Some(err.to_string()),
        },
    }
}

pub fn sweep_serial(p: &TripodParams, spec: &SweepSpec, mode: VelocityModel) -> Vec<SweepRow> {
    (0..spec.points)
        .map(|i| sweep_row(p, spec, mode, i))
        .collect()
}

/// Parallel sweep; rows come back in grid order. `threads` overrides the
/// size of the worker pool.
pub fn sweep(
    p: &TripodParams,
    spec: &SweepSpec,
    mode: VelocityModel,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>> {
    let run = || -> Vec<SweepRow> {
        (0..spec.points)
            .into_par_iter()
            .map(|i| sweep_row(p, spec, mode, i))
            .collect()
    };
    match threads {
        None => Ok(run()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot build a {n}-thread pool: {e}")))?;
            Ok(pool.install(run))
        }
    }
}
