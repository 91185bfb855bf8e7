//! Acceptance suite. Every criterion prints one `ACCEPTANCE <n> PASS|FAIL`
//! line with the measured quantities; the process fails if any criterion does.

use std::f64::consts::{PI, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use tripod_qpg::gate::{self, PolarizationQubit, TruthTable};
use tripod_qpg::oracle::{self, ExtractionSettings};
use tripod_qpg::propagation::{self, erf_over_zeta, phase_table, VelocityModel};
use tripod_qpg::search::{self, SweepParam, SweepScale, SweepSpec};
use tripod_qpg::{model, presets, Beam};

fn report(n: u32, title: &str, pass: bool, detail: String) -> bool {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {n} {verdict}: {title}: {detail}");
    pass
}

fn within_factor(value: f64, reference: f64, factor: f64) -> bool {
    let ratio = value / reference;
    ratio >= 1.0 / factor && ratio <= factor
}

fn under(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn criterion_1_quantum_regime() -> bool {
    let start = Instant::now();
    let p = presets::quantum();
    let phi = phase_table(&p, VelocityModel::Matched)
        .unwrap()
        .phi_conditional;
    let length = search::find_length(&p, PI, VelocityModel::Matched).map(|r| r.value);
    let elapsed = start.elapsed();
    let phi_ok = (PI / 3.0..=3.0 * PI).contains(&phi);
    let length_ok = length
        .as_ref()
        .is_ok_and(|l| within_factor(*l, 1.6e-3, 3.0));
    report(
        1,
        "quantum regime",
        phi_ok && length_ok && under(elapsed, 1.0),
        format!(
            "φ = {phi:.6} rad (need [{:.4}, {:.4}]), find-length(π) = {length:?} m (need 1.6e-3 within ×3), {elapsed:?}",
            PI / 3.0,
            3.0 * PI
        ),
    )
}

fn criterion_2_classical_regime() -> bool {
    let start = Instant::now();
    let p = presets::classical();
    let density = search::find_density(&p, PI, VelocityModel::Matched).map(|r| r.value);
    let elapsed = start.elapsed();
    let ok = density.as_ref().is_ok_and(|n| within_factor(*n, 3e18, 3.0));
    report(
        2,
        "classical regime",
        ok && under(elapsed, 1.0),
        format!("find-density(π) = {density:?} m⁻³ (need 3e18 within ×3), {elapsed:?}"),
    )
}

fn criterion_3_oracle_equivalence() -> bool {
    let start = Instant::now();
    let p = presets::quantum();
    let settings = ExtractionSettings {
        weak_field: 0.01,
        scan_max: 0.02,
        ..ExtractionSettings::default()
    };
    let deltas = [20.01, 20.2, 20.5];
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for beam in [Beam::Probe, Beam::Trigger] {
        for r in oracle::shape_ratios(&p, beam, &deltas, &settings).unwrap() {
            worst = worst.max(r.component_error());
            lines.push(format!(
                "{beam} χ3({})/χ3({}): oracle {:.4}{:+.4}i vs analytic {:.4}{:+.4}i",
                r.delta1_ref,
                r.delta1,
                r.extracted.re,
                r.extracted.im,
                r.analytic.re,
                r.analytic.im
            ));
        }
    }
    let elapsed = start.elapsed();
    report(
        3,
        "oracle equivalence",
        worst < 0.01 && under(elapsed, 30.0),
        format!(
            "worst Re/Im relative error {worst:.3e} (need < 1e-2), {elapsed:?}; {}",
            lines.join("; ")
        ),
    )
}

fn criterion_4_eit_exactness() -> bool {
    let start = Instant::now();
    let mut p = presets::quantum();
    p.delta1 = p.delta2;
    p.gamma_kj[0] = 0.0;
    let chi1 = model::chi1_probe(&p).unwrap();
    let chi3 = model::chi3_probe(&p).unwrap();
    let rho01 = oracle::steady_state(&p).unwrap().rho[0][1].norm();
    let elapsed = start.elapsed();
    let exact = chi1.re == 0.0 && chi1.im == 0.0 && chi3.re == 0.0 && chi3.im == 0.0;
    report(
        4,
        "EIT exactness",
        exact && rho01 < 1e-8 && under(elapsed, 1.0),
        format!("χ1_P = {chi1}, χ3_P = {chi3}, oracle |ρ01| = {rho01:.3e}, {elapsed:?}"),
    )
}

fn criterion_5_window_and_zeeman_margin() -> bool {
    let start = Instant::now();
    let p = presets::quantum();
    let margin = propagation::wrong_polarization_check(&p).unwrap();
    let elapsed = start.elapsed();
    report(
        5,
        "transparency window",
        (0.03..=0.3).contains(&margin.window) && margin.ratio >= 100.0 && under(elapsed, 5.0),
        format!(
            "window {:.4}γ (need [0.03, 0.3]), Zeeman ratio {:.1} (need ≥ 100), {elapsed:?}",
            margin.window, margin.ratio
        ),
    )
}

fn criterion_6_gate_universality() -> bool {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let phi = TAU * i as f64 / 99.0;
        let out = gate::apply_gate(
            PolarizationQubit::balanced(),
            PolarizationQubit::balanced(),
            &TruthTable::from_conditional_phase(phi),
        );
        worst = worst.max((gate::concurrence(&out) - (phi / 2.0).sin().abs()).abs());
    }
    let mut identity_ok = true;
    let mut identity_gap: f64 = 0.0;
    for p in [presets::quantum(), presets::classical()] {
        let pt = phase_table(&p, VelocityModel::Matched).unwrap();
        let tt = gate::build_truth_table(&pt);
        let scale = tt.rows().iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let gap = (tt.conditional_phase() - (pt.phi_nlin_p + pt.phi_nlin_t)).abs();
        identity_gap = identity_gap.max(gap / scale);
        identity_ok &= gap <= 8.0 * f64::EPSILON * scale;
    }
    let elapsed = start.elapsed();
    report(
        6,
        "gate universality",
        worst < 1e-10 && identity_ok && under(elapsed, 1.0),
        format!(
            "max |C − |sin(φ/2)|| = {worst:.2e} (need < 1e-10), row identity gap {identity_gap:.2e} of max|θ| (need ≤ 8ε), {elapsed:?}"
        ),
    )
}

fn criterion_7_degenerate_limits() -> bool {
    let start = Instant::now();
    let erf_exact = erf_over_zeta(0.0) == 2.0 / PI.sqrt();
    let p = presets::quantum();
    let base = phase_table(&p, VelocityModel::Matched).unwrap();
    let mut worst: f64 = 0.0;
    for factor in [2.0, 3.0, 0.1, 7.5] {
        for vary_length in [true, false] {
            let mut q = p.clone();
            if vary_length {
                q.length *= factor;
            } else {
                q.density *= factor;
            }
            let t = phase_table(&q, VelocityModel::Matched).unwrap();
            for (a, b) in [
                (t.phi_nlin_p, base.phi_nlin_p),
                (t.phi_nlin_t, base.phi_nlin_t),
            ] {
                worst = worst.max((a / b / factor - 1.0).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        7,
        "degenerate limits",
        erf_exact && worst < 1e-12 && under(elapsed, 1.0),
        format!("erf(ζ)/ζ at 0 exact: {erf_exact}, worst linearity deviation {worst:.2e} (need < 1e-12), {elapsed:?}"),
    )
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_tripod-qpg"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn criterion_8_determinism() -> bool {
    let pi = PI.to_string();
    let mut commands: Vec<Vec<&str>> = Vec::new();
    for preset in ["quantum", "classical"] {
        for cmd in ["susceptibility", "phases", "truth-table", "oracle-check"] {
            for format in ["text", "json", "csv"] {
                commands.push(vec![cmd, "--preset", preset, "--format", format]);
            }
        }
        commands.push(vec!["find-length", "--preset", preset, "--target", &pi]);
        commands.push(vec!["find-density", "--preset", preset, "--target", &pi]);
        commands.push(vec![
            "sweep", "--preset", preset, "--param", "delta1", "--start", "19", "--stop", "21",
            "--points", "41",
        ]);
    }
    let mut mismatches = Vec::new();
    for args in &commands {
        if cli(args) != cli(args) {
            mismatches.push(args.join(" "));
        }
    }
    let p = presets::quantum();
    let spec = SweepSpec::new(SweepParam::Delta1, 19.0, 21.0, 41, SweepScale::Linear).unwrap();
    let serial = search::sweep_serial(&p, &spec, VelocityModel::Matched);
    let parallel = search::sweep(&p, &spec, VelocityModel::Matched, Some(4)).unwrap();
    let sweep_ok = serial == parallel;
    report(
        8,
        "determinism",
        mismatches.is_empty() && sweep_ok,
        format!(
            "{} CLI invocations compared, mismatches {mismatches:?}, parallel sweep equals serial: {sweep_ok}",
            commands.len()
        ),
    )
}

fn main() {
    let criteria: [fn() -> bool; 8] = [
        criterion_1_quantum_regime,
        criterion_2_classical_regime,
        criterion_3_oracle_equivalence,
        criterion_4_eit_exactness,
        criterion_5_window_and_zeeman_margin,
        criterion_6_gate_universality,
        criterion_7_degenerate_limits,
        criterion_8_determinism,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
