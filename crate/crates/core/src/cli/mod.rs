//! Command-line front end.
//!
//! ```text
//! tripod-qpg <command> [--config FILE | --preset NAME] [--format text|json|csv] [--out FILE]
//! ```
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 physics error
//! (pole, dispersion, solver), 3 search failure.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::gate;
use crate::model::{self, Beam};
use crate::oracle::{self, ExtractionSettings};
use crate::propagation::{self, PhaseTable};
use crate::search::{self, RowStatus, SearchResult, SweepParam, SweepScale, SweepSpec};

pub use config::RunConfig;
use output::{complex_fields, Cell, Format, Table};

/// Environment variable overriding the sweep worker count.
pub const THREADS_ENV: &str = "TRIPOD_QPG_THREADS";

/// δ1 offsets (γ) from the configured δ1 used for χ⁽³⁾ shape ratios.
pub const SHAPE_OFFSETS: [f64; 3] = [0.0, 0.19, 0.49];

#[derive(Debug, Parser)]
#[command(
    name = "tripod-qpg",
    version,
    about = "Cross-Kerr polarization phase gate in a tripod EIT medium"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named parameter set: quantum or classical.
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Linear and third-order susceptibilities of probe and trigger.
    Susceptibility,
    /// Vacuum, linear and nonlinear phase shifts.
    Phases,
    /// Gate truth table, conditional phase and universality witness.
    TruthTable,
    /// Medium length reaching a target conditional phase.
    FindLength {
        #[arg(long, allow_negative_numbers = true)]
        target: f64,
    },
    /// Atom density reaching a target conditional phase.
    FindDensity {
        #[arg(long, allow_negative_numbers = true)]
        target: f64,
    },
    /// One-parameter sweep of the whole pipeline (CSV by default).
    Sweep {
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long)]
        points: usize,
        #[arg(long, default_value = "linear")]
        scale: String,
    },
    /// Compare analytic susceptibilities with the master-equation oracle.
    OracleCheck {
        /// Rabi frequency (γ) of the beam whose response is extracted.
        #[arg(long, default_value_t = oracle::DEFAULT_WEAK_FIELD)]
        weak_field: f64,
        /// Largest partner Rabi frequency (γ) of the scan.
        #[arg(long, default_value_t = oracle::DEFAULT_SCAN_MAX)]
        scan_max: f64,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    let threads = std::env::var(THREADS_ENV).ok();
    match execute(&cli, threads.as_deref()) {
        Ok(text) => match &cli.common.out {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    1
                }
            },
            None => {
                let _ = stdout.write_all(text.as_bytes());
                0
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig> {
    match (&common.config, &common.preset) {
        (Some(path), _) => RunConfig::from_file(path),
        (None, Some(name)) => RunConfig::preset(name),
        (None, None) => Err(Error::Config(
            "one of --config FILE or --preset NAME is required".into(),
        )),
    }
}

fn parse_threads(value: Option<&str>) -> Result<Option<usize>> {
    value
        .map(|v| match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        })
        .transpose()
}

fn execute(cli: &Cli, threads: Option<&str>) -> Result<String> {
    let cfg = load_config(&cli.common)?;
    let format = cli.common.format;
    let text_default = format.unwrap_or(Format::Text);
    let p = &cfg.params;
    let mode = cfg.group_velocity;
    let table = match &cli.command {
        Command::Susceptibility => susceptibility_table(p)?,
        Command::Phases => phases_table(&propagation::phase_table(p, mode)?),
        Command::TruthTable => truth_table(&propagation::phase_table(p, mode)?),
        Command::FindLength { target } => search_table(&search::find_length(p, *target, mode)?),
        Command::FindDensity { target } => search_table(&search::find_density(p, *target, mode)?),
        Command::Sweep {
            param,
            start,
            stop,
            points,
            scale,
        } => {
            let spec = SweepSpec::new(
                param.parse::<SweepParam>()?,
                *start,
                *stop,
                *points,
                scale.parse::<SweepScale>()?,
            )?;
            let rows = search::sweep(p, &spec, mode, parse_threads(threads)?)?;
            return Ok(sweep_table(&spec, &rows).render(format.unwrap_or(Format::Csv)));
        }
        Command::OracleCheck {
            weak_field,
            scan_max,
        } => {
            let settings = ExtractionSettings {
                weak_field: *weak_field,
                scan_max: *scan_max,
                ..ExtractionSettings::default()
            };
            oracle_table(p, &settings)?
        }
    };
    Ok(table.render(text_default))
}

fn named<T: Into<Cell>>(name: &str, value: T) -> (String, Cell) {
    (name.to_owned(), value.into())
}

fn susceptibility_fields(r: &model::SusceptibilityReport) -> Vec<(String, Cell)> {
    let mut fields = Vec::with_capacity(8);
    fields.extend(complex_fields("chi1_p", r.chi1_p));
    fields.extend(complex_fields("chi1_t", r.chi1_t));
    fields.extend(complex_fields("chi3_p", r.chi3_p));
    fields.extend(complex_fields("chi3_t", r.chi3_t));
    fields
}

fn susceptibility_table(p: &model::TripodParams) -> Result<Table> {
    Ok(Table::record(
        "susceptibility",
        susceptibility_fields(&model::susceptibilities(p)?),
    ))
}

fn phase_fields(t: &PhaseTable) -> Vec<(String, Cell)> {
    let vg = t.group_velocities;
    vec![
        named("phi0_p", t.phi0_p),
        named("phi0_t", t.phi0_t),
        named("phi_lin_p", t.phi_lin_p),
        named("phi_lin_t", t.phi_lin_t),
        named("phi_nlin_p", t.phi_nlin_p),
        named("phi_nlin_t", t.phi_nlin_t),
        named("phi_conditional", t.phi_conditional),
        named("zeta_p", t.zeta_p),
        named("zeta_t", t.zeta_t),
        named("vg_p", vg.map(|v| v.vg_p)),
        named("vg_t", vg.map(|v| v.vg_t)),
    ]
}

fn phases_table(t: &PhaseTable) -> Table {
    Table::record("phases", phase_fields(t))
}

fn truth_table(t: &PhaseTable) -> Table {
    let tt = gate::build_truth_table(t);
    let u = gate::is_universal(&tt);
    Table::record(
        "truth_table",
        vec![
            named("theta_mm", tt.theta_mm),
            named("theta_mp", tt.theta_mp),
            named("theta_pp", tt.theta_pp),
            named("theta_pm", tt.theta_pm),
            named("phi_conditional", u.conditional_phase),
            named("universal", u.universal),
            named("witness", u.witness),
        ],
    )
}

fn search_table(r: &SearchResult) -> Table {
    let name = match r.unknown {
        search::Unknown::Length => "length",
        search::Unknown::Density => "density",
    };
    let mut fields = vec![
        named(name, r.value),
        named("phase", r.phase),
        named("iterations", r.iterations),
        named("non_monotone", r.non_monotone),
    ];
    fields.extend(phase_fields(&r.phases));
    Table::record(&format!("find_{name}"), fields)
}

fn sweep_table(spec: &SweepSpec, rows: &[search::SweepRow]) -> Table {
    let blank = |n: usize| vec![Cell::Empty; n];
    let mut columns = vec![
        "index".to_owned(),
        spec.param().name().to_owned(),
        "status".to_owned(),
    ];
    let template = search::evaluate_point(
        &crate::presets::quantum(),
        propagation::VelocityModel::Matched,
    )
    .expect("preset evaluates");
    let chi_names: Vec<String> = susceptibility_fields(&template.susceptibilities)
        .into_iter()
        .map(|f| f.0)
        .collect();
    let phase_names: Vec<String> = phase_fields(&template.phases)
        .into_iter()
        .map(|f| f.0)
        .collect();
    columns.extend(chi_names.iter().cloned());
    columns.extend(phase_names.iter().cloned());
    columns.extend(["window", "universal", "witness", "message"].map(String::from));
    let mut table = Table::new("sweep", columns);
    for row in rows {
        let mut cells = vec![
            Cell::from(row.index),
            Cell::Num(row.value),
            Cell::from(row.status.name()),
        ];
        match &row.report {
            Some(r) => {
                cells.extend(
                    susceptibility_fields(&r.susceptibilities)
                        .into_iter()
                        .map(|f| f.1),
                );
                cells.extend(phase_fields(&r.phases).into_iter().map(|f| f.1));
                cells.push(r.window.into());
                cells.push(r.universality.universal.into());
                cells.push(r.universality.witness.into());
                cells.push(Cell::Empty);
            }
            None => {
                debug_assert_ne!(row.status, RowStatus::Ok);
                cells.extend(blank(chi_names.len() + phase_names.len() + 3));
                cells.push(row.message.clone().into());
            }
        }
        table.push(cells);
    }
    table
}

fn oracle_table(p: &model::TripodParams, settings: &ExtractionSettings) -> Result<Table> {
    let calibration = oracle::Calibration::at_reference(p, settings)?;
    let columns = [
        "check",
        "beam",
        "delta1",
        "analytic_re",
        "analytic_im",
        "extracted_re",
        "extracted_im",
        "rel_error",
    ];
    let mut table = Table::new("oracle_check", columns.map(String::from).to_vec());
    let mut push = |check: &str,
                    beam: Beam,
                    delta1: f64,
                    analytic: num_complex::Complex64,
                    extracted: num_complex::Complex64,
                    err: f64| {
        table.push(vec![
            check.into(),
            beam.to_string().into(),
            delta1.into(),
            analytic.re.into(),
            analytic.im.into(),
            extracted.re.into(),
            extracted.im.into(),
            err.into(),
        ]);
    };
    for beam in [Beam::Probe, Beam::Trigger] {
        let c = oracle::compare(p, beam, &calibration, settings)?;
        push(
            "chi1",
            beam,
            p.delta1,
            c.analytic_chi1,
            c.extracted.chi1_est,
            c.chi1_relative_error(),
        );
        push(
            "chi3",
            beam,
            p.delta1,
            c.analytic_chi3,
            c.extracted.chi3_est,
            c.chi3_relative_error(),
        );
    }
    if settings.scan_max > 0.0 {
        let deltas = SHAPE_OFFSETS.map(|d| p.delta1 + d);
        for beam in [Beam::Probe, Beam::Trigger] {
            for r in oracle::shape_ratios(p, beam, &deltas, settings)? {
                push(
                    "chi3_ratio",
                    beam,
                    r.delta1,
                    r.analytic,
                    r.extracted,
                    r.component_error(),
                );
            }
        }
    }
    Ok(table)
}
