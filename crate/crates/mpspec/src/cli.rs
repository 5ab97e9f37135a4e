//! Command-line surface: `simulate`, `sweep`, `acmh`, `circuit`, `report`.
//!
//! Config files are JSON with unit-suffixed scalars (`"250 Oe"`, `"620 Hz"`).
//! On failure the binary prints a machine-readable error object to stderr
//! and exits nonzero.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::analysis;
use crate::catalog::Catalog;
use crate::circuit::{self, CoilSpec, DriveSpec};
use crate::dynamics::{simulate_magnetization, SolverOptions};
use crate::error::{Error, Result};
use crate::excitation::{build_waveform, ExcitationConfig, FieldSeries, Tone, DEFAULT_N_RECORDS};
use crate::orchestrator::{
    self, export_csv, import_csv, protocol_catalog, render_plots, run_sweep, trend_report,
    GridPoint, SweepPlan,
};
use crate::physics::BindingState;
use crate::readout::{induced_voltage, spectrum, PickupSpec, Window};
use crate::units::{Dimension, Quantity};

#[derive(Debug, Parser)]
#[command(
    name = "mpspec",
    about = "Virtual magnetic particle spectroscopy workbench",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one excitation config and write the harmonic spectrum as CSV.
    Simulate(SimulateArgs),
    /// Run a sweep protocol (SF-FREQ, DF-FREQ, SF-AMP, DF-AMP) or a plan file.
    Sweep(SweepArgs),
    /// Reconstruct the AC M-H loop and its metrics for one config.
    Acmh(AcmhArgs),
    /// AC analysis of a resonant drive circuit.
    Circuit(CircuitArgs),
    /// Trend report from a sweep result CSV.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Simulation config JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Spectrum CSV destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Catalog override (else $MPSPEC_CATALOG, else built-in).
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Protocol name or path to a sweep plan JSON.
    pub protocol: String,
    /// Result CSV destination.
    #[arg(long)]
    pub out: PathBuf,
    /// Directory for SVG charts (skipped when omitted).
    #[arg(long)]
    pub plots: Option<PathBuf>,
    /// Trend report JSON destination (skipped when omitted).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Catalog override.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Substeps per fastest timescale.
    #[arg(long)]
    pub step_divisor: Option<u32>,
    /// Warm-up records discarded before analysis.
    #[arg(long)]
    pub warmup: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AcmhArgs {
    /// Simulation config JSON (its binding is used unless --binding is set).
    #[arg(long)]
    pub config: PathBuf,
    /// unbound, bound, or both (paired normalization).
    #[arg(long)]
    pub binding: Option<String>,
    /// Loop CSV destination; with --binding both, `_unbound`/`_bound` are
    /// appended to the file stem.
    #[arg(long)]
    pub loop_out: PathBuf,
    /// Metrics JSON destination (stdout when omitted).
    #[arg(long)]
    pub metrics_out: Option<PathBuf>,
    /// Catalog override.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    /// Named coil: primary or secondary.
    #[arg(long, conflicts_with_all = ["resistance", "inductance", "parasitic"])]
    pub coil: Option<String>,
    /// Coil resistance, e.g. "7.923 Ohm".
    #[arg(long)]
    pub resistance: Option<String>,
    /// Coil inductance, e.g. "14.94 mH".
    #[arg(long)]
    pub inductance: Option<String>,
    /// Parasitic capacitance, e.g. "1.36 nF" (default 0).
    #[arg(long)]
    pub parasitic: Option<String>,
    /// Series resonant capacitor, e.g. "200 nF".
    #[arg(long)]
    pub cr: Option<String>,
    /// Source voltage amplitude, e.g. "12 V".
    #[arg(long, default_value = "12 V")]
    pub voltage: String,
    /// Sweep start frequency, e.g. "100 Hz".
    #[arg(long, default_value = "100 Hz")]
    pub f_start: String,
    /// Sweep stop frequency, e.g. "100 kHz".
    #[arg(long, default_value = "100 kHz")]
    pub f_stop: String,
    /// Number of logarithmically spaced sweep points.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Capacitor design target frequency, e.g. "620 Hz" (optional).
    #[arg(long)]
    pub design_for: Option<String>,
    /// Current sweep CSV destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Resonance summary JSON destination (stdout when omitted).
    #[arg(long)]
    pub summary_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Sweep result CSV produced by `mpspec sweep`.
    #[arg(long)]
    pub input: PathBuf,
    /// Report JSON destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Catalog override (for per-micromole normalization).
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

/// One tone in a config file.
#[derive(Debug, Deserialize)]
struct ToneConfig {
    frequency: Quantity,
    amplitude: Quantity,
    #[serde(default)]
    phase: Option<f64>,
}

impl ToneConfig {
    fn to_tone(&self) -> Result<Tone> {
        Ok(Tone {
            frequency: self.frequency.to_si(Dimension::Frequency)?,
            amplitude: self.amplitude.to_si(Dimension::MagneticField)?,
            phase: self.phase.unwrap_or(0.0),
        })
    }
}

/// Simulation config file for `simulate` and `acmh`.
#[derive(Debug, Deserialize)]
struct SimulateConfig {
    particle: String,
    binding: BindingState,
    tones: Vec<ToneConfig>,
    #[serde(default)]
    sample_rate: Option<Quantity>,
    #[serde(default)]
    n_records: Option<usize>,
    #[serde(default)]
    solver: Option<SolverOptions>,
    #[serde(default)]
    pickup: Option<PickupSpec>,
}

/// Sweep plan file for `sweep <path>`.
#[derive(Debug, Deserialize)]
struct PlanConfig {
    name: String,
    particles: Vec<String>,
    grid: Vec<GridPointConfig>,
    #[serde(default)]
    harmonics: Option<[u32; 2]>,
}

#[derive(Debug, Deserialize)]
struct GridPointConfig {
    tones: Vec<ToneConfig>,
    #[serde(default)]
    sample_rate: Option<Quantity>,
    #[serde(default)]
    n_records: Option<usize>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::IoFailure {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|source| Error::IoFailure {
            path: p.display().to_string(),
            source,
        }),
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|source| Error::IoFailure {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn excitation_from(tones: Vec<Tone>, rate: Option<f64>, n_records: usize) -> Result<ExcitationConfig> {
    let rate = match rate {
        Some(r) => r,
        None => ExcitationConfig::commensurate_rate(&tones, orchestrator::DEFAULT_SAMPLE_RATE)?,
    };
    ExcitationConfig::new(tones, rate, n_records)
}

struct PipelineRun {
    field: FieldSeries,
    voltage: crate::readout::VoltageSeries,
}

fn run_pipeline(
    catalog: &Catalog,
    sim: &SimulateConfig,
    binding: BindingState,
) -> Result<PipelineRun> {
    let model = catalog.particle(&sim.particle)?;
    let tones = sim
        .tones
        .iter()
        .map(ToneConfig::to_tone)
        .collect::<Result<Vec<_>>>()?;
    let rate = sim
        .sample_rate
        .as_ref()
        .map(|q| q.to_si(Dimension::Frequency))
        .transpose()?;
    let config = excitation_from(tones, rate, sim.n_records.unwrap_or(DEFAULT_N_RECORDS))?;
    let opts = sim.solver.unwrap_or_default();
    let pickup = sim.pickup.unwrap_or_default();
    let field = build_waveform(&config)?;
    let mag = simulate_magnetization(model, &catalog.environment, binding, &field, &opts)?;
    let voltage = induced_voltage(&mag.last_records(1), &pickup)?;
    Ok(PipelineRun { field, voltage })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let catalog = Catalog::resolve(args.catalog.as_deref())?;
    let sim: SimulateConfig = read_json(&args.config)?;
    let run = run_pipeline(&catalog, &sim, sim.binding)?;
    let spec = spectrum(&run.voltage, Window::Rectangular)?;
    write_output(args.out.as_deref(), &spec.to_csv())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let catalog = Catalog::resolve(args.catalog.as_deref())?;
    let plan = load_plan(&args.protocol)?;
    let mut opts = SolverOptions::default();
    if let Some(d) = args.step_divisor {
        opts.step_divisor = d;
    }
    if let Some(w) = args.warmup {
        opts.warmup_records = w;
    }
    let result = run_sweep(&plan, &catalog, &opts)?;
    export_csv(&result, &args.out)?;

    if let Some(dir) = &args.plots {
        std::fs::create_dir_all(dir).map_err(|source| Error::IoFailure {
            path: dir.display().to_string(),
            source,
        })?;
        let set = render_plots(&result);
        for doc in &set.documents {
            let path = dir.join(&doc.name);
            std::fs::write(&path, &doc.svg).map_err(|source| Error::IoFailure {
                path: path.display().to_string(),
                source,
            })?;
        }
        for warning in &set.warnings {
            eprintln!("warning: {warning}");
        }
    }
    if let Some(report_path) = &args.report {
        let report = trend_report(&result, &catalog);
        write_output(Some(report_path), &report.to_json())?;
    }
    Ok(())
}

fn load_plan(protocol: &str) -> Result<SweepPlan> {
    match protocol_catalog(protocol) {
        Ok(plan) => Ok(plan),
        Err(Error::UnknownProtocol { .. }) if Path::new(protocol).exists() => {
            let raw: PlanConfig = read_json(Path::new(protocol))?;
            let mut grid = Vec::with_capacity(raw.grid.len());
            for point in &raw.grid {
                let tones = point
                    .tones
                    .iter()
                    .map(ToneConfig::to_tone)
                    .collect::<Result<Vec<_>>>()?;
                let rate = point
                    .sample_rate
                    .as_ref()
                    .map(|q| q.to_si(Dimension::Frequency))
                    .transpose()?;
                let config =
                    excitation_from(tones, rate, point.n_records.unwrap_or(DEFAULT_N_RECORDS))?;
                grid.push(GridPoint::from_config(config)?);
            }
            let plan = SweepPlan {
                name: raw.name,
                particles: raw.particles,
                grid,
                harmonics: raw.harmonics.unwrap_or([3, 5]),
            };
            plan.validate()?;
            Ok(plan)
        }
        Err(e) => Err(e),
    }
}

fn cmd_acmh(args: &AcmhArgs) -> Result<()> {
    let catalog = Catalog::resolve(args.catalog.as_deref())?;
    let sim: SimulateConfig = read_json(&args.config)?;
    let selection = match args.binding.as_deref() {
        None => vec![sim.binding],
        Some("both") => vec![BindingState::Unbound, BindingState::Bound],
        Some(other) => vec![other.parse::<BindingState>()?],
    };

    let mut metrics = serde_json::Map::new();
    if selection.len() == 2 {
        let unbound = run_pipeline(&catalog, &sim, BindingState::Unbound)?;
        let bound = run_pipeline(&catalog, &sim, BindingState::Bound)?;
        let field_tail = unbound.field.last_records(1);
        let (loop_u, loop_b) =
            analysis::reconstruct_ac_mh_paired(&field_tail, &unbound.voltage, &bound.voltage)?;
        for (binding, mh_loop) in [(BindingState::Unbound, &loop_u), (BindingState::Bound, &loop_b)] {
            let path = suffixed_path(&args.loop_out, binding.label());
            std::fs::write(&path, mh_loop.to_csv()).map_err(|source| Error::IoFailure {
                path: path.display().to_string(),
                source,
            })?;
            let m = analysis::loop_metrics(mh_loop)?;
            metrics.insert(
                binding.label().to_string(),
                serde_json::from_str(&m.to_json()).expect("metrics json"),
            );
        }
    } else {
        let binding = selection[0];
        let run = run_pipeline(&catalog, &sim, binding)?;
        let field_tail = run.field.last_records(1);
        let mh_loop = analysis::reconstruct_ac_mh(&field_tail, &run.voltage.last_records(1))?;
        std::fs::write(&args.loop_out, mh_loop.to_csv()).map_err(|source| Error::IoFailure {
            path: args.loop_out.display().to_string(),
            source,
        })?;
        let m = analysis::loop_metrics(&mh_loop)?;
        metrics.insert(
            binding.label().to_string(),
            serde_json::from_str(&m.to_json()).expect("metrics json"),
        );
    }
    write_output(
        args.metrics_out.as_deref(),
        &serde_json::to_string_pretty(&serde_json::Value::Object(metrics)).expect("json"),
    )
}

fn suffixed_path(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("loop");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

fn cmd_circuit(args: &CircuitArgs) -> Result<()> {
    let coil = match &args.coil {
        Some(name) => CoilSpec::by_name(name)?,
        None => {
            let resistance = args.resistance.as_deref().ok_or_else(|| {
                Error::InvalidInput("need --coil or explicit --resistance/--inductance".into())
            })?;
            let inductance = args.inductance.as_deref().ok_or_else(|| {
                Error::InvalidInput("need --inductance with --resistance".into())
            })?;
            CoilSpec {
                resistance: crate::units::parse_si(resistance, Dimension::Resistance)?,
                inductance: crate::units::parse_si(inductance, Dimension::Inductance)?,
                parasitic_capacitance: match &args.parasitic {
                    Some(p) => crate::units::parse_si(p, Dimension::Capacitance)?,
                    None => 0.0,
                },
            }
        }
    };
    coil.validate()?;
    let drive = DriveSpec {
        source_voltage: crate::units::parse_si(&args.voltage, Dimension::Voltage)?,
        resonant_capacitor: args
            .cr
            .as_deref()
            .map(|c| crate::units::parse_si(c, Dimension::Capacitance))
            .transpose()?,
    };
    drive.validate()?;

    let f_start = crate::units::parse_si(&args.f_start, Dimension::Frequency)?;
    let f_stop = crate::units::parse_si(&args.f_stop, Dimension::Frequency)?;
    if !(f_start > 0.0 && f_stop > f_start && args.points >= 2) {
        return Err(Error::InvalidInput(
            "need 0 < f_start < f_stop and at least 2 points".into(),
        ));
    }
    let ratio = (f_stop / f_start).powf(1.0 / (args.points - 1) as f64);
    let grid: Vec<f64> = (0..args.points)
        .map(|i| f_start * ratio.powi(i as i32))
        .collect();
    let sweep = circuit::current_magnitude_sweep(&coil, &drive, &grid);

    let mut csv = String::from("f_hz,i_amp\n");
    for (f, i) in &sweep {
        csv.push_str(&format!("{f:e},{i:e}\n"));
    }
    write_output(args.out.as_deref(), &csv)?;

    let resonance = match drive.resonant_capacitor {
        Some(_) => Some(circuit::resonant_frequency(&coil, &drive)?),
        None => None,
    };
    let designed = args
        .design_for
        .as_deref()
        .map(|f| -> Result<serde_json::Value> {
            let target = crate::units::parse_si(f, Dimension::Frequency)?;
            Ok(serde_json::json!({
                "target_hz": target,
                "capacitance_f": circuit::design_resonant_capacitor(&coil, target)?,
            }))
        })
        .transpose()?;
    let summary = serde_json::json!({
        "coil": coil,
        "drive": drive,
        "resonance": resonance,
        "designed_capacitor": designed,
    });
    write_output(
        args.summary_out.as_deref(),
        &serde_json::to_string_pretty(&summary).expect("json"),
    )
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    let catalog = Catalog::resolve(args.catalog.as_deref())?;
    let content = std::fs::read_to_string(&args.input).map_err(|source| Error::IoFailure {
        path: args.input.display().to_string(),
        source,
    })?;
    let result = import_csv(&content)?;
    let report = trend_report(&result, &catalog);
    write_output(args.out.as_deref(), &report.to_json())
}

/// Runs a parsed command.
pub fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Acmh(args) => cmd_acmh(args),
        Command::Circuit(args) => cmd_circuit(args),
        Command::Report(args) => cmd_report(args),
    }
}

/// Machine-readable error object for the CLI.
pub fn error_json(err: &Error) -> String {
    serde_json::json!({
        "error": {
            "kind": err.kind(),
            "message": err.to_string(),
        }
    })
    .to_string()
}
