//! `posecast`: command-line workflows for head-pose forecasting and
//! motion-to-photon latency measurement.
//!
//! Subcommands cover the full loop: `ingest` resamples raw traces onto
//! a uniform grid, `synth` generates seeded test traces, `train` fits
//! the shared AR model pair, `predict` runs a prediction schedule,
//! `sweep` scores prediction against the latency-lagged baseline over
//! a range of look-ahead times, `latency-model` prints a
//! motion-to-photon budget breakdown, and `probe-server` /
//! `probe-client` measure end-to-end latency over a socket.
//!
//! Configuration precedence: command-line flags override the JSON
//! config file given with `--config`, which overrides built-in
//! defaults. Every subcommand is deterministic for fixed inputs and
//! seeds; errors go to stderr with an `error:` prefix and exit code 1.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::{Deserialize, Serialize};

use posecast::ar::select_lag_aic;
use posecast::eval::{
    evaluate_trace_detailed, export_per_frame, export_report, sweep_lat, MaeReport, ReportFormat,
    DEFAULT_SWEEP_LATS_MS,
};
use posecast::latency::{
    builtin_profiles, EncoderProfile, EncoderSpec, LatencyConfig,
};
use posecast::predictor::{
    run_prediction_schedule, train_models, write_predictions_csv, ModelPair, PredictionConfig,
    DEFAULT_FRAME_INTERVAL_MS,
};
use posecast::probe::{probe_client, ClientConfig, DelayProfile, ProbeServer, ServerConfig};
use posecast::synth::{generate_trace, MotionKind};
use posecast::trace::{
    load_trace, resample, Channel, TraceFormat, UniformTrace, DEFAULT_SAMPLE_PERIOD_MS,
};

const DEFAULT_RHO: usize = 32;
const DEFAULT_DURATION_MS: f64 = 10_000.0;

#[derive(Parser)]
#[command(name = "posecast", version, about = "6DoF pose forecasting and latency measurement")]
struct Cli {
    /// JSON config file supplying defaults for the flags below.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Seed for synthetic generation [default: 0].
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Primary output path; ingest treats it as a directory.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resample raw pose CSVs onto a uniform sampling grid.
    Ingest(IngestArgs),
    /// Generate a seeded synthetic pose trace.
    Synth(SynthArgs),
    /// Fit the translational/rotational AR model pair on one trace.
    Train(TrainArgs),
    /// Run a prediction schedule over a trace.
    Predict(PredictArgs),
    /// Score prediction against the delayed baseline across look-ahead times.
    Sweep(SweepArgs),
    /// Print a motion-to-photon latency budget breakdown.
    LatencyModel(LatencyModelArgs),
    /// Serve frame tokens for latency probing (runs until killed).
    ProbeServer(ProbeServerArgs),
    /// Measure motion-to-photon latency against a probe server.
    ProbeClient(ProbeClientArgs),
}

/// How the input CSV's columns are recognised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Require the canonical `t_ms,x,y,z,qx,qy,qz,qw` header.
    Standard,
    /// Accept common column aliases and seconds-based timestamps.
    Auto,
}

impl From<FormatArg> for TraceFormat {
    fn from(value: FormatArg) -> TraceFormat {
        match value {
            FormatArg::Standard => TraceFormat::Standard,
            FormatArg::Auto => TraceFormat::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormatArg {
    Csv,
    Json,
}

impl From<ReportFormatArg> for ReportFormat {
    fn from(value: ReportFormatArg) -> ReportFormat {
        match value {
            ReportFormatArg::Csv => ReportFormat::Csv,
            ReportFormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Args)]
struct IngestArgs {
    /// Raw trace CSVs to resample.
    #[arg(required = true, value_name = "CSV")]
    inputs: Vec<PathBuf>,

    /// Uniform grid period in milliseconds [default: 5].
    #[arg(long, value_name = "MS")]
    period_ms: Option<f64>,

    /// Input column handling.
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// Fixed pose.
    Constant,
    /// Constant-velocity ramp with a steady roll-axis spin.
    Ramp,
    /// Sum-of-sinusoids sway.
    Sine,
    /// Stationary AR(2) wander in every channel.
    Ar,
}

#[derive(Args)]
struct SynthArgs {
    /// Motion family.
    #[arg(long, value_enum, default_value_t = KindArg::Sine)]
    kind: KindArg,

    /// Trace length in milliseconds [default: 10000].
    #[arg(long, value_name = "MS")]
    duration_ms: Option<f64>,

    /// Sampling period in milliseconds [default: 5].
    #[arg(long, value_name = "MS")]
    period_ms: Option<f64>,

    /// Ramp velocity as "vx,vy,vz" in m/s [default: 0.2,0,0].
    #[arg(long, value_name = "VX,VY,VZ")]
    vel: Option<String>,

    /// Ramp roll spin rate in degrees per second [default: 15].
    #[arg(long, value_name = "DPS")]
    roll_rate_dps: Option<f64>,

    /// Additive noise for the sine family (m on positions, deg on
    /// angles) [default: 0].
    #[arg(long, value_name = "SIGMA")]
    noise_sigma: Option<f64>,

    /// Positional wander scale for the ar family, meters [default: 0.05].
    #[arg(long, value_name = "M")]
    pos_amp_m: Option<f64>,

    /// Angular wander scale for the ar family, degrees [default: 2].
    #[arg(long, value_name = "DEG")]
    euler_amp_deg: Option<f64>,
}

#[derive(Args)]
struct TrainArgs {
    /// Training trace CSV.
    #[arg(long, value_name = "CSV")]
    trace: PathBuf,

    /// Lag order of the fitted models [default: 32].
    #[arg(long, value_name = "RHO", conflicts_with = "aic")]
    rho: Option<usize>,

    /// Select the lag order by AIC over 1..=RHO_MAX on the
    /// translational channel instead of fixing it.
    #[arg(long, value_name = "RHO_MAX")]
    aic: Option<usize>,

    /// Channel the translational model is fit on [default: x].
    #[arg(long, value_name = "CHANNEL")]
    trans_channel: Option<String>,

    /// Channel the rotational model is fit on [default: qx].
    #[arg(long, value_name = "CHANNEL")]
    rot_channel: Option<String>,

    /// Sampling grid period in milliseconds [default: 5].
    #[arg(long, value_name = "MS")]
    period_ms: Option<f64>,

    /// Input column handling.
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
}

#[derive(Args)]
struct PredictArgs {
    /// Trace CSV to predict over.
    #[arg(long, value_name = "CSV")]
    trace: PathBuf,

    /// Model-pair JSON produced by `train`.
    #[arg(long, value_name = "JSON")]
    models: PathBuf,

    /// Look-ahead time (assumed motion-to-photon latency) in ms [default: 20].
    #[arg(long, value_name = "MS")]
    lat_ms: Option<f64>,

    /// Frame clock interval in ms [default: 10].
    #[arg(long, value_name = "MS")]
    frame_interval_ms: Option<f64>,

    /// Sampling grid period in milliseconds [default: 5].
    #[arg(long, value_name = "MS")]
    period_ms: Option<f64>,

    /// Input column handling.
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
}

#[derive(Args)]
struct SweepArgs {
    /// Evaluation trace CSVs.
    #[arg(required = true, value_name = "CSV")]
    traces: Vec<PathBuf>,

    /// Model-pair JSON produced by `train`.
    #[arg(long, value_name = "JSON")]
    models: PathBuf,

    /// Comma-separated look-ahead times in ms [default: 20,40,60,80,100].
    #[arg(long, value_name = "MS,..")]
    lats: Option<String>,

    /// Frame clock interval in ms [default: 10].
    #[arg(long, value_name = "MS")]
    frame_interval_ms: Option<f64>,

    /// Sampling grid period in milliseconds [default: 5].
    #[arg(long, value_name = "MS")]
    period_ms: Option<f64>,

    /// Also write every evaluated target pose to this CSV.
    #[arg(long, value_name = "PATH")]
    per_frame: Option<PathBuf>,

    /// Report format [default: from the --out extension, else csv].
    #[arg(long, value_enum)]
    report_format: Option<ReportFormatArg>,

    /// Input column handling.
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
}

#[derive(Args)]
struct LatencyModelArgs {
    /// Built-in encoder profile name (see --list-encoders).
    #[arg(long, value_name = "NAME", conflicts_with = "encoder_fps")]
    encoder: Option<String>,

    /// Custom encoder throughput in frames per second.
    #[arg(long, value_name = "FPS")]
    encoder_fps: Option<f64>,

    /// Display refresh rate in Hz; fills the display wait term.
    #[arg(long, value_name = "HZ")]
    refresh_hz: Option<f64>,

    /// Display wait model: average (half interval) or worst (full).
    #[arg(long, value_name = "MODE")]
    mode: Option<String>,

    /// Server rendering time, ms.
    #[arg(long, value_name = "MS")]
    t_rend_ms: Option<f64>,

    /// Encode time, ms (overridden by --encoder/--encoder-fps).
    #[arg(long, value_name = "MS")]
    t_enc_ms: Option<f64>,

    /// Uplink time, ms.
    #[arg(long, value_name = "MS")]
    t_up_ms: Option<f64>,

    /// Downlink time, ms.
    #[arg(long, value_name = "MS")]
    t_down_ms: Option<f64>,

    /// Network transmission time, ms.
    #[arg(long, value_name = "MS")]
    t_trans_ms: Option<f64>,

    /// Decode time, ms.
    #[arg(long, value_name = "MS")]
    t_dec_ms: Option<f64>,

    /// Display wait, ms (overridden by --refresh-hz).
    #[arg(long, value_name = "MS")]
    t_disp_ms: Option<f64>,

    /// List built-in encoder profiles and exit.
    #[arg(long)]
    list_encoders: bool,
}

#[derive(Args)]
struct ProbeServerArgs {
    /// Address to bind; port 0 picks an ephemeral one.
    #[arg(long, value_name = "ADDR", default_value = "127.0.0.1:0")]
    listen: String,

    /// Frame token emission rate [default: 60].
    #[arg(long, value_name = "FPS")]
    fps: Option<f64>,

    /// Injected uplink delay before a control message is applied, ms [default: 0].
    #[arg(long, value_name = "MS")]
    up_delay_ms: Option<f64>,

    /// Injected server processing delay, ms [default: 0].
    #[arg(long, value_name = "MS")]
    proc_delay_ms: Option<f64>,

    /// Injected downlink delay before a token is sent, ms [default: 0].
    #[arg(long, value_name = "MS")]
    down_delay_ms: Option<f64>,
}

#[derive(Args)]
struct ProbeClientArgs {
    /// Probe server address, e.g. 127.0.0.1:7400.
    #[arg(long, value_name = "ADDR")]
    connect: String,

    /// Number of measurements [default: 100].
    #[arg(long, value_name = "COUNT")]
    n: Option<usize>,

    /// Repaint tick rate in Hz [default: 60].
    #[arg(long, value_name = "HZ")]
    repaint_hz: Option<f64>,

    /// Idle gap between measurements, ms [default: 20].
    #[arg(long, value_name = "MS")]
    gap_ms: Option<f64>,

    /// Per-measurement timeout, ms [default: 5000].
    #[arg(long, value_name = "MS")]
    timeout_ms: Option<f64>,
}

/// Defaults read from `--config`; flags take precedence over every
/// field here.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    period_ms: Option<f64>,
    rho: Option<usize>,
    lat_ms: Option<f64>,
    frame_interval_ms: Option<f64>,
    lats_ms: Option<Vec<f64>>,
    trans_channel: Option<String>,
    rot_channel: Option<String>,
    latency: Option<LatencyConfig>,
    probe: Option<ProbeSection>,
}

/// Probe defaults shared by `probe-server` and `probe-client`.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ProbeSection {
    fps: Option<f64>,
    up_delay_ms: Option<f64>,
    proc_delay_ms: Option<f64>,
    down_delay_ms: Option<f64>,
    n_measurements: Option<usize>,
    repaint_hz: Option<f64>,
    gap_ms: Option<f64>,
    timeout_ms: Option<f64>,
}

/// Flag > config file > built-in default.
fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn parse_channel(flag: &Option<String>, file: &Option<String>, default: Channel) -> Result<Channel> {
    match flag.as_deref().or(file.as_deref()) {
        Some(name) => Ok(name.parse()?),
        None => Ok(default),
    }
}

fn parse_lats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid look-ahead time {:?}", part.trim()))
        })
        .collect()
}

fn parse_triple(text: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("expected three comma-separated numbers, got {text:?}");
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part.parse().with_context(|| format!("invalid number {part:?}"))?;
    }
    Ok(out)
}

fn load_uniform(path: &Path, format: FormatArg, period_ms: f64) -> Result<UniformTrace> {
    let raw = load_trace(path, format.into())
        .with_context(|| format!("loading {}", path.display()))?;
    let trace = resample(&raw, period_ms)
        .with_context(|| format!("resampling {}", path.display()))?;
    Ok(trace)
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str::<FileConfig>(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Ingest(args) => cmd_ingest(&cli, &file, args),
        Command::Synth(args) => cmd_synth(&cli, &file, args),
        Command::Train(args) => cmd_train(&cli, &file, args),
        Command::Predict(args) => cmd_predict(&cli, &file, args),
        Command::Sweep(args) => cmd_sweep(&cli, &file, args),
        Command::LatencyModel(args) => cmd_latency_model(&cli, &file, args),
        Command::ProbeServer(args) => cmd_probe_server(&file, args),
        Command::ProbeClient(args) => cmd_probe_client(&cli, &file, args),
    }
}

fn cmd_ingest(cli: &Cli, file: &FileConfig, args: &IngestArgs) -> Result<()> {
    let period = pick(args.period_ms, file.period_ms, DEFAULT_SAMPLE_PERIOD_MS);
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for input in &args.inputs {
        let trace = load_uniform(input, args.format, period)?;
        let stem = input
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| anyhow!("cannot derive an output name from {}", input.display()))?;
        let name = format!("{stem}_uniform.csv");
        let out = match &cli.out {
            Some(dir) => dir.join(&name),
            None => input.with_file_name(&name),
        };
        trace.write_csv(&out)?;
        println!("wrote {} ({} samples at {} ms)", out.display(), trace.len(), period);
    }
    Ok(())
}

fn cmd_synth(cli: &Cli, file: &FileConfig, args: &SynthArgs) -> Result<()> {
    let seed = pick(cli.seed, file.seed, 0);
    let period = pick(args.period_ms, file.period_ms, DEFAULT_SAMPLE_PERIOD_MS);
    let duration = args.duration_ms.unwrap_or(DEFAULT_DURATION_MS);
    let kind = match args.kind {
        KindArg::Constant => MotionKind::Constant,
        KindArg::Ramp => MotionKind::Ramp {
            velocity_mps: match &args.vel {
                Some(text) => parse_triple(text)?,
                None => [0.2, 0.0, 0.0],
            },
            roll_rate_dps: args.roll_rate_dps.unwrap_or(15.0),
        },
        KindArg::Sine => match MotionKind::default_sine() {
            MotionKind::Sine { pos_amp_m, pos_freq_hz, euler_amp_deg, euler_freq_hz, .. } => {
                MotionKind::Sine {
                    pos_amp_m,
                    pos_freq_hz,
                    euler_amp_deg,
                    euler_freq_hz,
                    noise_sigma: args.noise_sigma.unwrap_or(0.0),
                }
            }
            other => other,
        },
        KindArg::Ar => MotionKind::ArWander {
            pos_amp_m: args.pos_amp_m.unwrap_or(0.05),
            euler_amp_deg: args.euler_amp_deg.unwrap_or(2.0),
        },
    };
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("trace.csv"));
    let source_id = out.file_stem().and_then(|s| s.to_str()).unwrap_or("synthetic").to_string();
    let trace = generate_trace(&kind, duration, period, seed, &source_id)?;
    trace.write_csv(&out)?;
    println!("wrote {} ({} samples at {} ms, seed {})", out.display(), trace.len(), period, seed);
    Ok(())
}

fn cmd_train(cli: &Cli, file: &FileConfig, args: &TrainArgs) -> Result<()> {
    let period = pick(args.period_ms, file.period_ms, DEFAULT_SAMPLE_PERIOD_MS);
    let trace = load_uniform(&args.trace, args.format, period)?;
    let trans = parse_channel(&args.trans_channel, &file.trans_channel, Channel::X)?;
    let rot = parse_channel(&args.rot_channel, &file.rot_channel, Channel::Qx)?;
    let rho = match args.aic {
        Some(rho_max) => {
            let selected = select_lag_aic(&trace.channel(trans), rho_max)?;
            info!("AIC over 1..={rho_max} on {} selected lag order {selected}", trans.as_str());
            selected
        }
        None => pick(args.rho, file.rho, DEFAULT_RHO),
    };
    let config = PredictionConfig {
        history_window_ms: rho as f64 * period,
        sample_period_ms: period,
        ..PredictionConfig::default()
    };
    let models = train_models(&trace, &config, trans, rot)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("models.json"));
    models.save_json(&out)?;
    println!(
        "wrote {} (rho {}, {} sigma2 {:.3e}, {} sigma2 {:.3e})",
        out.display(),
        models.rho(),
        models.trans.trained_on,
        models.trans.sigma2,
        models.rot.trained_on,
        models.rot.sigma2
    );
    Ok(())
}

fn cmd_predict(cli: &Cli, file: &FileConfig, args: &PredictArgs) -> Result<()> {
    let period = pick(args.period_ms, file.period_ms, DEFAULT_SAMPLE_PERIOD_MS);
    let models = ModelPair::load_json(&args.models)?;
    let trace = load_uniform(&args.trace, args.format, period)?;
    let config = PredictionConfig {
        history_window_ms: models.rho() as f64 * period,
        lat_ms: pick(args.lat_ms, file.lat_ms, 20.0),
        frame_interval_ms: pick(args.frame_interval_ms, file.frame_interval_ms, DEFAULT_FRAME_INTERVAL_MS),
        sample_period_ms: period,
    };
    let predictions = run_prediction_schedule(&models, &trace, &config)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("predictions.csv"));
    write_predictions_csv(&predictions, &out)?;
    println!(
        "wrote {} ({} predictions, look-ahead {} ms)",
        out.display(),
        predictions.len(),
        config.lat_ms
    );
    Ok(())
}

fn cmd_sweep(cli: &Cli, file: &FileConfig, args: &SweepArgs) -> Result<()> {
    let period = pick(args.period_ms, file.period_ms, DEFAULT_SAMPLE_PERIOD_MS);
    let models = ModelPair::load_json(&args.models)?;
    let lats = match &args.lats {
        Some(text) => parse_lats(text)?,
        None => file.lats_ms.clone().unwrap_or_else(|| DEFAULT_SWEEP_LATS_MS.to_vec()),
    };
    let traces: Vec<UniformTrace> = args
        .traces
        .iter()
        .map(|path| load_uniform(path, args.format, period))
        .collect::<Result<_>>()?;
    let base = PredictionConfig {
        history_window_ms: models.rho() as f64 * period,
        lat_ms: lats[0],
        frame_interval_ms: pick(args.frame_interval_ms, file.frame_interval_ms, DEFAULT_FRAME_INTERVAL_MS),
        sample_period_ms: period,
    };
    let result = sweep_lat(&models, &traces, &base, &lats)?;
    for avg in &result.averages {
        println!(
            "lat {:>5.1} ms  prediction x {:.4} m, geo {:.3} deg | baseline x {:.4} m, geo {:.3} deg",
            avg.lat_ms,
            avg.prediction.x,
            avg.prediction.geodesic_deg,
            avg.baseline.x,
            avg.baseline.geodesic_deg
        );
    }

    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("report.csv"));
    let format = match args.report_format {
        Some(f) => f.into(),
        None if out.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => {
            ReportFormat::Json
        }
        None => ReportFormat::Csv,
    };
    let mut reports: Vec<MaeReport> = result.reports.clone();
    reports.extend(result.averages.clone());
    export_report(&reports, &out, format)?;
    println!("wrote {}", out.display());

    if let Some(per_frame) = &args.per_frame {
        let mut groups = Vec::with_capacity(lats.len() * traces.len());
        for lat in &lats {
            let config = base.with_lat(*lat);
            for trace in &traces {
                let (_, records) = evaluate_trace_detailed(&models, trace, &config)?;
                groups.push((trace.source_id().to_string(), *lat, records));
            }
        }
        export_per_frame(&groups, per_frame)?;
        println!("wrote {}", per_frame.display());
    }
    Ok(())
}

/// Budget plus the stage subtotals, printed as JSON.
#[derive(Serialize)]
struct BudgetBreakdown {
    budget: posecast::latency::LatencyBudget,
    server_ms: f64,
    network_ms: f64,
    client_ms: f64,
    total_m2p_ms: f64,
}

fn cmd_latency_model(cli: &Cli, file: &FileConfig, args: &LatencyModelArgs) -> Result<()> {
    if args.list_encoders {
        for p in builtin_profiles() {
            println!("{:<22} {:>7.1} fps  ({:.3} ms/frame)", p.name, p.mean_fps, 1000.0 / p.mean_fps);
        }
        return Ok(());
    }
    let mut config = file.latency.clone().unwrap_or_default();
    let overrides = [
        (args.t_rend_ms, &mut config.budget.t_rend_ms),
        (args.t_enc_ms, &mut config.budget.t_enc_ms),
        (args.t_up_ms, &mut config.budget.t_up_ms),
        (args.t_down_ms, &mut config.budget.t_down_ms),
        (args.t_trans_ms, &mut config.budget.t_trans_ms),
        (args.t_dec_ms, &mut config.budget.t_dec_ms),
        (args.t_disp_ms, &mut config.budget.t_disp_ms),
    ];
    for (flag, slot) in overrides {
        if let Some(value) = flag {
            *slot = value;
        }
    }
    if let Some(name) = &args.encoder {
        config.encoder = Some(EncoderSpec::Name(name.clone()));
    }
    if let Some(fps) = args.encoder_fps {
        config.encoder = Some(EncoderSpec::Profile(EncoderProfile::new("custom", fps)));
    }
    if let Some(hz) = args.refresh_hz {
        config.refresh_hz = Some(hz);
    }
    if let Some(mode) = &args.mode {
        config.display_mode = mode.parse().map_err(|e: String| anyhow!(e))?;
    }
    let budget = config.resolve()?;
    budget.validate()?;
    let breakdown = BudgetBreakdown {
        server_ms: budget.server_ms(),
        network_ms: budget.network_ms(),
        client_ms: budget.client_ms(),
        total_m2p_ms: budget.total_m2p_ms(),
        budget,
    };
    let text = serde_json::to_string_pretty(&breakdown)?;
    println!("{text}");
    if let Some(out) = &cli.out {
        fs::write(out, format!("{text}\n")).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn cmd_probe_server(file: &FileConfig, args: &ProbeServerArgs) -> Result<()> {
    let probe = file.probe.as_ref();
    let config = ServerConfig {
        fps: pick(args.fps, probe.and_then(|p| p.fps), 60.0),
        delays: DelayProfile {
            up_ms: pick(args.up_delay_ms, probe.and_then(|p| p.up_delay_ms), 0.0),
            proc_ms: pick(args.proc_delay_ms, probe.and_then(|p| p.proc_delay_ms), 0.0),
            down_ms: pick(args.down_delay_ms, probe.and_then(|p| p.down_delay_ms), 0.0),
        },
    };
    let server = ProbeServer::spawn(&args.listen, config)?;
    println!(
        "probe server listening on {} ({} fps, delays up {} ms, proc {} ms, down {} ms)",
        server.local_addr(),
        config.fps,
        config.delays.up_ms,
        config.delays.proc_ms,
        config.delays.down_ms
    );
    // Tests and scripts read the line above from a pipe; make sure it
    // is not stuck in the stdout buffer while we block below.
    std::io::stdout().flush().ok();
    loop {
        thread::sleep(Duration::from_secs(3600));
    }
}

fn cmd_probe_client(cli: &Cli, file: &FileConfig, args: &ProbeClientArgs) -> Result<()> {
    let probe = file.probe.as_ref();
    let defaults = ClientConfig::default();
    let config = ClientConfig {
        n_measurements: pick(args.n, probe.and_then(|p| p.n_measurements), defaults.n_measurements),
        repaint_hz: pick(args.repaint_hz, probe.and_then(|p| p.repaint_hz), defaults.repaint_hz),
        gap_ms: pick(args.gap_ms, probe.and_then(|p| p.gap_ms), defaults.gap_ms),
        timeout_ms: pick(args.timeout_ms, probe.and_then(|p| p.timeout_ms), defaults.timeout_ms),
    };
    let report = probe_client(&args.connect, &config)?;
    let text = serde_json::to_string_pretty(&report)?;
    println!("{text}");
    if let Some(out) = &cli.out {
        fs::write(out, format!("{text}\n")).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}
