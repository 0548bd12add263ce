//! Prediction quality versus the latency-lagged baseline.
//!
//! The baseline models a client that does no prediction at all: after
//! waiting T_LAT milliseconds for a remotely rendered frame it shows
//! the pose sampled at send time, so at target time `t` the displayed
//! pose is the ground truth from `t - lat`. A forecaster is only worth
//! deploying where it beats that lag.
//!
//! Errors are scored per component in the Euler-angle domain (yaw,
//! pitch, roll in degrees, differences wrapped to (-180, 180]) and in
//! meters for x, y, z. Both methods are always evaluated at identical
//! target timestamps, so their MAEs are directly comparable. The
//! geodesic rotation angle between predicted and true orientation is
//! carried as a secondary whole-rotation metric alongside the per-axis
//! breakdown.

use std::fs::File;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::predictor::{run_prediction_schedule, ModelPair, PredictError, PredictionConfig};
use crate::quat::{self, wrap_degrees, QuatError};
use crate::trace::{PoseSample, UniformTrace};

/// Latency sweep used when nothing else is configured, in ms.
pub const DEFAULT_SWEEP_LATS_MS: [f64; 5] = [20.0, 40.0, 60.0, 80.0, 100.0];

/// Trace id carried by per-latency averages in sweep results.
pub const AVERAGE_TRACE_ID: &str = "average";

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Predict(#[from] PredictError),
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(
        "trace {id:?} yields no prediction whose target lies inside the trace (needs {needed} samples, has {got})"
    )]
    NoEvaluableTargets { id: String, needed: usize, got: usize },
    #[error("no reports to export")]
    EmptyReports,
    #[error("no latencies given")]
    EmptyLats,
    #[error("no traces given")]
    EmptyTraces,
    #[error("failed to write {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to serialize report")]
    Json(#[from] serde_json::Error),
}

/// Pose components scored individually.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    X,
    Y,
    Z,
    Yaw,
    Pitch,
    Roll,
}

impl Component {
    pub const ALL: [Component; 6] = [
        Component::X,
        Component::Y,
        Component::Z,
        Component::Yaw,
        Component::Pitch,
        Component::Roll,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Component::X => "x",
            Component::Y => "y",
            Component::Z => "z",
            Component::Yaw => "yaw",
            Component::Pitch => "pitch",
            Component::Roll => "roll",
        }
    }
}

/// Mean absolute error per component for one method. Positions in
/// meters, angles in degrees. `geodesic_deg` is the mean geodesic
/// rotation angle, the rotation error as a single number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentMae {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
    pub geodesic_deg: f64,
}

impl ComponentMae {
    pub fn component(&self, c: Component) -> f64 {
        match c {
            Component::X => self.x,
            Component::Y => self.y,
            Component::Z => self.z,
            Component::Yaw => self.yaw,
            Component::Pitch => self.pitch,
            Component::Roll => self.roll,
        }
    }
}

/// MAE of prediction and baseline over one trace at one latency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaeReport {
    pub trace_id: String,
    pub lat_ms: f64,
    /// Number of evaluated target poses.
    pub n: usize,
    pub prediction: ComponentMae,
    pub baseline: ComponentMae,
}

/// One evaluated target pose with all three poses side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRecord {
    pub t_target_ms: f64,
    pub truth: PoseSample,
    pub predicted: PoseSample,
    pub baseline: PoseSample,
}

/// Reports for every (trace, lat) pair plus per-latency averages
/// across traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub reports: Vec<MaeReport>,
    pub averages: Vec<MaeReport>,
}

struct ErrorAccumulator {
    sums: [f64; 7],
    n: usize,
}

impl ErrorAccumulator {
    fn new() -> Self {
        ErrorAccumulator { sums: [0.0; 7], n: 0 }
    }

    fn add(&mut self, estimate: &PoseSample, truth: &PoseSample) -> Result<(), EvalError> {
        let te = truth.rot.to_euler()?;
        let ee = estimate.rot.to_euler()?;
        for k in 0..3 {
            self.sums[k] += (estimate.pos[k] - truth.pos[k]).abs();
        }
        self.sums[3] += wrap_degrees(ee.yaw - te.yaw).abs();
        self.sums[4] += wrap_degrees(ee.pitch - te.pitch).abs();
        self.sums[5] += wrap_degrees(ee.roll - te.roll).abs();
        self.sums[6] += quat::angle_between(&estimate.rot, &truth.rot)?.to_degrees();
        self.n += 1;
        Ok(())
    }

    fn mean(&self) -> ComponentMae {
        let n = self.n.max(1) as f64;
        ComponentMae {
            x: self.sums[0] / n,
            y: self.sums[1] / n,
            z: self.sums[2] / n,
            yaw: self.sums[3] / n,
            pitch: self.sums[4] / n,
            roll: self.sums[5] / n,
            geodesic_deg: self.sums[6] / n,
        }
    }
}

/// Like [`evaluate_trace`] but also returns the per-target records.
pub fn evaluate_trace_detailed(
    models: &ModelPair,
    trace: &UniformTrace,
    config: &PredictionConfig,
) -> Result<(MaeReport, Vec<EvalRecord>), EvalError> {
    let predictions = run_prediction_schedule(models, trace, config)?;
    let steps = config.steps()?;
    let rho = config.rho()?;
    let period = trace.period_ms();
    let t0 = trace.t0_ms();
    let samples = trace.samples();

    let mut records = Vec::new();
    let mut pred_acc = ErrorAccumulator::new();
    let mut base_acc = ErrorAccumulator::new();
    for p in &predictions {
        let issue_idx = ((p.t_issue_ms - t0) / period).round() as usize;
        let target_idx = issue_idx + steps;
        if target_idx >= samples.len() {
            // The target lies beyond the recorded trace; nothing to
            // score against.
            continue;
        }
        let truth = samples[target_idx];
        // T_LAT equals the baseline lag, so the pose displayed without
        // prediction is exactly the one at issue time.
        let baseline = samples[issue_idx];
        pred_acc.add(&p.pose, &truth)?;
        base_acc.add(&baseline, &truth)?;
        records.push(EvalRecord { t_target_ms: truth.t_ms, truth, predicted: p.pose, baseline });
    }
    if records.is_empty() {
        return Err(EvalError::NoEvaluableTargets {
            id: trace.source_id().to_string(),
            needed: rho + steps,
            got: samples.len(),
        });
    }
    let report = MaeReport {
        trace_id: trace.source_id().to_string(),
        lat_ms: config.lat_ms,
        n: records.len(),
        prediction: pred_acc.mean(),
        baseline: base_acc.mean(),
    };
    Ok((report, records))
}

/// Scores prediction and baseline over one trace at `config.lat_ms`.
pub fn evaluate_trace(
    models: &ModelPair,
    trace: &UniformTrace,
    config: &PredictionConfig,
) -> Result<MaeReport, EvalError> {
    evaluate_trace_detailed(models, trace, config).map(|(report, _)| report)
}

fn average_reports(lat_ms: f64, reports: &[&MaeReport]) -> MaeReport {
    let mut n = 0usize;
    let mut pred = [0.0; 7];
    let mut base = [0.0; 7];
    for r in reports {
        n += r.n;
        let p = &r.prediction;
        let b = &r.baseline;
        for (acc, v) in pred.iter_mut().zip([p.x, p.y, p.z, p.yaw, p.pitch, p.roll, p.geodesic_deg]) {
            *acc += v;
        }
        for (acc, v) in base.iter_mut().zip([b.x, b.y, b.z, b.yaw, b.pitch, b.roll, b.geodesic_deg]) {
            *acc += v;
        }
    }
    let count = reports.len().max(1) as f64;
    let mae = |sums: [f64; 7]| ComponentMae {
        x: sums[0] / count,
        y: sums[1] / count,
        z: sums[2] / count,
        yaw: sums[3] / count,
        pitch: sums[4] / count,
        roll: sums[5] / count,
        geodesic_deg: sums[6] / count,
    };
    MaeReport {
        trace_id: AVERAGE_TRACE_ID.to_string(),
        lat_ms,
        n,
        prediction: mae(pred),
        baseline: mae(base),
    }
}

/// Evaluates every trace at every latency and averages per latency
/// across traces (arithmetic mean of per-trace MAEs).
///
/// `base_config` supplies the window, frame interval, and sample
/// period; its `lat_ms` is overridden by each swept latency.
pub fn sweep_lat(
    models: &ModelPair,
    traces: &[UniformTrace],
    base_config: &PredictionConfig,
    lats_ms: &[f64],
) -> Result<SweepResult, EvalError> {
    if traces.is_empty() {
        return Err(EvalError::EmptyTraces);
    }
    if lats_ms.is_empty() {
        return Err(EvalError::EmptyLats);
    }
    let pairs: Vec<(usize, usize)> = (0..lats_ms.len())
        .flat_map(|li| (0..traces.len()).map(move |ti| (li, ti)))
        .collect();
    let reports: Vec<MaeReport> = pairs
        .par_iter()
        .map(|&(li, ti)| {
            let config = base_config.with_lat(lats_ms[li]);
            evaluate_trace(models, &traces[ti], &config)
        })
        .collect::<Result<_, _>>()?;
    let averages = lats_ms
        .iter()
        .enumerate()
        .map(|(li, &lat)| {
            let per_lat: Vec<&MaeReport> =
                reports[li * traces.len()..(li + 1) * traces.len()].iter().collect();
            average_reports(lat, &per_lat)
        })
        .collect();
    Ok(SweepResult { reports, averages })
}

/// Output encodings for [`export_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format {other:?} (expected csv or json)")),
        }
    }
}

/// Writes reports as long-form CSV (`trace_id,lat_ms,component,method,mae`,
/// twelve rows per report) or as a JSON array of report objects.
pub fn export_report(
    reports: &[MaeReport],
    path: &Path,
    format: ReportFormat,
) -> Result<(), EvalError> {
    if reports.is_empty() {
        return Err(EvalError::EmptyReports);
    }
    let io_err = |source| EvalError::Io { path: path.display().to_string(), source };
    match format {
        ReportFormat::Csv => {
            let mut body = String::from("trace_id,lat_ms,component,method,mae\n");
            for r in reports {
                for (method, mae) in [("prediction", &r.prediction), ("baseline", &r.baseline)] {
                    for c in Component::ALL {
                        body.push_str(&format!(
                            "{},{},{},{},{}\n",
                            r.trace_id,
                            r.lat_ms,
                            c.as_str(),
                            method,
                            mae.component(c)
                        ));
                    }
                }
            }
            File::create(path).map_err(io_err)?.write_all(body.as_bytes()).map_err(io_err)
        }
        ReportFormat::Json => {
            let text = serde_json::to_string_pretty(reports)?;
            File::create(path).map_err(io_err)?.write_all(text.as_bytes()).map_err(io_err)
        }
    }
}

/// Writes per-target records as long-form CSV:
/// `trace_id,lat_ms,t_target_ms,component,truth,predicted,baseline`,
/// six rows per record.
pub fn export_per_frame(
    groups: &[(String, f64, Vec<EvalRecord>)],
    path: &Path,
) -> Result<(), EvalError> {
    let io_err = |source| EvalError::Io { path: path.display().to_string(), source };
    let mut body = String::from("trace_id,lat_ms,t_target_ms,component,truth,predicted,baseline\n");
    for (trace_id, lat_ms, records) in groups {
        for rec in records {
            let te = rec.truth.rot.to_euler()?;
            let pe = rec.predicted.rot.to_euler()?;
            let be = rec.baseline.rot.to_euler()?;
            let values = [
                (Component::X, rec.truth.pos[0], rec.predicted.pos[0], rec.baseline.pos[0]),
                (Component::Y, rec.truth.pos[1], rec.predicted.pos[1], rec.baseline.pos[1]),
                (Component::Z, rec.truth.pos[2], rec.predicted.pos[2], rec.baseline.pos[2]),
                (Component::Yaw, te.yaw, pe.yaw, be.yaw),
                (Component::Pitch, te.pitch, pe.pitch, be.pitch),
                (Component::Roll, te.roll, pe.roll, be.roll),
            ];
            for (c, truth, pred, base) in values {
                body.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    trace_id,
                    lat_ms,
                    rec.t_target_ms,
                    c.as_str(),
                    truth,
                    pred,
                    base
                ));
            }
        }
    }
    File::create(path).map_err(io_err)?.write_all(body.as_bytes()).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ar::ArModel;
    use crate::predictor::train_default_models;
    use crate::quat::{EulerAngles, Quat};
    use crate::synth::{generate_trace, MotionKind};
    use approx::assert_abs_diff_eq;

    fn persistence_models(rho: usize) -> ModelPair {
        let mut phi = vec![0.0; rho];
        phi[0] = 1.0;
        let m = ArModel { rho, c: 0.0, phi, sigma2: 0.0, trained_on: String::new() };
        ModelPair::new(m.clone().with_label("x"), m.with_label("qx")).unwrap()
    }

    fn config(lat_ms: f64) -> PredictionConfig {
        PredictionConfig { lat_ms, ..PredictionConfig::default() }
    }

    #[test]
    fn constant_pose_scores_zero_everywhere() {
        let trace = generate_trace(&MotionKind::Constant, 2000.0, 5.0, 0, "const").unwrap();
        let report = evaluate_trace(&persistence_models(32), &trace, &config(40.0)).unwrap();
        assert!(report.n > 0);
        for c in Component::ALL {
            assert_eq!(report.prediction.component(c), 0.0);
            assert_eq!(report.baseline.component(c), 0.0);
        }
        assert_eq!(report.prediction.geodesic_deg, 0.0);
    }

    #[test]
    fn ramp_baseline_error_is_velocity_times_latency() {
        let kind = MotionKind::Ramp { velocity_mps: [0.2, 0.0, 0.0], roll_rate_dps: 10.0 };
        let trace = generate_trace(&kind, 3000.0, 5.0, 0, "ramp").unwrap();
        let cfg = config(50.0);
        // Persistence predicts the pose at issue time, which is exactly
        // the baseline; both methods then share the closed-form error
        // |v| * lat.
        let report = evaluate_trace(&persistence_models(32), &trace, &cfg).unwrap();
        let expect = 0.2 * 50.0 / 1000.0;
        assert_abs_diff_eq!(report.baseline.x, expect, epsilon = 1e-9);
        assert_abs_diff_eq!(report.prediction.x, expect, epsilon = 1e-9);
        assert_eq!(report.baseline.y, 0.0);
        // The roll ramp moves only the roll angle.
        assert_abs_diff_eq!(report.baseline.roll, 10.0 * 50.0 / 1000.0, epsilon = 1e-9);
        assert_abs_diff_eq!(report.baseline.yaw, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn trained_models_beat_the_baseline_on_a_ramp() {
        let kind = MotionKind::Ramp { velocity_mps: [0.2, 0.0, 0.0], roll_rate_dps: 10.0 };
        let trace = generate_trace(&kind, 4000.0, 5.0, 0, "ramp").unwrap();
        let cfg = config(100.0);
        let models = train_default_models(&trace, &cfg).unwrap();
        let report = evaluate_trace(&models, &trace, &cfg).unwrap();
        assert_abs_diff_eq!(report.baseline.x, 0.02, epsilon = 1e-9);
        assert!(
            report.prediction.x < 0.1 * report.baseline.x,
            "prediction {} vs baseline {}",
            report.prediction.x,
            report.baseline.x
        );
    }

    #[test]
    fn prediction_and_baseline_share_target_timestamps() {
        let trace = generate_trace(&MotionKind::default_sine(), 2000.0, 5.0, 4, "sine").unwrap();
        let cfg = config(60.0);
        let (_, records) = evaluate_trace_detailed(&persistence_models(32), &trace, &cfg).unwrap();
        assert!(!records.is_empty());
        for rec in &records {
            assert_eq!(rec.truth.t_ms, rec.t_target_ms);
            assert_eq!(rec.predicted.t_ms, rec.t_target_ms);
            // The baseline is the ground-truth pose one latency earlier.
            assert_abs_diff_eq!(rec.baseline.t_ms, rec.t_target_ms - 60.0, epsilon = 1e-9);
        }
        // Targets past the trace end are skipped, never extrapolated.
        let last = records.last().unwrap();
        assert!(last.t_target_ms <= trace.samples().last().unwrap().t_ms);
    }

    #[test]
    fn mae_is_invariant_under_time_shift() {
        let a = generate_trace(&MotionKind::default_sine(), 2000.0, 5.0, 8, "a").unwrap();
        let shifted: Vec<PoseSample> = a
            .samples()
            .iter()
            .map(|s| PoseSample { t_ms: s.t_ms + 1000.0, ..*s })
            .collect();
        let b = UniformTrace::from_samples("b", 5.0, shifted).unwrap();
        let cfg = config(40.0);
        let models = train_default_models(&a, &cfg).unwrap();
        let ra = evaluate_trace(&models, &a, &cfg).unwrap();
        let rb = evaluate_trace(&models, &b, &cfg).unwrap();
        assert_eq!(ra.n, rb.n);
        for c in Component::ALL {
            assert_abs_diff_eq!(
                ra.prediction.component(c),
                rb.prediction.component(c),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(ra.baseline.component(c), rb.baseline.component(c), epsilon = 1e-12);
        }
    }

    #[test]
    fn yaw_errors_wrap_across_the_half_turn() {
        // A yaw ramp crossing +180 degrees: naive differences near the
        // crossing would be ~358 degrees; wrapped they stay tiny.
        let n = 600usize;
        let samples: Vec<PoseSample> = (0..n)
            .map(|i| {
                let t_ms = i as f64 * 5.0;
                let yaw = wrap_degrees(170.0 + 20.0 * t_ms / 1000.0);
                PoseSample {
                    t_ms,
                    pos: [0.0; 3],
                    rot: Quat::from_euler(&EulerAngles { yaw, pitch: 0.0, roll: 0.0 }),
                }
            })
            .collect();
        let trace = UniformTrace::from_samples("wrap", 5.0, samples).unwrap();
        let report = evaluate_trace(&persistence_models(32), &trace, &config(100.0)).unwrap();
        // 20 deg/s over 100 ms lags by 2 degrees, nowhere near 360 - 2.
        assert_abs_diff_eq!(report.baseline.yaw, 2.0, epsilon = 1e-6);
        assert!(report.prediction.yaw <= 180.0);
    }

    #[test]
    fn too_short_for_any_target_is_an_error() {
        // 32 samples fit one history window, but the target at +8
        // samples falls past the end.
        let trace = generate_trace(&MotionKind::Constant, 155.0, 5.0, 0, "short").unwrap();
        let err = evaluate_trace(&persistence_models(32), &trace, &config(40.0)).unwrap_err();
        assert!(matches!(err, EvalError::NoEvaluableTargets { needed: 40, .. }), "{err}");
    }

    #[test]
    fn sweep_covers_every_pair_and_averages_across_traces() {
        let traces: Vec<UniformTrace> = (0..3)
            .map(|i| {
                generate_trace(&MotionKind::default_sine(), 2000.0, 5.0, 100 + i, &format!("u{i}"))
                    .unwrap()
            })
            .collect();
        let cfg = config(20.0);
        let models = train_default_models(&traces[0], &cfg).unwrap();
        let lats = [20.0, 60.0];
        let sweep = sweep_lat(&models, &traces, &cfg, &lats).unwrap();
        assert_eq!(sweep.reports.len(), 6);
        assert_eq!(sweep.averages.len(), 2);
        for (li, &lat) in lats.iter().enumerate() {
            let avg = &sweep.averages[li];
            assert_eq!(avg.trace_id, AVERAGE_TRACE_ID);
            assert_eq!(avg.lat_ms, lat);
            let per_lat: Vec<&MaeReport> =
                sweep.reports.iter().filter(|r| r.lat_ms == lat).collect();
            assert_eq!(per_lat.len(), 3);
            assert_eq!(avg.n, per_lat.iter().map(|r| r.n).sum::<usize>());
            for c in Component::ALL {
                let mean: f64 =
                    per_lat.iter().map(|r| r.prediction.component(c)).sum::<f64>() / 3.0;
                assert_abs_diff_eq!(avg.prediction.component(c), mean, epsilon = 1e-12);
            }
        }
        // Single trace, single lat reduces to evaluate_trace.
        let single = sweep_lat(&models, &traces[..1], &cfg, &[20.0]).unwrap();
        let direct = evaluate_trace(&models, &traces[0], &cfg).unwrap();
        assert_eq!(single.reports[0], direct);
        assert_eq!(single.averages[0].prediction, direct.prediction);
    }

    #[test]
    fn sweep_rejects_empty_inputs() {
        let trace = generate_trace(&MotionKind::default_sine(), 2000.0, 5.0, 0, "t").unwrap();
        let cfg = config(20.0);
        let models = train_default_models(&trace, &cfg).unwrap();
        assert!(matches!(sweep_lat(&models, &[], &cfg, &[20.0]), Err(EvalError::EmptyTraces)));
        let traces = vec![trace];
        assert!(matches!(sweep_lat(&models, &traces, &cfg, &[]), Err(EvalError::EmptyLats)));
    }

    #[test]
    fn csv_export_has_twelve_rows_per_report() {
        let trace = generate_trace(&MotionKind::default_sine(), 2000.0, 5.0, 3, "t").unwrap();
        let cfg = config(40.0);
        let models = train_default_models(&trace, &cfg).unwrap();
        let report = evaluate_trace(&models, &trace, &cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.csv");
        export_report(&[report], &path, ReportFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "trace_id,lat_ms,component,method,mae");
        assert_eq!(lines.len(), 1 + 12);
        for method in ["prediction", "baseline"] {
            for c in Component::ALL {
                assert_eq!(
                    lines.iter().filter(|l| {
                        let f: Vec<&str> = l.split(',').collect();
                        f.len() == 5 && f[2] == c.as_str() && f[3] == method
                    }).count(),
                    1
                );
            }
        }
    }

    #[test]
    fn json_export_round_trips_exactly() {
        let trace = generate_trace(&MotionKind::default_sine(), 2000.0, 5.0, 5, "t").unwrap();
        let cfg = config(80.0);
        let models = train_default_models(&trace, &cfg).unwrap();
        let report = evaluate_trace(&models, &trace, &cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        export_report(std::slice::from_ref(&report), &path, ReportFormat::Json).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let back: Vec<MaeReport> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![report]);
    }

    #[test]
    fn export_rejects_empty_reports() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.csv");
        assert!(matches!(
            export_report(&[], &path, ReportFormat::Csv),
            Err(EvalError::EmptyReports)
        ));
    }

    #[test]
    fn per_frame_export_has_six_rows_per_record() {
        let trace = generate_trace(&MotionKind::default_sine(), 1000.0, 5.0, 6, "t").unwrap();
        let cfg = config(20.0);
        let models = train_default_models(&trace, &cfg).unwrap();
        let (_, records) = evaluate_trace_detailed(&models, &trace, &cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("frames.csv");
        export_per_frame(&[("t".to_string(), 20.0, records.clone())], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "trace_id,lat_ms,t_target_ms,component,truth,predicted,baseline");
        assert_eq!(lines.len(), 1 + records.len() * 6);
        assert!(lines[1].starts_with("t,20,"));
    }
}
