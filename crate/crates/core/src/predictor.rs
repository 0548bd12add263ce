//! Pose prediction one latency horizon ahead.
//!
//! A remote-rendering client that waits T_LAT milliseconds for its
//! frames must render the pose the head will occupy at arrival time,
//! not the pose at send time. The predictor slides a fixed history
//! window over a uniform trace and, at every frame interval, forecasts
//! each pose channel `lat / period` steps ahead with two shared AR
//! models: one fitted on a position channel and applied to x, y, z,
//! one fitted on a quaternion channel and applied to qx, qy, qz, qw.
//! The forecasted quaternion is renormalized once, at the final step.

use std::fs::File;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ar::{ArError, ArModel};
use crate::quat::{self, Quat, QuatError};
use crate::trace::{Channel, PoseSample, UniformTrace};

/// Default history window: 160 ms, 32 samples at 200 Hz.
pub const DEFAULT_HISTORY_WINDOW_MS: f64 = 160.0;

/// Default prediction cadence: one pose per 10 ms display frame.
pub const DEFAULT_FRAME_INTERVAL_MS: f64 = 10.0;

/// Forecasted quaternions with a norm below this have lost all
/// directional information.
const COLLAPSE_NORM: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum PredictError {
    #[error(transparent)]
    Ar(#[from] ArError),
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error("invalid prediction config: {0}")]
    InvalidConfig(String),
    #[error("trace has {got} samples, need at least {needed} for one full history window")]
    TraceTooShort { needed: usize, got: usize },
    #[error("model lag orders differ: translational {trans} vs rotational {rot}")]
    MismatchedLagOrders { trans: usize, rot: usize },
    #[error(
        "forecasted quaternion collapsed (norm {norm:.3e}); the rotational model does not transfer to this trace"
    )]
    QuaternionCollapse { norm: f64 },
    #[error("failed to access {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid model file {path}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

/// Timing parameters of one prediction run. All four are milliseconds;
/// the window, the latency horizon, and the frame interval must each
/// be positive integer multiples of the sample period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionConfig {
    pub history_window_ms: f64,
    pub lat_ms: f64,
    pub frame_interval_ms: f64,
    pub sample_period_ms: f64,
}

impl Default for PredictionConfig {
    fn default() -> Self {
        PredictionConfig {
            history_window_ms: DEFAULT_HISTORY_WINDOW_MS,
            lat_ms: 20.0,
            frame_interval_ms: DEFAULT_FRAME_INTERVAL_MS,
            sample_period_ms: crate::trace::DEFAULT_SAMPLE_PERIOD_MS,
        }
    }
}

fn positive_multiple(value_ms: f64, period_ms: f64, name: &str) -> Result<usize, PredictError> {
    if !period_ms.is_finite() || period_ms <= 0.0 {
        return Err(PredictError::InvalidConfig(format!(
            "sample_period_ms must be positive and finite, got {period_ms}"
        )));
    }
    if !value_ms.is_finite() || value_ms <= 0.0 {
        return Err(PredictError::InvalidConfig(format!(
            "{name} must be positive and finite, got {value_ms}"
        )));
    }
    let ratio = value_ms / period_ms;
    let k = ratio.round();
    if k < 1.0 || (ratio - k).abs() > 1e-9 {
        return Err(PredictError::InvalidConfig(format!(
            "{name} = {value_ms} ms is not a positive integer multiple of sample_period_ms = {period_ms} ms"
        )));
    }
    Ok(k as usize)
}

impl PredictionConfig {
    /// History window length in samples; this is the AR lag order.
    pub fn rho(&self) -> Result<usize, PredictError> {
        positive_multiple(self.history_window_ms, self.sample_period_ms, "history_window_ms")
    }

    /// Forecast horizon in samples.
    pub fn steps(&self) -> Result<usize, PredictError> {
        positive_multiple(self.lat_ms, self.sample_period_ms, "lat_ms")
    }

    /// Samples between consecutive prediction issues.
    pub fn frame_step(&self) -> Result<usize, PredictError> {
        positive_multiple(self.frame_interval_ms, self.sample_period_ms, "frame_interval_ms")
    }

    pub fn validate(&self) -> Result<(), PredictError> {
        self.rho()?;
        self.steps()?;
        self.frame_step()?;
        Ok(())
    }

    pub fn with_lat(mut self, lat_ms: f64) -> Self {
        self.lat_ms = lat_ms;
        self
    }
}

/// The two shared channel models: one translational, one rotational.
/// Both must have the same lag order so they consume the same history
/// window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelPair {
    #[serde(rename = "trans_model")]
    pub trans: ArModel,
    #[serde(rename = "rot_model")]
    pub rot: ArModel,
}

impl ModelPair {
    pub fn new(trans: ArModel, rot: ArModel) -> Result<Self, PredictError> {
        if trans.rho != rot.rho {
            return Err(PredictError::MismatchedLagOrders { trans: trans.rho, rot: rot.rho });
        }
        Ok(ModelPair { trans, rot })
    }

    pub fn rho(&self) -> usize {
        self.trans.rho
    }

    pub fn save_json(&self, path: &Path) -> Result<(), PredictError> {
        let pretty = serde_json::to_string_pretty(self)
            .map_err(|source| PredictError::Json { path: path.display().to_string(), source })?;
        let mut file = File::create(path)
            .map_err(|source| PredictError::Io { path: path.display().to_string(), source })?;
        file.write_all(pretty.as_bytes())
            .map_err(|source| PredictError::Io { path: path.display().to_string(), source })
    }

    pub fn load_json(path: &Path) -> Result<Self, PredictError> {
        let file = File::open(path)
            .map_err(|source| PredictError::Io { path: path.display().to_string(), source })?;
        let pair: ModelPair = serde_json::from_reader(file)
            .map_err(|source| PredictError::Json { path: path.display().to_string(), source })?;
        ModelPair::new(pair.trans, pair.rot)
    }
}

/// Fits the shared models on the given channels of one trace.
pub fn train_models(
    trace: &UniformTrace,
    config: &PredictionConfig,
    trans_channel: Channel,
    rot_channel: Channel,
) -> Result<ModelPair, PredictError> {
    let rho = config.rho()?;
    let trans = ArModel::fit(&trace.channel(trans_channel), rho)?.with_label(trans_channel.as_str());
    let rot = ArModel::fit(&trace.channel(rot_channel), rho)?.with_label(rot_channel.as_str());
    ModelPair::new(trans, rot)
}

/// Fits the default shared models: translational on x, rotational on
/// qx.
pub fn train_default_models(
    trace: &UniformTrace,
    config: &PredictionConfig,
) -> Result<ModelPair, PredictError> {
    train_models(trace, config, Channel::X, Channel::Qx)
}

/// Predicts the pose `lat_ms` past the newest history sample.
///
/// `history` must hold exactly the models' lag order of consecutive
/// samples spaced `sample_period_ms` apart, oldest first. Each channel
/// is forecast independently by iterated one-step prediction; only the
/// final quaternion is renormalized.
pub fn predict_pose(
    models: &ModelPair,
    history: &[PoseSample],
    lat_ms: f64,
    sample_period_ms: f64,
) -> Result<PoseSample, PredictError> {
    let rho = models.rho();
    if history.len() != rho {
        return Err(ArError::HistoryLengthMismatch { expected: rho, got: history.len() }.into());
    }
    let steps = positive_multiple(lat_ms, sample_period_ms, "lat_ms")?;
    let rots = quat::align_hemisphere(&history.iter().map(|s| s.rot).collect::<Vec<_>>());

    let forecast =
        |model: &ArModel, series: Vec<f64>| -> Result<f64, ArError> {
            Ok(*model
                .forecast_multi(&series, steps)?
                .last()
                .expect("steps >= 1"))
        };
    let pos = [
        forecast(&models.trans, history.iter().map(|s| s.pos[0]).collect())?,
        forecast(&models.trans, history.iter().map(|s| s.pos[1]).collect())?,
        forecast(&models.trans, history.iter().map(|s| s.pos[2]).collect())?,
    ];
    let raw_rot = Quat::new(
        forecast(&models.rot, rots.iter().map(|q| q.x).collect())?,
        forecast(&models.rot, rots.iter().map(|q| q.y).collect())?,
        forecast(&models.rot, rots.iter().map(|q| q.z).collect())?,
        forecast(&models.rot, rots.iter().map(|q| q.w).collect())?,
    );
    let norm = raw_rot.norm();
    if !norm.is_finite() || norm < COLLAPSE_NORM {
        return Err(PredictError::QuaternionCollapse { norm });
    }
    Ok(PoseSample {
        t_ms: history[history.len() - 1].t_ms + lat_ms,
        pos,
        rot: raw_rot.renormalize()?,
    })
}

/// One scheduled prediction: issued at `t_issue_ms` from the history
/// ending there, targeting `pose.t_ms = t_issue_ms + lat`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduledPrediction {
    pub t_issue_ms: f64,
    pub pose: PoseSample,
}

/// Runs the prediction schedule over a whole trace.
///
/// The first prediction is issued at the earliest sample with a full
/// history window behind it; subsequent issues advance by the frame
/// interval. Every prediction sees only samples at or before its issue
/// time.
pub fn run_prediction_schedule(
    models: &ModelPair,
    trace: &UniformTrace,
    config: &PredictionConfig,
) -> Result<Vec<ScheduledPrediction>, PredictError> {
    config.validate()?;
    if (trace.period_ms() - config.sample_period_ms).abs() > 1e-9 {
        return Err(PredictError::InvalidConfig(format!(
            "trace grid period {} ms does not match configured sample_period_ms {} ms",
            trace.period_ms(),
            config.sample_period_ms
        )));
    }
    let rho = config.rho()?;
    if models.rho() != rho {
        return Err(PredictError::InvalidConfig(format!(
            "model lag order {} does not match history_window_ms / sample_period_ms = {}",
            models.rho(),
            rho
        )));
    }
    let samples = trace.samples();
    if samples.len() < rho {
        return Err(PredictError::TraceTooShort { needed: rho, got: samples.len() });
    }
    let frame_step = config.frame_step()?;
    let mut out = Vec::with_capacity((samples.len() - rho) / frame_step + 1);
    for issue in ((rho - 1)..samples.len()).step_by(frame_step) {
        let history = &samples[issue + 1 - rho..=issue];
        let pose = predict_pose(models, history, config.lat_ms, config.sample_period_ms)?;
        out.push(ScheduledPrediction { t_issue_ms: samples[issue].t_ms, pose });
    }
    Ok(out)
}

/// Writes scheduled predictions as CSV:
/// `t_issue_ms,t_target_ms,x,y,z,qx,qy,qz,qw`.
pub fn write_predictions_csv(
    predictions: &[ScheduledPrediction],
    path: &Path,
) -> Result<(), PredictError> {
    let io_err = |source| PredictError::Io { path: path.display().to_string(), source };
    let mut body = String::with_capacity(predictions.len() * 96 + 64);
    body.push_str("t_issue_ms,t_target_ms,x,y,z,qx,qy,qz,qw\n");
    for p in predictions {
        let s = &p.pose;
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            p.t_issue_ms, s.t_ms, s.pos[0], s.pos[1], s.pos[2], s.rot.x, s.rot.y, s.rot.z, s.rot.w
        ));
    }
    File::create(path).map_err(io_err)?.write_all(body.as_bytes()).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::EulerAngles;
    use crate::synth::{generate_trace, MotionKind};
    use approx::assert_abs_diff_eq;

    fn persistence_models(rho: usize) -> ModelPair {
        let mut phi = vec![0.0; rho];
        phi[0] = 1.0;
        let m = ArModel { rho, c: 0.0, phi, sigma2: 0.0, trained_on: String::new() };
        ModelPair::new(m.clone().with_label("x"), m.with_label("qx")).unwrap()
    }

    #[test]
    fn config_ratios_and_validation() {
        let config = PredictionConfig::default();
        assert_eq!(config.rho().unwrap(), 32);
        assert_eq!(config.steps().unwrap(), 4);
        assert_eq!(config.frame_step().unwrap(), 2);
        assert!(config.validate().is_ok());

        let bad = PredictionConfig { history_window_ms: 159.0, ..config };
        assert!(matches!(bad.validate(), Err(PredictError::InvalidConfig(_))));
        let bad = PredictionConfig { lat_ms: 12.5, ..config };
        assert!(matches!(bad.validate(), Err(PredictError::InvalidConfig(_))));
        let bad = PredictionConfig { frame_interval_ms: 0.0, ..config };
        assert!(matches!(bad.validate(), Err(PredictError::InvalidConfig(_))));
        let bad = PredictionConfig { sample_period_ms: -5.0, ..config };
        assert!(matches!(bad.validate(), Err(PredictError::InvalidConfig(_))));
    }

    #[test]
    fn model_pair_requires_matching_lag_orders() {
        let a = ArModel { rho: 2, c: 0.0, phi: vec![1.0, 0.0], sigma2: 0.0, trained_on: String::new() };
        let b = ArModel { rho: 3, c: 0.0, phi: vec![1.0, 0.0, 0.0], sigma2: 0.0, trained_on: String::new() };
        assert!(matches!(
            ModelPair::new(a, b),
            Err(PredictError::MismatchedLagOrders { trans: 2, rot: 3 })
        ));
    }

    #[test]
    fn persistence_prediction_repeats_newest_pose_bit_for_bit() {
        let trace = generate_trace(&MotionKind::default_sine(), 1000.0, 5.0, 3, "t").unwrap();
        let models = persistence_models(32);
        let history = &trace.samples()[0..32];
        let newest = history[31];
        for lat in [5.0, 20.0, 100.0] {
            let pose = predict_pose(&models, history, lat, 5.0).unwrap();
            assert_eq!(pose.pos, newest.pos);
            assert_eq!(pose.rot.x.to_bits(), newest.rot.x.to_bits());
            assert_eq!(pose.rot.y.to_bits(), newest.rot.y.to_bits());
            assert_eq!(pose.rot.z.to_bits(), newest.rot.z.to_bits());
            assert_eq!(pose.rot.w.to_bits(), newest.rot.w.to_bits());
            assert_eq!(pose.t_ms, newest.t_ms + lat);
        }
    }

    #[test]
    fn trained_models_extrapolate_linear_motion() {
        let kind = MotionKind::Ramp { velocity_mps: [0.1, 0.0, 0.0], roll_rate_dps: 10.0 };
        let trace = generate_trace(&kind, 4000.0, 5.0, 0, "ramp").unwrap();
        let config = PredictionConfig { lat_ms: 100.0, ..PredictionConfig::default() };
        let models = train_default_models(&trace, &config).unwrap();
        let n = trace.len();
        let history = &trace.samples()[n - 32..];
        let newest = history[31];
        let pose = predict_pose(&models, history, 100.0, 5.0).unwrap();
        // 0.1 m/s over 100 ms adds 10 mm along x.
        assert_abs_diff_eq!(pose.pos[0], newest.pos[0] + 0.01, epsilon = 1e-4);
        // The single translational model is fit on the drifting x channel,
        // so its nonzero intercept biases the constant channels slightly
        // when iterated 20 steps ahead. Only a loose bound holds for y.
        assert_abs_diff_eq!(pose.pos[1], newest.pos[1], epsilon = 0.05);
        assert!(pose.rot.is_unit(1e-9));
    }

    #[test]
    fn predict_pose_checks_history_length() {
        let trace = generate_trace(&MotionKind::Constant, 500.0, 5.0, 0, "t").unwrap();
        let models = persistence_models(32);
        let err = predict_pose(&models, &trace.samples()[0..31], 20.0, 5.0).unwrap_err();
        assert!(matches!(
            err,
            PredictError::Ar(ArError::HistoryLengthMismatch { expected: 32, got: 31 })
        ));
    }

    #[test]
    fn degenerate_rotational_model_is_reported_not_masked() {
        // A zero rotational model (the result of training on a channel
        // that is identically zero) forecasts the null quaternion.
        let trans = ArModel { rho: 1, c: 0.0, phi: vec![1.0], sigma2: 0.0, trained_on: "x".into() };
        let rot = ArModel { rho: 1, c: 0.0, phi: vec![0.0], sigma2: 0.0, trained_on: "qx".into() };
        let models = ModelPair::new(trans, rot).unwrap();
        let history = [PoseSample { t_ms: 0.0, pos: [0.0; 3], rot: Quat::IDENTITY }];
        let err = predict_pose(&models, &history, 5.0, 5.0).unwrap_err();
        assert!(matches!(err, PredictError::QuaternionCollapse { .. }), "{err}");
    }

    #[test]
    fn schedule_covers_the_expected_issue_times() {
        let trace = generate_trace(&MotionKind::default_sine(), 1000.0, 5.0, 1, "t").unwrap();
        assert_eq!(trace.len(), 201);
        let models = persistence_models(32);
        let config = PredictionConfig { lat_ms: 40.0, ..PredictionConfig::default() };
        let preds = run_prediction_schedule(&models, &trace, &config).unwrap();
        assert_eq!(preds.len(), 85);
        assert_eq!(preds[0].t_issue_ms, 155.0);
        assert_eq!(preds[0].pose.t_ms, 195.0);
        assert_eq!(preds.last().unwrap().t_issue_ms, 995.0);
        for pair in preds.windows(2) {
            assert_abs_diff_eq!(pair[1].t_issue_ms - pair[0].t_issue_ms, 10.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn schedule_with_persistence_shifts_the_input_by_one_sample() {
        let trace = generate_trace(&MotionKind::default_sine(), 600.0, 5.0, 5, "t").unwrap();
        let models = persistence_models(32);
        let config = PredictionConfig {
            lat_ms: 5.0,
            frame_interval_ms: 5.0,
            ..PredictionConfig::default()
        };
        let preds = run_prediction_schedule(&models, &trace, &config).unwrap();
        // Prediction issued at sample i repeats sample i exactly.
        for (k, p) in preds.iter().enumerate() {
            let issue = &trace.samples()[31 + k];
            assert_eq!(p.pose.pos, issue.pos);
            assert_eq!(p.pose.rot, issue.rot);
            assert_eq!(p.pose.t_ms, issue.t_ms + 5.0);
        }
    }

    #[test]
    fn schedule_on_minimal_trace_issues_one_prediction() {
        let trace = generate_trace(&MotionKind::Constant, 155.0, 5.0, 0, "t").unwrap();
        assert_eq!(trace.len(), 32);
        let models = persistence_models(32);
        let config = PredictionConfig { lat_ms: 20.0, ..PredictionConfig::default() };
        let preds = run_prediction_schedule(&models, &trace, &config).unwrap();
        assert_eq!(preds.len(), 1);
        assert_eq!(preds[0].t_issue_ms, 155.0);
    }

    #[test]
    fn schedule_rejects_short_traces_and_mismatched_models() {
        let trace = generate_trace(&MotionKind::Constant, 150.0, 5.0, 0, "t").unwrap();
        let config = PredictionConfig { lat_ms: 20.0, ..PredictionConfig::default() };
        let err = run_prediction_schedule(&persistence_models(32), &trace, &config).unwrap_err();
        assert!(matches!(err, PredictError::TraceTooShort { needed: 32, got: 31 }));

        let trace = generate_trace(&MotionKind::Constant, 400.0, 5.0, 0, "t").unwrap();
        let err = run_prediction_schedule(&persistence_models(16), &trace, &config).unwrap_err();
        assert!(matches!(err, PredictError::InvalidConfig(_)));
    }

    #[test]
    fn predictions_never_read_past_their_issue_time() {
        let trace = generate_trace(&MotionKind::default_sine(), 1000.0, 5.0, 9, "t").unwrap();
        let config = PredictionConfig { lat_ms: 40.0, ..PredictionConfig::default() };
        let models = train_default_models(&trace, &config).unwrap();
        let before = run_prediction_schedule(&models, &trace, &config).unwrap();

        // Rewrite everything after 500 ms and rerun.
        let mutated: Vec<PoseSample> = trace
            .samples()
            .iter()
            .map(|s| {
                if s.t_ms > 500.0 {
                    PoseSample {
                        t_ms: s.t_ms,
                        pos: [9.0, -9.0, 9.0],
                        rot: Quat::from_euler(&EulerAngles { yaw: 170.0, pitch: 45.0, roll: -90.0 }),
                    }
                } else {
                    *s
                }
            })
            .collect();
        let mutated = UniformTrace::from_samples("t", 5.0, mutated).unwrap();
        let after = run_prediction_schedule(&models, &mutated, &config).unwrap();

        for (a, b) in before.iter().zip(&after) {
            if a.t_issue_ms < 500.0 {
                assert_eq!(a.pose.pos[0].to_bits(), b.pose.pos[0].to_bits());
                assert_eq!(a.pose.rot.w.to_bits(), b.pose.rot.w.to_bits());
            }
        }
        assert!(before.iter().zip(&after).any(|(a, b)| a.pose.pos != b.pose.pos));
    }

    #[test]
    fn model_pair_round_trips_through_json() {
        let trace = generate_trace(&MotionKind::default_sine(), 1000.0, 5.0, 2, "t").unwrap();
        let config = PredictionConfig::default();
        let models = train_default_models(&trace, &config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("models.json");
        models.save_json(&path).unwrap();
        let back = ModelPair::load_json(&path).unwrap();
        assert_eq!(back, models);
        assert_eq!(back.trans.trained_on, "x");
        assert_eq!(back.rot.trained_on, "qx");

        // The stored shape names both members explicitly.
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"trans_model\""));
        assert!(text.contains("\"rot_model\""));
    }
}
