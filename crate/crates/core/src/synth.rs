//! Seeded synthetic pose traces and scalar series.
//!
//! Every generator takes an explicit seed and is deterministic for a
//! given seed, so tests and experiments can pin their inputs. Traces
//! come out on a uniform grid starting at t = 0 with unit rotations,
//! ready for training and evaluation without a resampling pass.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::quat::{EulerAngles, Quat};
use crate::trace::{PoseSample, TraceError, UniformTrace};

/// Samples discarded before an AR series is recorded, so the recorded
/// part starts in the stationary regime.
const AR_BURN_IN: usize = 500;

/// Generates `n` samples of the AR process
/// `y_t = c + sum_i phi[i] * y_{t-1-i} + N(0, noise_sigma^2)`.
///
/// An empty `phi` yields white noise around `c`. The process is warmed
/// up for [`AR_BURN_IN`] samples from the stationary mean.
pub fn ar_series(n: usize, c: f64, phi: &[f64], noise_sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise_sigma.max(f64::MIN_POSITIVE)).expect("finite sigma");
    let phi_sum: f64 = phi.iter().sum();
    let start = if (1.0 - phi_sum).abs() > 1e-9 { c / (1.0 - phi_sum) } else { 0.0 };
    let order = phi.len();
    let mut series = Vec::with_capacity(AR_BURN_IN + n);
    series.resize(order, start);
    for _ in 0..(AR_BURN_IN + n).saturating_sub(order) {
        let mut value = c + normal.sample(&mut rng);
        for (i, p) in phi.iter().enumerate() {
            value += p * series[series.len() - 1 - i];
        }
        series.push(value);
    }
    series.split_off(series.len() - n)
}

/// Families of synthetic head motion.
#[derive(Debug, Clone, PartialEq)]
pub enum MotionKind {
    /// Fixed position and orientation.
    Constant,
    /// Constant linear velocity plus a constant-rate spin about the
    /// head's x axis. The roll axis is chosen deliberately: it drives
    /// the qx quaternion channel, the one rotational forecasters are
    /// trained on.
    Ramp { velocity_mps: [f64; 3], roll_rate_dps: f64 },
    /// Sum-of-sinusoids sway in position and Euler angles, with
    /// seed-derived phases and optional additive Gaussian noise
    /// (meters on positions, degrees on angles).
    Sine {
        pos_amp_m: [f64; 3],
        pos_freq_hz: [f64; 3],
        euler_amp_deg: [f64; 3],
        euler_freq_hz: [f64; 3],
        noise_sigma: f64,
    },
    /// Stationary AR(2) wander in every channel, scaled to `pos_amp_m`
    /// meters and `euler_amp_deg` degrees of standard deviation.
    ArWander { pos_amp_m: f64, euler_amp_deg: f64 },
}

impl MotionKind {
    /// Sinusoidal sway with plausible seated-user amplitudes.
    pub fn default_sine() -> MotionKind {
        MotionKind::Sine {
            pos_amp_m: [0.12, 0.06, 0.09],
            pos_freq_hz: [0.37, 0.53, 0.23],
            euler_amp_deg: [24.0, 10.0, 7.0],
            euler_freq_hz: [0.31, 0.47, 0.19],
            noise_sigma: 0.0,
        }
    }
}

/// Generates a uniform synthetic trace of `duration_ms / period_ms + 1`
/// samples starting at t = 0.
pub fn generate_trace(
    kind: &MotionKind,
    duration_ms: f64,
    period_ms: f64,
    seed: u64,
    source_id: &str,
) -> Result<UniformTrace, TraceError> {
    if !period_ms.is_finite() || period_ms <= 0.0 {
        return Err(TraceError::InvalidPeriod(period_ms));
    }
    let n = (duration_ms / period_ms).floor() as usize + 1;
    let mut samples = Vec::with_capacity(n);
    match kind {
        MotionKind::Constant => {
            let rot = Quat::from_euler(&EulerAngles { yaw: 25.0, pitch: -10.0, roll: 5.0 });
            for i in 0..n {
                samples.push(PoseSample {
                    t_ms: i as f64 * period_ms,
                    pos: [0.3, 1.6, -0.4],
                    rot,
                });
            }
        }
        MotionKind::Ramp { velocity_mps, roll_rate_dps } => {
            for i in 0..n {
                let t_ms = i as f64 * period_ms;
                let t_s = t_ms / 1000.0;
                samples.push(PoseSample {
                    t_ms,
                    pos: [
                        velocity_mps[0] * t_s,
                        1.6 + velocity_mps[1] * t_s,
                        velocity_mps[2] * t_s,
                    ],
                    rot: Quat::from_euler(&EulerAngles {
                        yaw: 0.0,
                        pitch: 0.0,
                        roll: roll_rate_dps * t_s,
                    }),
                });
            }
        }
        MotionKind::Sine { pos_amp_m, pos_freq_hz, euler_amp_deg, euler_freq_hz, noise_sigma } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut phases = [0.0_f64; 6];
            for p in &mut phases {
                *p = rng.gen_range(0.0..std::f64::consts::TAU);
            }
            let normal = Normal::new(0.0, noise_sigma.max(f64::MIN_POSITIVE)).expect("finite sigma");
            let base_pos = [0.0, 1.6, 0.0];
            for i in 0..n {
                let t_ms = i as f64 * period_ms;
                let t_s = t_ms / 1000.0;
                let mut pos = [0.0; 3];
                for k in 0..3 {
                    pos[k] = base_pos[k]
                        + pos_amp_m[k] * (std::f64::consts::TAU * pos_freq_hz[k] * t_s + phases[k]).sin();
                }
                let mut euler = [0.0; 3];
                for k in 0..3 {
                    euler[k] = euler_amp_deg[k]
                        * (std::f64::consts::TAU * euler_freq_hz[k] * t_s + phases[3 + k]).sin();
                }
                if *noise_sigma > 0.0 {
                    for v in &mut pos {
                        *v += normal.sample(&mut rng);
                    }
                    for v in &mut euler {
                        *v += normal.sample(&mut rng);
                    }
                }
                samples.push(PoseSample {
                    t_ms,
                    pos,
                    rot: Quat::from_euler(&EulerAngles {
                        yaw: euler[0],
                        pitch: euler[1],
                        roll: euler[2],
                    }),
                });
            }
        }
        MotionKind::ArWander { pos_amp_m, euler_amp_deg } => {
            // Smooth stationary wander; the scaling below sets the
            // standard deviation of each channel.
            let phi = [1.5, -0.56];
            let mut channels = Vec::with_capacity(6);
            for k in 0..6 {
                let raw = ar_series(n, 0.0, &phi, 1.0, seed.wrapping_add(k as u64));
                let std = (raw.iter().map(|v| v * v).sum::<f64>() / raw.len() as f64).sqrt();
                let target = if k < 3 { *pos_amp_m } else { *euler_amp_deg };
                let scale = if std > 0.0 { target / std } else { 0.0 };
                channels.push(raw.into_iter().map(|v| v * scale).collect::<Vec<f64>>());
            }
            // Six parallel channel arrays share the index, so a plain
            // counted loop reads better than six zipped iterators.
            #[allow(clippy::needless_range_loop)]
            for i in 0..n {
                samples.push(PoseSample {
                    t_ms: i as f64 * period_ms,
                    pos: [channels[0][i], 1.6 + channels[1][i], channels[2][i]],
                    rot: Quat::from_euler(&EulerAngles {
                        yaw: channels[3][i],
                        pitch: channels[4][i].clamp(-80.0, 80.0),
                        roll: channels[5][i],
                    }),
                });
            }
        }
    }
    UniformTrace::from_samples(source_id, period_ms, samples)
}
