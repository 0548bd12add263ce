//! Motion-to-photon latency budget model.
//!
//! End-to-end latency of a remote-rendered frame decomposes into a
//! server part (rendering + encoding), a network part (uplink pose
//! delivery, downlink frame delivery, transport overhead), and a
//! client part (decoding + display scan-out):
//!
//! ```text
//! T_m2p     = T_server + T_network + T_client
//! T_server  = T_rend + T_enc
//! T_network = T_up + T_down + T_trans
//! T_client  = T_dec + T_disp
//! ```
//!
//! Two components follow directly from hardware rates. An encoder
//! sustaining `mean_fps` frames per second spends `1000 / mean_fps` ms
//! per frame. A display refreshing at `refresh_hz` adds on average half
//! a refresh interval (`500 / refresh_hz` ms) while a frame waits for
//! the next scan-out, and a full interval (`1000 / refresh_hz` ms) in
//! the worst case.
//!
//! The built-in encoder profiles are 1080p single-frame throughput
//! figures for common software and NVENC encoder presets, measured on
//! desktop-class hardware; treat them as planning defaults, not as
//! guarantees for your devices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatencyError {
    #[error("{field} must be finite and non-negative, got {value}")]
    InvalidComponent { field: &'static str, value: f64 },
    #[error("{field} must be finite and positive, got {value}")]
    InvalidRate { field: &'static str, value: f64 },
    #[error("unknown encoder profile {0:?} (run `builtin_profiles` for the known names)")]
    UnknownEncoder(String),
}

/// Additive latency components, all in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct LatencyBudget {
    pub t_rend_ms: f64,
    pub t_enc_ms: f64,
    pub t_up_ms: f64,
    pub t_down_ms: f64,
    pub t_trans_ms: f64,
    pub t_dec_ms: f64,
    pub t_disp_ms: f64,
}

type FieldGetter = fn(&LatencyBudget) -> f64;

impl LatencyBudget {
    const FIELDS: [(&'static str, FieldGetter); 7] = [
        ("t_rend_ms", |b| b.t_rend_ms),
        ("t_enc_ms", |b| b.t_enc_ms),
        ("t_up_ms", |b| b.t_up_ms),
        ("t_down_ms", |b| b.t_down_ms),
        ("t_trans_ms", |b| b.t_trans_ms),
        ("t_dec_ms", |b| b.t_dec_ms),
        ("t_disp_ms", |b| b.t_disp_ms),
    ];

    pub fn validate(&self) -> Result<(), LatencyError> {
        for (field, get) in Self::FIELDS {
            let value = get(self);
            if !value.is_finite() || value < 0.0 {
                return Err(LatencyError::InvalidComponent { field, value });
            }
        }
        Ok(())
    }

    /// Server-side share: rendering plus encoding.
    pub fn server_ms(&self) -> f64 {
        self.t_rend_ms + self.t_enc_ms
    }

    /// Network share: uplink, downlink, transport overhead.
    pub fn network_ms(&self) -> f64 {
        self.t_up_ms + self.t_down_ms + self.t_trans_ms
    }

    /// Client-side share: decoding plus display scan-out.
    pub fn client_ms(&self) -> f64 {
        self.t_dec_ms + self.t_disp_ms
    }

    /// Total motion-to-photon latency.
    pub fn total_m2p_ms(&self) -> f64 {
        self.server_ms() + self.network_ms() + self.client_ms()
    }
}

/// An encoder preset with its sustained single-stream throughput.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncoderProfile {
    pub name: String,
    pub mean_fps: f64,
}

impl EncoderProfile {
    pub fn new(name: impl Into<String>, mean_fps: f64) -> Self {
        EncoderProfile { name: name.into(), mean_fps }
    }
}

/// Built-in 1080p encoder throughput profiles.
pub fn builtin_profiles() -> Vec<EncoderProfile> {
    [
        ("x264_ultrafast", 81.0),
        ("nvenc_h264_default", 353.0),
        ("nvenc_h264_hp", 465.0),
        ("nvenc_h264_ll", 359.0),
        ("nvenc_h264_llhp", 281.0),
        ("x265_ultrafast", 33.0),
        ("svt_hevc_ldp", 74.0),
        ("nvenc_hevc_default", 212.0),
        ("nvenc_hevc_hp", 492.0),
        ("nvenc_hevc_ll", 278.0),
        ("nvenc_hevc_llhp", 211.0),
    ]
    .into_iter()
    .map(|(name, fps)| EncoderProfile::new(name, fps))
    .collect()
}

/// Looks up a built-in profile by name.
pub fn builtin_profile(name: &str) -> Result<EncoderProfile, LatencyError> {
    builtin_profiles()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| LatencyError::UnknownEncoder(name.to_string()))
}

/// Per-frame encode latency: `1000 / mean_fps` ms.
pub fn encode_latency_ms(profile: &EncoderProfile) -> Result<f64, LatencyError> {
    if !profile.mean_fps.is_finite() || profile.mean_fps <= 0.0 {
        return Err(LatencyError::InvalidRate { field: "mean_fps", value: profile.mean_fps });
    }
    Ok(1000.0 / profile.mean_fps)
}

/// Scan-out wait statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisplayMode {
    /// Expected wait: half a refresh interval.
    #[default]
    Average,
    /// Upper bound: one full refresh interval.
    Worst,
}

impl std::str::FromStr for DisplayMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "average" | "avg" => Ok(DisplayMode::Average),
            "worst" | "max" => Ok(DisplayMode::Worst),
            other => Err(format!("unknown display mode {other:?} (expected average or worst)")),
        }
    }
}

/// Display latency until scan-out for a given refresh rate.
pub fn display_latency_ms(refresh_hz: f64, mode: DisplayMode) -> Result<f64, LatencyError> {
    if !refresh_hz.is_finite() || refresh_hz <= 0.0 {
        return Err(LatencyError::InvalidRate { field: "refresh_hz", value: refresh_hz });
    }
    Ok(match mode {
        DisplayMode::Average => 500.0 / refresh_hz,
        DisplayMode::Worst => 1000.0 / refresh_hz,
    })
}

/// Encoder selection in a JSON config: either the name of a built-in
/// profile or a full custom profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EncoderSpec {
    Name(String),
    Profile(EncoderProfile),
}

impl EncoderSpec {
    pub fn resolve(&self) -> Result<EncoderProfile, LatencyError> {
        match self {
            EncoderSpec::Name(name) => builtin_profile(name),
            EncoderSpec::Profile(p) => Ok(p.clone()),
        }
    }
}

/// JSON-friendly description of a latency budget: explicit components,
/// optionally overridden by an encoder profile (fills `t_enc_ms`) and a
/// display refresh rate (fills `t_disp_ms`).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct LatencyConfig {
    pub budget: LatencyBudget,
    pub encoder: Option<EncoderSpec>,
    pub refresh_hz: Option<f64>,
    pub display_mode: DisplayMode,
}

impl LatencyConfig {
    /// Produces the final budget: the explicit components with the
    /// rate-derived encode and display terms substituted in.
    pub fn resolve(&self) -> Result<LatencyBudget, LatencyError> {
        let mut budget = self.budget;
        if let Some(encoder) = &self.encoder {
            budget.t_enc_ms = encode_latency_ms(&encoder.resolve()?)?;
        }
        if let Some(refresh_hz) = self.refresh_hz {
            budget.t_disp_ms = display_latency_ms(refresh_hz, self.display_mode)?;
        }
        budget.validate()?;
        Ok(budget)
    }
}
