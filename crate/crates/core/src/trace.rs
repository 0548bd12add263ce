//! Pose traces: timestamped 6DoF samples, CSV ingestion, and
//! resampling onto a uniform grid.
//!
//! The canonical CSV schema is `t_ms,x,y,z,qx,qy,qz,qw` with `#`
//! comment lines. Recorded datasets rarely agree on header names, so
//! [`TraceFormat::Auto`] additionally accepts common aliases (and
//! seconds-based time columns) and maps them onto the same eight
//! channels.
//!
//! Resampling runs linear interpolation on positions and slerp on
//! rotations over a grid anchored at the first raw timestamp. The grid
//! never extends past the recorded span; extrapolation is a lie about
//! data that was never observed.

use std::fs::File;
use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::quat::{self, Quat, QuatError};

/// Default resampling period: 200 Hz, matching common HMD tracker rates.
pub const DEFAULT_SAMPLE_PERIOD_MS: f64 = 5.0;

/// Unit-norm tolerance accepted on ingested quaternions.
pub const INGEST_UNIT_TOLERANCE: f64 = 1e-6;

/// Grid timestamps must match `t0 + i * period` this tightly (ms).
const GRID_TOLERANCE_MS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("failed to read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {msg}")]
    Parse { path: String, line: u64, msg: String },
    #[error("{path}: line {line}: timestamp {t} ms does not increase over previous {prev} ms")]
    NonIncreasingTime { path: String, line: u64, t: f64, prev: f64 },
    #[error("trace {0:?} contains no samples")]
    Empty(String),
    #[error("trace {id:?} has {n} samples, need at least {min}")]
    InsufficientSamples { id: String, n: usize, min: usize },
    #[error("unknown channel {0:?} (expected x, y, z, qx, qy, qz, qw)")]
    UnknownChannel(String),
    #[error("sample period must be positive and finite, got {0}")]
    InvalidPeriod(f64),
    #[error("sample {index}: timestamp {t} ms is off the uniform grid (expected {expected} ms)")]
    OffGrid { index: usize, t: f64, expected: f64 },
    #[error(transparent)]
    Quat(#[from] QuatError),
}

/// One tracked head pose: milliseconds, meters, unit quaternion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseSample {
    pub t_ms: f64,
    pub pos: [f64; 3],
    pub rot: Quat,
}

/// A trace as recorded: strictly increasing timestamps, arbitrary
/// spacing. Quaternions are normalized on construction.
#[derive(Debug, Clone)]
pub struct RawTrace {
    source_id: String,
    samples: Vec<PoseSample>,
}

/// A trace on a uniform grid: `t_i = t0 + i * period`, consecutive
/// rotations hemisphere-aligned. This is the form every downstream
/// consumer (training, prediction, evaluation) expects.
#[derive(Debug, Clone)]
pub struct UniformTrace {
    source_id: String,
    period_ms: f64,
    samples: Vec<PoseSample>,
}

/// Scalar channels a trace can be projected onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    X,
    Y,
    Z,
    Qx,
    Qy,
    Qz,
    Qw,
}

impl Channel {
    pub const ALL: [Channel; 7] = [
        Channel::X,
        Channel::Y,
        Channel::Z,
        Channel::Qx,
        Channel::Qy,
        Channel::Qz,
        Channel::Qw,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Channel::X => "x",
            Channel::Y => "y",
            Channel::Z => "z",
            Channel::Qx => "qx",
            Channel::Qy => "qy",
            Channel::Qz => "qz",
            Channel::Qw => "qw",
        }
    }

    fn extract(&self, s: &PoseSample) -> f64 {
        match self {
            Channel::X => s.pos[0],
            Channel::Y => s.pos[1],
            Channel::Z => s.pos[2],
            Channel::Qx => s.rot.x,
            Channel::Qy => s.rot.y,
            Channel::Qz => s.rot.z,
            Channel::Qw => s.rot.w,
        }
    }
}

impl std::str::FromStr for Channel {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" => Ok(Channel::X),
            "y" => Ok(Channel::Y),
            "z" => Ok(Channel::Z),
            "qx" => Ok(Channel::Qx),
            "qy" => Ok(Channel::Qy),
            "qz" => Ok(Channel::Qz),
            "qw" => Ok(Channel::Qw),
            other => Err(TraceError::UnknownChannel(other.to_string())),
        }
    }
}

/// CSV header handling for [`load_trace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceFormat {
    /// Exact canonical header `t_ms,x,y,z,qx,qy,qz,qw`.
    Standard,
    /// Header-alias detection: accepts e.g. `timestamp`, `pos_x`,
    /// `rot_x`, and seconds-based time columns, in any column order.
    #[default]
    Auto,
}

const CANONICAL_HEADER: [&str; 8] = ["t_ms", "x", "y", "z", "qx", "qy", "qz", "qw"];
/// [`CANONICAL_HEADER`] after [`canonical_key`] normalization.
const CANONICAL_KEYS: [&str; 8] = ["tms", "x", "y", "z", "qx", "qy", "qz", "qw"];

impl RawTrace {
    /// Validates timestamps (finite, strictly increasing), normalizes
    /// rotations, and wraps the samples.
    pub fn new(source_id: impl Into<String>, samples: Vec<PoseSample>) -> Result<Self, TraceError> {
        let source_id = source_id.into();
        if samples.is_empty() {
            return Err(TraceError::Empty(source_id));
        }
        let mut out = Vec::with_capacity(samples.len());
        for (i, s) in samples.into_iter().enumerate() {
            let line = (i + 1) as u64;
            if !s.t_ms.is_finite() || !s.pos.iter().all(|v| v.is_finite()) {
                return Err(TraceError::Parse {
                    path: source_id,
                    line,
                    msg: "non-finite sample value".to_string(),
                });
            }
            if let Some(prev) = out.last() {
                let prev: &PoseSample = prev;
                if s.t_ms <= prev.t_ms {
                    return Err(TraceError::NonIncreasingTime {
                        path: source_id,
                        line,
                        t: s.t_ms,
                        prev: prev.t_ms,
                    });
                }
            }
            let rot = s.rot.normalize()?;
            out.push(PoseSample { rot, ..s });
        }
        Ok(RawTrace { source_id, samples: out })
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn samples(&self) -> &[PoseSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

impl UniformTrace {
    /// Wraps samples that must already sit on a uniform grid. Rotations
    /// are normalized and hemisphere-aligned here, so callers only need
    /// to supply per-sample orientations.
    pub fn from_samples(
        source_id: impl Into<String>,
        period_ms: f64,
        samples: Vec<PoseSample>,
    ) -> Result<Self, TraceError> {
        let source_id = source_id.into();
        if !period_ms.is_finite() || period_ms <= 0.0 {
            return Err(TraceError::InvalidPeriod(period_ms));
        }
        if samples.is_empty() {
            return Err(TraceError::Empty(source_id));
        }
        let t0 = samples[0].t_ms;
        for (i, s) in samples.iter().enumerate() {
            let expected = t0 + i as f64 * period_ms;
            if (s.t_ms - expected).abs() > GRID_TOLERANCE_MS {
                return Err(TraceError::OffGrid { index: i, t: s.t_ms, expected });
            }
        }
        let rots: Vec<Quat> = samples
            .iter()
            .map(|s| s.rot.renormalize())
            .collect::<Result<_, _>>()?;
        let rots = quat::align_hemisphere(&rots);
        let samples = samples
            .into_iter()
            .zip(rots)
            .map(|(s, rot)| PoseSample { rot, ..s })
            .collect();
        Ok(UniformTrace { source_id, period_ms, samples })
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn period_ms(&self) -> f64 {
        self.period_ms
    }

    pub fn t0_ms(&self) -> f64 {
        self.samples[0].t_ms
    }

    pub fn samples(&self) -> &[PoseSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Projects the trace onto one scalar channel.
    pub fn channel(&self, channel: Channel) -> Vec<f64> {
        self.samples.iter().map(|s| channel.extract(s)).collect()
    }

    /// [`UniformTrace::channel`] with a textual channel name.
    pub fn channel_named(&self, name: &str) -> Result<Vec<f64>, TraceError> {
        Ok(self.channel(name.parse()?))
    }

    /// Writes the trace in the canonical CSV schema.
    pub fn write_csv(&self, path: &Path) -> Result<(), TraceError> {
        let io_err = |source| TraceError::Io { path: path.display().to_string(), source };
        let mut file = File::create(path).map_err(io_err)?;
        let mut body = String::with_capacity(self.samples.len() * 64);
        body.push_str("t_ms,x,y,z,qx,qy,qz,qw\n");
        for s in &self.samples {
            body.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                s.t_ms, s.pos[0], s.pos[1], s.pos[2], s.rot.x, s.rot.y, s.rot.z, s.rot.w
            ));
        }
        file.write_all(body.as_bytes()).map_err(io_err)
    }
}

/// Column roles a trace CSV must provide.
#[derive(Debug, Clone, Copy)]
struct ColumnMap {
    time: usize,
    /// Multiplier turning the time column into milliseconds.
    time_scale: f64,
    pos: [usize; 3],
    rot: [usize; 4],
}

fn canonical_key(raw: &str) -> String {
    raw.trim()
        .trim_start_matches('\u{feff}')
        .chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase()
}

fn find_column(
    headers: &[String],
    aliases: &[&str],
    role: &str,
    path: &str,
) -> Result<usize, TraceError> {
    for alias in aliases {
        if let Some(idx) = headers.iter().position(|h| h == alias) {
            return Ok(idx);
        }
    }
    Err(TraceError::Parse {
        path: path.to_string(),
        line: 1,
        msg: format!("no column found for {role} (tried aliases like {:?})", aliases[0]),
    })
}

fn resolve_columns(
    headers: &csv::StringRecord,
    format: TraceFormat,
    path: &str,
) -> Result<ColumnMap, TraceError> {
    let keys: Vec<String> = headers.iter().map(canonical_key).collect();
    match format {
        TraceFormat::Standard => {
            if keys != CANONICAL_KEYS {
                return Err(TraceError::Parse {
                    path: path.to_string(),
                    line: 1,
                    msg: format!(
                        "header {:?} does not match the canonical schema {:?}",
                        headers.iter().collect::<Vec<_>>(),
                        CANONICAL_HEADER.join(",")
                    ),
                });
            }
            Ok(ColumnMap { time: 0, time_scale: 1.0, pos: [1, 2, 3], rot: [4, 5, 6, 7] })
        }
        TraceFormat::Auto => {
            let ms_aliases = ["tms", "t", "time", "timems", "timestamp", "timestampms", "ms"];
            let s_aliases = ["ts", "times", "timesec", "timestamps", "timestampsec", "sec", "seconds"];
            let (time, time_scale) = if let Ok(idx) = find_column(&keys, &ms_aliases, "time", path) {
                (idx, 1.0)
            } else {
                (find_column(&keys, &s_aliases, "time (ms or s)", path)?, 1000.0)
            };
            let pos = [
                find_column(&keys, &["x", "posx", "px", "positionx", "tx"], "x", path)?,
                find_column(&keys, &["y", "posy", "py", "positiony", "ty"], "y", path)?,
                find_column(&keys, &["z", "posz", "pz", "positionz", "tz"], "z", path)?,
            ];
            let rot = [
                find_column(&keys, &["qx", "rotx", "quatx", "orientationx"], "qx", path)?,
                find_column(&keys, &["qy", "roty", "quaty", "orientationy"], "qy", path)?,
                find_column(&keys, &["qz", "rotz", "quatz", "orientationz"], "qz", path)?,
                find_column(&keys, &["qw", "rotw", "quatw", "orientationw"], "qw", path)?,
            ];
            Ok(ColumnMap { time, time_scale, pos, rot })
        }
    }
}

/// Loads a trace CSV. The trace id is the file stem.
pub fn load_trace(path: &Path, format: TraceFormat) -> Result<RawTrace, TraceError> {
    let path_str = path.display().to_string();
    let file = File::open(path).map_err(|source| TraceError::Io { path: path_str.clone(), source })?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| TraceError::Parse { path: path_str.clone(), line: 1, msg: e.to_string() })?
        .clone();
    let cols = resolve_columns(&headers, format, &path_str)?;

    let parse_field = |record: &csv::StringRecord, idx: usize, line: u64, role: &str| -> Result<f64, TraceError> {
        let raw = record.get(idx).ok_or_else(|| TraceError::Parse {
            path: path_str.clone(),
            line,
            msg: format!("missing field {role}"),
        })?;
        let value: f64 = raw.parse().map_err(|_| TraceError::Parse {
            path: path_str.clone(),
            line,
            msg: format!("cannot parse {role} value {raw:?} as a number"),
        })?;
        if !value.is_finite() {
            return Err(TraceError::Parse {
                path: path_str.clone(),
                line,
                msg: format!("{role} value {raw:?} is not finite"),
            });
        }
        Ok(value)
    };

    let mut samples: Vec<PoseSample> = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| TraceError::Parse {
            path: path_str.clone(),
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let t_ms = parse_field(&record, cols.time, line, "time")? * cols.time_scale;
        let pos = [
            parse_field(&record, cols.pos[0], line, "x")?,
            parse_field(&record, cols.pos[1], line, "y")?,
            parse_field(&record, cols.pos[2], line, "z")?,
        ];
        let rot = Quat::new(
            parse_field(&record, cols.rot[0], line, "qx")?,
            parse_field(&record, cols.rot[1], line, "qy")?,
            parse_field(&record, cols.rot[2], line, "qz")?,
            parse_field(&record, cols.rot[3], line, "qw")?,
        );
        if !rot.is_unit(INGEST_UNIT_TOLERANCE) {
            // Norm drift beyond the tolerance means the columns do not
            // hold a rotation; silently normalizing would mask that.
            return Err(TraceError::Parse {
                path: path_str.clone(),
                line,
                msg: format!("quaternion norm {} deviates from 1 by more than {INGEST_UNIT_TOLERANCE:.0e}", rot.norm()),
            });
        }
        if let Some(prev) = samples.last() {
            if t_ms <= prev.t_ms {
                return Err(TraceError::NonIncreasingTime {
                    path: path_str.clone(),
                    line,
                    t: t_ms,
                    prev: prev.t_ms,
                });
            }
        }
        samples.push(PoseSample { t_ms, pos, rot: rot.normalize()? });
    }
    if samples.is_empty() {
        return Err(TraceError::Empty(path_str));
    }
    let source_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or(path_str);
    RawTrace::new(source_id, samples)
}

/// Resamples a raw trace onto the uniform grid `t0 + i * period_ms`,
/// where `t0` is the first raw timestamp. Positions interpolate
/// linearly, rotations via slerp on hemisphere-aligned neighbors. Grid
/// points coinciding with raw timestamps reproduce those samples
/// exactly; the grid stops at the last raw timestamp.
pub fn resample(raw: &RawTrace, period_ms: f64) -> Result<UniformTrace, TraceError> {
    if !period_ms.is_finite() || period_ms <= 0.0 {
        return Err(TraceError::InvalidPeriod(period_ms));
    }
    if raw.len() < 2 {
        return Err(TraceError::InsufficientSamples {
            id: raw.source_id.clone(),
            n: raw.len(),
            min: 2,
        });
    }
    let samples = raw.samples();
    let rots = quat::align_hemisphere(&samples.iter().map(|s| s.rot).collect::<Vec<_>>());
    let t0 = samples[0].t_ms;
    let t_last = samples[samples.len() - 1].t_ms;

    let mut out = Vec::with_capacity(((t_last - t0) / period_ms) as usize + 1);
    let mut seg = 0usize;
    for i in 0u64.. {
        let t = t0 + i as f64 * period_ms;
        if t > t_last {
            break;
        }
        while samples[seg + 1].t_ms < t {
            seg += 1;
        }
        let (a, b) = (&samples[seg], &samples[seg + 1]);
        let sample = if t == a.t_ms {
            PoseSample { t_ms: t, pos: a.pos, rot: rots[seg] }
        } else if t == b.t_ms {
            PoseSample { t_ms: t, pos: b.pos, rot: rots[seg + 1] }
        } else {
            let u = (t - a.t_ms) / (b.t_ms - a.t_ms);
            let pos = [
                (1.0 - u) * a.pos[0] + u * b.pos[0],
                (1.0 - u) * a.pos[1] + u * b.pos[1],
                (1.0 - u) * a.pos[2] + u * b.pos[2],
            ];
            PoseSample { t_ms: t, pos, rot: quat::slerp(&rots[seg], &rots[seg + 1], u)? }
        };
        out.push(sample);
    }
    UniformTrace::from_samples(raw.source_id.clone(), period_ms, out)
}
