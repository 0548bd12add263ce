//! Socket-based motion-to-photon latency probe.
//!
//! The probe plays a pose round-trip against a minimal remote-rendering
//! loop. The client sends a control message selecting a pose id; the
//! server continuously streams frame tokens (stand-ins for encoded
//! frames, carrying a bar-pattern payload derived from the pose id) at
//! its frame rate, switching the streamed pose once the control is
//! processed. The client inspects the newest received token only at
//! repaint ticks, the way a real compositor samples the newest decoded
//! frame at vsync, and records
//!
//! ```text
//! m2p = detection tick - control send time
//! ```
//!
//! on a single client-side clock, so no cross-host clock sync is
//! needed. One session takes `n` measurements, alternating between two
//! pose ids so a stale token can never satisfy the current request.
//!
//! The server can inject artificial uplink, processing, and downlink
//! delays. Injected delays are lower bounds on the measurement by
//! construction, which makes the probe self-validatable: point it at a
//! loopback server with known delays and the reported latencies must
//! dominate their sum.
//!
//! Wire format: every message is a 4-byte big-endian length prefix
//! followed by a body whose first byte is the message type (0 control,
//! 1 token). Control bodies carry `request_id: u32`, `pose_id: u16`,
//! `client_send_time_ms: f64`, all big-endian. Token bodies carry
//! `pose_id: u16`, `sequence: u32`, and the 64-byte pattern.

use std::io::{self, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicU16, Ordering};
use std::sync::{mpsc, Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bytes in a frame token's bar pattern: 8 vertical bars, 8 bytes each.
pub const PATTERN_LEN: usize = 64;

const BAR_LEN: usize = 8;
const BAR_COUNT: usize = PATTERN_LEN / BAR_LEN;

const CONTROL_TYPE: u8 = 0;
const TOKEN_TYPE: u8 = 1;
pub const CONTROL_BODY_LEN: usize = 1 + 4 + 2 + 8;
pub const TOKEN_BODY_LEN: usize = 1 + 2 + 4 + PATTERN_LEN;

/// Bodies above this length cannot belong to this protocol.
const MAX_BODY_LEN: usize = 256;

/// Granularity at which worker threads poll their cancellation flags.
const POLL_INTERVAL: Duration = Duration::from_millis(50);

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("i/o failure")]
    Io(#[from] io::Error),
    #[error("malformed message: {0}")]
    Malformed(String),
    #[error("framing lost: {0}")]
    FrameDesync(String),
    #[error("corrupt token payload: {0}")]
    CorruptPayload(String),
    #[error("connection closed by peer")]
    Disconnected,
    #[error("all {attempted} measurements timed out")]
    NoSamples { attempted: usize },
    #[error("invalid probe parameter: {0}")]
    InvalidParam(String),
}

/// Client request to switch the streamed pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlMessage {
    pub request_id: u32,
    pub pose_id: u16,
    /// Client-clock send time; informational, never used by the server.
    pub client_send_time_ms: f64,
}

/// One streamed frame stand-in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameToken {
    pub pose_id: u16,
    pub sequence: u32,
    pub pattern: [u8; PATTERN_LEN],
}

impl FrameToken {
    pub fn new(pose_id: u16, sequence: u32) -> Self {
        FrameToken { pose_id, sequence, pattern: pattern_for_pose(pose_id) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WireMessage {
    Control(ControlMessage),
    Token(FrameToken),
}

fn bar_colors(pose_id: u16) -> [u8; BAR_COUNT] {
    let mut colors = [0u8; BAR_COUNT];
    colors[0] = (pose_id >> 8) as u8;
    colors[1] = pose_id as u8;
    // The remaining bars are a pose-keyed pseudo-random ramp, so a
    // pattern cannot be forged by editing the two id bars alone.
    let mut state = pose_id as u32 ^ 0x9E37_79B9;
    for color in colors.iter_mut().skip(2) {
        state = state.wrapping_mul(1_664_525).wrapping_add(1_013_904_223);
        *color = (state >> 24) as u8;
    }
    colors
}

/// Renders the deterministic 8-bar pattern for a pose id.
pub fn pattern_for_pose(pose_id: u16) -> [u8; PATTERN_LEN] {
    let colors = bar_colors(pose_id);
    let mut pattern = [0u8; PATTERN_LEN];
    for (bar, color) in colors.iter().enumerate() {
        pattern[bar * BAR_LEN..(bar + 1) * BAR_LEN].fill(*color);
    }
    pattern
}

/// Recovers the pose id from a bar pattern, rejecting any pattern that
/// is not exactly the one [`pattern_for_pose`] would have produced.
pub fn decode_pattern(pattern: &[u8; PATTERN_LEN]) -> Result<u16, ProbeError> {
    let mut colors = [0u8; BAR_COUNT];
    for (bar, color) in colors.iter_mut().enumerate() {
        let chunk = &pattern[bar * BAR_LEN..(bar + 1) * BAR_LEN];
        if chunk.iter().any(|b| b != &chunk[0]) {
            return Err(ProbeError::CorruptPayload(format!("bar {bar} is not a uniform run")));
        }
        *color = chunk[0];
    }
    let pose_id = u16::from_be_bytes([colors[0], colors[1]]);
    if colors != bar_colors(pose_id) {
        return Err(ProbeError::CorruptPayload(format!(
            "bar colors do not match the pattern keyed by pose {pose_id}"
        )));
    }
    Ok(pose_id)
}

/// Checks that a token's pattern is intact and consistent with its
/// header, then reports whether it shows `expected_pose`.
pub fn verify_token(token: &FrameToken, expected_pose: u16) -> Result<bool, ProbeError> {
    let decoded = decode_pattern(&token.pattern)?;
    if decoded != token.pose_id {
        return Err(ProbeError::CorruptPayload(format!(
            "pattern encodes pose {decoded} but the header says {}",
            token.pose_id
        )));
    }
    Ok(decoded == expected_pose)
}

/// Serializes a message, length prefix included.
pub fn encode_message(msg: &WireMessage) -> Vec<u8> {
    let mut body = Vec::with_capacity(TOKEN_BODY_LEN);
    match msg {
        WireMessage::Control(c) => {
            body.push(CONTROL_TYPE);
            body.extend_from_slice(&c.request_id.to_be_bytes());
            body.extend_from_slice(&c.pose_id.to_be_bytes());
            body.extend_from_slice(&c.client_send_time_ms.to_be_bytes());
        }
        WireMessage::Token(t) => {
            body.push(TOKEN_TYPE);
            body.extend_from_slice(&t.pose_id.to_be_bytes());
            body.extend_from_slice(&t.sequence.to_be_bytes());
            body.extend_from_slice(&t.pattern);
        }
    }
    let mut out = Vec::with_capacity(4 + body.len());
    out.extend_from_slice(&(body.len() as u32).to_be_bytes());
    out.extend_from_slice(&body);
    out
}

fn parse_body(body: &[u8]) -> Result<WireMessage, ProbeError> {
    match body.first() {
        Some(&CONTROL_TYPE) => {
            if body.len() != CONTROL_BODY_LEN {
                return Err(ProbeError::Malformed(format!(
                    "control body is {} bytes, expected {CONTROL_BODY_LEN}",
                    body.len()
                )));
            }
            Ok(WireMessage::Control(ControlMessage {
                request_id: u32::from_be_bytes(body[1..5].try_into().expect("sized")),
                pose_id: u16::from_be_bytes(body[5..7].try_into().expect("sized")),
                client_send_time_ms: f64::from_be_bytes(body[7..15].try_into().expect("sized")),
            }))
        }
        Some(&TOKEN_TYPE) => {
            if body.len() != TOKEN_BODY_LEN {
                return Err(ProbeError::Malformed(format!(
                    "token body is {} bytes, expected {TOKEN_BODY_LEN}",
                    body.len()
                )));
            }
            Ok(WireMessage::Token(FrameToken {
                pose_id: u16::from_be_bytes(body[1..3].try_into().expect("sized")),
                sequence: u32::from_be_bytes(body[3..7].try_into().expect("sized")),
                pattern: body[7..].try_into().expect("sized"),
            }))
        }
        Some(&other) => Err(ProbeError::Malformed(format!("unknown message type {other}"))),
        None => Err(ProbeError::Malformed("empty body".to_string())),
    }
}

/// Reads one length-prefixed message from a blocking reader.
pub fn read_message<R: Read>(reader: &mut R) -> Result<WireMessage, ProbeError> {
    let mut len_buf = [0u8; 4];
    reader.read_exact(&mut len_buf).map_err(map_eof)?;
    let len = u32::from_be_bytes(len_buf) as usize;
    if len == 0 || len > MAX_BODY_LEN {
        return Err(ProbeError::FrameDesync(format!("length prefix {len} is outside 1..={MAX_BODY_LEN}")));
    }
    let mut body = vec![0u8; len];
    reader.read_exact(&mut body).map_err(map_eof)?;
    parse_body(&body)
}

fn map_eof(e: io::Error) -> ProbeError {
    if e.kind() == io::ErrorKind::UnexpectedEof {
        ProbeError::Disconnected
    } else {
        ProbeError::Io(e)
    }
}

/// `read_exact` that survives read timeouts (polling `cancel` between
/// attempts) without losing already-consumed bytes. Returns `false`
/// when cancelled.
fn read_exact_cancellable(
    stream: &mut TcpStream,
    buf: &mut [u8],
    cancel: &AtomicBool,
) -> Result<bool, ProbeError> {
    let mut filled = 0;
    while filled < buf.len() {
        if cancel.load(Ordering::Relaxed) {
            return Ok(false);
        }
        match stream.read(&mut buf[filled..]) {
            Ok(0) => return Err(ProbeError::Disconnected),
            Ok(n) => filled += n,
            Err(e)
                if matches!(
                    e.kind(),
                    io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut | io::ErrorKind::Interrupted
                ) => {}
            Err(e) => return Err(ProbeError::Io(e)),
        }
    }
    Ok(true)
}

/// Reads one message off a stream whose read timeout is set, polling
/// `cancel`. `Ok(None)` means cancelled.
fn read_message_cancellable(
    stream: &mut TcpStream,
    cancel: &AtomicBool,
) -> Result<Option<WireMessage>, ProbeError> {
    let mut len_buf = [0u8; 4];
    if !read_exact_cancellable(stream, &mut len_buf, cancel)? {
        return Ok(None);
    }
    let len = u32::from_be_bytes(len_buf) as usize;
    if len == 0 || len > MAX_BODY_LEN {
        return Err(ProbeError::FrameDesync(format!("length prefix {len} is outside 1..={MAX_BODY_LEN}")));
    }
    let mut body = vec![0u8; len];
    if !read_exact_cancellable(stream, &mut body, cancel)? {
        return Ok(None);
    }
    parse_body(&body).map(Some)
}

/// Artificial server-side delays, all in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DelayProfile {
    /// Added before a received control message is applied (uplink).
    pub up_ms: f64,
    /// Added after the uplink delay, before the pose switches (server
    /// processing).
    pub proc_ms: f64,
    /// Added between generating a frame token and sending it (downlink).
    pub down_ms: f64,
}

impl DelayProfile {
    pub fn total_ms(&self) -> f64 {
        self.up_ms + self.proc_ms + self.down_ms
    }

    fn validate(&self) -> Result<(), ProbeError> {
        for (name, v) in [("up_ms", self.up_ms), ("proc_ms", self.proc_ms), ("down_ms", self.down_ms)] {
            if !v.is_finite() || v < 0.0 {
                return Err(ProbeError::InvalidParam(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServerConfig {
    /// Frame token emission rate.
    pub fps: f64,
    pub delays: DelayProfile,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { fps: 60.0, delays: DelayProfile::default() }
    }
}

/// A running probe server. Dropping it stops the accept loop and all
/// connection workers.
pub struct ProbeServer {
    local_addr: SocketAddr,
    stop: Arc<AtomicBool>,
    accept_handle: Option<thread::JoinHandle<()>>,
}

impl ProbeServer {
    /// Binds `listen` (e.g. `127.0.0.1:0` for an ephemeral port) and
    /// starts accepting probe clients in the background.
    pub fn spawn(listen: &str, config: ServerConfig) -> Result<ProbeServer, ProbeError> {
        if !config.fps.is_finite() || config.fps <= 0.0 {
            return Err(ProbeError::InvalidParam(format!(
                "fps must be finite and positive, got {}",
                config.fps
            )));
        }
        config.delays.validate()?;
        let listener = TcpListener::bind(listen)?;
        let local_addr = listener.local_addr()?;
        listener.set_nonblocking(true)?;
        let stop = Arc::new(AtomicBool::new(false));
        let stop_accept = Arc::clone(&stop);
        let accept_handle = thread::Builder::new()
            .name("probe-accept".to_string())
            .spawn(move || {
                let mut workers: Vec<thread::JoinHandle<()>> = Vec::new();
                while !stop_accept.load(Ordering::Relaxed) {
                    match listener.accept() {
                        Ok((stream, peer)) => {
                            log::info!("probe client connected from {peer}");
                            let stop = Arc::clone(&stop_accept);
                            let handle = thread::Builder::new()
                                .name("probe-conn".to_string())
                                .spawn(move || handle_connection(stream, config, stop))
                                .expect("spawn connection worker");
                            workers.push(handle);
                        }
                        Err(e) if e.kind() == io::ErrorKind::WouldBlock => {
                            thread::sleep(Duration::from_millis(25));
                        }
                        Err(e) => {
                            log::error!("probe accept failed: {e}");
                            break;
                        }
                    }
                }
                for handle in workers {
                    let _ = handle.join();
                }
            })
            .expect("spawn accept loop");
        Ok(ProbeServer { local_addr, stop, accept_handle: Some(accept_handle) })
    }

    pub fn local_addr(&self) -> SocketAddr {
        self.local_addr
    }

    /// Stops the accept loop and joins every worker.
    pub fn shutdown(mut self) {
        self.stop_and_join();
    }

    fn stop_and_join(&mut self) {
        self.stop.store(true, Ordering::Relaxed);
        if let Some(handle) = self.accept_handle.take() {
            let _ = handle.join();
        }
    }
}

impl Drop for ProbeServer {
    fn drop(&mut self) {
        self.stop_and_join();
    }
}

/// Serves one client: a receive worker applies pose switches (after
/// the uplink + processing delays), a send worker enforces the downlink
/// delay, and this thread emits tokens on the frame clock. The current
/// pose lives in one atomic cell, so emission never blocks on receipt.
fn handle_connection(stream: TcpStream, config: ServerConfig, stop: Arc<AtomicBool>) {
    if let Err(e) = stream.set_nodelay(true) {
        log::warn!("set_nodelay failed: {e}");
    }
    let pose = Arc::new(AtomicU16::new(0));
    let done = Arc::new(AtomicBool::new(false));

    let recv_handle = {
        let mut stream = match stream.try_clone() {
            Ok(s) => s,
            Err(e) => {
                log::error!("probe connection clone failed: {e}");
                return;
            }
        };
        let _ = stream.set_read_timeout(Some(POLL_INTERVAL));
        let pose = Arc::clone(&pose);
        let done = Arc::clone(&done);
        let stop = Arc::clone(&stop);
        let delays = config.delays;
        thread::Builder::new()
            .name("probe-recv".to_string())
            .spawn(move || {
                loop {
                    if stop.load(Ordering::Relaxed) || done.load(Ordering::Relaxed) {
                        break;
                    }
                    match read_message_cancellable(&mut stream, &stop) {
                        Ok(Some(WireMessage::Control(control))) => {
                            let delay = delays.up_ms + delays.proc_ms;
                            if delay > 0.0 {
                                thread::sleep(Duration::from_secs_f64(delay / 1000.0));
                            }
                            pose.store(control.pose_id, Ordering::Relaxed);
                            log::debug!(
                                "request {} switched pose to {}",
                                control.request_id,
                                control.pose_id
                            );
                        }
                        Ok(Some(WireMessage::Token(_))) => {
                            log::warn!("ignoring frame token sent by a client");
                        }
                        Ok(None) => break,
                        Err(ProbeError::Malformed(msg)) => {
                            log::warn!("skipping malformed message: {msg}");
                        }
                        Err(ProbeError::Disconnected) => break,
                        Err(e) => {
                            log::warn!("probe receive worker stopping: {e}");
                            break;
                        }
                    }
                }
                done.store(true, Ordering::Relaxed);
            })
            .expect("spawn receive worker")
    };

    let (frame_tx, frame_rx) = mpsc::channel::<(Instant, Vec<u8>)>();
    let send_handle = {
        let mut stream = match stream.try_clone() {
            Ok(s) => s,
            Err(e) => {
                log::error!("probe connection clone failed: {e}");
                done.store(true, Ordering::Relaxed);
                let _ = recv_handle.join();
                return;
            }
        };
        let done = Arc::clone(&done);
        thread::Builder::new()
            .name("probe-send".to_string())
            .spawn(move || {
                while let Ok((deadline, bytes)) = frame_rx.recv() {
                    let now = Instant::now();
                    if deadline > now {
                        thread::sleep(deadline - now);
                    }
                    if let Err(e) = stream.write_all(&bytes) {
                        log::debug!("probe send worker stopping: {e}");
                        break;
                    }
                }
                done.store(true, Ordering::Relaxed);
            })
            .expect("spawn send worker")
    };

    let interval = Duration::from_secs_f64(1.0 / config.fps);
    let down = Duration::from_secs_f64(config.delays.down_ms / 1000.0);
    let mut sequence = 0u32;
    let mut next_emit = Instant::now();
    while !stop.load(Ordering::Relaxed) && !done.load(Ordering::Relaxed) {
        let now = Instant::now();
        if now < next_emit {
            thread::sleep((next_emit - now).min(POLL_INTERVAL));
            continue;
        }
        let token = FrameToken::new(pose.load(Ordering::Relaxed), sequence);
        sequence = sequence.wrapping_add(1);
        if frame_tx.send((now + down, encode_message(&WireMessage::Token(token)))).is_err() {
            break;
        }
        // Never burst to catch up after a stall; cadence over backlog.
        next_emit = if next_emit + interval > now { next_emit + interval } else { now + interval };
    }
    done.store(true, Ordering::Relaxed);
    drop(frame_tx);
    let _ = recv_handle.join();
    let _ = send_handle.join();
}

/// Client-side measurement parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClientConfig {
    /// Measurements to take.
    pub n_measurements: usize,
    /// Repaint tick rate at which the newest token is inspected.
    pub repaint_hz: f64,
    /// Idle time between measurements.
    pub gap_ms: f64,
    /// Per-measurement give-up horizon; timed-out measurements are
    /// dropped, not clamped.
    pub timeout_ms: f64,
}

impl Default for ClientConfig {
    fn default() -> Self {
        ClientConfig { n_measurements: 100, repaint_hz: 60.0, gap_ms: 20.0, timeout_ms: 5000.0 }
    }
}

/// Result of one probe session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Successful measurements, in ms, in measurement order.
    pub samples_ms: Vec<f64>,
    pub min_ms: f64,
    pub avg_ms: f64,
    pub max_ms: f64,
    /// Number of successful measurements (`samples_ms.len()`).
    pub n: usize,
    /// Measurements that hit the timeout.
    pub dropped: usize,
    pub repaint_hz: f64,
}

/// Runs a full measurement session against a probe server.
pub fn probe_client(connect: &str, config: &ClientConfig) -> Result<ProbeReport, ProbeError> {
    if config.n_measurements == 0 {
        return Err(ProbeError::InvalidParam("n_measurements must be at least 1".to_string()));
    }
    if !config.repaint_hz.is_finite() || config.repaint_hz <= 0.0 {
        return Err(ProbeError::InvalidParam(format!(
            "repaint_hz must be finite and positive, got {}",
            config.repaint_hz
        )));
    }
    if !config.gap_ms.is_finite() || config.gap_ms < 0.0 {
        return Err(ProbeError::InvalidParam(format!(
            "gap_ms must be finite and non-negative, got {}",
            config.gap_ms
        )));
    }
    if !config.timeout_ms.is_finite() || config.timeout_ms <= 0.0 {
        return Err(ProbeError::InvalidParam(format!(
            "timeout_ms must be finite and positive, got {}",
            config.timeout_ms
        )));
    }

    let mut stream = TcpStream::connect(connect)?;
    stream.set_nodelay(true)?;
    let latest: Arc<Mutex<Option<FrameToken>>> = Arc::new(Mutex::new(None));
    let stop = Arc::new(AtomicBool::new(false));
    let closed = Arc::new(AtomicBool::new(false));

    let reader_handle = {
        let mut reader = stream.try_clone()?;
        reader.set_read_timeout(Some(POLL_INTERVAL))?;
        let latest = Arc::clone(&latest);
        let stop = Arc::clone(&stop);
        let closed = Arc::clone(&closed);
        thread::Builder::new()
            .name("probe-client-recv".to_string())
            .spawn(move || {
                loop {
                    match read_message_cancellable(&mut reader, &stop) {
                        Ok(Some(WireMessage::Token(token))) => {
                            *latest.lock().expect("latest token lock") = Some(token);
                        }
                        Ok(Some(WireMessage::Control(_))) => {
                            log::warn!("ignoring control message sent by the server");
                        }
                        Ok(None) => break,
                        Err(ProbeError::Malformed(msg)) => {
                            log::warn!("skipping malformed message: {msg}");
                        }
                        Err(e) => {
                            log::debug!("probe client reader stopping: {e}");
                            break;
                        }
                    }
                }
                closed.store(true, Ordering::Relaxed);
            })
            .expect("spawn client reader")
    };

    let session_start = Instant::now();
    let tick = Duration::from_secs_f64(1.0 / config.repaint_hz);
    let mut samples = Vec::with_capacity(config.n_measurements);
    let mut dropped = 0usize;
    let mut result: Result<(), ProbeError> = Ok(());

    'session: for m in 0..config.n_measurements {
        // Alternate between two pose ids so the previous measurement's
        // tokens can never satisfy this one.
        let pose_id = 1 + (m % 2) as u16;
        let control = ControlMessage {
            request_id: m as u32 + 1,
            pose_id,
            client_send_time_ms: session_start.elapsed().as_secs_f64() * 1000.0,
        };
        let sent_at = Instant::now();
        if let Err(e) = stream.write_all(&encode_message(&WireMessage::Control(control))) {
            result = Err(ProbeError::Io(e));
            break 'session;
        }

        let detected = loop {
            // Next repaint tick strictly after now, on the free-running
            // session tick grid.
            let since_start = session_start.elapsed();
            let k = (since_start.as_secs_f64() / tick.as_secs_f64()).floor() + 1.0;
            let target = tick.mul_f64(k);
            thread::sleep(target.saturating_sub(since_start));

            let now = Instant::now();
            let token = *latest.lock().expect("latest token lock");
            if let Some(token) = token {
                match verify_token(&token, pose_id) {
                    Ok(true) => break Some(now.duration_since(sent_at).as_secs_f64() * 1000.0),
                    Ok(false) => {}
                    Err(e) => {
                        result = Err(e);
                        break 'session;
                    }
                }
            }
            if now.duration_since(sent_at).as_secs_f64() * 1000.0 > config.timeout_ms {
                break None;
            }
            if closed.load(Ordering::Relaxed) {
                result = Err(ProbeError::Disconnected);
                break 'session;
            }
        };
        match detected {
            Some(ms) => samples.push(ms),
            None => dropped += 1,
        }
        if config.gap_ms > 0.0 {
            thread::sleep(Duration::from_secs_f64(config.gap_ms / 1000.0));
        }
    }

    stop.store(true, Ordering::Relaxed);
    drop(stream);
    let _ = reader_handle.join();
    result?;

    if samples.is_empty() {
        return Err(ProbeError::NoSamples { attempted: config.n_measurements });
    }
    let min_ms = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ms = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let avg_ms = samples.iter().sum::<f64>() / samples.len() as f64;
    Ok(ProbeReport {
        n: samples.len(),
        samples_ms: samples,
        min_ms,
        avg_ms,
        max_ms,
        dropped,
        repaint_hz: config.repaint_hz,
    })
}
