//! Head-pose forecasting and motion-to-photon latency toolkit for
//! low-latency remote rendering.
//!
//! The crate covers the full measurement loop of a remote-rendered AR
//! client: ingest recorded 6DoF head traces ([`trace`]), fit
//! autoregressive forecasters to the pose channels ([`ar`]), predict
//! poses one network latency ahead ([`predictor`]), score predictions
//! against a latency-lagged baseline ([`eval`]), budget the
//! motion-to-photon latency of the pipeline ([`latency`]), and measure
//! it end to end over a socket ([`probe`]). [`synth`] generates seeded
//! synthetic traces for tests and experiments, and [`quat`] supplies
//! the quaternion math everything else leans on.

pub mod ar;
pub mod eval;
pub mod latency;
pub mod predictor;
pub mod probe;
pub mod quat;
pub mod synth;
pub mod trace;
