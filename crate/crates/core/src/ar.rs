//! Autoregressive forecasting of scalar pose channels.
//!
//! An AR(rho) model explains each sample as an affine combination of
//! the previous rho samples plus noise:
//!
//! ```text
//! y_t = c + phi_1 * y_{t-1} + ... + phi_rho * y_{t-rho} + e_t
//! ```
//!
//! Fitting is conditional least squares: ordinary least squares on the
//! lagged design matrix, conditioning on the first rho samples. The
//! solve goes through an SVD, so rank-deficient designs (constant
//! series, exact ramps) yield the minimum-norm coefficient vector
//! instead of failing. Lag order selection minimizes
//! `AIC(rho) = n_eff * ln(sigma2(rho)) + 2 * (rho + 1)` over a shared
//! sample of the last `n - rho_max` targets, so candidate likelihoods
//! are comparable; ties go to the smaller order.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArError {
    #[error("lag order must be at least 1")]
    InvalidLagOrder,
    #[error("series has {got} samples, need at least {needed} to fit lag order {rho}")]
    InsufficientData { rho: usize, needed: usize, got: usize },
    #[error("series contains non-finite values")]
    NonFinite,
    #[error("least-squares solve failed: {0}")]
    SolveFailed(String),
    #[error("history has {got} samples, model needs exactly {expected}")]
    HistoryLengthMismatch { expected: usize, got: usize },
    #[error("step count must be at least 1")]
    InvalidStepCount,
}

/// A fitted AR(rho) model for one scalar channel.
///
/// `phi[i]` weights lag `i + 1`. `sigma2` is the in-sample residual
/// variance; `trained_on` labels the source channel (for example "x"
/// or "qx") purely for bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArModel {
    pub rho: usize,
    pub c: f64,
    pub phi: Vec<f64>,
    pub sigma2: f64,
    pub trained_on: String,
}

/// Least-squares fit over targets `series[first_target..]`, each
/// regressed on its rho predecessors. Returns `(c, phi, sigma2)`.
fn least_squares(
    series: &[f64],
    rho: usize,
    first_target: usize,
) -> Result<(f64, Vec<f64>, f64), ArError> {
    let n = series.len();
    let rows = n - first_target;
    let mut design = DMatrix::zeros(rows, rho + 1);
    let mut targets = DVector::zeros(rows);
    for (row, t) in (first_target..n).enumerate() {
        design[(row, 0)] = 1.0;
        for lag in 1..=rho {
            design[(row, lag)] = series[t - lag];
        }
        targets[row] = series[t];
    }
    let svd = design.svd(true, true);
    let sigma_max = svd.singular_values.max();
    // Singular values below the working precision of the decomposition
    // are rank noise; dropping them yields the minimum-norm solution.
    let eps = sigma_max * rows.max(rho + 1) as f64 * f64::EPSILON;
    let beta = svd
        .solve(&targets, eps)
        .map_err(|e| ArError::SolveFailed(e.to_string()))?;
    if !beta.iter().all(|v| v.is_finite()) {
        return Err(ArError::SolveFailed("non-finite coefficients".to_string()));
    }
    let c = beta[0];
    let phi: Vec<f64> = beta.as_slice()[1..].to_vec();
    let mut ssr = 0.0;
    for t in first_target..n {
        let mut pred = c;
        for (i, p) in phi.iter().enumerate() {
            pred += p * series[t - i - 1];
        }
        let r = series[t] - pred;
        ssr += r * r;
    }
    Ok((c, phi, ssr / rows as f64))
}

fn validate_series(series: &[f64], rho: usize) -> Result<(), ArError> {
    if rho == 0 {
        return Err(ArError::InvalidLagOrder);
    }
    let needed = 2 * rho + 1;
    if series.len() < needed {
        return Err(ArError::InsufficientData { rho, needed, got: series.len() });
    }
    if !series.iter().all(|v| v.is_finite()) {
        return Err(ArError::NonFinite);
    }
    Ok(())
}

impl ArModel {
    /// Fits an AR(rho) model by conditional least squares.
    ///
    /// Requires at least `2 * rho + 1` samples so the design has more
    /// rows than coefficients.
    pub fn fit(series: &[f64], rho: usize) -> Result<ArModel, ArError> {
        validate_series(series, rho)?;
        let (c, phi, sigma2) = least_squares(series, rho, rho)?;
        Ok(ArModel { rho, c, phi, sigma2, trained_on: String::new() })
    }

    /// Sets the channel label carried in serialized models.
    pub fn with_label(mut self, label: impl Into<String>) -> ArModel {
        self.trained_on = label.into();
        self
    }

    /// One-step-ahead forecast from a history of exactly rho samples,
    /// oldest first.
    pub fn forecast_one(&self, history: &[f64]) -> Result<f64, ArError> {
        if history.len() != self.rho {
            return Err(ArError::HistoryLengthMismatch { expected: self.rho, got: history.len() });
        }
        let mut value = self.c;
        for (i, p) in self.phi.iter().enumerate() {
            value += p * history[history.len() - 1 - i];
        }
        Ok(value)
    }

    /// Iterated multi-step forecast: each step appends the previous
    /// forecast to the window and drops the oldest sample. Returns the
    /// forecasts for steps `1..=steps`, in order.
    pub fn forecast_multi(&self, history: &[f64], steps: usize) -> Result<Vec<f64>, ArError> {
        if steps == 0 {
            return Err(ArError::InvalidStepCount);
        }
        if history.len() != self.rho {
            return Err(ArError::HistoryLengthMismatch { expected: self.rho, got: history.len() });
        }
        let mut window = history.to_vec();
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            let next = self.forecast_one(&window)?;
            out.push(next);
            window.rotate_left(1);
            *window.last_mut().expect("rho >= 1") = next;
        }
        Ok(out)
    }
}

/// Selects the AR lag order in `1..=rho_max` minimizing AIC.
///
/// All candidates are scored on the same targets (the last
/// `n - rho_max` samples) so their likelihood terms are comparable.
/// Ties resolve to the smaller order.
pub fn select_lag_aic(series: &[f64], rho_max: usize) -> Result<usize, ArError> {
    validate_series(series, rho_max)?;
    let n_eff = (series.len() - rho_max) as f64;
    let mut best = (1usize, f64::INFINITY);
    for rho in 1..=rho_max {
        let (_, _, sigma2) = least_squares(series, rho, rho_max)?;
        let aic = n_eff * sigma2.ln() + 2.0 * (rho as f64 + 1.0);
        if aic < best.1 {
            best = (rho, aic);
        }
    }
    Ok(best.0)
}
