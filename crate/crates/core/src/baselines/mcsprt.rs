// SPDX-License-Identifier: MIT OR Apache-2.0

use serde::{Deserialize, Serialize};

use crate::data::Rows;
use crate::error::{Error, Result};

/// Gaussian mean-shift CUSUM on standardized inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McsprtConfig {
    /// Rows used to estimate the in-control mean and variances; `None` picks
    /// `max(2n, m / 10)`.
    #[serde(default)]
    pub burn_in: Option<usize>,
    /// Alarm level; `None` picks `ln(2 n N / alpha)` with `N` monitored rows.
    #[serde(default)]
    pub threshold: Option<f64>,
    /// Shift size, in standard deviations, each one-sided chart is tuned to.
    #[serde(default = "unit")]
    pub shift: f64,
    /// False-alarm level of the default threshold.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn unit() -> f64 {
    1.0
}

fn default_alpha() -> f64 {
    0.01
}

impl Default for McsprtConfig {
    fn default() -> Self {
        Self {
            burn_in: None,
            threshold: None,
            shift: 1.0,
            alpha: 0.01,
        }
    }
}

impl McsprtConfig {
    pub fn resolved_burn_in(&self, m: usize, n: usize) -> usize {
        self.burn_in.unwrap_or_else(|| (2 * n).max(m / 10).min(m.saturating_sub(1)))
    }

    pub fn resolved_threshold(&self, m: usize, n: usize) -> f64 {
        self.threshold.unwrap_or_else(|| {
            let monitored = m.saturating_sub(self.resolved_burn_in(m, n)).max(1);
            (2.0 * n.max(1) as f64 * monitored as f64 / self.alpha).ln()
        })
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if let Some(b) = self.burn_in {
            if b >= m {
                return Err(Error::invalid(format!("burn-in {b} must be smaller than m = {m}")));
            }
            if b < 2 {
                return Err(Error::invalid("burn-in needs at least two rows"));
            }
        }
        if !(self.shift > 0.0) || !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid("shift must be > 0 and alpha in (0, 1)"));
        }
        if self.threshold.is_some_and(|h| h.is_nan()) {
            return Err(Error::invalid("threshold is NaN"));
        }
        Ok(())
    }
}

/// First one-based row index at which any per-coordinate two-sided CUSUM
/// exceeds the threshold, or `None`.
///
/// Only the input rows are read. Each coordinate is standardized by the
/// burn-in mean and standard deviation, and runs an upward and a downward
/// chart `S = max(0, S +/- shift * z - shift^2 / 2)`. Coordinates that are
/// constant during the burn-in are ignored.
pub fn mcsprt_detect(features: Rows<'_>, config: &McsprtConfig) -> Result<Option<usize>> {
    let m = features.len();
    let n = features.width();
    config.validate(m)?;
    let burn_in = config.resolved_burn_in(m, n);
    if burn_in < 2 || burn_in >= m {
        return Err(Error::invalid(format!("cannot fit a burn-in of {burn_in} rows into m = {m}")));
    }
    let threshold = config.resolved_threshold(m, n);

    let mut mean = vec![0.0; n];
    for x in features.slice(0, burn_in).iter() {
        for (mu, v) in mean.iter_mut().zip(x) {
            *mu += v;
        }
    }
    mean.iter_mut().for_each(|mu| *mu /= burn_in as f64);
    let mut var = vec![0.0; n];
    for x in features.slice(0, burn_in).iter() {
        for ((s, v), mu) in var.iter_mut().zip(x).zip(&mean) {
            *s += (v - mu) * (v - mu);
        }
    }
    let sd: Vec<f64> = var.iter().map(|s| (s / (burn_in - 1) as f64).sqrt()).collect();

    let delta = config.shift;
    let drift = 0.5 * delta * delta;
    let mut up = vec![0.0f64; n];
    let mut down = vec![0.0f64; n];
    for t in burn_in..m {
        let x = features.row(t);
        let mut peak = 0.0f64;
        for j in 0..n {
            if sd[j] <= 0.0 {
                continue;
            }
            let z = (x[j] - mean[j]) / sd[j];
            up[j] = (up[j] + delta * z - drift).max(0.0);
            down[j] = (down[j] - delta * z - drift).max(0.0);
            peak = peak.max(up[j]).max(down[j]);
        }
        if peak > threshold {
            return Ok(Some(t + 1));
        }
    }
    Ok(None)
}
