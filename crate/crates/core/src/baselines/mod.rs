// SPDX-License-Identifier: MIT OR Apache-2.0

//! Comparison methods: exponential forgetting (CGF), sliding windows (CAF),
//! an input-only CUSUM detector (MCSPRT), and random splits (RS).
//!
//! The forgetting baselines produce prequential timelines: row `t` is scored
//! by a model trained only on rows before `t`.

mod forgetting;
mod mcsprt;
mod random_split;

pub use forgetting::{caf_timeline, cgf_timeline, sweep_best, SweepGrid, SweepResult};
pub use mcsprt::{mcsprt_detect, McsprtConfig};
pub use random_split::random_split_timeline;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMethod {
    Cgf,
    Caf,
    Mcsprt,
    Rs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RsConfig {
    pub num_trials: usize,
    pub seed: u64,
}

impl Default for RsConfig {
    fn default() -> Self {
        Self {
            num_trials: 100,
            seed: 0,
        }
    }
}

/// Hyperparameters for every baseline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineConfig {
    /// Forgetting factors tried by CGF; empty means [`default_lambda_grid`].
    #[serde(default)]
    pub cgf_lambda_grid: Vec<f64>,
    /// Window lengths tried by CAF; empty means [`default_window_grid`].
    #[serde(default)]
    pub caf_window_grid: Vec<usize>,
    #[serde(default)]
    pub mcsprt: McsprtConfig,
    #[serde(default)]
    pub rs: RsConfig,
    /// Refit period of the forgetting baselines (1 refits at every row).
    #[serde(default = "one")]
    pub stride: usize,
}

fn one() -> usize {
    1
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            cgf_lambda_grid: Vec::new(),
            caf_window_grid: Vec::new(),
            mcsprt: McsprtConfig::default(),
            rs: RsConfig::default(),
            stride: 1,
        }
    }
}

impl BaselineConfig {
    pub fn lambda_grid(&self) -> Vec<f64> {
        if self.cgf_lambda_grid.is_empty() {
            default_lambda_grid()
        } else {
            self.cgf_lambda_grid.clone()
        }
    }

    pub fn window_grid(&self, m: usize) -> Vec<usize> {
        if self.caf_window_grid.is_empty() {
            default_window_grid(m)
        } else {
            self.caf_window_grid.clone()
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if let Some(l) = self.lambda_grid().iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
            return Err(Error::invalid(format!("forgetting factor {l} outside (0, 1)")));
        }
        if self.window_grid(m).contains(&0) {
            return Err(Error::invalid("window sizes must be >= 1"));
        }
        if self.rs.num_trials == 0 {
            return Err(Error::invalid("random split needs at least one trial"));
        }
        if self.stride == 0 {
            return Err(Error::invalid("stride must be >= 1"));
        }
        self.mcsprt.validate(m)
    }
}

/// 100 forgetting factors log-spaced over `[0.9, 0.9999]`.
pub fn default_lambda_grid() -> Vec<f64> {
    log_space(0.9, 0.9999, 100)
}

/// Up to 100 distinct window lengths log-spaced over `[10, m]`.
pub fn default_window_grid(m: usize) -> Vec<usize> {
    let hi = m.max(1) as f64;
    let lo = 10f64.min(hi);
    let mut grid: Vec<usize> = log_space(lo, hi, 100).into_iter().map(|v| v.round().max(1.0) as usize).collect();
    grid.dedup();
    grid
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
