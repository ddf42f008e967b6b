// SPDX-License-Identifier: MIT OR Apache-2.0

//! Fitted predictors and the split models built from them.

use serde::{Deserialize, Serialize};

use crate::data::{FeatureView, TimeSeriesDataset};
use crate::error::{Error, Result};

/// Affine score `w . x + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn zeros(dim: usize) -> Self {
        Self {
            weights: vec![0.0; dim],
            intercept: 0.0,
        }
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.weights.len());
        self.weights.iter().zip(x).fold(self.intercept, |acc, (w, v)| acc + w * v)
    }
}

/// Gaussian-kernel expansion `sum_i alpha_i exp(-gamma |x_i - x|^2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelModel {
    pub dual_coefficients: Vec<f64>,
    /// Stored training inputs, row-major with `input_dim` columns.
    pub support: Vec<f64>,
    pub input_dim: usize,
    pub bandwidth: f64,
    pub lambda: f64,
}

impl KernelModel {
    pub fn num_support(&self) -> usize {
        self.dual_coefficients.len()
    }

    pub fn support_row(&self, i: usize) -> &[f64] {
        &self.support[i * self.input_dim..(i + 1) * self.input_dim]
    }

    pub fn kernel(&self, a: &[f64], b: &[f64]) -> f64 {
        gaussian_kernel(self.bandwidth, a, b)
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        (0..self.num_support())
            .map(|i| self.dual_coefficients[i] * self.kernel(self.support_row(i), x))
            .sum()
    }
}

pub fn gaussian_kernel(gamma: f64, a: &[f64], b: &[f64]) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum();
    (-gamma * d2).exp()
}

/// The unclipped scoring rule of a hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Predictor {
    Constant(f64),
    Linear(LinearModel),
    /// Logistic link on an affine score.
    Logistic(LinearModel),
    Kernel(KernelModel),
    /// A base model on the old block plus a linear correction on the new
    /// block, as produced by the feature-update search.
    Additive {
        base: Box<Predictor>,
        correction: LinearModel,
    },
}

impl Predictor {
    pub(crate) fn score(&self, x: &[f64], old: usize) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Linear(m) => m.score(x),
            Self::Logistic(m) => sigmoid(m.score(x)),
            Self::Kernel(k) => k.score(x),
            Self::Additive { base, correction } => {
                base.score(&x[..old], old) + correction.score(&x[old..])
            }
        }
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// A fitted predictor mapping feature rows into `[-B, B]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub predictor: Predictor,
    pub view: FeatureView,
    /// Schema the hypothesis was fitted on: `(d, k)`.
    pub old_features: usize,
    pub new_features: usize,
    pub bound: f64,
}

impl Hypothesis {
    pub fn new(
        predictor: Predictor,
        view: FeatureView,
        old_features: usize,
        new_features: usize,
        bound: f64,
    ) -> Self {
        Self {
            predictor,
            view,
            old_features,
            new_features,
            bound,
        }
    }

    /// The constant hypothesis `x -> c` for a dataset schema.
    pub fn constant(c: f64, data: &TimeSeriesDataset) -> Self {
        Self::new(
            Predictor::Constant(c),
            FeatureView::OldOnly,
            data.old_features(),
            data.new_features(),
            data.bound(),
        )
    }

    /// Prediction on a full feature row, clipped to `[-B, B]`.
    pub fn predict(&self, row: &[f64]) -> f64 {
        let x = match self.view {
            FeatureView::OldOnly => &row[..self.old_features],
            FeatureView::All => row,
        };
        self.predictor.score(x, self.old_features).clamp(-self.bound, self.bound)
    }

    /// Errors when the dataset's feature layout differs from the one this
    /// hypothesis was fitted on.
    pub fn check_compatible(&self, data: &TimeSeriesDataset) -> Result<()> {
        let new_matters = self.view == FeatureView::All
            || matches!(self.predictor, Predictor::Additive { .. });
        if self.old_features != data.old_features()
            || (new_matters && self.new_features != data.new_features())
        {
            return Err(Error::Config(format!(
                "hypothesis expects {} old / {} new features ({:?} view), dataset has {} / {}",
                self.old_features,
                self.new_features,
                self.view,
                data.old_features(),
                data.new_features()
            )));
        }
        Ok(())
    }
}

/// A fitted two-regime model `(h1, h2, t_hat)`.
///
/// `t_hat` is one-based: rows `t < t_hat` belong to `h1`, rows `t >= t_hat`
/// to `h2`, and `t_hat = m + 1` means no change inside the data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitModel {
    pub h1: Hypothesis,
    pub h2: Hypothesis,
    pub t_hat: usize,
    pub empirical_risk: f64,
    pub true_risk: Option<f64>,
}

impl SplitModel {
    /// Zero-based change position `t_hat - 1`, the segment end of `h1`.
    pub fn change_position(&self) -> usize {
        self.t_hat - 1
    }

    pub fn has_change(&self, m: usize) -> bool {
        self.t_hat <= m
    }
}

/// A fitted model with `K` change times and `K + 1` segment hypotheses.
///
/// `change_times` are segment ends in `0..=m`: segment `j` covers rows
/// `change_times[j-1] + 1 ..= change_times[j]` with `t_0 = 0` and
/// `t_{K+1} = m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiSplitModel {
    pub hypotheses: Vec<Hypothesis>,
    pub change_times: Vec<usize>,
    pub empirical_risk: f64,
}

impl MultiSplitModel {
    pub fn num_changes(&self) -> usize {
        self.change_times.len()
    }
}

/// Converts a one-based split index `t0` into the multi-change convention.
pub fn split_to_change_time(t0: usize) -> usize {
    t0 - 1
}

/// Converts a segment end `c` into the one-based split index `c + 1`.
pub fn change_time_to_split(c: usize) -> usize {
    c + 1
}
