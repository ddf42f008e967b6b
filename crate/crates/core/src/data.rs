// SPDX-License-Identifier: MIT OR Apache-2.0

//! Time-ordered datasets and borrowed row views.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which feature columns a learner is allowed to read.
///
/// The old block is always the first `d` columns of every row, the new block
/// the trailing `k` columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureView {
    OldOnly,
    All,
}

/// An immutable batch of time-ordered observations `(x_t, y_t)`, `t = 1..m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeriesDataset {
    features: Vec<f64>,
    targets: Vec<f64>,
    eta: Option<Vec<f64>>,
    old_features: usize,
    new_features: usize,
    bound: f64,
}

impl TimeSeriesDataset {
    /// Builds a dataset from row-major features (`m * (d + k)` values).
    pub fn from_flat(
        features: Vec<f64>,
        targets: Vec<f64>,
        eta: Option<Vec<f64>>,
        old_features: usize,
        new_features: usize,
        bound: f64,
    ) -> Result<Self> {
        let data = Self {
            features,
            targets,
            eta,
            old_features,
            new_features,
            bound,
        };
        data.validate()?;
        Ok(data)
    }

    /// Builds a dataset from one feature vector per row.
    pub fn from_rows(
        rows: &[Vec<f64>],
        targets: Vec<f64>,
        eta: Option<Vec<f64>>,
        old_features: usize,
        new_features: usize,
        bound: f64,
    ) -> Result<Self> {
        let width = old_features + new_features;
        if let Some((t, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(Error::invalid(format!(
                "row {} has {} features, expected {}",
                t + 1,
                row.len(),
                width
            )));
        }
        let features = rows.iter().flatten().copied().collect();
        Self::from_flat(features, targets, eta, old_features, new_features, bound)
    }

    /// Dataset whose only feature is a constant zero column; handy for
    /// constant-only learners.
    pub fn from_targets(targets: Vec<f64>, bound: f64) -> Result<Self> {
        let m = targets.len();
        Self::from_flat(vec![0.0; m], targets, None, 1, 0, bound)
    }

    fn validate(&self) -> Result<()> {
        let m = self.targets.len();
        if m == 0 {
            return Err(Error::invalid("dataset must contain at least one row"));
        }
        if self.old_features == 0 {
            return Err(Error::invalid("old feature count d must be at least 1"));
        }
        if !(self.bound >= 1.0) || !self.bound.is_finite() {
            return Err(Error::invalid(format!(
                "bound B must be finite and >= 1, got {}",
                self.bound
            )));
        }
        let width = self.num_features();
        if self.features.len() != m * width {
            return Err(Error::invalid(format!(
                "feature buffer has {} values, expected {} rows x {} columns",
                self.features.len(),
                m,
                width
            )));
        }
        if let Some(i) = self.features.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite feature value in row {} (column {})",
                i / width + 1,
                i % width + 1
            )));
        }
        for (t, &y) in self.targets.iter().enumerate() {
            if !y.is_finite() || y.abs() > self.bound {
                return Err(Error::invalid(format!(
                    "target in row {} is {} which lies outside [-B, B] with B = {}",
                    t + 1,
                    y,
                    self.bound
                )));
            }
        }
        if let Some(eta) = &self.eta {
            if eta.len() != m {
                return Err(Error::invalid(format!(
                    "eta has length {}, expected {}",
                    eta.len(),
                    m
                )));
            }
            if let Some(t) = eta
                .iter()
                .position(|v| !v.is_finite() || v.abs() > self.bound)
            {
                return Err(Error::invalid(format!(
                    "eta in row {} is {} which lies outside [-B, B]",
                    t + 1,
                    eta[t]
                )));
            }
        }
        Ok(())
    }

    /// Number of rows `m`.
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn old_features(&self) -> usize {
        self.old_features
    }

    pub fn new_features(&self) -> usize {
        self.new_features
    }

    pub fn num_features(&self) -> usize {
        self.old_features + self.new_features
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn eta(&self) -> Option<&[f64]> {
        self.eta.as_deref()
    }

    pub fn features_flat(&self) -> &[f64] {
        &self.features
    }

    /// Full feature vector of the row with zero-based index `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.num_features();
        &self.features[i * w..(i + 1) * w]
    }

    /// Width of a feature view on this dataset.
    pub fn view_width(&self, view: FeatureView) -> usize {
        match view {
            FeatureView::OldOnly => self.old_features,
            FeatureView::All => self.num_features(),
        }
    }

    /// Rows `start..end` (zero-based, half open) restricted to `view`.
    pub fn rows(&self, start: usize, end: usize, view: FeatureView) -> Rows<'_> {
        self.block(start, end, 0, self.view_width(view))
    }

    /// Rows `start..end` restricted to the trailing new-feature block.
    pub fn new_block(&self, start: usize, end: usize) -> Rows<'_> {
        self.block(start, end, self.old_features, self.new_features)
    }

    fn block(&self, start: usize, end: usize, offset: usize, width: usize) -> Rows<'_> {
        debug_assert!(start <= end && end <= self.len());
        let stride = self.num_features();
        Rows {
            data: &self.features[start * stride..end * stride],
            stride,
            offset,
            width,
            len: end - start,
        }
    }

    /// Same features with different responses (e.g. the true means).
    pub fn with_targets(&self, targets: Vec<f64>) -> Result<Self> {
        Self::from_flat(
            self.features.clone(),
            targets,
            self.eta.clone(),
            self.old_features,
            self.new_features,
            self.bound,
        )
    }

    /// Copy of the dataset with the true means replaced by the responses.
    pub fn eta_as_targets(&self) -> Result<Self> {
        let eta = self.eta.clone().ok_or(Error::TrueRiskUnavailable)?;
        self.with_targets(eta)
    }

    pub fn without_eta(&self) -> Self {
        Self {
            eta: None,
            ..self.clone()
        }
    }
}

/// Affine min-max map applied to responses during ingestion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaling {
    pub min: f64,
    pub max: f64,
}

impl MinMaxScaling {
    /// Fits the map on every value of the given series (targets and, when
    /// present, true means) so both land in `[0, 1]`.
    pub fn fit<'a>(series: impl IntoIterator<Item = &'a [f64]>) -> Option<Self> {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for s in series {
            for &v in s {
                min = min.min(v);
                max = max.max(v);
            }
        }
        (min.is_finite() && max.is_finite()).then_some(Self { min, max })
    }

    pub fn apply(&self, v: f64) -> f64 {
        let span = self.max - self.min;
        if span > 0.0 {
            ((v - self.min) / span).clamp(0.0, 1.0)
        } else {
            0.5
        }
    }

    pub fn apply_all(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|&v| self.apply(v)).collect()
    }
}

/// A borrowed, strided window of feature rows.
#[derive(Clone, Copy, Debug)]
pub struct Rows<'a> {
    data: &'a [f64],
    stride: usize,
    offset: usize,
    width: usize,
    len: usize,
}

impl<'a> Rows<'a> {
    /// Contiguous rows of width `width`.
    pub fn dense(data: &'a [f64], width: usize) -> Self {
        assert!(width > 0 && data.len() % width == 0);
        Self {
            data,
            stride: width,
            offset: 0,
            width,
            len: data.len() / width,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, i: usize) -> &'a [f64] {
        let s = i * self.stride + self.offset;
        &self.data[s..s + self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &'a [f64]> + '_ {
        (0..self.len).map(move |i| self.row(i))
    }

    /// Sub-range of these rows.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.len);
        Self {
            data: &self.data[start * self.stride..end * self.stride],
            len: end - start,
            ..*self
        }
    }
}
