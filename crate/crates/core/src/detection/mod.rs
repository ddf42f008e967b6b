// SPDX-License-Identifier: MIT OR Apache-2.0

//! Change-point search by empirical risk minimization.
//!
//! Every search fits one hypothesis on the rows before a candidate split and
//! another on the rows from the split onward, then keeps the split with the
//! smallest empirical risk. Equal risks resolve toward the largest split
//! index, so "no change" (`t0 = m + 1`) wins ties.

mod bounds;
mod multi;
mod penalized;
mod sas;

pub use bounds::{srm_penalty, theorem1_bound, BoundVariant};
pub use multi::{multi_change_detect, multi_change_detect_cached, srm_select_k, SegmentCostCache, SrmConfig, SrmSelection};
pub use penalized::{penalized_sas_detect, KernelSide, PenalizedConfig, PenalizedSplit};
pub use sas::{sas_detect, sas_grid_detect, sasf_detect, search_splits, SearchOutcome};

use serde::{Deserialize, Serialize};

use crate::data::{FeatureView, TimeSeriesDataset};
use crate::error::{Error, Result};
use crate::learners::LearnerSpec;

/// Candidate split indices, expressed in the one-based `t0` convention.
///
/// The multi-change searches use the same sets shifted by one: split index
/// `t0` corresponds to change time (segment end) `t0 - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSet {
    /// Every `t0` in `1..=m+1`.
    Full,
    /// Multiples of `floor(sqrt(m) / B)` up to `m + 1`, plus `1` and `m + 1`.
    SqrtGrid,
    /// Strictly increasing indices inside `1..=m+1`.
    Explicit(Vec<usize>),
}

impl CandidateSet {
    /// Ascending split indices for a dataset with `m` rows and bound `bound`.
    pub fn split_indices(&self, m: usize, bound: f64) -> Result<Vec<usize>> {
        match self {
            Self::Full => Ok((1..=m + 1).collect()),
            Self::SqrtGrid => Ok(sqrt_grid(m, bound)),
            Self::Explicit(list) => {
                if list.is_empty() {
                    return Err(Error::invalid("explicit candidate list is empty"));
                }
                if list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::invalid("explicit candidates must be strictly increasing"));
                }
                if list[0] < 1 || *list.last().unwrap() > m + 1 {
                    return Err(Error::invalid(format!("explicit candidates must lie in 1..={}", m + 1)));
                }
                Ok(list.clone())
            }
        }
    }

    /// Ascending change times (segment ends) in `0..=m`.
    pub fn change_times(&self, m: usize, bound: f64) -> Result<Vec<usize>> {
        Ok(self.split_indices(m, bound)?.into_iter().map(|t0| t0 - 1).collect())
    }
}

/// Grid step `floor(sqrt(m) / B)`; zero when `B > sqrt(m)`.
pub fn grid_step(m: usize, bound: f64) -> usize {
    ((m as f64).sqrt() / bound).floor() as usize
}

/// Split indices `{ i * step : i >= 1, i * step <= m + 1 } U {1, m + 1}`
/// with `step = floor(sqrt(m) / B)`. Falls back to every index when the
/// step is zero (`B > sqrt(m)`).
pub fn sqrt_grid(m: usize, bound: f64) -> Vec<usize> {
    let step = grid_step(m, bound);
    if step == 0 {
        return (1..=m + 1).collect();
    }
    let mut grid: Vec<usize> = std::iter::once(1)
        .chain((1..).map(|i| i * step).take_while(|&t| t <= m + 1))
        .chain(std::iter::once(m + 1))
        .collect();
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Settings for the two-regime searches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub candidates: CandidateSet,
    /// Learner for rows before the split (normally the old-feature view).
    pub learner1: LearnerSpec,
    /// Learner for rows from the split onward (normally all features).
    pub learner2: LearnerSpec,
    /// Confidence parameter reported alongside bound values.
    pub delta: f64,
}

impl SearchConfig {
    pub fn new(learner1: LearnerSpec, learner2: LearnerSpec) -> Self {
        Self {
            candidates: CandidateSet::Full,
            learner1,
            learner2,
            delta: 0.05,
        }
    }

    /// Least squares on old features before the split and all features after.
    pub fn least_squares(data: &TimeSeriesDataset) -> Self {
        Self::new(
            LearnerSpec::least_squares(FeatureView::OldOnly, data),
            LearnerSpec::least_squares(FeatureView::All, data),
        )
    }

    pub fn with_candidates(mut self, candidates: CandidateSet) -> Self {
        self.candidates = candidates;
        self
    }

    pub fn validate(&self, data: &TimeSeriesDataset) -> Result<()> {
        self.learner1.validate()?;
        self.learner2.validate()?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.learner1.view == FeatureView::All && data.new_features() > 0 {
            return Err(Error::Config(
                "learner1 must use the old-feature view when the dataset has new features".into(),
            ));
        }
        self.candidates.split_indices(data.len(), data.bound()).map(|_| ())
    }
}
