// SPDX-License-Identifier: MIT OR Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CandidateSet;
use crate::data::{FeatureView, TimeSeriesDataset};
use crate::error::{Error, Result};
use crate::learners::{kernel_ridge_fit, penalty_value, Fitted, Schema};
use crate::model::{Predictor, SplitModel};
use crate::risk::{empirical_risk, true_risk};

/// Kernel ridge settings for one side of the split.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSide {
    /// `gamma` in `exp(-gamma |u - v|^2)`.
    pub bandwidth: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenalizedConfig {
    /// Fitted on the old features before the split.
    pub side1: KernelSide,
    /// Fitted on all features from the split onward.
    pub side2: KernelSide,
    pub candidates: CandidateSet,
}

impl PenalizedConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, side) in [("side1", self.side1), ("side2", self.side2)] {
            if !(side.lambda > 0.0) || !side.lambda.is_finite() {
                return Err(Error::invalid(format!("{name} lambda must be > 0, got {}", side.lambda)));
            }
            if !(side.bandwidth > 0.0) || !side.bandwidth.is_finite() {
                return Err(Error::invalid(format!("{name} bandwidth must be > 0, got {}", side.bandwidth)));
            }
        }
        Ok(())
    }
}

/// Minimizer of the penalized objective and its parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenalizedSplit {
    /// `empirical_risk` here is the unpenalized risk at the chosen split.
    pub model: SplitModel,
    /// `m * risk + penalty1 + penalty2` at the chosen split.
    pub objective: f64,
    pub penalty1: f64,
    pub penalty2: f64,
    /// Objective at each candidate, in candidate order.
    pub objectives: Vec<(usize, f64)>,
}

fn side_penalty(fit: &Fitted) -> f64 {
    match &fit.hypothesis.predictor {
        Predictor::Kernel(k) => penalty_value(k),
        _ => 0.0,
    }
}

struct Evaluated {
    objective: f64,
    penalty1: f64,
    penalty2: f64,
    risk: f64,
}

fn fit_sides(data: &TimeSeriesDataset, config: &PenalizedConfig, t0: usize) -> Result<(Fitted, Fitted)> {
    let m = data.len();
    let schema = Schema::of(data);
    let y = data.targets();
    let (h1, _) = kernel_ridge_fit(
        data.rows(0, t0 - 1, FeatureView::OldOnly),
        &y[..t0 - 1],
        config.side1.bandwidth,
        config.side1.lambda,
        FeatureView::OldOnly,
        schema,
    )?;
    let (h2, _) = kernel_ridge_fit(
        data.rows(t0 - 1, m, FeatureView::All),
        &y[t0 - 1..],
        config.side2.bandwidth,
        config.side2.lambda,
        FeatureView::All,
        schema,
    )?;
    Ok((h1, h2))
}

fn evaluate(data: &TimeSeriesDataset, h1: &Fitted, h2: &Fitted, t0: usize) -> Result<Evaluated> {
    let risk = empirical_risk(data, &h1.hypothesis, &h2.hypothesis, t0)?;
    let penalty1 = side_penalty(h1);
    let penalty2 = side_penalty(h2);
    Ok(Evaluated {
        objective: data.len() as f64 * risk + penalty1 + penalty2,
        penalty1,
        penalty2,
        risk,
    })
}

/// Split search minimizing `m * risk + lambda1 * a1' G1 a1 + lambda2 * a2' G2 a2`
/// with kernel ridge on both sides. Ties go to the larger split index.
pub fn penalized_sas_detect(data: &TimeSeriesDataset, config: &PenalizedConfig) -> Result<PenalizedSplit> {
    config.validate()?;
    let candidates = config.candidates.split_indices(data.len(), data.bound())?;
    let scores: Vec<f64> = candidates
        .par_iter()
        .map(|&t0| {
            let (h1, h2) = fit_sides(data, config, t0)?;
            Ok(evaluate(data, &h1, &h2, t0)?.objective)
        })
        .collect::<Result<_>>()?;
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::Numerical(format!("non-finite objective at split {}", candidates[i])));
    }
    let mut best = 0;
    for i in 1..scores.len() {
        if scores[i] <= scores[best] {
            best = i;
        }
    }
    let t_hat = candidates[best];
    let (h1, h2) = fit_sides(data, config, t_hat)?;
    let parts = evaluate(data, &h1, &h2, t_hat)?;
    let true_risk = match data.eta() {
        Some(_) => Some(true_risk(data, &h1.hypothesis, &h2.hypothesis, t_hat)?),
        None => None,
    };
    Ok(PenalizedSplit {
        model: SplitModel {
            h1: h1.hypothesis,
            h2: h2.hypothesis,
            t_hat,
            empirical_risk: parts.risk,
            true_risk,
        },
        objective: parts.objective,
        penalty1: parts.penalty1,
        penalty2: parts.penalty2,
        objectives: candidates.into_iter().zip(scores).collect(),
    })
}
