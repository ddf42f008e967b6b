// SPDX-License-Identifier: MIT OR Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::TimeSeriesDataset;
use crate::error::{Error, Result};
use crate::learners::{fit_rows, LearnerSpec, PrefixFitter, Schema};
use crate::linalg::CenteredMoments;
use crate::model::Hypothesis;

fn global_mean(data: &TimeSeriesDataset) -> Hypothesis {
    let y = data.targets();
    Hypothesis::constant(y.iter().sum::<f64>() / y.len() as f64, data)
}

fn squared_error(data: &TimeSeriesDataset, h: &Hypothesis, t: usize) -> f64 {
    let r = h.predict(data.row(t)) - data.targets()[t];
    r * r
}

/// Scores every row with the model returned by `refit(t)`, recomputed at
/// `t = 1` and at every multiple of `stride`. Row 0 gets the global mean.
fn prequential(
    data: &TimeSeriesDataset,
    stride: usize,
    refit: impl Fn(usize) -> Result<Hypothesis> + Sync,
) -> Result<Vec<f64>> {
    let m = data.len();
    let refit_at: Vec<usize> = (1..m).filter(|&t| t == 1 || t % stride == 0).collect();
    let models: Vec<Hypothesis> = refit_at.par_iter().map(|&t| refit(t)).collect::<Result<_>>()?;
    let first = global_mean(data);
    let mut out = Vec::with_capacity(m);
    let mut current = &first;
    let mut next = 0;
    for t in 0..m {
        if next < refit_at.len() && refit_at[next] == t {
            current = &models[next];
            next += 1;
        }
        out.push(squared_error(data, current, t));
    }
    Ok(out)
}

fn check_stride(stride: usize) -> Result<()> {
    if stride == 0 {
        return Err(Error::invalid("stride must be >= 1"));
    }
    Ok(())
}

/// Exponential-forgetting timeline: row `t` is predicted by the learner fitted
/// on rows `0..t` with weights `lambda^(t - 1 - i)`.
pub fn cgf_timeline(data: &TimeSeriesDataset, learner: &LearnerSpec, lambda: f64, stride: usize) -> Result<Vec<f64>> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::invalid(format!("forgetting factor must lie in (0, 1), got {lambda}")));
    }
    check_stride(stride)?;
    learner.validate()?;
    if !learner.supports_weights() {
        return Err(Error::invalid(format!("{:?} does not support weighted fitting", learner.family)));
    }
    let schema = Schema::of(data);
    let width = data.view_width(learner.view);
    if learner.ridge_lambda().is_some() {
        let fitter = PrefixFitter::new(learner, width, schema)?;
        let mut moments = CenteredMoments::new(width);
        let first = global_mean(data);
        let mut current = first;
        let mut out = Vec::with_capacity(data.len());
        for t in 0..data.len() {
            if t == 1 || (t > 0 && t % stride == 0) {
                current = PrefixFitter::fit_moments(&moments, fitter.ridge(), fitter.view(), schema).hypothesis;
            }
            out.push(squared_error(data, &current, t));
            moments.decay(lambda);
            moments.push(&data.row(t)[..width], data.targets()[t], 1.0);
        }
        return Ok(out);
    }
    prequential(data, stride, |t| {
        let weights: Vec<f64> = (0..t).map(|i| lambda.powi((t - 1 - i) as i32)).collect();
        Ok(fit_rows(learner, data.rows(0, t, learner.view), &data.targets()[..t], Some(&weights), schema)?.hypothesis)
    })
}

/// Sliding-window timeline: row `t` is predicted by the learner fitted on rows
/// `max(0, t - window)..t`.
pub fn caf_timeline(data: &TimeSeriesDataset, learner: &LearnerSpec, window: usize, stride: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::invalid("window must be >= 1"));
    }
    check_stride(stride)?;
    learner.validate()?;
    let schema = Schema::of(data);
    let width = data.view_width(learner.view);
    // Small windows are cheap to refit, and downdating them is fragile.
    if learner.ridge_lambda().is_none() || window <= width + 1 {
        return prequential(data, stride, |t| {
            let start = t.saturating_sub(window);
            Ok(fit_rows(learner, data.rows(start, t, learner.view), &data.targets()[start..t], None, schema)?.hypothesis)
        });
    }
    let fitter = PrefixFitter::new(learner, width, schema)?;
    let x = |i: usize| &data.row(i)[..width];
    let y = data.targets();
    let mut moments = CenteredMoments::new(width);
    let mut removed = 0;
    let mut current = global_mean(data);
    let mut out = Vec::with_capacity(data.len());
    for t in 0..data.len() {
        if t == 1 || (t > 0 && t % stride == 0) {
            current = PrefixFitter::fit_moments(&moments, fitter.ridge(), fitter.view(), schema).hypothesis;
        }
        out.push(squared_error(data, &current, t));
        moments.push(x(t), y[t], 1.0);
        if t + 1 > window {
            let old = t + 1 - window - 1;
            moments.remove(x(old), y[old], 1.0);
            removed += 1;
            // Rebuild periodically so downdate rounding cannot accumulate.
            if removed >= window {
                moments = CenteredMoments::new(width);
                for i in old + 1..=t {
                    moments.push(x(i), y[i], 1.0);
                }
                removed = 0;
            }
        }
    }
    Ok(out)
}

/// Parameter grid for [`sweep_best`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepGrid {
    Cgf(Vec<f64>),
    Caf(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub param: f64,
    pub mean_error: f64,
    pub timeline: Vec<f64>,
    /// Mean timeline error of every grid element, in grid order.
    pub grid_errors: Vec<(f64, f64)>,
}

/// Runs the baseline for every grid element and keeps the one with the
/// smallest mean timeline error; ties go to the smaller parameter.
pub fn sweep_best(data: &TimeSeriesDataset, learner: &LearnerSpec, grid: &SweepGrid, stride: usize) -> Result<SweepResult> {
    let params: Vec<f64> = match grid {
        SweepGrid::Cgf(g) => g.clone(),
        SweepGrid::Caf(g) => g.iter().map(|&w| w as f64).collect(),
    };
    if params.is_empty() {
        return Err(Error::invalid("parameter grid is empty"));
    }
    let timelines: Vec<Vec<f64>> = (0..params.len())
        .into_par_iter()
        .map(|i| match grid {
            SweepGrid::Cgf(g) => cgf_timeline(data, learner, g[i], stride),
            SweepGrid::Caf(g) => caf_timeline(data, learner, g[i], stride),
        })
        .collect::<Result<_>>()?;
    let means: Vec<f64> = timelines.iter().map(|tl| tl.iter().sum::<f64>() / tl.len() as f64).collect();
    let mut best = 0;
    for i in 1..params.len() {
        if means[i] < means[best] || (means[i] == means[best] && params[i] < params[best]) {
            best = i;
        }
    }
    Ok(SweepResult {
        param: params[best],
        mean_error: means[best],
        grid_errors: params.iter().copied().zip(means.iter().copied()).collect(),
        timeline: timelines.into_iter().nth(best).expect("index in range"),
    })
}
