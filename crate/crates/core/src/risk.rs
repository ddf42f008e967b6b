// SPDX-License-Identifier: MIT OR Apache-2.0

//! Empirical and true risk of split models.
//!
//! For a one-based split index `t0 in 1..=m+1`,
//!
//! ```text
//! R(h1, h2, t0) = (1/m) * ( sum_{t < t0} (h1(x_t) - r_t)^2 + sum_{t >= t0} (h2(x_t) - r_t)^2 )
//! ```
//!
//! where `r_t` is the observed response (empirical risk) or the true mean
//! (true risk). Empty sums are zero, so `t0 = 1` and `t0 = m + 1` put every
//! row on a single hypothesis.

use crate::data::TimeSeriesDataset;
use crate::error::{Error, Result};
use crate::model::{Hypothesis, MultiSplitModel, SplitModel};

/// Sum of squared errors of `h` against `responses` over zero-based rows
/// `start..end`, accumulated in row order.
pub fn segment_sse(
    data: &TimeSeriesDataset,
    h: &Hypothesis,
    responses: &[f64],
    start: usize,
    end: usize,
) -> f64 {
    let mut sse = 0.0;
    for i in start..end {
        let r = h.predict(data.row(i)) - responses[i];
        sse += r * r;
    }
    sse
}

fn check_split(data: &TimeSeriesDataset, h1: &Hypothesis, h2: &Hypothesis, t0: usize) -> Result<()> {
    let m = data.len();
    if t0 < 1 || t0 > m + 1 {
        return Err(Error::invalid(format!("split index t0 = {t0} outside 1..={}", m + 1)));
    }
    h1.check_compatible(data)?;
    h2.check_compatible(data)
}

fn split_risk(data: &TimeSeriesDataset, h1: &Hypothesis, h2: &Hypothesis, t0: usize, responses: &[f64]) -> f64 {
    let m = data.len();
    let first = segment_sse(data, h1, responses, 0, t0 - 1);
    let second = segment_sse(data, h2, responses, t0 - 1, m);
    (first + second) / m as f64
}

/// Mean squared error against the observed responses with rows before `t0`
/// scored by `h1` and the rest by `h2`.
pub fn empirical_risk(data: &TimeSeriesDataset, h1: &Hypothesis, h2: &Hypothesis, t0: usize) -> Result<f64> {
    check_split(data, h1, h2, t0)?;
    Ok(split_risk(data, h1, h2, t0, data.targets()))
}

/// As [`empirical_risk`], measured against the true means `eta`.
pub fn true_risk(data: &TimeSeriesDataset, h1: &Hypothesis, h2: &Hypothesis, t0: usize) -> Result<f64> {
    let eta = data.eta().ok_or(Error::TrueRiskUnavailable)?;
    check_split(data, h1, h2, t0)?;
    Ok(split_risk(data, h1, h2, t0, eta))
}

fn check_change_times(m: usize, num_hypotheses: usize, change_times: &[usize]) -> Result<()> {
    if num_hypotheses != change_times.len() + 1 {
        return Err(Error::invalid(format!(
            "{} hypotheses supplied for {} change times (need K + 1)",
            num_hypotheses,
            change_times.len()
        )));
    }
    if change_times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("change times must be nondecreasing"));
    }
    if let Some(&c) = change_times.iter().find(|&&c| c > m) {
        return Err(Error::invalid(format!("change time {c} exceeds m = {m}")));
    }
    Ok(())
}

fn multi_risk(data: &TimeSeriesDataset, hypotheses: &[Hypothesis], change_times: &[usize], responses: &[f64]) -> Result<f64> {
    let m = data.len();
    check_change_times(m, hypotheses.len(), change_times)?;
    for h in hypotheses {
        h.check_compatible(data)?;
    }
    let mut total = 0.0;
    let mut start = 0;
    for (j, h) in hypotheses.iter().enumerate() {
        let end = change_times.get(j).copied().unwrap_or(m);
        total += segment_sse(data, h, responses, start, end);
        start = end;
    }
    Ok(total / m as f64)
}

/// Mean squared error of a piecewise model: hypothesis `j` scores rows
/// `t_{j-1} + 1 ..= t_j` with `t_0 = 0` and `t_{K+1} = m`.
pub fn multi_empirical_risk(
    data: &TimeSeriesDataset,
    hypotheses: &[Hypothesis],
    change_times: &[usize],
) -> Result<f64> {
    multi_risk(data, hypotheses, change_times, data.targets())
}

/// As [`multi_empirical_risk`], measured against the true means.
pub fn multi_true_risk(data: &TimeSeriesDataset, hypotheses: &[Hypothesis], change_times: &[usize]) -> Result<f64> {
    let eta = data.eta().ok_or(Error::TrueRiskUnavailable)?;
    multi_risk(data, hypotheses, change_times, eta)
}

/// Per-point squared errors of a split model, each row scored by the
/// hypothesis for its side of `t_hat`.
pub fn predict_timeline(data: &TimeSeriesDataset, model: &SplitModel) -> Result<Vec<f64>> {
    check_split(data, &model.h1, &model.h2, model.t_hat)?;
    Ok((0..data.len())
        .map(|i| {
            let h = if i + 1 < model.t_hat { &model.h1 } else { &model.h2 };
            let r = h.predict(data.row(i)) - data.targets()[i];
            r * r
        })
        .collect())
}

/// Per-point squared errors of a piecewise model.
pub fn predict_multi_timeline(data: &TimeSeriesDataset, model: &MultiSplitModel) -> Result<Vec<f64>> {
    let m = data.len();
    check_change_times(m, model.hypotheses.len(), &model.change_times)?;
    let mut out = Vec::with_capacity(m);
    let mut start = 0;
    for (j, h) in model.hypotheses.iter().enumerate() {
        h.check_compatible(data)?;
        let end = model.change_times.get(j).copied().unwrap_or(m);
        for i in start..end {
            let r = h.predict(data.row(i)) - data.targets()[i];
            out.push(r * r);
        }
        start = end;
    }
    Ok(out)
}

/// Per-point squared errors of a single hypothesis over every row.
pub fn single_timeline(data: &TimeSeriesDataset, h: &Hypothesis) -> Result<Vec<f64>> {
    h.check_compatible(data)?;
    Ok((0..data.len())
        .map(|i| {
            let r = h.predict(data.row(i)) - data.targets()[i];
            r * r
        })
        .collect())
}
