// SPDX-License-Identifier: MIT OR Apache-2.0

use log::warn;
use rayon::prelude::*;

use super::{sqrt_grid, CandidateSet, SearchConfig};
use crate::data::{FeatureView, TimeSeriesDataset};
use crate::error::{Error, Result};
use crate::learners::{fit_segment, least_squares_fit, Fitted, LearnerSpec, PrefixFitter, Schema};
use crate::linalg::CenteredMoments;
use crate::model::{Hypothesis, Predictor, SplitModel};
use crate::risk::{empirical_risk, true_risk};

/// Moment snapshots solved together in one parallel batch.
const SOLVE_BATCH: usize = 64;

/// Result of a split search with the risk of every candidate it evaluated.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub model: SplitModel,
    pub candidates: Vec<usize>,
    pub risks: Vec<f64>,
}

/// Exhaustive search over the configured candidate set.
pub fn sas_detect(data: &TimeSeriesDataset, config: &SearchConfig) -> Result<SplitModel> {
    config.validate(data)?;
    let candidates = config.candidates.split_indices(data.len(), data.bound())?;
    Ok(search_splits(data, &config.learner1, &config.learner2, &candidates)?.model)
}

/// Search restricted to the `floor(sqrt(m) / B)` grid.
pub fn sas_grid_detect(data: &TimeSeriesDataset, config: &SearchConfig) -> Result<SplitModel> {
    config.validate(data)?;
    let candidates = sqrt_grid(data.len(), data.bound());
    Ok(search_splits(data, &config.learner1, &config.learner2, &candidates)?.model)
}

/// Grid search where the post-split model is an old-feature fit plus a
/// least-squares correction on the new features.
pub fn sasf_detect(data: &TimeSeriesDataset, config: &SearchConfig) -> Result<SplitModel> {
    if data.new_features() == 0 {
        warn!("no new features in the dataset; feature update skipped, running the grid search");
        return sas_grid_detect(data, config);
    }
    config.validate(data)?;
    let m = data.len();
    let candidates = sqrt_grid(m, data.bound());
    let ends: Vec<usize> = candidates.iter().map(|t0| t0 - 1).collect();

    let h1s = side_fits(&config.learner1, data, &ends, Side::Prefix)?;
    let old_spec = LearnerSpec {
        view: FeatureView::OldOnly,
        ..config.learner2.clone()
    };
    let bases = side_fits(&old_spec, data, &ends, Side::Suffix)?;
    let ridge = config.learner2.ridge_lambda().unwrap_or(0.0);
    let schema = Schema::of(data);
    let h2s: Vec<Fitted> = bases
        .into_par_iter()
        .zip(ends.par_iter())
        .map(|(base, &start)| feature_update(data, base, start, ridge, schema))
        .collect::<Result<_>>()?;
    finish(data, candidates, h1s, h2s)
}

fn feature_update(data: &TimeSeriesDataset, base: Fitted, start: usize, ridge: f64, schema: Schema) -> Result<Fitted> {
    let m = data.len();
    if start == m {
        return Ok(base);
    }
    let d = data.old_features();
    let residual: Vec<f64> = (start..m)
        .map(|i| data.targets()[i] - base.hypothesis.predictor.score(&data.row(i)[..d], d))
        .collect();
    let correction = least_squares_fit(data.new_block(start, m), &residual, None, ridge, FeatureView::All, schema)?;
    let correction = match correction.hypothesis.predictor {
        Predictor::Linear(lin) => lin,
        Predictor::Constant(c) => crate::model::LinearModel {
            weights: vec![0.0; data.new_features()],
            intercept: c,
        },
        other => return Err(Error::Numerical(format!("unexpected correction model {other:?}"))),
    };
    Ok(Fitted {
        hypothesis: Hypothesis::new(
            Predictor::Additive {
                base: Box::new(base.hypothesis.predictor),
                correction,
            },
            FeatureView::All,
            schema.old_features,
            schema.new_features,
            schema.bound,
        ),
        diagnostics: base.diagnostics,
    })
}

/// Fits `learner1` before and `learner2` from each one-based split index in
/// `candidates` (strictly increasing), and returns the risk minimizer. Equal
/// risks go to the larger index.
pub fn search_splits(
    data: &TimeSeriesDataset,
    learner1: &LearnerSpec,
    learner2: &LearnerSpec,
    candidates: &[usize],
) -> Result<SearchOutcome> {
    CandidateSet::Explicit(candidates.to_vec()).split_indices(data.len(), data.bound())?;
    let ends: Vec<usize> = candidates.iter().map(|t0| t0 - 1).collect();
    let h1s = side_fits(learner1, data, &ends, Side::Prefix)?;
    let h2s = side_fits(learner2, data, &ends, Side::Suffix)?;
    let SearchOutcomeParts { model, risks } = select(data, candidates, h1s, h2s)?;
    Ok(SearchOutcome {
        model,
        candidates: candidates.to_vec(),
        risks,
    })
}

fn finish(data: &TimeSeriesDataset, candidates: Vec<usize>, h1s: Vec<Fitted>, h2s: Vec<Fitted>) -> Result<SplitModel> {
    Ok(select(data, &candidates, h1s, h2s)?.model)
}

struct SearchOutcomeParts {
    model: SplitModel,
    risks: Vec<f64>,
}

fn select(data: &TimeSeriesDataset, candidates: &[usize], h1s: Vec<Fitted>, h2s: Vec<Fitted>) -> Result<SearchOutcomeParts> {
    let risks: Vec<f64> = candidates
        .par_iter()
        .zip(h1s.par_iter().zip(h2s.par_iter()))
        .map(|(&t0, (a, b))| empirical_risk(data, &a.hypothesis, &b.hypothesis, t0))
        .collect::<Result<_>>()?;
    if let Some(i) = risks.iter().position(|r| !r.is_finite()) {
        return Err(Error::Numerical(format!("non-finite risk at split {}", candidates[i])));
    }
    let mut best = 0;
    for (i, r) in risks.iter().enumerate().skip(1) {
        if *r <= risks[best] {
            best = i;
        }
    }
    let t_hat = candidates[best];
    let h1 = h1s.into_iter().nth(best).expect("index in range").hypothesis;
    let h2 = h2s.into_iter().nth(best).expect("index in range").hypothesis;
    let true_risk = match data.eta() {
        Some(_) => Some(true_risk(data, &h1, &h2, t_hat)?),
        None => None,
    };
    Ok(SearchOutcomeParts {
        model: SplitModel {
            h1,
            h2,
            t_hat,
            empirical_risk: risks[best],
            true_risk,
        },
        risks,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    /// Rows `0..b` for each boundary `b`.
    Prefix,
    /// Rows `b..m` for each boundary `b`.
    Suffix,
}

/// One fit per zero-based boundary (ascending), on the prefix or suffix it
/// delimits. Least-squares families sweep running moments; others refit.
fn side_fits(spec: &LearnerSpec, data: &TimeSeriesDataset, boundaries: &[usize], side: Side) -> Result<Vec<Fitted>> {
    let m = data.len();
    if spec.ridge_lambda().is_none() {
        return boundaries
            .par_iter()
            .map(|&b| match side {
                Side::Prefix => fit_segment(spec, data, 0, b),
                Side::Suffix => fit_segment(spec, data, b, m),
            })
            .collect();
    }
    match side {
        Side::Prefix => sweep(spec, data, 0..m, boundaries),
        Side::Suffix => {
            let counts: Vec<usize> = boundaries.iter().rev().map(|b| m - b).collect();
            let mut fits = sweep(spec, data, (0..m).rev(), &counts)?;
            fits.reverse();
            Ok(fits)
        }
    }
}

/// Pushes rows in `order` and fits at every running count in `counts`
/// (ascending). Snapshots are solved in parallel batches.
fn sweep(
    spec: &LearnerSpec,
    data: &TimeSeriesDataset,
    mut order: impl Iterator<Item = usize>,
    counts: &[usize],
) -> Result<Vec<Fitted>> {
    let schema = Schema::of(data);
    let width = data.view_width(spec.view);
    let mut fitter = PrefixFitter::new(spec, width, schema)?;
    let (ridge, view) = (fitter.ridge(), fitter.view());
    let solve = |batch: &[CenteredMoments]| -> Vec<Fitted> {
        batch
            .par_iter()
            .map(|mo| PrefixFitter::fit_moments(mo, ridge, view, schema))
            .collect()
    };
    let mut out = Vec::with_capacity(counts.len());
    let mut batch = Vec::with_capacity(SOLVE_BATCH);
    for &c in counts {
        while fitter.len() < c {
            let i = order.next().expect("count within dataset length");
            fitter.push(&data.row(i)[..width], data.targets()[i]);
        }
        batch.push(fitter.moments().clone());
        if batch.len() == SOLVE_BATCH {
            out.extend(solve(&batch));
            batch.clear();
        }
    }
    out.extend(solve(&batch));
    Ok(out)
}
