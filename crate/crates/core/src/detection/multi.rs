// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{srm_penalty, CandidateSet};
use crate::data::TimeSeriesDataset;
use crate::error::{Error, Result};
use crate::learners::{fit_segment, LearnerSpec};
use crate::model::{Hypothesis, MultiSplitModel};
use crate::risk::segment_sse;

#[derive(Clone, Debug)]
struct SegmentFit {
    hypothesis: Hypothesis,
    sse: f64,
}

/// Memoized segment fits keyed by `(start, end, learner)`.
///
/// Reusing one cache across calls on the same dataset avoids refitting
/// segments that several searches share, such as the SRM sweep over `K`.
#[derive(Debug, Default)]
pub struct SegmentCostCache {
    learners: Vec<LearnerSpec>,
    fits: HashMap<(usize, usize, usize), SegmentFit>,
}

impl SegmentCostCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of memoized segment fits.
    pub fn len(&self) -> usize {
        self.fits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fits.is_empty()
    }

    fn learner_key(&mut self, spec: &LearnerSpec) -> usize {
        match self.learners.iter().position(|s| s == spec) {
            Some(i) => i,
            None => {
                self.learners.push(spec.clone());
                self.learners.len() - 1
            }
        }
    }

    /// Fits every missing `(a, b)` segment for `spec` in parallel, then
    /// inserts the results in a fixed order.
    fn fill(&mut self, data: &TimeSeriesDataset, spec: &LearnerSpec, segments: &[(usize, usize)]) -> Result<usize> {
        let key = self.learner_key(spec);
        let missing: Vec<(usize, usize)> = segments
            .iter()
            .copied()
            .filter(|&(a, b)| !self.fits.contains_key(&(a, b, key)))
            .collect();
        let fitted: Vec<SegmentFit> = missing
            .par_iter()
            .map(|&(a, b)| {
                let hypothesis = fit_segment(spec, data, a, b)?.hypothesis;
                let sse = segment_sse(data, &hypothesis, data.targets(), a, b);
                Ok(SegmentFit { hypothesis, sse })
            })
            .collect::<Result<_>>()?;
        for ((a, b), fit) in missing.into_iter().zip(fitted) {
            self.fits.insert((a, b, key), fit);
        }
        Ok(key)
    }

    fn get(&self, a: usize, b: usize, key: usize) -> &SegmentFit {
        &self.fits[&(a, b, key)]
    }
}

/// Best piecewise model with exactly `k` change times drawn from
/// `candidates` (interpreted as change times `t0 - 1`).
pub fn multi_change_detect(
    data: &TimeSeriesDataset,
    k: usize,
    learner_specs: &[LearnerSpec],
    candidates: &CandidateSet,
) -> Result<MultiSplitModel> {
    multi_change_detect_cached(data, k, learner_specs, candidates, &mut SegmentCostCache::new())
}

/// As [`multi_change_detect`], reusing and extending `cache`. The cache must
/// only ever be used with one dataset.
///
/// Segment costs feed a dynamic program over `k` layers. Among optimal change
/// tuples the one that is largest in reverse lexicographic order is returned
/// (the last change as late as possible, then the one before, and so on).
pub fn multi_change_detect_cached(
    data: &TimeSeriesDataset,
    k: usize,
    learner_specs: &[LearnerSpec],
    candidates: &CandidateSet,
    cache: &mut SegmentCostCache,
) -> Result<MultiSplitModel> {
    let m = data.len();
    if learner_specs.len() != k + 1 {
        return Err(Error::invalid(format!(
            "{} learner specs supplied for K = {k} (need K + 1)",
            learner_specs.len()
        )));
    }
    for spec in learner_specs {
        spec.validate()?;
    }
    let points = candidates.change_times(m, data.bound())?;
    if k > points.len() || k > m {
        return Err(Error::invalid(format!(
            "K = {k} exceeds the {} candidate change times (m = {m})",
            points.len()
        )));
    }

    if k == 0 {
        let key = cache.fill(data, &learner_specs[0], &[(0, m)])?;
        let fit = cache.get(0, m, key);
        return Ok(MultiSplitModel {
            hypotheses: vec![fit.hypothesis.clone()],
            change_times: vec![],
            empirical_risk: fit.sse / m as f64,
        });
    }

    // Segment j (1-based) starts at 0 for j = 1 or at a candidate, and ends
    // at a candidate or at m for j = K + 1.
    let n = points.len();
    let mut keys = Vec::with_capacity(k + 1);
    for (j, spec) in learner_specs.iter().enumerate() {
        let mut segments = Vec::new();
        let starts: Vec<usize> = if j == 0 { vec![0] } else { points.clone() };
        let ends: Vec<usize> = if j == k { vec![m] } else { points.clone() };
        for &a in &starts {
            for &b in ends.iter().filter(|&&b| b >= a) {
                segments.push((a, b));
            }
        }
        keys.push(cache.fill(data, spec, &segments)?);
    }

    // cost[j][i]: best total SSE of segments 1..=j+1 with segment j+1 ending
    // at points[i]; back[j][i]: index of the previous change.
    let mut cost = vec![vec![f64::INFINITY; n]; k];
    let mut back = vec![vec![usize::MAX; n]; k];
    for i in 0..n {
        cost[0][i] = cache.get(0, points[i], keys[0]).sse;
    }
    for j in 1..k {
        for i in 0..n {
            for a in 0..=i {
                let v = cost[j - 1][a] + cache.get(points[a], points[i], keys[j]).sse;
                if v <= cost[j][i] {
                    cost[j][i] = v;
                    back[j][i] = a;
                }
            }
        }
    }
    let mut best = (f64::INFINITY, usize::MAX);
    for a in 0..n {
        let v = cost[k - 1][a] + cache.get(points[a], m, keys[k]).sse;
        if v <= best.0 {
            best = (v, a);
        }
    }
    if !best.0.is_finite() {
        return Err(Error::Numerical("non-finite segment cost".into()));
    }

    let mut idx = vec![0; k];
    idx[k - 1] = best.1;
    for j in (1..k).rev() {
        idx[j - 1] = back[j][idx[j]];
    }
    let change_times: Vec<usize> = idx.iter().map(|&i| points[i]).collect();
    let mut hypotheses = Vec::with_capacity(k + 1);
    let mut start = 0;
    for j in 0..=k {
        let end = change_times.get(j).copied().unwrap_or(m);
        hypotheses.push(cache.get(start, end, keys[j]).hypothesis.clone());
        start = end;
    }
    Ok(MultiSplitModel {
        hypotheses,
        change_times,
        empirical_risk: best.0 / m as f64,
    })
}

/// Settings for choosing the number of changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SrmConfig {
    pub max_k: usize,
    /// Learner used on every segment.
    pub learner: LearnerSpec,
    /// `pseudo_dimensions[K]` lists `p_{j,K}` for `j = 1..=K+1`. When empty,
    /// every segment uses the learner's pseudo-dimension.
    #[serde(default)]
    pub pseudo_dimensions: Vec<Vec<usize>>,
    pub delta: f64,
    /// Output bound for the penalty; defaults to the dataset's bound.
    #[serde(default)]
    pub bound: Option<f64>,
}

impl SrmConfig {
    pub fn new(max_k: usize, learner: LearnerSpec, delta: f64) -> Self {
        Self {
            max_k,
            learner,
            pseudo_dimensions: Vec::new(),
            delta,
            bound: None,
        }
    }

    fn p_list(&self, k: usize) -> Result<Vec<usize>> {
        if self.pseudo_dimensions.is_empty() {
            return Ok(vec![self.learner.pseudo_dimension; k + 1]);
        }
        let list = self
            .pseudo_dimensions
            .get(k)
            .ok_or_else(|| Error::invalid(format!("no pseudo-dimensions given for K = {k}")))?;
        if list.len() != k + 1 || list.contains(&0) {
            return Err(Error::invalid(format!("pseudo-dimensions for K = {k} need {} entries >= 1", k + 1)));
        }
        Ok(list.clone())
    }
}

/// Outcome of the SRM sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SrmSelection {
    pub model: MultiSplitModel,
    pub k_hat: usize,
    /// `risk + penalty` for each `K` in `0..=max_k`.
    pub objectives: Vec<f64>,
    pub penalties: Vec<f64>,
}

/// Runs the change search for every `K <= max_k` and keeps the one with the
/// smallest risk plus complexity penalty; ties go to the smaller `K`.
pub fn srm_select_k(data: &TimeSeriesDataset, config: &SrmConfig, candidates: &CandidateSet) -> Result<SrmSelection> {
    let m = data.len();
    let count = candidates.change_times(m, data.bound())?.len();
    if config.max_k > m || config.max_k > count {
        return Err(Error::invalid(format!(
            "max_k = {} exceeds m = {m} or the {count} candidates",
            config.max_k
        )));
    }
    let bound = config.bound.unwrap_or(data.bound());
    let mut cache = SegmentCostCache::new();
    let mut best: Option<(usize, MultiSplitModel)> = None;
    let mut objectives = Vec::with_capacity(config.max_k + 1);
    let mut penalties = Vec::with_capacity(config.max_k + 1);
    for k in 0..=config.max_k {
        let specs = vec![config.learner.clone(); k + 1];
        let model = multi_change_detect_cached(data, k, &specs, candidates, &mut cache)?;
        let penalty = srm_penalty(k, m, bound, config.delta, &config.p_list(k)?)?;
        let objective = model.empirical_risk + penalty;
        if best.as_ref().is_none_or(|(b, _)| objective < objectives[*b]) {
            best = Some((k, model));
        }
        objectives.push(objective);
        penalties.push(penalty);
    }
    let (k_hat, model) = best.expect("at least K = 0 is evaluated");
    Ok(SrmSelection {
        model,
        k_hat,
        objectives,
        penalties,
    })
}
