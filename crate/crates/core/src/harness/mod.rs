// SPDX-License-Identifier: MIT OR Apache-2.0

//! Runs detectors and baselines on one dataset and collects per-point error
//! timelines, risks, bound values, and timings.

mod bench;

pub use bench::{bench, BenchRow, BenchTable, RawTiming};

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{mcsprt_detect, random_split_timeline, sweep_best, BaselineConfig, SweepGrid};
use crate::data::{FeatureView, TimeSeriesDataset};
use crate::detection::{
    multi_change_detect, penalized_sas_detect, sas_detect, sas_grid_detect, sasf_detect, search_splits,
    srm_select_k, theorem1_bound, BoundVariant, CandidateSet, KernelSide, PenalizedConfig, SearchConfig, SrmConfig,
};
use crate::error::{Error, Result};
use crate::learners::{fit_segment, LearnerFamily, LearnerSpec};
use crate::model::{MultiSplitModel, SplitModel};
use crate::risk::{multi_true_risk, predict_multi_timeline, predict_timeline, single_timeline, true_risk};

/// Every method the harness can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "sas")]
    Sas,
    #[serde(rename = "sas-grid")]
    SasGrid,
    #[serde(rename = "sasf")]
    Sasf,
    #[serde(rename = "multi-k")]
    MultiK,
    #[serde(rename = "srm")]
    Srm,
    #[serde(rename = "penalized")]
    Penalized,
    #[serde(rename = "cgf")]
    Cgf,
    #[serde(rename = "caf")]
    Caf,
    #[serde(rename = "mcsprt")]
    Mcsprt,
    #[serde(rename = "rs")]
    Rs,
}

impl Method {
    pub const ALL: [Method; 10] = [
        Method::Sas,
        Method::SasGrid,
        Method::Sasf,
        Method::MultiK,
        Method::Srm,
        Method::Penalized,
        Method::Cgf,
        Method::Caf,
        Method::Mcsprt,
        Method::Rs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sas => "sas",
            Method::SasGrid => "sas-grid",
            Method::Sasf => "sasf",
            Method::MultiK => "multi-k",
            Method::Srm => "srm",
            Method::Penalized => "penalized",
            Method::Cgf => "cgf",
            Method::Caf => "caf",
            Method::Mcsprt => "mcsprt",
            Method::Rs => "rs",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Method::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::invalid(format!("unknown method '{s}'")))
    }
}

/// Kernel settings for the penalized method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PenalizedSettings {
    pub side1: KernelSide,
    pub side2: KernelSide,
    pub candidates: CandidateSet,
}

impl Default for PenalizedSettings {
    fn default() -> Self {
        let side = KernelSide {
            bandwidth: 0.05,
            lambda: 1.0,
        };
        Self {
            side1: side,
            side2: side,
            candidates: CandidateSet::SqrtGrid,
        }
    }
}

/// Everything needed to reproduce a harness run. Thread count is deliberately
/// absent: results do not depend on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Learner family for every method; views and pseudo-dimensions follow
    /// from the dataset.
    pub family: LearnerFamily,
    /// Candidate splits for the single-change search.
    pub candidates: CandidateSet,
    /// Candidate change times for the multi-change and SRM searches.
    pub multi_candidates: CandidateSet,
    pub delta: f64,
    /// Pseudo-dimensions `(p1, p2)` for the bound; no bound is reported
    /// without them.
    pub bound_dims: Option<(usize, usize)>,
    pub multi_k: usize,
    pub max_k: usize,
    pub penalized: PenalizedSettings,
    pub baselines: BaselineConfig,
    /// Moving-average window; `None` uses `max(1, m / 100)`.
    pub smoothing_window: Option<usize>,
    pub seed: u64,
    pub record_timings: bool,
    /// Run methods concurrently; timings are then not comparable.
    pub parallel_methods: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            family: LearnerFamily::LeastSquares,
            candidates: CandidateSet::Full,
            multi_candidates: CandidateSet::SqrtGrid,
            delta: 0.05,
            bound_dims: None,
            multi_k: 1,
            max_k: 3,
            penalized: PenalizedSettings::default(),
            baselines: BaselineConfig::default(),
            smoothing_window: None,
            seed: 0,
            record_timings: false,
            parallel_methods: false,
        }
    }
}

impl ExperimentConfig {
    /// Learner on the old features (before a split) and on all features.
    pub fn learners(&self, data: &TimeSeriesDataset) -> (LearnerSpec, LearnerSpec) {
        let spec = |view| LearnerSpec::new(self.family.clone(), view, data.view_width(view) + 1);
        (spec(FeatureView::OldOnly), spec(FeatureView::All))
    }

    pub fn search_config(&self, data: &TimeSeriesDataset) -> SearchConfig {
        let (l1, l2) = self.learners(data);
        SearchConfig {
            candidates: self.candidates.clone(),
            learner1: l1,
            learner2: l2,
            delta: self.delta,
        }
    }

    pub fn window(&self, m: usize) -> usize {
        self.smoothing_window.unwrap_or((m / 100).max(1))
    }
}

/// Result of one method on one dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub method: Method,
    /// One-based first row of the post-change regime, if a single change
    /// was reported.
    pub t_hat: Option<usize>,
    /// Segment ends for the multi-change methods.
    pub change_times: Option<Vec<usize>>,
    pub timeline: Vec<f64>,
    pub smoothed: Vec<f64>,
    pub smoothing_window: usize,
    pub mean_mse: f64,
    pub empirical_risk: f64,
    pub true_risk: Option<f64>,
    pub bound: Option<f64>,
    /// Selected hyperparameter of the swept baselines.
    pub parameter: Option<f64>,
    pub wall_clock_ms: Option<f64>,
    pub config: ExperimentConfig,
    pub seed: u64,
}

/// Runs every method in order and returns one report each.
pub fn run_experiment(data: &TimeSeriesDataset, methods: &[Method], config: &ExperimentConfig) -> Result<Vec<DetectionReport>> {
    if config.parallel_methods {
        methods.par_iter().map(|&m| run_method(data, m, config)).collect()
    } else {
        methods.iter().map(|&m| run_method(data, m, config)).collect()
    }
}

struct Outcome {
    t_hat: Option<usize>,
    change_times: Option<Vec<usize>>,
    timeline: Vec<f64>,
    empirical_risk: Option<f64>,
    true_risk: Option<f64>,
    bound: Option<f64>,
    parameter: Option<f64>,
}

impl Outcome {
    fn timeline_only(timeline: Vec<f64>, parameter: Option<f64>) -> Self {
        Self {
            t_hat: None,
            change_times: None,
            timeline,
            empirical_risk: None,
            true_risk: None,
            bound: None,
            parameter,
        }
    }
}

/// Runs a single method and builds its report.
pub fn run_method(data: &TimeSeriesDataset, method: Method, config: &ExperimentConfig) -> Result<DetectionReport> {
    let start = Instant::now();
    let outcome = execute(data, method, config)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let window = config.window(data.len());
    let mean_mse = mean(&outcome.timeline);
    Ok(DetectionReport {
        method,
        t_hat: outcome.t_hat,
        change_times: outcome.change_times,
        smoothed: moving_average(&outcome.timeline, window)?,
        smoothing_window: window,
        mean_mse,
        empirical_risk: outcome.empirical_risk.unwrap_or(mean_mse),
        true_risk: outcome.true_risk,
        bound: outcome.bound,
        parameter: outcome.parameter,
        wall_clock_ms: config.record_timings.then_some(elapsed),
        config: config.clone(),
        seed: config.seed,
        timeline: outcome.timeline,
    })
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn split_outcome(data: &TimeSeriesDataset, model: SplitModel, bound: Option<f64>) -> Result<Outcome> {
    let timeline = predict_timeline(data, &model)?;
    Ok(Outcome {
        t_hat: Some(model.t_hat),
        change_times: None,
        timeline,
        empirical_risk: Some(model.empirical_risk),
        true_risk: model.true_risk,
        bound,
        parameter: None,
    })
}

fn multi_outcome(data: &TimeSeriesDataset, model: MultiSplitModel, parameter: Option<f64>) -> Result<Outcome> {
    let true_risk = match data.eta() {
        Some(_) => Some(multi_true_risk(data, &model.hypotheses, &model.change_times)?),
        None => None,
    };
    Ok(Outcome {
        t_hat: None,
        timeline: predict_multi_timeline(data, &model)?,
        empirical_risk: Some(model.empirical_risk),
        change_times: Some(model.change_times),
        true_risk,
        bound: None,
        parameter,
    })
}

fn bound_for(data: &TimeSeriesDataset, config: &ExperimentConfig, variant: BoundVariant) -> Result<Option<f64>> {
    config
        .bound_dims
        .map(|(p1, p2)| theorem1_bound(data.len(), data.bound(), config.delta, p1, p2, variant))
        .transpose()
}

fn execute(data: &TimeSeriesDataset, method: Method, config: &ExperimentConfig) -> Result<Outcome> {
    let m = data.len();
    let search = config.search_config(data);
    let (l1, l2) = (&search.learner1, &search.learner2);
    let baselines = &config.baselines;
    match method {
        Method::Sas => {
            let variant = match config.candidates {
                CandidateSet::Full => BoundVariant::Full,
                _ => BoundVariant::Grid,
            };
            split_outcome(data, sas_detect(data, &search)?, bound_for(data, config, variant)?)
        }
        Method::SasGrid => split_outcome(data, sas_grid_detect(data, &search)?, bound_for(data, config, BoundVariant::Grid)?),
        Method::Sasf => split_outcome(data, sasf_detect(data, &search)?, bound_for(data, config, BoundVariant::Grid)?),
        Method::MultiK => {
            let specs = vec![l2.clone(); config.multi_k + 1];
            multi_outcome(data, multi_change_detect(data, config.multi_k, &specs, &config.multi_candidates)?, None)
        }
        Method::Srm => {
            let srm = SrmConfig::new(config.max_k, l2.clone(), config.delta);
            let sel = srm_select_k(data, &srm, &config.multi_candidates)?;
            multi_outcome(data, sel.model, Some(sel.k_hat as f64))
        }
        Method::Penalized => {
            let p = &config.penalized;
            let out = penalized_sas_detect(
                data,
                &PenalizedConfig {
                    side1: p.side1,
                    side2: p.side2,
                    candidates: p.candidates.clone(),
                },
            )?;
            split_outcome(data, out.model, None)
        }
        Method::Cgf => {
            let res = sweep_best(data, l2, &SweepGrid::Cgf(baselines.lambda_grid()), baselines.stride)?;
            Ok(Outcome::timeline_only(res.timeline, Some(res.param)))
        }
        Method::Caf => {
            let res = sweep_best(data, l2, &SweepGrid::Caf(baselines.window_grid(m)), baselines.stride)?;
            Ok(Outcome::timeline_only(res.timeline, Some(res.param)))
        }
        Method::Mcsprt => match mcsprt_detect(data.rows(0, m, FeatureView::All), &baselines.mcsprt)? {
            Some(t0) => {
                let h1 = fit_segment(l1, data, 0, t0 - 1)?.hypothesis;
                let h2 = fit_segment(l2, data, t0 - 1, m)?.hypothesis;
                let model = SplitModel {
                    empirical_risk: crate::risk::empirical_risk(data, &h1, &h2, t0)?,
                    true_risk: match data.eta() {
                        Some(_) => Some(true_risk(data, &h1, &h2, t0)?),
                        None => None,
                    },
                    h1,
                    h2,
                    t_hat: t0,
                };
                split_outcome(data, model, None)
            }
            None => {
                let h = fit_segment(l2, data, 0, m)?.hypothesis;
                let timeline = single_timeline(data, &h)?;
                let true_risk = match data.eta() {
                    Some(eta) => Some(
                        (0..m).map(|i| (h.predict(data.row(i)) - eta[i]).powi(2)).sum::<f64>() / m as f64,
                    ),
                    None => None,
                };
                Ok(Outcome {
                    true_risk,
                    ..Outcome::timeline_only(timeline, None)
                })
            }
        },
        Method::Rs => {
            let timeline = random_split_timeline(data, l1, l2, baselines.rs.num_trials, config.seed)?;
            Ok(Outcome::timeline_only(timeline, None))
        }
    }
}

/// Centered moving average; windows are truncated at the edges and the
/// mean is taken over the entries that remain.
pub fn moving_average(timeline: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::invalid("moving-average window must be >= 1"));
    }
    let n = timeline.len();
    let before = (window - 1) / 2;
    let after = window / 2;
    Ok((0..n)
        .map(|i| {
            let lo = i.saturating_sub(before);
            let hi = (i + after + 1).min(n);
            timeline[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect())
}

/// Inputs to the single-change bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub p1: usize,
    pub p2: usize,
    pub delta: f64,
    pub variant: BoundVariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcessRiskSummary {
    pub true_risk: f64,
    /// True risk of the same search run against the true means.
    pub reference_true_risk: f64,
    pub excess: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares a fitted model's true risk with that of the same search run on
/// the noise-free responses, and checks the gap against the bound.
pub fn excess_risk_summary(
    data: &TimeSeriesDataset,
    model: &SplitModel,
    search: &SearchConfig,
    inputs: BoundInputs,
) -> Result<ExcessRiskSummary> {
    let fitted = true_risk(data, &model.h1, &model.h2, model.t_hat)?;
    excess_risk_for(data, fitted, search, inputs)
}

/// As [`excess_risk_summary`], for a model whose true risk is already known.
pub fn excess_risk_for(data: &TimeSeriesDataset, fitted: f64, search: &SearchConfig, inputs: BoundInputs) -> Result<ExcessRiskSummary> {
    let clean = data.eta_as_targets()?;
    let candidates = search.candidates.split_indices(data.len(), data.bound())?;
    let reference = search_splits(&clean, &search.learner1, &search.learner2, &candidates)?.model;
    let reference_true_risk = true_risk(data, &reference.h1, &reference.h2, reference.t_hat)?;
    let bound = theorem1_bound(data.len(), data.bound(), inputs.delta, inputs.p1, inputs.p2, inputs.variant)?;
    let excess = fitted - reference_true_risk;
    Ok(ExcessRiskSummary {
        true_risk: fitted,
        reference_true_risk,
        excess,
        bound,
        holds: excess <= bound,
    })
}

/// Tidy CSV of every report's timeline: `t,method,sq_error,smoothed`.
pub fn write_timelines_csv(reports: &[DetectionReport], out: &mut (impl Write + ?Sized)) -> Result<()> {
    let io = |e: std::io::Error| Error::io("<timelines>", e);
    writeln!(out, "t,method,sq_error,smoothed").map_err(io)?;
    for r in reports {
        for (i, (e, s)) in r.timeline.iter().zip(&r.smoothed).enumerate() {
            writeln!(out, "{},{},{},{}", i + 1, r.method, e, s).map_err(io)?;
        }
    }
    Ok(())
}
