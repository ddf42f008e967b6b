// SPDX-License-Identifier: MIT OR Apache-2.0

//! Base learners fitted inside every split search.
//!
//! Every learner maps a block of rows (already restricted to a feature view)
//! and responses to a [`Hypothesis`]. Empty blocks always yield the constant
//! zero hypothesis so that every split index stays searchable.

mod incremental;
mod kernel;
mod least_squares;
mod logistic;

pub use incremental::PrefixFitter;
pub use kernel::{kernel_gram, kernel_ridge_fit, penalty_value};
pub use least_squares::least_squares_fit;
pub use logistic::{l1_logistic_fit, logistic_fit, logistic_gradient, logistic_objective, soft_threshold};

use serde::{Deserialize, Serialize};

use crate::data::{FeatureView, Rows, TimeSeriesDataset};
use crate::error::{Error, Result};
use crate::model::{Hypothesis, Predictor};

/// Which learning algorithm to run and its hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LearnerFamily {
    /// Best constant (the segment mean).
    Constant,
    /// Empirical risk minimization over an explicit finite class; ties go to
    /// the earliest candidate.
    FiniteClass { candidates: Vec<Predictor> },
    /// Ordinary least squares with intercept; minimum-norm when rank deficient.
    LeastSquares,
    Ridge { lambda: f64 },
    /// Cross-entropy logistic regression with fractional targets in `[0, 1]`.
    Logistic,
    L1Logistic { lambda: f64 },
    /// Gaussian-kernel ridge regression, `k(u, v) = exp(-bandwidth |u - v|^2)`.
    KernelRidge { bandwidth: f64, lambda: f64 },
}

/// Stopping rule shared by the iterative solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 500,
        }
    }
}

/// Declarative learner choice: family, feature view, and the pseudo-dimension
/// the bound calculators should assume for its class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    #[serde(flatten)]
    pub family: LearnerFamily,
    pub view: FeatureView,
    pub pseudo_dimension: usize,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl LearnerSpec {
    pub fn new(family: LearnerFamily, view: FeatureView, pseudo_dimension: usize) -> Self {
        Self {
            family,
            view,
            pseudo_dimension,
            solver: SolverConfig::default(),
        }
    }

    pub fn constant() -> Self {
        Self::new(LearnerFamily::Constant, FeatureView::OldOnly, 1)
    }

    /// Least squares on `view`; pseudo-dimension is the number of affine
    /// parameters for that view of `data`.
    pub fn least_squares(view: FeatureView, data: &TimeSeriesDataset) -> Self {
        Self::new(LearnerFamily::LeastSquares, view, data.view_width(view) + 1)
    }

    pub fn with_solver(mut self, solver: SolverConfig) -> Self {
        self.solver = solver;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.pseudo_dimension == 0 {
            return Err(Error::invalid("pseudo_dimension must be >= 1"));
        }
        if !(self.solver.tolerance > 0.0) || self.solver.max_iterations == 0 {
            return Err(Error::invalid("solver tolerance must be > 0 and max_iterations >= 1"));
        }
        match &self.family {
            LearnerFamily::Ridge { lambda } | LearnerFamily::L1Logistic { lambda } if !(*lambda >= 0.0) => {
                Err(Error::invalid(format!("regularization must be >= 0, got {lambda}")))
            }
            LearnerFamily::KernelRidge { bandwidth, lambda } if !(*bandwidth > 0.0 && *lambda > 0.0) => {
                Err(Error::invalid(format!(
                    "kernel ridge needs bandwidth > 0 and lambda > 0, got {bandwidth} and {lambda}"
                )))
            }
            LearnerFamily::FiniteClass { candidates } if candidates.is_empty() => {
                Err(Error::invalid("finite class must have at least one candidate"))
            }
            _ => Ok(()),
        }
    }

    /// Ridge penalty for the least-squares families, `None` otherwise.
    pub fn ridge_lambda(&self) -> Option<f64> {
        match self.family {
            LearnerFamily::LeastSquares => Some(0.0),
            LearnerFamily::Ridge { lambda } => Some(lambda),
            _ => None,
        }
    }

    pub fn supports_weights(&self) -> bool {
        matches!(
            self.family,
            LearnerFamily::Constant
                | LearnerFamily::LeastSquares
                | LearnerFamily::Ridge { .. }
                | LearnerFamily::Logistic
        )
    }
}

/// Solver report attached to every fit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub iterations: usize,
    pub final_objective: f64,
    pub converged: bool,
    pub gradient_norm: f64,
    /// Diagonal jitter added by the kernel solver beyond the requested lambda.
    #[serde(default)]
    pub jitter: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fitted {
    pub hypothesis: Hypothesis,
    pub diagnostics: FitDiagnostics,
}

/// Feature layout and output bound that fitted hypotheses inherit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schema {
    pub old_features: usize,
    pub new_features: usize,
    pub bound: f64,
}

impl Schema {
    pub fn of(data: &TimeSeriesDataset) -> Self {
        Self {
            old_features: data.old_features(),
            new_features: data.new_features(),
            bound: data.bound(),
        }
    }

    pub fn hypothesis(&self, predictor: Predictor, view: FeatureView) -> Hypothesis {
        Hypothesis::new(predictor, view, self.old_features, self.new_features, self.bound)
    }

    pub fn zero(&self, view: FeatureView) -> Fitted {
        Fitted {
            hypothesis: self.hypothesis(Predictor::Constant(0.0), view),
            diagnostics: FitDiagnostics {
                converged: true,
                ..FitDiagnostics::default()
            },
        }
    }
}

/// Fits `spec` on an arbitrary block of rows (already restricted to
/// `spec.view`) with optional nonnegative sample weights.
pub fn fit_rows(
    spec: &LearnerSpec,
    rows: Rows<'_>,
    y: &[f64],
    weights: Option<&[f64]>,
    schema: Schema,
) -> Result<Fitted> {
    debug_assert_eq!(rows.len(), y.len());
    if weights.is_some() && !spec.supports_weights() {
        return Err(Error::invalid(format!(
            "{:?} does not support sample weights",
            spec.family
        )));
    }
    if rows.is_empty() {
        return Ok(schema.zero(spec.view));
    }
    let view = spec.view;
    match &spec.family {
        LearnerFamily::Constant => {
            let (num, den) = y.iter().enumerate().fold((0.0, 0.0), |(n, d), (i, &v)| {
                let w = weights.map_or(1.0, |w| w[i]);
                (n + w * v, d + w)
            });
            let c = if den > 0.0 { num / den } else { 0.0 };
            let obj = y.iter().enumerate().map(|(i, &v)| weights.map_or(1.0, |w| w[i]) * (v - c).powi(2)).sum();
            Ok(Fitted {
                hypothesis: schema.hypothesis(Predictor::Constant(c), view),
                diagnostics: FitDiagnostics {
                    iterations: 1,
                    final_objective: obj,
                    converged: true,
                    ..Default::default()
                },
            })
        }
        LearnerFamily::FiniteClass { candidates } => {
            let mut best: Option<(usize, f64)> = None;
            for (c, pred) in candidates.iter().enumerate() {
                let sse: f64 = rows
                    .iter()
                    .zip(y)
                    .map(|(x, &v)| {
                        let r = pred.score(x, schema.old_features).clamp(-schema.bound, schema.bound) - v;
                        r * r
                    })
                    .sum();
                if best.is_none_or(|(_, b)| sse < b) {
                    best = Some((c, sse));
                }
            }
            let (idx, sse) = best.expect("validated non-empty");
            Ok(Fitted {
                hypothesis: schema.hypothesis(candidates[idx].clone(), view),
                diagnostics: FitDiagnostics {
                    iterations: candidates.len(),
                    final_objective: sse,
                    converged: true,
                    ..Default::default()
                },
            })
        }
        LearnerFamily::LeastSquares => least_squares_fit(rows, y, weights, 0.0, view, schema),
        LearnerFamily::Ridge { lambda } => least_squares_fit(rows, y, weights, *lambda, view, schema),
        LearnerFamily::Logistic => logistic_fit(rows, y, weights, &spec.solver, view, schema),
        LearnerFamily::L1Logistic { lambda } => l1_logistic_fit(rows, y, *lambda, &spec.solver, view, schema),
        LearnerFamily::KernelRidge { bandwidth, lambda } => {
            kernel_ridge_fit(rows, y, *bandwidth, *lambda, view, schema).map(|(f, _)| f)
        }
    }
}

/// Fits `spec` on zero-based rows `start..end` of `data`.
pub fn fit_segment(spec: &LearnerSpec, data: &TimeSeriesDataset, start: usize, end: usize) -> Result<Fitted> {
    fit_rows(
        spec,
        data.rows(start, end, spec.view),
        &data.targets()[start..end],
        None,
        Schema::of(data),
    )
}
