// SPDX-License-Identifier: MIT OR Apache-2.0


use super::{FitDiagnostics, Fitted, LearnerSpec, Schema};
use crate::data::FeatureView;
use crate::error::{Error, Result};
use crate::linalg::CenteredMoments;
use crate::model::{LinearModel, Predictor};

/// Streaming least-squares fitter over a growing block of rows.
///
/// Keeps running centered moments so the fit at every prefix length costs one
/// `p x p` solve instead of a pass over the data. Rows can be pushed in any
/// order, so pushing a dataset back to front yields suffix fits.
#[derive(Clone, Debug)]
pub struct PrefixFitter {
    moments: CenteredMoments,
    ridge: f64,
    view: FeatureView,
    schema: Schema,
}

impl PrefixFitter {
    /// Errors unless `spec` is one of the least-squares families.
    pub fn new(spec: &LearnerSpec, width: usize, schema: Schema) -> Result<Self> {
        let ridge = spec.ridge_lambda().ok_or_else(|| {
            Error::invalid(format!(
                "incremental fitting supports least squares and ridge only, not {:?}",
                spec.family
            ))
        })?;
        Ok(Self {
            moments: CenteredMoments::new(width),
            ridge,
            view: spec.view,
            schema,
        })
    }

    /// Adds one row (already restricted to the fitter's view).
    pub fn push(&mut self, x: &[f64], y: f64) {
        self.moments.push(x, y, 1.0);
    }

    pub fn len(&self) -> usize {
        self.moments.count()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.count() == 0
    }

    /// Snapshot of the running moments, for solving off the hot loop.
    pub fn moments(&self) -> &CenteredMoments {
        &self.moments
    }

    /// Least-squares fit of every row pushed so far.
    pub fn fit(&self) -> Fitted {
        Self::fit_moments(&self.moments, self.ridge, self.view, self.schema)
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    pub fn view(&self) -> FeatureView {
        self.view
    }

    pub fn schema(&self) -> Schema {
        self.schema
    }

    /// Fit from a moments snapshot taken off a fitter with the same settings.
    pub fn fit_moments(moments: &CenteredMoments, ridge: f64, view: FeatureView, schema: Schema) -> Fitted {
        if moments.count() == 0 {
            return schema.zero(view);
        }
        let (w, b) = moments.solve(ridge);
        Fitted {
            hypothesis: schema.hypothesis(
                Predictor::Linear(LinearModel {
                    weights: w.iter().copied().collect::<Vec<_>>(),
                    intercept: b,
                }),
                view,
            ),
            diagnostics: FitDiagnostics {
                iterations: 1,
                converged: true,
                ..FitDiagnostics::default()
            },
        }
    }
}

#[cfg(test)]
/// Weights of a linear fit as a vector, for comparisons in tests.
pub(crate) fn linear_params(f: &Fitted) -> Option<nalgebra::DVector<f64>> {
    match &f.hypothesis.predictor {
        Predictor::Linear(m) => {
            let mut v: Vec<f64> = m.weights.clone();
            v.push(m.intercept);
            Some(nalgebra::DVector::from_vec(v))
        }
        Predictor::Constant(c) => Some(nalgebra::DVector::from_element(1, *c)),
        _ => None,
    }
}
