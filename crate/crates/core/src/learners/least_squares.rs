// SPDX-License-Identifier: MIT OR Apache-2.0

use nalgebra::DVector;

use super::{FitDiagnostics, Fitted, Schema};
use crate::data::{FeatureView, Rows};
use crate::error::Result;
use crate::linalg::{centered_design, solve_psd_min_norm};
use crate::model::{LinearModel, Predictor};

/// Weighted (ridge) least squares with an unpenalized intercept.
///
/// Minimizes `sum_i w_i (x_i . beta + b - y_i)^2 + ridge * |beta|^2`. With
/// `ridge = 0` and a rank-deficient design the minimum-norm `beta` is
/// returned; when there are no more rows than columns the solve runs in the
/// `n x n` dual space instead.
pub fn least_squares_fit(
    rows: Rows<'_>,
    y: &[f64],
    weights: Option<&[f64]>,
    ridge: f64,
    view: FeatureView,
    schema: Schema,
) -> Result<Fitted> {
    if rows.is_empty() {
        return Ok(schema.zero(view));
    }
    let (xc, yc, mean_x, mean_y) = centered_design(rows, y, weights);
    let p = rows.width();
    let n = rows.len();
    let gram = xc.tr_mul(&xc);
    let xty = xc.tr_mul(&yc);
    let beta = if n <= p {
        let mut k = &xc * xc.transpose();
        for i in 0..n {
            k[(i, i)] += ridge;
        }
        let alpha = solve_psd_min_norm(&k, &yc);
        xc.tr_mul(&alpha)
    } else {
        let mut a = gram.clone();
        for i in 0..p {
            a[(i, i)] += ridge;
        }
        solve_psd_min_norm(&a, &xty)
    };
    let intercept = mean_y - beta.dot(&mean_x);

    let resid = &xc * &beta - &yc;
    let objective = resid.norm_squared() + ridge * beta.norm_squared();
    let grad: DVector<f64> = (&gram * &beta + &beta * ridge - &xty) * 2.0;

    Ok(Fitted {
        hypothesis: schema.hypothesis(
            Predictor::Linear(LinearModel {
                weights: beta.iter().copied().collect(),
                intercept,
            }),
            view,
        ),
        diagnostics: FitDiagnostics {
            iterations: 1,
            final_objective: objective,
            converged: true,
            gradient_norm: grad.norm(),
            jitter: 0.0,
        },
    })
}
