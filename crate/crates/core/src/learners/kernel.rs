// SPDX-License-Identifier: MIT OR Apache-2.0

use nalgebra::{DMatrix, DVector};

use super::{FitDiagnostics, Fitted, Schema};
use crate::data::{FeatureView, Rows};
use crate::error::{Error, Result};
use crate::linalg::{solve_regularized, JitteredSolve};
use crate::model::{gaussian_kernel, KernelModel, Predictor};

/// Gram matrix `G_ij = exp(-gamma |x_i - x_j|^2)` of a block of rows.
pub fn kernel_gram(rows: Rows<'_>, gamma: f64) -> DMatrix<f64> {
    let n = rows.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = 1.0;
        for j in 0..i {
            let v = gaussian_kernel(gamma, rows.row(i), rows.row(j));
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

fn gram_of(model: &KernelModel) -> DMatrix<f64> {
    let n = model.num_support();
    DMatrix::from_fn(n, n, |i, j| model.kernel(model.support_row(i), model.support_row(j)))
}

/// Gaussian-kernel ridge regression.
///
/// The dual coefficients minimize
/// `sum_t (y_t - sum_i a_i G_it)^2 + lambda * sum_ij a_i a_j G_ij`, whose
/// stationary point is `(G + lambda I) a = y`. The system is solved by
/// Cholesky; if that fails a growing diagonal jitter is added and reported in
/// the diagnostics. Also returns the fitted `a' G a` (the model's `q` value).
pub fn kernel_ridge_fit(
    rows: Rows<'_>,
    y: &[f64],
    bandwidth: f64,
    lambda: f64,
    view: FeatureView,
    schema: Schema,
) -> Result<(Fitted, f64)> {
    if !(bandwidth > 0.0) || !(lambda > 0.0) {
        return Err(Error::invalid(format!(
            "kernel ridge needs bandwidth > 0 and lambda > 0, got {bandwidth} and {lambda}"
        )));
    }
    if rows.is_empty() {
        return Ok((schema.zero(view), 0.0));
    }
    let g = kernel_gram(rows, bandwidth);
    let yv = DVector::from_column_slice(y);
    let solved = if rows.len() == 1 {
        JitteredSolve {
            solution: DVector::from_element(1, y[0] / (1.0 + lambda)),
            jitter: 0.0,
        }
    } else {
        solve_regularized(&g, lambda, &yv).ok_or_else(|| {
            Error::Numerical(format!("kernel system of size {} could not be factorized", rows.len()))
        })?
    };
    let alpha = solved.solution;
    let fitted = &g * &alpha;
    let residual = (&fitted + &alpha * lambda - &yv).norm();
    let quad = alpha.dot(&fitted);
    let objective = (&yv - &fitted).norm_squared() + lambda * quad;
    let model = KernelModel {
        dual_coefficients: alpha.iter().copied().collect(),
        support: rows.iter().flatten().copied().collect(),
        input_dim: rows.width(),
        bandwidth,
        lambda,
    };
    let tol = 1e-8 * yv.norm().max(f64::MIN_POSITIVE);
    Ok((
        Fitted {
            hypothesis: schema.hypothesis(Predictor::Kernel(model), view),
            diagnostics: FitDiagnostics {
                iterations: 1,
                final_objective: objective,
                converged: residual <= tol,
                gradient_norm: residual,
                jitter: solved.jitter,
            },
        },
        quad,
    ))
}

/// The regularization term `lambda * a' G a` of a fitted kernel model.
pub fn penalty_value(model: &KernelModel) -> f64 {
    let alpha = DVector::from_column_slice(&model.dual_coefficients);
    if alpha.is_empty() {
        return 0.0;
    }
    let g = gram_of(model);
    model.lambda * alpha.dot(&(&g * &alpha))
}
