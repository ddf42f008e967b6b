// SPDX-License-Identifier: MIT OR Apache-2.0

use nalgebra::{DMatrix, DVector};

use super::{FitDiagnostics, Fitted, Schema, SolverConfig};
use crate::data::{FeatureView, Rows};
use crate::error::{Error, Result};
use crate::linalg::solve_psd_min_norm;
use crate::model::{LinearModel, Predictor};

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACK: usize = 60;

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn check_targets(y: &[f64]) -> Result<()> {
    match y.iter().position(|v| !(0.0..=1.0).contains(v)) {
        Some(i) => Err(Error::invalid(format!(
            "logistic targets must lie in [0, 1]; row {} has {}",
            i + 1,
            y[i]
        ))),
        None => Ok(()),
    }
}

/// Parameters are laid out as `[w_1, .., w_p, b]`.
struct Problem<'a> {
    rows: Rows<'a>,
    y: &'a [f64],
    weights: Option<&'a [f64]>,
}

impl Problem<'_> {
    fn dim(&self) -> usize {
        self.rows.width() + 1
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.map_or(1.0, |w| w[i])
    }

    fn margin(&self, theta: &DVector<f64>, i: usize) -> f64 {
        let p = self.rows.width();
        self.rows.row(i).iter().zip(theta.iter()).fold(theta[p], |acc, (x, w)| acc + x * w)
    }

    /// Cross-entropy `sum_i w_i (softplus(z_i) - y_i z_i)`.
    fn objective(&self, theta: &DVector<f64>) -> f64 {
        (0..self.rows.len())
            .map(|i| {
                let z = self.margin(theta, i);
                self.weight(i) * (softplus(z) - self.y[i] * z)
            })
            .sum()
    }

    fn gradient(&self, theta: &DVector<f64>) -> DVector<f64> {
        let p = self.rows.width();
        let mut g = DVector::zeros(p + 1);
        for i in 0..self.rows.len() {
            let z = self.margin(theta, i);
            let r = self.weight(i) * (crate::model::sigmoid(z) - self.y[i]);
            for (gj, x) in g.iter_mut().zip(self.rows.row(i)) {
                *gj += r * x;
            }
            g[p] += r;
        }
        g
    }

    fn hessian(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let p = self.rows.width();
        let mut h = DMatrix::zeros(p + 1, p + 1);
        let mut a = DVector::zeros(p + 1);
        for i in 0..self.rows.len() {
            let s = crate::model::sigmoid(self.margin(theta, i));
            let c = self.weight(i) * s * (1.0 - s);
            for (aj, x) in a.iter_mut().zip(self.rows.row(i)) {
                *aj = *x;
            }
            a[p] = 1.0;
            h.ger(c, &a, &a, 1.0);
        }
        h
    }
}

/// Fractional-target cross-entropy of an affine model, as minimized by
/// [`logistic_fit`]. Exposed for gradient and objective checks.
pub fn logistic_objective(rows: Rows<'_>, y: &[f64], weights: Option<&[f64]>, model: &LinearModel) -> f64 {
    let mut theta: Vec<f64> = model.weights.clone();
    theta.push(model.intercept);
    Problem { rows, y, weights }.objective(&DVector::from_vec(theta))
}

/// Gradient of [`logistic_objective`] with respect to `(weights, intercept)`.
pub fn logistic_gradient(rows: Rows<'_>, y: &[f64], weights: Option<&[f64]>, model: &LinearModel) -> LinearModel {
    let mut theta: Vec<f64> = model.weights.clone();
    theta.push(model.intercept);
    to_linear(&Problem { rows, y, weights }.gradient(&DVector::from_vec(theta)))
}

fn to_linear(theta: &DVector<f64>) -> LinearModel {
    let p = theta.len() - 1;
    LinearModel {
        weights: theta.rows(0, p).iter().copied().collect(),
        intercept: theta[p],
    }
}

/// Logistic regression with fractional targets by damped Newton steps.
///
/// Each iteration solves the Newton system (minimum-norm when the Hessian is
/// singular, as on separable data) and backtracks until the Armijo condition
/// holds; if the Newton direction fails, a backtracked gradient step is
/// taken instead. The objective is nonincreasing across iterations. Hitting
/// the iteration cap returns the last iterate with `converged = false`.
pub fn logistic_fit(
    rows: Rows<'_>,
    y: &[f64],
    weights: Option<&[f64]>,
    solver: &SolverConfig,
    view: FeatureView,
    schema: Schema,
) -> Result<Fitted> {
    check_targets(y)?;
    if rows.is_empty() {
        return Ok(schema.zero(view));
    }
    let prob = Problem { rows, y, weights };
    let mut theta = DVector::zeros(prob.dim());
    let mut f = prob.objective(&theta);
    let mut grad = prob.gradient(&theta);
    let mut iterations = 0;
    while grad.norm() > solver.tolerance && iterations < solver.max_iterations {
        iterations += 1;
        let newton = -solve_psd_min_norm(&prob.hessian(&theta), &grad);
        let mut accepted = None;
        for dir in [newton, -grad.clone()] {
            let slope = grad.dot(&dir);
            if !(slope < 0.0) {
                continue;
            }
            let mut step = 1.0;
            for _ in 0..MAX_BACKTRACK {
                let cand = &theta + &dir * step;
                let fc = prob.objective(&cand);
                if fc <= f + ARMIJO * step * slope {
                    accepted = Some((cand, fc));
                    break;
                }
                step *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
        }
        match accepted {
            Some((cand, fc)) => {
                theta = cand;
                f = fc;
                grad = prob.gradient(&theta);
            }
            None => break,
        }
    }
    let gradient_norm = grad.norm();
    Ok(Fitted {
        hypothesis: schema.hypothesis(Predictor::Logistic(to_linear(&theta)), view),
        diagnostics: FitDiagnostics {
            iterations,
            final_objective: f,
            converged: gradient_norm <= solver.tolerance,
            gradient_norm,
            jitter: 0.0,
        },
    })
}

/// Proximal operator of `threshold * |v|`.
pub fn soft_threshold(v: f64, threshold: f64) -> f64 {
    if v > threshold {
        v - threshold
    } else if v < -threshold {
        v + threshold
    } else {
        0.0
    }
}

/// L1-regularized logistic regression by proximal gradient descent.
///
/// Minimizes `cross_entropy + l1 * |w|_1` with the intercept unpenalized.
/// The step size is found by backtracking on the quadratic upper bound of the
/// smooth part and allowed to grow again by a factor of two per iteration.
/// Convergence is measured on the norm of the gradient mapping
/// `(theta - prox(theta - s * grad)) / s`.
pub fn l1_logistic_fit(
    rows: Rows<'_>,
    y: &[f64],
    l1: f64,
    solver: &SolverConfig,
    view: FeatureView,
    schema: Schema,
) -> Result<Fitted> {
    check_targets(y)?;
    if !(l1 >= 0.0) {
        return Err(Error::invalid(format!("L1 penalty must be >= 0, got {l1}")));
    }
    if rows.is_empty() {
        return Ok(schema.zero(view));
    }
    let prob = Problem {
        rows,
        y,
        weights: None,
    };
    let p = rows.width();
    let penalty = |t: &DVector<f64>| l1 * t.rows(0, p).iter().map(|v| v.abs()).sum::<f64>();
    let prox = |t: DVector<f64>, s: f64| {
        let mut out = t;
        for j in 0..p {
            out[j] = soft_threshold(out[j], s * l1);
        }
        out
    };

    let mut theta = DVector::zeros(p + 1);
    let mut f = prob.objective(&theta);
    let mut grad = prob.gradient(&theta);
    // 1/L for the cross-entropy is at least 4 / sum_i |(x_i, 1)|^2.
    let lipschitz = 0.25 * rows.iter().map(|x| 1.0 + x.iter().map(|v| v * v).sum::<f64>()).sum::<f64>();
    let mut step = 1.0 / lipschitz.max(f64::MIN_POSITIVE);
    let mut iterations = 0;
    let mut mapping_norm = f64::INFINITY;
    while iterations < solver.max_iterations {
        iterations += 1;
        let mut s = step * 2.0;
        let (next, f_next) = loop {
            let cand = prox(&theta - &grad * s, s);
            let diff = &cand - &theta;
            let fc = prob.objective(&cand);
            if fc <= f + grad.dot(&diff) + diff.norm_squared() / (2.0 * s) || s < 1e-300 {
                break (cand, fc);
            }
            s *= 0.5;
        };
        step = s;
        mapping_norm = (&theta - &next).norm() / s;
        theta = next;
        f = f_next;
        grad = prob.gradient(&theta);
        if mapping_norm <= solver.tolerance {
            break;
        }
    }
    Ok(Fitted {
        hypothesis: schema.hypothesis(Predictor::Logistic(to_linear(&theta)), view),
        diagnostics: FitDiagnostics {
            iterations,
            final_objective: f + penalty(&theta),
            converged: mapping_norm <= solver.tolerance,
            gradient_norm: mapping_norm,
            jitter: 0.0,
        },
    })
}
