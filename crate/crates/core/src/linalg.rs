// SPDX-License-Identifier: MIT OR Apache-2.0

//! Dense symmetric solvers and running centered moments.

use nalgebra::{DMatrix, DVector};

use crate::data::Rows;

/// Eigenvalues (or Cholesky pivots) below this fraction of the largest are
/// treated as exact zeros.
const RANK_TOL: f64 = 1e-10;

/// Solves `a x = b` for symmetric positive semi-definite `a`, returning the
/// minimum-norm solution when `a` is singular.
///
/// Columns whose diagonal entry is exactly zero are dropped up front (their
/// coefficient is zero in the minimum-norm solution), then a Cholesky
/// factorization is attempted; near-singular systems fall back to a
/// symmetric eigendecomposition pseudo-inverse.
pub fn solve_psd_min_norm(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let p = a.nrows();
    let active: Vec<usize> = (0..p).filter(|&j| a[(j, j)] > 0.0).collect();
    let mut x = DVector::zeros(p);
    if active.is_empty() {
        return x;
    }
    let sub = if active.len() == p {
        a.clone()
    } else {
        DMatrix::from_fn(active.len(), active.len(), |i, j| a[(active[i], active[j])])
    };
    let rhs = DVector::from_iterator(active.len(), active.iter().map(|&j| b[j]));
    let sol = cholesky_checked(&sub)
        .map(|chol| chol.solve(&rhs))
        .unwrap_or_else(|| pinv_solve(&sub, &rhs));
    for (k, &j) in active.iter().enumerate() {
        x[j] = sol[k];
    }
    x
}

fn cholesky_checked(a: &DMatrix<f64>) -> Option<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    let max_diag = a.diagonal().iter().fold(0.0_f64, |m, &v| m.max(v));
    let chol = nalgebra::Cholesky::new(a.clone())?;
    let l = chol.l_dirty();
    let min_pivot = (0..a.nrows()).map(|i| l[(i, i)] * l[(i, i)]).fold(f64::INFINITY, f64::min);
    (min_pivot > RANK_TOL * max_diag).then_some(chol)
}

/// Minimum-norm solve through the symmetric eigendecomposition.
pub fn pinv_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let eig = nalgebra::SymmetricEigen::new(a.clone());
    let max_ev = eig.eigenvalues.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    let cutoff = RANK_TOL * max_ev;
    let proj = eig.eigenvectors.tr_mul(b);
    let scaled = DVector::from_iterator(
        proj.len(),
        proj.iter().zip(eig.eigenvalues.iter()).map(|(&c, &ev)| {
            if ev > cutoff {
                c / ev
            } else {
                0.0
            }
        }),
    );
    &eig.eigenvectors * scaled
}

/// Outcome of a regularized symmetric positive-definite solve.
#[derive(Clone, Debug)]
pub struct JitteredSolve {
    pub solution: DVector<f64>,
    /// Extra diagonal added on top of the requested regularization.
    pub jitter: f64,
}

/// Solves `(g + lambda I) x = y` by Cholesky, adding diagonal jitter in
/// decades when the factorization fails.
pub fn solve_regularized(g: &DMatrix<f64>, lambda: f64, y: &DVector<f64>) -> Option<JitteredSolve> {
    let n = g.nrows();
    let scale = (g.trace() / n.max(1) as f64).abs().max(1.0);
    let mut jitter = 0.0;
    for attempt in 0..12 {
        let mut a = g.clone();
        for i in 0..n {
            a[(i, i)] += lambda + jitter;
        }
        if let Some(chol) = nalgebra::Cholesky::new(a) {
            return Some(JitteredSolve {
                solution: chol.solve(y),
                jitter,
            });
        }
        jitter = scale * 1e-12 * 10f64.powi(attempt);
    }
    None
}

/// Weighted, exponentially forgettable running moments of `(x, y)`:
/// total weight, means, and centered cross-products.
///
/// Updates follow the weighted Welford recurrence so that long prefixes do not
/// lose precision to cancellation.
#[derive(Clone, Debug)]
pub struct CenteredMoments {
    weight: f64,
    mean_x: DVector<f64>,
    mean_y: f64,
    cxx: DMatrix<f64>,
    cxy: DVector<f64>,
    count: usize,
}

impl CenteredMoments {
    pub fn new(dim: usize) -> Self {
        Self {
            weight: 0.0,
            mean_x: DVector::zeros(dim),
            mean_y: 0.0,
            cxx: DMatrix::zeros(dim, dim),
            cxy: DVector::zeros(dim),
            count: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.mean_x.len()
    }

    /// Number of rows currently contributing.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn total_weight(&self) -> f64 {
        self.weight
    }

    pub fn push(&mut self, x: &[f64], y: f64, w: f64) {
        debug_assert_eq!(x.len(), self.dim());
        self.count += 1;
        if w <= 0.0 {
            return;
        }
        self.weight += w;
        let r = w / self.weight;
        let p = self.dim();
        let dx = DVector::from_iterator(p, x.iter().zip(self.mean_x.iter()).map(|(a, m)| a - m));
        let dy = y - self.mean_y;
        self.mean_x.axpy(r, &dx, 1.0);
        self.mean_y += r * dy;
        // w * dx * (x - mean_new)^T == w * (1 - r) * dx * dx^T
        let c = w * (1.0 - r);
        self.cxx.ger(c, &dx, &dx, 1.0);
        self.cxy.axpy(c * dy, &dx, 1.0);
    }

    /// Removes a row previously added with the same weight.
    pub fn remove(&mut self, x: &[f64], y: f64, w: f64) {
        self.count -= 1;
        if w <= 0.0 {
            return;
        }
        let remaining = self.weight - w;
        if self.count == 0 || remaining <= 0.0 {
            *self = Self::new(self.dim());
            return;
        }
        let p = self.dim();
        // mean_old = (W mean - w x) / (W - w)
        let dx = DVector::from_iterator(p, x.iter().zip(self.mean_x.iter()).map(|(a, m)| a - m));
        let dy = y - self.mean_y;
        let c = w * self.weight / remaining;
        self.cxx.ger(-c, &dx, &dx, 1.0);
        self.cxy.axpy(-c * dy, &dx, 1.0);
        self.mean_x.axpy(-w / remaining, &dx, 1.0);
        self.mean_y -= w / remaining * dy;
        self.weight = remaining;
    }

    /// Multiplies every existing weight by `factor` (exponential forgetting).
    pub fn decay(&mut self, factor: f64) {
        self.weight *= factor;
        self.cxx *= factor;
        self.cxy *= factor;
    }

    /// Ridge solution `(w, b)` minimizing the weighted squared error plus
    /// `ridge * |w|^2`, intercept unpenalized.
    pub fn solve(&self, ridge: f64) -> (DVector<f64>, f64) {
        if self.weight <= 0.0 {
            return (DVector::zeros(self.dim()), 0.0);
        }
        let mut a = self.cxx.clone();
        symmetrize(&mut a);
        for i in 0..a.nrows() {
            a[(i, i)] += ridge;
        }
        let w = solve_psd_min_norm(&a, &self.cxy);
        let b = self.mean_y - w.dot(&self.mean_x);
        (w, b)
    }
}

fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

/// Two-pass weighted centering of a block of rows: returns the centered design
/// (rows scaled by `sqrt(w)`), centered responses, and both means.
pub fn centered_design(
    rows: Rows<'_>,
    y: &[f64],
    weights: Option<&[f64]>,
) -> (DMatrix<f64>, DVector<f64>, DVector<f64>, f64) {
    let n = rows.len();
    let p = rows.width();
    let wt = |i: usize| weights.map_or(1.0, |w| w[i]);
    let total: f64 = (0..n).map(wt).sum();
    let mut mean_x = DVector::zeros(p);
    let mut mean_y = 0.0;
    for i in 0..n {
        let w = wt(i);
        for (m, v) in mean_x.iter_mut().zip(rows.row(i)) {
            *m += w * v;
        }
        mean_y += w * y[i];
    }
    mean_x /= total;
    mean_y /= total;
    let mut xc = DMatrix::zeros(n, p);
    let mut yc = DVector::zeros(n);
    for i in 0..n {
        let s = wt(i).sqrt();
        for (j, v) in rows.row(i).iter().enumerate() {
            xc[(i, j)] = s * (v - mean_x[j]);
        }
        yc[i] = s * (y[i] - mean_y);
    }
    (xc, yc, mean_x, mean_y)
}
