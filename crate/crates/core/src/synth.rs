// SPDX-License-Identifier: MIT OR Apache-2.0

//! Synthetic two-regime Gaussian benchmarks.
//!
//! Inputs are equicorrelated with correlation `rho_input`. The response is
//! correlated `rho_low` with one half of the inputs and `rho_high` with the
//! other, and the halves swap at the change. When those correlations are not
//! jointly realizable the cross-correlation vector is scaled down uniformly.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{MinMaxScaling, TimeSeriesDataset};
use crate::error::{Error, Result};

/// Which input half is placed in the trailing "new feature" block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NewBlock {
    /// The half that drives the response after the change.
    #[default]
    RelevantAfterChange,
    /// The half that drives the response before the change.
    RelevantBeforeChange,
    /// No new features: every input is old.
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// Number of inputs `n` (even).
    pub num_inputs: usize,
    pub rho_input: f64,
    pub rho_low: f64,
    pub rho_high: f64,
    pub m: usize,
    /// Rows `1..=change_at` come from the first regime.
    pub change_at: usize,
    pub num_datasets: usize,
    pub seed: u64,
    /// Target value of `c' Sxx^-1 c` when the literal correlations are
    /// infeasible.
    pub feasibility_margin: f64,
    #[serde(default)]
    pub new_block: NewBlock,
}

impl SyntheticSpec {
    /// 1000 inputs, 10000 rows, change after row 5000, 100 replicates.
    pub fn paper_scale(seed: u64) -> Self {
        Self {
            num_inputs: 1000,
            rho_input: 0.2,
            rho_low: 0.1,
            rho_high: 0.7,
            m: 10_000,
            change_at: 5000,
            num_datasets: 100,
            seed,
            feasibility_margin: 0.9,
            new_block: NewBlock::default(),
        }
    }

    /// Same correlations with 40 inputs and 2000 rows.
    pub fn desk_scale(seed: u64) -> Self {
        Self {
            num_inputs: 40,
            m: 2000,
            change_at: 1000,
            num_datasets: 20,
            ..Self::paper_scale(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_inputs;
        if n < 2 || n % 2 != 0 {
            return Err(Error::invalid(format!("num_inputs must be even and >= 2, got {n}")));
        }
        if !(self.rho_input > 0.0 && self.rho_input < 1.0) {
            return Err(Error::invalid(format!("rho_input must lie in (0, 1), got {}", self.rho_input)));
        }
        if !(0.0 <= self.rho_low && self.rho_low < self.rho_high && self.rho_high < 1.0) {
            return Err(Error::invalid(format!(
                "need 0 <= rho_low < rho_high < 1, got {} and {}",
                self.rho_low, self.rho_high
            )));
        }
        if self.m == 0 || self.change_at < 1 || self.change_at > self.m {
            return Err(Error::invalid(format!("need 1 <= change_at <= m, got {} and {}", self.change_at, self.m)));
        }
        if !(self.feasibility_margin > 0.0 && self.feasibility_margin <= 1.0) {
            return Err(Error::invalid("feasibility_margin must lie in (0, 1]"));
        }
        if self.num_datasets == 0 {
            return Err(Error::invalid("num_datasets must be >= 1"));
        }
        Ok(())
    }

    fn half(&self) -> usize {
        self.num_inputs / 2
    }

    /// Literal cross-correlations for `regime` (1 or 2), before scaling.
    fn literal_correlations(&self, regime: u8) -> DVector<f64> {
        let h = self.half();
        let (first, second) = if regime == 1 {
            (self.rho_low, self.rho_high)
        } else {
            (self.rho_high, self.rho_low)
        };
        DVector::from_fn(self.num_inputs, |i, _| if i < h { first } else { second })
    }

    /// `c' Sxx^-1 c` for the literal correlations; the same for both regimes.
    pub fn literal_quadratic_form(&self) -> f64 {
        quadratic_form(&self.literal_correlations(1), self.rho_input)
    }

    /// Uniform factor applied to the cross-correlations: 1 when feasible,
    /// otherwise `sqrt(margin / q)`.
    pub fn feasibility_scale(&self) -> f64 {
        let q = self.literal_quadratic_form();
        if q < 1.0 {
            1.0
        } else {
            (self.feasibility_margin / q).sqrt()
        }
    }

    /// Dataset column `j` holds original input `column_order()[j]`: old
    /// inputs first, then the new block.
    pub fn column_order(&self) -> Vec<usize> {
        let h = self.half();
        let n = self.num_inputs;
        match self.new_block {
            // The second half drives regime 1, the first half regime 2.
            NewBlock::RelevantAfterChange => (h..n).chain(0..h).collect(),
            NewBlock::RelevantBeforeChange | NewBlock::None => (0..n).collect(),
        }
    }

    pub fn new_features(&self) -> usize {
        match self.new_block {
            NewBlock::None => 0,
            _ => self.half(),
        }
    }
}

fn check_regime(regime: u8) -> Result<()> {
    if regime == 1 || regime == 2 {
        Ok(())
    } else {
        Err(Error::invalid(format!("regime must be 1 or 2, got {regime}")))
    }
}

/// `Sxx^-1 v` for `Sxx = (1 - rho) I + rho J`:
/// `(v - rho sum(v) / (1 - rho + n rho) 1) / (1 - rho)`.
fn equicorrelation_solve(v: &DVector<f64>, rho: f64) -> DVector<f64> {
    let n = v.len() as f64;
    let shift = rho * v.sum() / (1.0 - rho + n * rho);
    v.map(|x| (x - shift) / (1.0 - rho))
}

fn quadratic_form(c: &DVector<f64>, rho: f64) -> f64 {
    let n = c.len() as f64;
    (c.norm_squared() - rho / (1.0 - rho + n * rho) * c.sum().powi(2)) / (1.0 - rho)
}

/// Scaled cross-correlation vector of a regime.
pub fn cross_correlations(spec: &SyntheticSpec, regime: u8) -> Result<DVector<f64>> {
    spec.validate()?;
    check_regime(regime)?;
    Ok(spec.literal_correlations(regime) * spec.feasibility_scale())
}

/// Joint covariance of `(x_1..x_n, y)` for a regime, and the scale applied
/// to the cross-correlations.
pub fn build_covariance(spec: &SyntheticSpec, regime: u8) -> Result<(DMatrix<f64>, f64)> {
    let c = cross_correlations(spec, regime)?;
    let n = spec.num_inputs;
    let rho = spec.rho_input;
    let sigma = DMatrix::from_fn(n + 1, n + 1, |i, j| match (i == n, j == n) {
        (true, true) => 1.0,
        (true, false) => c[j],
        (false, true) => c[i],
        _ if i == j => 1.0,
        _ => rho,
    });
    if Cholesky::new(sigma.clone()).is_none() {
        return Err(Error::Numerical(format!(
            "covariance of regime {regime} is not positive definite (c' Sxx^-1 c = {})",
            quadratic_form(&c, rho)
        )));
    }
    Ok((sigma, spec.feasibility_scale()))
}

/// Regression weights `Sxx^-1 c` of the conditional mean, in original input
/// order.
pub fn conditional_mean_weights(spec: &SyntheticSpec, regime: u8) -> Result<DVector<f64>> {
    Ok(equicorrelation_solve(&cross_correlations(spec, regime)?, spec.rho_input))
}

/// `E[y | x] = c' Sxx^-1 x` for inputs in original order, on the
/// unnormalized scale.
pub fn conditional_mean_oracle(spec: &SyntheticSpec, regime: u8, x: &[f64]) -> Result<f64> {
    if x.len() != spec.num_inputs {
        return Err(Error::invalid(format!("expected {} inputs, got {}", spec.num_inputs, x.len())));
    }
    let w = conditional_mean_weights(spec, regime)?;
    Ok(w.iter().zip(x).map(|(a, b)| a * b).sum())
}

/// A generated dataset and how it was produced.
#[derive(Clone, Debug)]
pub struct SyntheticDataset {
    pub data: TimeSeriesDataset,
    /// Factor applied to the cross-correlations.
    pub scale: f64,
    /// Original input index of each dataset column.
    pub column_order: Vec<usize>,
    /// One-based index of the first second-regime row.
    pub true_split: usize,
    /// Affine map from raw responses to `[0, 1]`.
    pub normalization: MinMaxScaling,
    pub replicate: usize,
}

fn sample_rows(factor: &DMatrix<f64>, count: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let dim = factor.nrows();
    let z = DMatrix::<f64>::from_fn(count, dim, |_, _| StandardNormal.sample(&mut *rng));
    z * factor.transpose()
}

/// Replicate 0 of the two-regime benchmark.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticDataset> {
    generate_replicate(spec, 0)
}

/// All `num_datasets` replicates, generated in parallel.
pub fn generate_replicates(spec: &SyntheticSpec) -> Result<Vec<SyntheticDataset>> {
    spec.validate()?;
    (0..spec.num_datasets).into_par_iter().map(|r| generate_replicate(spec, r)).collect()
}

/// Replicate `r`, drawn from stream `r` of a ChaCha8 generator seeded with
/// `spec.seed`. Responses and true means are min-max normalized jointly so
/// both lie in `[0, 1]`.
pub fn generate_replicate(spec: &SyntheticSpec, replicate: usize) -> Result<SyntheticDataset> {
    spec.validate()?;
    let n = spec.num_inputs;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(replicate as u64);

    let mut raw = Vec::with_capacity(spec.m * (n + 1));
    let mut eta = Vec::with_capacity(spec.m);
    for (regime, count) in [(1u8, spec.change_at), (2u8, spec.m - spec.change_at)] {
        if count == 0 {
            continue;
        }
        let (sigma, _) = build_covariance(spec, regime)?;
        let factor = Cholesky::new(sigma).expect("checked in build_covariance").unpack();
        let w = conditional_mean_weights(spec, regime)?;
        let block = sample_rows(&factor, count, &mut rng);
        for i in 0..count {
            let row = block.row(i);
            raw.extend(row.iter().copied());
            eta.push((0..n).map(|j| w[j] * row[j]).sum::<f64>());
        }
    }

    let order = spec.column_order();
    let mut features = Vec::with_capacity(spec.m * n);
    let mut targets = Vec::with_capacity(spec.m);
    for row in raw.chunks(n + 1) {
        features.extend(order.iter().map(|&j| row[j]));
        targets.push(row[n]);
    }
    let scaling = MinMaxScaling::fit([targets.as_slice(), eta.as_slice()]).expect("non-empty series");
    let k = spec.new_features();
    let data = TimeSeriesDataset::from_flat(
        features,
        scaling.apply_all(&targets),
        Some(scaling.apply_all(&eta)),
        n - k,
        k,
        1.0,
    )?;
    Ok(SyntheticDataset {
        data,
        scale: spec.feasibility_scale(),
        column_order: order,
        true_split: spec.change_at + 1,
        normalization: scaling,
        replicate,
    })
}

/// Benchmark where new inputs appear relevant only after the change: the
/// response follows the old block before `change_at` and the new block after.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureAdditionSpec {
    pub old_features: usize,
    pub new_features: usize,
    pub m: usize,
    pub change_at: usize,
    /// Standard deviation of the additive Gaussian noise.
    pub noise: f64,
    pub seed: u64,
}

impl FeatureAdditionSpec {
    /// 100 old and 5 new inputs over 2000 rows.
    pub fn desk_scale(seed: u64) -> Self {
        Self {
            old_features: 100,
            new_features: 5,
            m: 2000,
            change_at: 1000,
            noise: 0.1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.old_features == 0 || self.new_features == 0 {
            return Err(Error::invalid("need at least one old and one new feature"));
        }
        if self.m == 0 || self.change_at < 1 || self.change_at > self.m {
            return Err(Error::invalid(format!("need 1 <= change_at <= m, got {} and {}", self.change_at, self.m)));
        }
        if !(self.noise >= 0.0) {
            return Err(Error::invalid("noise must be >= 0"));
        }
        Ok(())
    }
}

/// Standard normal inputs; `y = w_old . x_old + e` up to `change_at`, then
/// `y = w_new . x_new + e`. Weights are drawn with unit total variance.
/// Responses and true means are min-max normalized jointly.
pub fn generate_feature_addition(spec: &FeatureAdditionSpec) -> Result<SyntheticDataset> {
    spec.validate()?;
    let (d, k) = (spec.old_features, spec.new_features);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut normal = move || -> f64 { StandardNormal.sample(&mut rng) };
    let w_old: Vec<f64> = (0..d).map(|_| normal() / (d as f64).sqrt()).collect();
    let w_new: Vec<f64> = (0..k).map(|_| normal() / (k as f64).sqrt()).collect();
    let mut features = Vec::with_capacity(spec.m * (d + k));
    let mut targets = Vec::with_capacity(spec.m);
    let mut eta = Vec::with_capacity(spec.m);
    for t in 0..spec.m {
        let x: Vec<f64> = (0..d + k).map(|_| normal()).collect();
        let mean = if t < spec.change_at {
            w_old.iter().zip(&x[..d]).map(|(a, b)| a * b).sum::<f64>()
        } else {
            w_new.iter().zip(&x[d..]).map(|(a, b)| a * b).sum::<f64>()
        };
        features.extend_from_slice(&x);
        eta.push(mean);
        targets.push(mean + spec.noise * normal());
    }
    let scaling = MinMaxScaling::fit([targets.as_slice(), eta.as_slice()]).expect("non-empty series");
    let data = TimeSeriesDataset::from_flat(
        features,
        scaling.apply_all(&targets),
        Some(scaling.apply_all(&eta)),
        d,
        k,
        1.0,
    )?;
    Ok(SyntheticDataset {
        data,
        scale: 1.0,
        column_order: (0..d + k).collect(),
        true_split: spec.change_at + 1,
        normalization: scaling,
        replicate: 0,
    })
}
