// SPDX-License-Identifier: MIT OR Apache-2.0

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::TimeSeriesDataset;
use crate::error::{Error, Result};
use crate::learners::{fit_segment, LearnerSpec};
use crate::model::SplitModel;
use crate::risk::{empirical_risk, predict_timeline};

/// Pointwise mean timeline over `num_trials` uniformly drawn splits.
///
/// Trial `i` draws its split from stream `i` of a ChaCha8 generator seeded
/// with `seed`, so the result does not depend on scheduling.
pub fn random_split_timeline(
    data: &TimeSeriesDataset,
    learner1: &LearnerSpec,
    learner2: &LearnerSpec,
    num_trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if num_trials == 0 {
        return Err(Error::invalid("random split needs at least one trial"));
    }
    learner1.validate()?;
    learner2.validate()?;
    let m = data.len();
    let timelines: Vec<Vec<f64>> = (0..num_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let t0 = rng.random_range(1..=m + 1);
            let h1 = fit_segment(learner1, data, 0, t0 - 1)?.hypothesis;
            let h2 = fit_segment(learner2, data, t0 - 1, m)?.hypothesis;
            let empirical_risk = empirical_risk(data, &h1, &h2, t0)?;
            predict_timeline(
                data,
                &SplitModel {
                    h1,
                    h2,
                    t_hat: t0,
                    empirical_risk,
                    true_risk: None,
                },
            )
        })
        .collect::<Result<_>>()?;
    let mut mean = vec![0.0; m];
    for tl in &timelines {
        for (acc, v) in mean.iter_mut().zip(tl) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|v| *v /= num_trials as f64);
    Ok(mean)
}
