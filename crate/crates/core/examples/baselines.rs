// SPDX-License-Identifier: MIT OR Apache-2.0

//! Forgetting baselines, the CUSUM detector, and random splits on one
//! synthetic dataset.

use splitsearch::baselines::{
    default_lambda_grid, default_window_grid, mcsprt_detect, random_split_timeline, sweep_best, McsprtConfig,
    SweepGrid,
};
use splitsearch::data::FeatureView;
use splitsearch::learners::LearnerSpec;
use splitsearch::synth::{generate, SyntheticSpec};

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn main() -> splitsearch::error::Result<()> {
    let spec = SyntheticSpec {
        num_inputs: 10,
        m: 600,
        change_at: 300,
        ..SyntheticSpec::desk_scale(1)
    };
    let data = generate(&spec)?.data;
    let old = LearnerSpec::least_squares(FeatureView::OldOnly, &data);
    let all = LearnerSpec::least_squares(FeatureView::All, &data);

    let cgf = sweep_best(&data, &all, &SweepGrid::Cgf(default_lambda_grid()), 1)?;
    println!("CGF: best lambda {:.4}, mean error {:.5}", cgf.param, cgf.mean_error);
    let caf = sweep_best(&data, &all, &SweepGrid::Caf(default_window_grid(data.len())), 1)?;
    println!("CAF: best window {}, mean error {:.5}", caf.param, caf.mean_error);

    let alarm = mcsprt_detect(data.rows(0, data.len(), FeatureView::All), &McsprtConfig::default())?;
    println!("MCSPRT alarm: {alarm:?}");

    let rs = random_split_timeline(&data, &old, &all, 100, 0)?;
    println!("RS: mean error {:.5}", mean(&rs));
    Ok(())
}
