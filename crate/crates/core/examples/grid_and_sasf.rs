// SPDX-License-Identifier: MIT OR Apache-2.0

//! Grid search and the fast feature-update search on the feature-addition
//! benchmark, compared with the exhaustive search.

use std::time::Instant;

use splitsearch::detection::{grid_step, sas_detect, sas_grid_detect, sasf_detect, SearchConfig};
use splitsearch::synth::{generate_feature_addition, FeatureAdditionSpec};

fn main() -> splitsearch::error::Result<()> {
    let spec = FeatureAdditionSpec {
        old_features: 20,
        m: 800,
        change_at: 400,
        ..FeatureAdditionSpec::desk_scale(7)
    };
    let set = generate_feature_addition(&spec)?;
    let data = &set.data;
    let config = SearchConfig::least_squares(data);
    println!("true split {}, grid step {}", set.true_split, grid_step(data.len(), data.bound()));

    for (name, detect) in [
        ("sas", sas_detect as fn(_, _) -> _),
        ("sas-grid", sas_grid_detect),
        ("sasf", sasf_detect),
    ] {
        let start = Instant::now();
        let model = detect(data, &config)?;
        println!(
            "{name:>8}: t_hat {:4}  risk {:.5}  {:.1} ms",
            model.t_hat,
            model.empirical_risk,
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    Ok(())
}
