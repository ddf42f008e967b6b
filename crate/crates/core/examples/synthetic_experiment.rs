// SPDX-License-Identifier: MIT OR Apache-2.0

//! Generates the two-regime benchmark, runs a handful of methods through the
//! harness, and writes their error timelines as CSV to stdout.

use splitsearch::harness::{run_experiment, write_timelines_csv, ExperimentConfig, Method};
use splitsearch::synth::{generate, SyntheticSpec};

fn main() -> splitsearch::error::Result<()> {
    let spec = SyntheticSpec {
        num_inputs: 10,
        m: 400,
        change_at: 200,
        ..SyntheticSpec::desk_scale(3)
    };
    let set = generate(&spec)?;
    eprintln!(
        "feasibility scale {:.4}, true split {}",
        set.scale, set.true_split
    );
    let config = ExperimentConfig {
        bound_dims: Some((set.data.old_features() + 1, set.data.num_features() + 1)),
        ..ExperimentConfig::default()
    };
    let reports = run_experiment(&set.data, &[Method::Sas, Method::Sasf, Method::Caf, Method::Rs], &config)?;
    for r in &reports {
        eprintln!("{:>5}: t_hat {:?}, mean MSE {:.5}", r.method, r.t_hat, r.mean_mse);
    }
    write_timelines_csv(&reports, &mut std::io::stdout().lock())
}
