// SPDX-License-Identifier: MIT OR Apache-2.0

//! Several change points: a fixed-K dynamic program, then choosing K by
//! structural risk minimization.

use splitsearch::data::TimeSeriesDataset;
use splitsearch::detection::{multi_change_detect, srm_select_k, CandidateSet, SrmConfig};
use splitsearch::learners::LearnerSpec;

fn main() -> splitsearch::error::Result<()> {
    let levels = [0.2, 0.7, 0.4];
    let y: Vec<f64> = (0..300)
        .map(|t| levels[t / 100] + 0.02 * ((t * 31 % 17) as f64 / 17.0 - 0.5))
        .collect();
    let data = TimeSeriesDataset::from_targets(y, 1.0)?;

    let specs = vec![LearnerSpec::constant(); 3];
    let fixed = multi_change_detect(&data, 2, &specs, &CandidateSet::Full)?;
    println!("K = 2: change times {:?}, risk {:.6}", fixed.change_times, fixed.empirical_risk);

    let srm = srm_select_k(&data, &SrmConfig::new(4, LearnerSpec::constant(), 0.05), &CandidateSet::Full)?;
    println!("SRM picks K = {} with change times {:?}", srm.k_hat, srm.model.change_times);
    for (k, (obj, pen)) in srm.objectives.iter().zip(&srm.penalties).enumerate() {
        println!("  K = {k}: objective {obj:.4} (penalty {pen:.4})");
    }
    Ok(())
}
