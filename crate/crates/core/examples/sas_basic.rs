// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exhaustive split search on a noisy series whose slope flips at row 121.

use splitsearch::data::TimeSeriesDataset;
use splitsearch::detection::{sas_detect, SearchConfig};

fn main() -> splitsearch::error::Result<()> {
    let m = 200;
    let rows: Vec<Vec<f64>> = (0..m).map(|t| vec![(t as f64 * 0.37).sin()]).collect();
    let y: Vec<f64> = rows
        .iter()
        .enumerate()
        .map(|(t, x)| {
            let noise = 0.05 * ((t * 7919 % 101) as f64 / 101.0 - 0.5);
            let slope = if t < 120 { 0.4 } else { -0.4 };
            0.5 + slope * x[0] + noise
        })
        .collect();
    let data = TimeSeriesDataset::from_rows(&rows, y, None, 1, 0, 1.0)?;

    let model = sas_detect(&data, &SearchConfig::least_squares(&data))?;
    println!("t_hat = {} (true 121)", model.t_hat);
    println!("empirical risk = {:.6}", model.empirical_risk);
    Ok(())
}
