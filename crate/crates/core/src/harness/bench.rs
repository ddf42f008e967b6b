// SPDX-License-Identifier: MIT OR Apache-2.0

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{run_method, ExperimentConfig, Method};
use crate::data::TimeSeriesDataset;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: Method,
    pub median_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawTiming {
    pub method: Method,
    pub repetition: usize,
    pub ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    pub raw: Vec<RawTiming>,
}

impl BenchTable {
    pub fn median(&self, method: Method) -> Option<f64> {
        self.rows.iter().find(|r| r.method == method).map(|r| r.median_ms)
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median wall-clock time of each method over `repetitions` sequential runs.
/// Repeated methods are timed once.
pub fn bench(data: &TimeSeriesDataset, methods: &[Method], repetitions: usize, config: &ExperimentConfig) -> Result<BenchTable> {
    if repetitions == 0 {
        return Err(Error::invalid("repetitions must be >= 1"));
    }
    let config = ExperimentConfig {
        parallel_methods: false,
        ..config.clone()
    };
    let mut rows = Vec::new();
    let mut raw = Vec::new();
    for (i, &method) in methods.iter().enumerate() {
        if methods[..i].contains(&method) {
            continue;
        }
        let mut times = Vec::with_capacity(repetitions);
        for repetition in 0..repetitions {
            let start = Instant::now();
            run_method(data, method, &config)?;
            let ms = (start.elapsed().as_secs_f64() * 1e3).max(f64::MIN_POSITIVE);
            times.push(ms);
            raw.push(RawTiming { method, repetition, ms });
        }
        rows.push(BenchRow {
            method,
            median_ms: median(&mut times),
        });
    }
    Ok(BenchTable { rows, raw })
}
