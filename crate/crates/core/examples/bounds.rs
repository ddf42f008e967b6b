// SPDX-License-Identifier: MIT OR Apache-2.0

//! Generalization bound and SRM penalty values across sample sizes.

use splitsearch::detection::{srm_penalty, theorem1_bound, BoundVariant};

fn main() -> splitsearch::error::Result<()> {
    println!("{:>8} {:>12} {:>12} {:>12}", "m", "full", "grid", "srm K=2");
    for m in [100, 1_000, 10_000, 100_000] {
        let full = theorem1_bound(m, 1.0, 0.05, 21, 41, BoundVariant::Full)?;
        let grid = theorem1_bound(m, 1.0, 0.05, 21, 41, BoundVariant::Grid)?;
        let srm = srm_penalty(2, m, 1.0, 0.05, &[21, 41, 41])?;
        println!("{m:>8} {full:>12.4} {grid:>12.4} {srm:>12.4}");
    }
    Ok(())
}
