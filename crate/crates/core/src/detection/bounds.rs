// SPDX-License-Identifier: MIT OR Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which leading constant the two-regime bound uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// Exhaustive search over every split (constant 22).
    #[default]
    Full,
    /// Search over the square-root grid (constant 26).
    Grid,
}

impl BoundVariant {
    fn constant(self) -> f64 {
        match self {
            Self::Full => 22.0,
            Self::Grid => 26.0,
        }
    }
}

fn capacity_term(m: f64, bound: f64, p: usize) -> f64 {
    let p = p as f64;
    3.0 * p * (std::f64::consts::E * m * bound / p).ln()
}

/// Excess-risk bound for a single change:
///
/// `C B sqrt((2 ln(2 (m + 1) / delta) + sum_j 3 p_j ln(e m B / p_j)) / m)`
/// with `C = 22` (full search) or `26` (grid search).
pub fn theorem1_bound(m: usize, bound: f64, delta: f64, p1: usize, p2: usize, variant: BoundVariant) -> Result<f64> {
    if p1.min(p2) < 1 || m < p1.max(p2) {
        return Err(Error::invalid(format!("need m >= max(p1, p2) >= 1, got m = {m}, p = ({p1}, {p2})")));
    }
    if !(bound >= 1.0) || !bound.is_finite() {
        return Err(Error::invalid(format!("bound B must be >= 1, got {bound}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let mf = m as f64;
    let log_term = 2.0 * (2.0 * (mf + 1.0) / delta).ln();
    let caps = capacity_term(mf, bound, p1) + capacity_term(mf, bound, p2);
    Ok(variant.constant() * bound * ((log_term + caps) / mf).sqrt())
}

/// Complexity penalty for `K` changes with per-segment pseudo-dimensions
/// `p_list` (`K + 1` entries):
///
/// `11 B sqrt((2 ln(2 (m + 1)^K (K + 2)^2 / delta) + sum_j 3 p_j ln(e m B / p_j)) / m)`.
pub fn srm_penalty(k: usize, m: usize, bound: f64, delta: f64, p_list: &[usize]) -> Result<f64> {
    if p_list.len() != k + 1 {
        return Err(Error::invalid(format!("p_list needs K + 1 = {} entries, got {}", k + 1, p_list.len())));
    }
    if m == 0 || p_list.contains(&0) {
        return Err(Error::invalid("m and every pseudo-dimension must be positive"));
    }
    if !(bound > 0.0) || !bound.is_finite() {
        return Err(Error::invalid(format!("bound B must be positive, got {bound}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let mf = m as f64;
    // ln(2 (m+1)^K (K+2)^2 / delta) without forming the power.
    let ln_arg = std::f64::consts::LN_2 + k as f64 * (mf + 1.0).ln() + 2.0 * ((k + 2) as f64).ln() - delta.ln();
    let caps: f64 = p_list.iter().map(|&p| capacity_term(mf, bound, p)).sum();
    Ok(11.0 * bound * ((2.0 * ln_arg + caps) / mf).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preconditions_are_enforced() {
        assert!(theorem1_bound(5, 1.0, 0.1, 6, 1, BoundVariant::Full).is_err());
        assert!(theorem1_bound(5, 0.5, 0.1, 1, 1, BoundVariant::Full).is_err());
        assert!(theorem1_bound(5, 1.0, 1.0, 1, 1, BoundVariant::Full).is_err());
        assert!(theorem1_bound(5, 1.0, 0.1, 0, 1, BoundVariant::Full).is_err());
        assert!(srm_penalty(1, 10, 1.0, 0.1, &[1]).is_err());
    }

    #[test]
    fn grid_constant_scales_by_26_over_22() {
        let a = theorem1_bound(500, 1.0, 0.05, 3, 4, BoundVariant::Full).unwrap();
        let b = theorem1_bound(500, 1.0, 0.05, 3, 4, BoundVariant::Grid).unwrap();
        assert!((b / a - 26.0 / 22.0).abs() < 1e-14);
    }

    #[test]
    fn larger_delta_gives_smaller_bound() {
        let a = theorem1_bound(1000, 1.0, 0.02, 5, 5, BoundVariant::Full).unwrap();
        let b = theorem1_bound(1000, 1.0, 0.04, 5, 5, BoundVariant::Full).unwrap();
        assert!(b < a);
    }

    #[test]
    fn srm_penalty_increases_with_k() {
        let mut prev = 0.0;
        for k in 0..6 {
            let v = srm_penalty(k, 200, 1.0, 0.1, &vec![2; k + 1]).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn srm_k0_by_hand() {
        // 11 sqrt((2 ln(2 * 4 / 0.1) + 3 * 2 * ln(100 e / 2)) / 100)
        let expected = 11.0 * ((2.0 * (80.0f64).ln() + 6.0 * (50.0 * std::f64::consts::E).ln()) / 100.0).sqrt();
        let v = srm_penalty(0, 100, 1.0, 0.1, &[2]).unwrap();
        assert!((v - expected).abs() < 1e-12 * expected);
    }
}
