// SPDX-License-Identifier: MIT OR Apache-2.0

mod common;

use proptest::prelude::*;

use splitsearch::data::{FeatureView, TimeSeriesDataset};
use splitsearch::detection::{
    multi_change_detect, penalized_sas_detect, sas_detect, sas_grid_detect, sasf_detect, search_splits, sqrt_grid,
    srm_select_k, CandidateSet, KernelSide, PenalizedConfig, SearchConfig, SrmConfig,
};
use splitsearch::learners::{fit_segment, LearnerSpec};
use splitsearch::risk::{empirical_risk, multi_empirical_risk};

/// Refits both sides at every split and keeps the lowest risk, preferring
/// the later split on ties.
fn refit_oracle(data: &TimeSeriesDataset, config: &SearchConfig, candidates: &[usize]) -> (usize, f64) {
    let m = data.len();
    let mut best = (0, f64::INFINITY);
    for &t0 in candidates {
        let h1 = fit_segment(&config.learner1, data, 0, t0 - 1).unwrap().hypothesis;
        let h2 = fit_segment(&config.learner2, data, t0 - 1, m).unwrap().hypothesis;
        let r = empirical_risk(data, &h1, &h2, t0).unwrap();
        if r <= best.1 {
            best = (t0, r);
        }
    }
    best
}

#[test]
fn least_squares_search_matches_refit_oracle() {
    for seed in 0..25u64 {
        let m = 5 + (seed as usize % 11);
        let data = common::random_linear(seed, m, 2, 1, m / 2, 0.25, 4.0);
        let config = SearchConfig::least_squares(&data);
        let model = sas_detect(&data, &config).unwrap();
        let (t0, risk) = refit_oracle(&data, &config, &(1..=m + 1).collect::<Vec<_>>());
        assert!((model.empirical_risk - risk).abs() <= 1e-12, "seed {seed}");
        let refit_at_found = refit_oracle(&data, &config, &[model.t_hat]).1;
        assert!((refit_at_found - risk).abs() <= 1e-12, "seed {seed}: t_hat {} vs {t0}", model.t_hat);
    }
}

#[test]
fn grid_search_matches_refit_oracle_on_the_grid() {
    let data = common::random_linear(77, 150, 3, 1, 90, 0.2, 1.0);
    let config = SearchConfig::least_squares(&data);
    let grid = sqrt_grid(data.len(), data.bound());
    let model = sas_grid_detect(&data, &config).unwrap();
    let (t0, risk) = refit_oracle(&data, &config, &grid);
    assert_eq!(model.t_hat, t0);
    assert!((model.empirical_risk - risk).abs() <= 1e-12);
}

#[test]
fn single_change_is_the_one_change_multi_search() {
    for seed in 0..10u64 {
        let data = common::random_linear(100 + seed, 20, 2, 0, 11, 0.2, 4.0);
        let spec = LearnerSpec::least_squares(FeatureView::All, &data);
        let config = SearchConfig::new(spec.clone(), spec.clone());
        let single = sas_detect(&data, &config).unwrap();
        let multi = multi_change_detect(&data, 1, &[spec.clone(), spec], &CandidateSet::Full).unwrap();
        assert!((single.empirical_risk - multi.empirical_risk).abs() <= 1e-12, "seed {seed}");
        let recomputed = multi_empirical_risk(&data, &multi.hypotheses, &multi.change_times).unwrap();
        assert!((recomputed - multi.empirical_risk).abs() <= 1e-12);
    }
}

#[test]
fn multi_change_risk_is_nonincreasing_in_k() {
    let y: Vec<f64> = (0..60).map(|t| ((t * 37 % 23) as f64 / 23.0) * 0.3 + if t > 30 { 0.5 } else { 0.0 }).collect();
    let data = TimeSeriesDataset::from_targets(y, 1.0).unwrap();
    let mut last = f64::INFINITY;
    for k in 0..=4 {
        let model = multi_change_detect(&data, k, &vec![LearnerSpec::constant(); k + 1], &CandidateSet::Full).unwrap();
        assert!(model.empirical_risk <= last + 1e-15);
        last = model.empirical_risk;
    }
}

#[test]
fn srm_objectives_are_risk_plus_penalty() {
    let y: Vec<f64> = (0..400).map(|t| if t < 200 { 0.1 } else { 0.9 }).collect();
    let data = TimeSeriesDataset::from_targets(y, 1.0).unwrap();
    let sel = srm_select_k(&data, &SrmConfig::new(2, LearnerSpec::constant(), 0.05), &CandidateSet::SqrtGrid).unwrap();
    for (k, (obj, pen)) in sel.objectives.iter().zip(&sel.penalties).enumerate() {
        let model = multi_change_detect(&data, k, &vec![LearnerSpec::constant(); k + 1], &CandidateSet::SqrtGrid).unwrap();
        assert!((obj - pen - model.empirical_risk).abs() < 1e-12);
    }
    let min = sel.objectives.iter().cloned().fold(f64::INFINITY, f64::min);
    assert_eq!(sel.objectives[sel.k_hat], min);
}

#[test]
fn penalized_choice_minimizes_the_listed_objectives() {
    let rows: Vec<Vec<f64>> = (0..60).map(|t| vec![(t as f64 * 0.61).sin()]).collect();
    let y: Vec<f64> = rows.iter().enumerate().map(|(t, x)| if t < 35 { 0.5 + 0.4 * x[0] } else { 0.5 - 0.4 * x[0] }).collect();
    let data = TimeSeriesDataset::from_rows(&rows, y, None, 1, 0, 1.0).unwrap();
    let side = KernelSide { bandwidth: 2.0, lambda: 0.01 };
    let split = penalized_sas_detect(&data, &PenalizedConfig { side1: side, side2: side, candidates: CandidateSet::Full }).unwrap();
    let min = split.objectives.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    assert_eq!(split.objective, min);
    assert!(split.objectives.iter().any(|&(t, v)| t == split.model.t_hat && v == min));
    assert!(split.model.t_hat.abs_diff(36) <= 2, "t_hat {}", split.model.t_hat);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn search_is_deterministic_and_self_consistent(seed in 0u64..100_000, m in 1usize..40) {
        let data = common::random_linear(seed, m, 2, 1, m / 3, 0.3, 4.0);
        let config = SearchConfig::least_squares(&data);
        let a = sas_detect(&data, &config).unwrap();
        let b = sas_detect(&data, &config).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!((1..=m + 1).contains(&a.t_hat));
        prop_assert_eq!(a.h1.view, FeatureView::OldOnly);
        let r = empirical_risk(&data, &a.h1, &a.h2, a.t_hat).unwrap();
        prop_assert_eq!(r.to_bits(), a.empirical_risk.to_bits());
    }

    #[test]
    fn more_candidates_never_hurt(seed in 0u64..100_000, m in 4usize..40, mask in proptest::collection::vec(any::<bool>(), 41)) {
        let data = common::random_linear(seed, m, 2, 1, m / 2, 0.3, 4.0);
        let config = SearchConfig::least_squares(&data);
        let mut subset: Vec<usize> = (1..=m + 1).filter(|&t| mask[t - 1]).collect();
        if subset.is_empty() {
            subset.push(1);
        }
        let full = search_splits(&data, &config.learner1, &config.learner2, &(1..=m + 1).collect::<Vec<_>>()).unwrap();
        let part = search_splits(&data, &config.learner1, &config.learner2, &subset).unwrap();
        prop_assert!(full.model.empirical_risk <= part.model.empirical_risk);
        prop_assert!(subset.contains(&part.model.t_hat));
        prop_assert_eq!(part.risks.len(), subset.len());
    }

    #[test]
    fn sasf_stays_on_the_grid(seed in 0u64..100_000) {
        let data = common::random_linear(seed, 120, 3, 2, 60, 0.2, 1.0);
        let model = sasf_detect(&data, &SearchConfig::least_squares(&data)).unwrap();
        prop_assert!(sqrt_grid(120, 1.0).contains(&model.t_hat));
        let r = empirical_risk(&data, &model.h1, &model.h2, model.t_hat).unwrap();
        prop_assert!((r - model.empirical_risk).abs() < 1e-12);
    }
}
