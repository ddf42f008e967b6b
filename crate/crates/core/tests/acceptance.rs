// SPDX-License-Identifier: MIT OR Apache-2.0

//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::RngExt;

use common::{
    dyadic_class, dyadic_dataset, median, reference_single_bound, reference_srm_penalty, rel_err, rng, self_check,
};
use splitsearch::baselines::{mcsprt_detect, McsprtConfig};
use splitsearch::data::{FeatureView, TimeSeriesDataset};
use splitsearch::detection::{
    grid_step, multi_change_detect, sas_detect, sas_grid_detect, sasf_detect, srm_penalty, srm_select_k,
    theorem1_bound, BoundVariant, CandidateSet, SearchConfig, SrmConfig,
};
use splitsearch::harness::{excess_risk_for, run_experiment, BoundInputs, ExperimentConfig, Method};
use splitsearch::learners::{
    fit_segment, kernel_ridge_fit, l1_logistic_fit, logistic_fit, logistic_gradient, logistic_objective,
    LearnerFamily, LearnerSpec, PrefixFitter, Schema, SolverConfig,
};
use splitsearch::model::{Hypothesis, LinearModel, Predictor};
use splitsearch::risk::{empirical_risk, multi_empirical_risk};
use splitsearch::synth::{generate, generate_feature_addition, FeatureAdditionSpec, NewBlock, SyntheticSpec};

type Verdict = Result<String, String>;

fn check(cond: bool, detail: String) -> Verdict {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn finite_spec(class: Vec<Predictor>, view: FeatureView) -> LearnerSpec {
    LearnerSpec::new(LearnerFamily::FiniteClass { candidates: class }, view, 1)
}

fn hyp(p: &Predictor, view: FeatureView, data: &TimeSeriesDataset) -> Hypothesis {
    Hypothesis::new(p.clone(), view, data.old_features(), data.new_features(), data.bound())
}

/// 1. Exhaustive search equals brute-force enumeration of `(h1, h2, t0)`.
fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for inst in 0..50u64 {
        let mut r = rng(1_000 + inst);
        let m = r.random_range(1..=12);
        let d = r.random_range(1..=2);
        let k = r.random_range(0..=2);
        let data = dyadic_dataset(2_000 + inst, m, d, k);
        let s1 = r.random_range(1..=4);
        let class1 = dyadic_class(&mut r, d, s1);
        let s2 = r.random_range(1..=4);
        let class2 = dyadic_class(&mut r, d + k, s2);
        let config = SearchConfig::new(
            finite_spec(class1.clone(), FeatureView::OldOnly),
            finite_spec(class2.clone(), FeatureView::All),
        );
        let model = sas_detect(&data, &config).map_err(|e| e.to_string())?;

        let mut best = (f64::INFINITY, 0usize);
        for t0 in 1..=m + 1 {
            for p1 in &class1 {
                for p2 in &class2 {
                    let h1 = hyp(p1, FeatureView::OldOnly, &data);
                    let h2 = hyp(p2, FeatureView::All, &data);
                    let risk = empirical_risk(&data, &h1, &h2, t0).unwrap();
                    if risk < best.0 || (risk == best.0 && t0 > best.1) {
                        best = (risk, t0);
                    }
                }
            }
        }
        if model.t_hat != best.1 || model.empirical_risk.to_bits() != best.0.to_bits() {
            mismatches.push(inst);
        }
    }
    let elapsed = start.elapsed();
    check(
        mismatches.is_empty() && elapsed < Duration::from_secs(10),
        format!("50 instances, mismatches {mismatches:?}, {:.2}s", elapsed.as_secs_f64()),
    )
}

/// 2. No other split beats the returned least-squares model.
fn erm_optimality() -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    for inst in 0..20u64 {
        let mut r = rng(3_000 + inst);
        let m = r.random_range(2..=30);
        let split = r.random_range(0..=m);
        let data = common::random_linear(4_000 + inst, m, 2, 1, split, 0.2, 4.0);
        let config = SearchConfig::least_squares(&data);
        let model = sas_detect(&data, &config).map_err(|e| e.to_string())?;
        for t0 in 1..=m + 1 {
            let h1 = fit_segment(&config.learner1, &data, 0, t0 - 1).unwrap().hypothesis;
            let h2 = fit_segment(&config.learner2, &data, t0 - 1, m).unwrap().hypothesis;
            let risk = empirical_risk(&data, &h1, &h2, t0).unwrap();
            worst = worst.max(model.empirical_risk - risk);
        }
    }
    check(worst <= 1e-10, format!("max(R(sas) - R(t0)) = {worst:.3e}, tolerance 1e-10"))
}

/// 3. The grid search loses at most `4B / sqrt(m)` empirical risk.
fn grid_gap() -> Verdict {
    let m = 400;
    let mut worst = f64::NEG_INFINITY;
    let mut limit = 0.0;
    for inst in 0..20u64 {
        let mut r = rng(5_000 + inst);
        let split = r.random_range(40..=360);
        let data = common::random_linear(6_000 + inst, m, 3, 2, split, 0.3, 1.0);
        let config = SearchConfig::least_squares(&data);
        let full = sas_detect(&data, &config).map_err(|e| e.to_string())?;
        let grid = sas_grid_detect(&data, &config).map_err(|e| e.to_string())?;
        limit = 4.0 * data.bound() / (m as f64).sqrt();
        worst = worst.max(grid.empirical_risk - full.empirical_risk);
    }
    check(worst <= limit, format!("max gap {worst:.3e} <= {limit}"))
}

struct DeskRun {
    sas_t_hat: usize,
    true_split: usize,
    sas_mse: f64,
    caf_mse: f64,
    rs_mse: f64,
    bound_holds: bool,
    alarm: Option<usize>,
}

fn desk_runs() -> &'static Result<Vec<DeskRun>, String> {
    static RUNS: OnceLock<Result<Vec<DeskRun>, String>> = OnceLock::new();
    RUNS.get_or_init(|| {
        (0..20u64)
            .map(|seed| {
                // Every input is available on both sides of the split, as in
                // the two-Gaussian benchmark.
                let spec = SyntheticSpec {
                    new_block: NewBlock::None,
                    ..SyntheticSpec::desk_scale(seed)
                };
                let set = generate(&spec).map_err(|e| e.to_string())?;
                let data = &set.data;
                let config = ExperimentConfig {
                    seed,
                    ..ExperimentConfig::default()
                };
                let reports =
                    run_experiment(data, &[Method::Sas, Method::Caf, Method::Rs], &config).map_err(|e| e.to_string())?;
                let inputs = BoundInputs {
                    p1: data.old_features() + 1,
                    p2: data.num_features() + 1,
                    delta: 0.05,
                    variant: BoundVariant::Full,
                };
                let fitted = reports[0].true_risk.ok_or("missing true risk")?;
                let excess = excess_risk_for(data, fitted, &config.search_config(data), inputs).map_err(|e| e.to_string())?;
                let alarm = mcsprt_detect(data.rows(0, data.len(), FeatureView::All), &McsprtConfig::default())
                    .map_err(|e| e.to_string())?;
                Ok(DeskRun {
                    sas_t_hat: reports[0].t_hat.ok_or("missing t_hat")?,
                    true_split: set.true_split,
                    sas_mse: reports[0].mean_mse,
                    caf_mse: reports[1].mean_mse,
                    rs_mse: reports[2].mean_mse,
                    bound_holds: excess.holds,
                    alarm,
                })
            })
            .collect()
    })
}

/// 4. Desk-scale two-regime benchmark: location accuracy and method ordering.
fn desk_reproduction() -> Verdict {
    let start = Instant::now();
    let runs = desk_runs().as_ref().map_err(|e| e.clone())?;
    let elapsed = start.elapsed();
    let hits = runs.iter().filter(|r| r.sas_t_hat.abs_diff(r.true_split) <= 40).count();
    let avg = |f: fn(&DeskRun) -> f64| runs.iter().map(f).sum::<f64>() / runs.len() as f64;
    let (sas, caf, rs) = (avg(|r| r.sas_mse), avg(|r| r.caf_mse), avg(|r| r.rs_mse));
    check(
        hits >= 18 && sas < caf && caf < rs && elapsed < Duration::from_secs(600),
        format!(
            "t_hat within 40 in {hits}/20; mean MSE sas {sas:.5} < caf {caf:.5} < rs {rs:.5}; {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// 5. CUSUM stays silent when the input law does not change.
fn mcsprt_null() -> Verdict {
    let runs = desk_runs().as_ref().map_err(|e| e.clone())?;
    let silent = runs.iter().filter(|r| r.alarm.is_none()).count();
    check(silent >= 19, format!("no alarm in {silent}/20"))
}

/// 6. Feature-update search: speed and agreement with the exhaustive search.
fn sasf_ordering() -> Verdict {
    let mut sas_ms = Vec::new();
    let mut sasf_ms = Vec::new();
    let mut close = 0;
    let mut step = 0;
    for seed in 0..20u64 {
        let set = generate_feature_addition(&FeatureAdditionSpec::desk_scale(seed)).map_err(|e| e.to_string())?;
        let data = &set.data;
        let config = SearchConfig::least_squares(data);
        let t = Instant::now();
        let full = sas_detect(data, &config).map_err(|e| e.to_string())?;
        sas_ms.push(t.elapsed().as_secs_f64() * 1e3);
        let t = Instant::now();
        let fast = sasf_detect(data, &config).map_err(|e| e.to_string())?;
        sasf_ms.push(t.elapsed().as_secs_f64() * 1e3);
        step = grid_step(data.len(), data.bound());
        if fast.t_hat.abs_diff(full.t_hat) <= step {
            close += 1;
        }
    }
    let (a, b) = (median(&sas_ms), median(&sasf_ms));
    check(
        b <= 0.5 * a && close >= 16,
        format!("median sasf {b:.1} ms vs sas {a:.1} ms; within one step ({step}) in {close}/20"),
    )
}

/// 7. SRM picks the right number of changes; the DP matches brute force.
fn srm_sanity() -> Verdict {
    let m = 40_000;
    let config = SrmConfig::new(3, LearnerSpec::constant(), 0.05);
    let mut zero_on_noise = 0;
    let mut one_on_step = 0;
    for seed in 0..20u64 {
        let mut r = rng(7_000 + seed);
        let noise: Vec<f64> = (0..m).map(|_| r.random_range(0.0..1.0)).collect();
        let data = TimeSeriesDataset::from_targets(noise, 1.0).unwrap();
        let sel = srm_select_k(&data, &config, &CandidateSet::SqrtGrid).map_err(|e| e.to_string())?;
        zero_on_noise += (sel.k_hat == 0) as usize;

        let at = r.random_range(3 * m / 10..=7 * m / 10);
        let (lo, hi) = if seed % 2 == 0 { (0.0, 1.0) } else { (1.0, 0.0) };
        let step: Vec<f64> = (0..m).map(|t| if t < at { lo } else { hi }).collect();
        let data = TimeSeriesDataset::from_targets(step, 1.0).unwrap();
        let sel = srm_select_k(&data, &config, &CandidateSet::SqrtGrid).map_err(|e| e.to_string())?;
        one_on_step += (sel.k_hat == 1) as usize;
    }

    let mut dp_mismatches = Vec::new();
    for inst in 0..30u64 {
        let mut r = rng(8_000 + inst);
        let m = r.random_range(1..=12);
        let k = r.random_range(0..=2usize.min(m));
        let data = dyadic_dataset(9_000 + inst, m, 1, 1);
        let classes: Vec<(Vec<Predictor>, FeatureView)> = (0..=k)
            .map(|j| {
                let view = if j % 2 == 0 { FeatureView::All } else { FeatureView::OldOnly };
                let width = data.view_width(view);
                let size = r.random_range(1..=3);
                (dyadic_class(&mut r, width, size), view)
            })
            .collect();
        let specs: Vec<LearnerSpec> = classes.iter().map(|(c, v)| finite_spec(c.clone(), *v)).collect();
        let model = multi_change_detect(&data, k, &specs, &CandidateSet::Full).map_err(|e| e.to_string())?;

        // Every nondecreasing change tuple and every hypothesis tuple.
        let mut best: (f64, Vec<usize>) = (f64::INFINITY, Vec::new());
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..k {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    let lo = t.last().copied().unwrap_or(0);
                    (lo..=m).map(move |c| {
                        let mut n = t.clone();
                        n.push(c);
                        n
                    })
                })
                .collect();
        }
        for times in &tuples {
            let mut choice = vec![0usize; k + 1];
            loop {
                let hyps: Vec<Hypothesis> =
                    (0..=k).map(|j| hyp(&classes[j].0[choice[j]], classes[j].1, &data)).collect();
                let risk = multi_empirical_risk(&data, &hyps, times).unwrap();
                let rev = |v: &[usize]| v.iter().rev().copied().collect::<Vec<_>>();
                if risk < best.0 || (risk == best.0 && rev(times) > rev(&best.1)) {
                    best = (risk, times.clone());
                }
                let mut j = 0;
                while j <= k {
                    choice[j] += 1;
                    if choice[j] < classes[j].0.len() {
                        break;
                    }
                    choice[j] = 0;
                    j += 1;
                }
                if j > k {
                    break;
                }
            }
        }
        if model.change_times != best.1 || model.empirical_risk.to_bits() != best.0.to_bits() {
            dp_mismatches.push(inst);
        }
    }
    check(
        zero_on_noise >= 18 && one_on_step >= 18 && dp_mismatches.is_empty(),
        format!(
            "K=0 on noise {zero_on_noise}/20, K=1 on step {one_on_step}/20, DP mismatches {dp_mismatches:?} (30 instances)"
        ),
    )
}

/// 8. Bound calculators against arbitrary precision; bound holds on the
/// desk benchmark.
fn bound_calculators() -> Verdict {
    self_check();
    let mut r = rng(10_000);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let m: usize = r.random_range(1..=1_000_000);
        let bound = r.random_range(1.0..10.0);
        let delta = 10f64.powf(r.random_range(-6.0..-0.01));
        let p1 = r.random_range(1..=m.min(500));
        let p2 = r.random_range(1..=m.min(500));
        for (variant, c) in [(BoundVariant::Full, 22), (BoundVariant::Grid, 26)] {
            let got = theorem1_bound(m, bound, delta, p1, p2, variant).unwrap();
            let want = reference_single_bound(c, m as u64, bound, delta, p1 as u64, p2 as u64);
            worst = worst.max(rel_err(got, want));
        }
        let k = r.random_range(0..=5usize);
        let ps: Vec<usize> = (0..=k).map(|_| r.random_range(1..=500)).collect();
        let got = srm_penalty(k, m, bound, delta, &ps).unwrap();
        let ps64: Vec<u64> = ps.iter().map(|&p| p as u64).collect();
        let want = reference_srm_penalty(k as u64, m as u64, bound, delta, &ps64);
        worst = worst.max(rel_err(got, want));
    }
    let runs = desk_runs().as_ref().map_err(|e| e.clone())?;
    let holds = runs.iter().filter(|r| r.bound_holds).count();
    check(
        worst <= 1e-12 && holds == runs.len(),
        format!("max relative error {worst:.2e} over 100 inputs; bound holds on {holds}/{} desk runs", runs.len()),
    )
}

fn random_rows(r: &mut rand_chacha::ChaCha8Rng, n: usize, p: usize) -> Vec<f64> {
    (0..n * p).map(|_| r.random_range(-1.5..1.5)).collect()
}

/// 9. Gradients, kernel residuals, and incremental fits.
fn numerical_soundness() -> Verdict {
    use splitsearch::data::Rows;
    let mut r = rng(11_000);
    let tight = SolverConfig {
        tolerance: 1e-10,
        max_iterations: 200_000,
    };
    let schema = Schema {
        old_features: 4,
        new_features: 0,
        bound: 1.0,
    };
    let mut grad_err: f64 = 0.0;
    let mut kkt_err: f64 = 0.0;
    for _ in 0..10 {
        let (n, p) = (40, 4);
        let flat = random_rows(&mut r, n, p);
        let rows = Rows::dense(&flat, p);
        let y: Vec<f64> = (0..n).map(|_| r.random_range(0.0..=1.0)).collect();
        let w: Vec<f64> = (0..n).map(|_| r.random_range(0.1..2.0)).collect();
        let model = LinearModel {
            weights: (0..p).map(|_| r.random_range(-2.0..2.0)).collect(),
            intercept: r.random_range(-1.0..1.0),
        };
        for weights in [None, Some(w.as_slice())] {
            let g = logistic_gradient(rows, &y, weights, &model);
            let fd = fd_gradient(|m| logistic_objective(rows, &y, weights, m), &model);
            grad_err = grad_err.max(rel_vec_err(&fd, &g));
        }

        // Stationarity of the unpenalized fit.
        let fit = logistic_fit(rows, &y, None, &tight, FeatureView::OldOnly, schema).map_err(|e| e.to_string())?;
        let lin = linear_of(&fit.hypothesis);
        let fd = fd_gradient(|m| logistic_objective(rows, &y, None, m), &lin);
        let scale = n as f64;
        kkt_err = kkt_err.max(fd.weights.iter().chain([&fd.intercept]).fold(0.0f64, |a, v| a.max(v.abs())) / scale);

        // Subgradient conditions of the L1 fit.
        let l1 = r.random_range(0.5..4.0);
        let fit = l1_logistic_fit(rows, &y, l1, &tight, FeatureView::OldOnly, schema).map_err(|e| e.to_string())?;
        let lin = linear_of(&fit.hypothesis);
        let fd = fd_gradient(|m| logistic_objective(rows, &y, None, m), &lin);
        let mut worst: f64 = fd.intercept.abs();
        for (wj, gj) in lin.weights.iter().zip(&fd.weights) {
            let v = if *wj != 0.0 {
                (gj + l1 * wj.signum()).abs()
            } else {
                (gj.abs() - l1).max(0.0)
            };
            worst = worst.max(v);
        }
        kkt_err = kkt_err.max(worst / l1.max(1.0));
    }

    let mut kernel_worst: f64 = 0.0;
    for _ in 0..5 {
        let (n, p) = (60, 3);
        let flat = random_rows(&mut r, n, p);
        let y: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let gamma = r.random_range(0.2..3.0);
        let lambda = 10f64.powf(r.random_range(-3.0..0.0));
        let schema = Schema {
            old_features: p,
            new_features: 0,
            bound: 1.0,
        };
        let (fit, _) = kernel_ridge_fit(Rows::dense(&flat, p), &y, gamma, lambda, FeatureView::OldOnly, schema)
            .map_err(|e| e.to_string())?;
        let Predictor::Kernel(km) = &fit.hypothesis.predictor else {
            return Err("kernel fit returned a non-kernel predictor".into());
        };
        let mut res2 = 0.0;
        for i in 0..n {
            let xi = &flat[i * p..(i + 1) * p];
            let mut s = lambda * km.dual_coefficients[i];
            for j in 0..n {
                let xj = &flat[j * p..(j + 1) * p];
                let d2: f64 = xi.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum();
                s += (-gamma * d2).exp() * km.dual_coefficients[j];
            }
            res2 += (s - y[i]) * (s - y[i]);
        }
        let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        kernel_worst = kernel_worst.max(res2.sqrt() / ynorm);
    }

    let mut prefix_worst: f64 = 0.0;
    let data = common::random_linear(12_000, 50, 3, 2, 25, 0.2, 4.0);
    for family in [LearnerFamily::LeastSquares, LearnerFamily::Ridge { lambda: 0.3 }] {
        for view in [FeatureView::OldOnly, FeatureView::All] {
            let spec = LearnerSpec::new(family.clone(), view, data.view_width(view) + 1);
            let mut fitter = PrefixFitter::new(&spec, data.view_width(view), Schema::of(&data)).unwrap();
            let rows = data.rows(0, data.len(), view);
            for t in 1..=data.len() {
                fitter.push(rows.row(t - 1), data.targets()[t - 1]);
                let inc = fitter.fit().hypothesis;
                let batch = fit_segment(&spec, &data, 0, t).unwrap().hypothesis;
                for i in 0..data.len() {
                    let (a, b) = (inc.predict(data.row(i)), batch.predict(data.row(i)));
                    prefix_worst = prefix_worst.max((a - b).abs());
                }
            }
        }
    }
    check(
        grad_err <= 1e-5 && kkt_err <= 1e-5 && kernel_worst <= 1e-8 && prefix_worst <= 1e-8,
        format!(
            "gradient rel err {grad_err:.1e}, optimality {kkt_err:.1e}, kernel residual/|y| {kernel_worst:.1e}, prefix gap {prefix_worst:.1e}"
        ),
    )
}

fn linear_of(h: &Hypothesis) -> LinearModel {
    match &h.predictor {
        Predictor::Logistic(m) | Predictor::Linear(m) => m.clone(),
        other => panic!("expected an affine predictor, got {other:?}"),
    }
}

fn fd_gradient(f: impl Fn(&LinearModel) -> f64, at: &LinearModel) -> LinearModel {
    let h = 1e-6;
    let mut out = LinearModel::zeros(at.weights.len());
    for j in 0..=at.weights.len() {
        let mut plus = at.clone();
        let mut minus = at.clone();
        if j < at.weights.len() {
            plus.weights[j] += h;
            minus.weights[j] -= h;
            out.weights[j] = (f(&plus) - f(&minus)) / (2.0 * h);
        } else {
            plus.intercept += h;
            minus.intercept -= h;
            out.intercept = (f(&plus) - f(&minus)) / (2.0 * h);
        }
    }
    out
}

fn rel_vec_err(a: &LinearModel, b: &LinearModel) -> f64 {
    let diff = a
        .weights
        .iter()
        .zip(&b.weights)
        .map(|(x, y)| (x - y).abs())
        .fold((a.intercept - b.intercept).abs(), f64::max);
    let scale = b.weights.iter().map(|v| v.abs()).fold(b.intercept.abs(), f64::max);
    diff / scale.max(1.0)
}

/// 10. Reports do not depend on the thread count, in the library and the CLI.
fn reproducibility() -> Verdict {
    let spec = SyntheticSpec {
        num_inputs: 10,
        m: 300,
        change_at: 150,
        ..SyntheticSpec::desk_scale(5)
    };
    let data = generate(&spec).map_err(|e| e.to_string())?.data;
    let config = ExperimentConfig {
        seed: 5,
        bound_dims: Some((6, 11)),
        ..ExperimentConfig::default()
    };
    let mut outputs = Vec::new();
    for threads in [1, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let reports = pool.install(|| run_experiment(&data, &Method::ALL, &config)).map_err(|e| e.to_string())?;
        outputs.push(serde_json::to_string(&reports).unwrap());
    }
    let library_same = outputs[0] == outputs[1];

    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_splitsearch");
    let input = dir.path().join("data.csv");
    let status = Command::new(bin)
        .args(["generate", "--rows", "300", "--change-at", "150", "--inputs", "10", "--seed", "5", "--output"])
        .arg(&input)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("generate exited with {status}"));
    }
    let mut files = Vec::new();
    for threads in ["1", "8"] {
        let out = dir.path().join(format!("reports_{threads}.json"));
        let mut cmd = Command::new(bin);
        cmd.args(["detect", "--seed", "5", "--p1", "6", "--p2", "11", "--threads", threads, "--input"])
            .arg(&input)
            .arg("--output")
            .arg(&out);
        for m in Method::ALL {
            cmd.args(["--method", m.name()]);
        }
        let status = cmd.status().map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("detect exited with {status}"));
        }
        files.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    let cli_same = files[0] == files[1];
    check(
        library_same && cli_same,
        format!(
            "library reports identical: {library_same} ({} bytes); CLI reports identical: {cli_same} ({} bytes)",
            outputs[0].len(),
            files[0].len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("ERM optimality", erm_optimality),
        ("grid gap", grid_gap),
        ("desk-scale reproduction", desk_reproduction),
        ("MCSPRT null behavior", mcsprt_null),
        ("SaSF ordering", sasf_ordering),
        ("SRM sanity", srm_sanity),
        ("bound calculators", bound_calculators),
        ("numerical soundness", numerical_soundness),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(v) => v,
            Err(panic) => Err(panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
