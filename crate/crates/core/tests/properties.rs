//! Cross-module properties of the public API.

use monoapprox::bounds::{choose_params, n_det_curse, n_ran_upper, ub_error, DetBranch, DEFAULT_UPPER_CONSTANT};
use monoapprox::functions::{boxbslash, is_monotone_on_grid, random_delta, step_function, LinearRamp};
use monoapprox::grid::{fit_grid, grid_error_bound};
use monoapprox::haar::{enumerate_indices, psi_d};
use monoapprox::metrics::{all_coefficients, fit_rate, l1_exact_grid, l1_mc, l2_norm_squared};
use monoapprox::rng::replication_seed;
use monoapprox::sum::compensated_sum;
use monoapprox::wavelet::{fit, FitOptions, Mode};
use monoapprox::{Budget, Error, FamilySpec, Oracle};
use proptest::prelude::*;

fn budget() -> Budget {
    Budget::new(1 << 22)
}

fn table_options() -> FitOptions {
    FitOptions { budget: budget(), coefficient_table: true }
}

/// Midpoints of the `2^res` grid in `[0,1]^d`.
fn midpoints(d: usize, res: u32) -> Vec<Vec<f64>> {
    let side = 1u64 << res;
    (0..side.pow(d as u32))
        .map(|mut f| {
            (0..d)
                .map(|_| {
                    let c = f % side;
                    f /= side;
                    (c as f64 + 0.5) / side as f64
                })
                .collect()
        })
        .collect()
}

#[test]
fn haar_system_is_orthonormal() {
    let (d, r) = (2, 2);
    let points = midpoints(d, r);
    let basis: Vec<_> = enumerate_indices(d, d, r).unwrap().collect();
    for a in &basis {
        for b in &basis {
            let ip = points
                .iter()
                .map(|x| psi_d(a, x).unwrap() * psi_d(b, x).unwrap())
                .sum::<f64>()
                / points.len() as f64;
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((ip - want).abs() < 1e-12, "{a:?} {b:?}: {ip}");
        }
    }
}

#[test]
fn parseval_for_step_functions() {
    for (d, m, seed) in [(1, 4, 0), (2, 4, 1), (3, 2, 2)] {
        let delta = random_delta(d, m, seed, &budget()).unwrap();
        let f = step_function(d, m, delta).unwrap();
        let table = all_coefficients(&f, d, 2, &budget()).unwrap();
        let energy: f64 = table.iter().map(|(_, c)| c * c).sum();
        let norm = l2_norm_squared(&f, d, 2, &budget()).unwrap();
        assert!((energy - norm).abs() < 1e-12, "d={d}: {energy} vs {norm}");
    }
}

#[test]
fn linear_estimator_paths_agree() {
    let f = boxbslash(3).unwrap();
    let model = fit(&f, 2, 3, 500, 11, Mode::Linear, &table_options()).unwrap();
    for x in midpoints(3, 3).iter().step_by(7) {
        let fast = model.eval_linear(x).unwrap();
        let scan = model.eval_linear_scan(x).unwrap();
        let table = model.eval_linear_from_table(x).unwrap();
        assert!((fast - scan).abs() < 1e-9, "{fast} vs {scan}");
        assert!((fast - table).abs() < 1e-9, "{fast} vs {table}");
    }
}

#[test]
fn fits_are_reproducible_from_the_seed() {
    let f = boxbslash(4).unwrap();
    let opts = FitOptions { budget: budget(), coefficient_table: false };
    let a = fit(&f, 2, 3, 2000, 5, Mode::Generalized, &opts).unwrap();
    let b = fit(&f, 2, 3, 2000, 5, Mode::Generalized, &opts).unwrap();
    let c = fit(&f, 2, 3, 2000, 6, Mode::Generalized, &opts).unwrap();
    let probes = midpoints(4, 2);
    let va = a.eval_many(&probes).unwrap();
    assert_eq!(va, b.eval_many(&probes).unwrap());
    assert_ne!(a.samples().point(0), c.samples().point(0));
}

#[test]
fn sign_outputs_are_sign_valued() {
    let f = boxbslash(3).unwrap();
    let opts = FitOptions { budget: budget(), coefficient_table: false };
    for mode in [Mode::Sign, Mode::Generalized] {
        let model = fit(&f, 3, 2, 300, 3, mode, &opts).unwrap();
        for x in midpoints(3, 3) {
            let v = model.eval(&x).unwrap();
            assert!(v == 1.0 || v == -1.0, "{mode:?}: {v}");
        }
    }
}

#[test]
fn exact_and_monte_carlo_distances_agree() {
    let delta = random_delta(2, 8, 4, &budget()).unwrap();
    let f = step_function(2, 8, delta).unwrap();
    let g = LinearRamp { d: 2 };
    let model = fit_grid(&g, 8, &budget()).unwrap();
    let exact = l1_exact_grid(&f, &model, 2, 8, &budget()).unwrap();
    let mc = l1_mc(&f, &model, 2, 1 << 16, 9).unwrap();
    assert!(exact.exact && !mc.exact);
    assert!((exact.value - mc.value).abs() < 5.0 * mc.std_error + 1e-12);
}

#[test]
fn family_specs_round_trip_through_build() {
    for spec in ["boxbslash", "linear", "step:m=3", "levelset:t=2,b=4,p=0.5"] {
        let fam: FamilySpec = spec.parse().unwrap();
        assert_eq!(fam.to_string().parse::<FamilySpec>().unwrap(), fam);
        let f = fam.build(4, 1, &budget()).unwrap();
        assert_eq!(f.dim(), 4);
        assert!(is_monotone_on_grid(&f, 4, 4, &budget()).unwrap(), "{spec}");
    }
    assert!("nonsense".parse::<FamilySpec>().is_err());
}

#[test]
fn budget_errors_are_typed() {
    let tiny = Budget::new(100);
    let err = fit_grid(&LinearRamp { d: 3 }, 10, &tiny).unwrap_err();
    assert!(matches!(err, Error::Budget { .. }), "{err}");
}

#[test]
fn replication_seeds_are_distinct() {
    let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| replication_seed(42, i)).collect();
    assert_eq!(seeds.len(), 1000);
    assert_eq!(replication_seed(42, 7), replication_seed(42, 7));
}

#[test]
fn rate_fit_recovers_power_laws() {
    let pts: Vec<(f64, f64)> = [16.0, 32.0, 64.0, 128.0].iter().map(|&n: &f64| (n, 3.0 * n.powf(-0.5))).collect();
    assert!((fit_rate(&pts).unwrap() + 0.5).abs() < 1e-12);
    assert!(fit_rate(&pts[..2]).is_err());
}

#[test]
fn chosen_resolution_controls_the_first_term() {
    for (eps, d) in [(0.9, 1), (1.0 / 3.0, 1), (0.5, 2), (0.5, 4)] {
        let p = choose_params(eps, d).unwrap();
        let ub = ub_error(&p).unwrap();
        assert_eq!(p.r, (15.0 * d as f64 / eps).log2().ceil() as u32);
        assert!(ub.resolution_term <= eps / 3.0 + 1e-15);
        assert!(p.k >= 1 && p.k <= d);
        assert_eq!(ub.total, ub.resolution_term + ub.truncation_term + ub.sampling_term);
    }
}

#[test]
fn upper_bound_shrinks_as_accuracy_relaxes() {
    let mut last = f64::INFINITY;
    for eps in [0.05, 0.1, 0.2, 0.4] {
        let ub = n_ran_upper(eps, 16, DEFAULT_UPPER_CONSTANT, DetBranch::Theorem).unwrap();
        assert!(ub.value <= last);
        last = ub.value;
    }
    assert_eq!(n_det_curse(0.5, 10).unwrap(), 512.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn grid_meets_its_guarantee(d in 1usize..=3, m in 1u64..=6, seed in any::<u64>(), k in 1u64..=3) {
        // the fit grid refines the truth's cells, so the L1 error is exact on it
        let delta = random_delta(d, m, seed, &budget()).unwrap();
        let truth = step_function(d, m, delta).unwrap();
        let gm = (m * k).max(2);
        let model = fit_grid(&truth, gm, &budget()).unwrap();
        prop_assert!(model.is_monotone_consistent());
        let err = l1_exact_grid(&truth, &model, d, gm, &budget()).unwrap().value;
        prop_assert!(err <= grid_error_bound(d, gm) + 1e-12);
    }

    #[test]
    fn compensated_sum_is_order_independent(mut xs in proptest::collection::vec(-1e6f64..1e6, 1..200)) {
        let forward = compensated_sum(xs.iter().copied());
        xs.reverse();
        let backward = compensated_sum(xs.iter().copied());
        let scale = xs.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        prop_assert!((forward - backward).abs() <= 1e-14 * scale);
    }
}
