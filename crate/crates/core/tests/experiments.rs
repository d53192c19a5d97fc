use dense_tsp::experiments::calibration::{locked_value, pmf_rel_dev, PMF_SCHEDULE};
use dense_tsp::experiments::stats::mean;
use dense_tsp::experiments::{
    aggregate, estimate_covariance_decay, estimate_nn_distance_scaling, run_city_trials, scaling_study,
    unconstrained_study, ExperimentConfig, ProcessKind, Study,
};
use dense_tsp::probability::{binomial_pmf, depoissonization_check, poisson_pmf};
use dense_tsp::{DensityField, Error};

fn city_cfg(n: Vec<usize>, trials: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(Study::CityTrials);
    cfg.n = n;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg
}

#[test]
fn city_trials_are_deterministic_and_sandwiched() {
    let cfg = city_cfg(vec![32, 48], 40, 17);
    let a = run_city_trials(&cfg).unwrap();
    let b = run_city_trials(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 80);
    for r in &a {
        assert!(r.v_n <= r.merged_length + 1e-9, "seed {}", r.seed);
        assert!((r.b_n - 0.1 * ((r.n * 4) as f64).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn small_instances_get_a_global_optimum_between_the_bounds() {
    let mut cfg = city_cfg(vec![9], 50, 5);
    cfg.n_cities = 2;
    for r in run_city_trials(&cfg).unwrap() {
        let opt = r.global_exact.expect("9 nodes are solved exactly");
        assert!(r.v_n <= opt + 1e-9 && opt <= r.merged_length + 1e-9);
    }
}

#[test]
fn exact_only_policy_rejects_big_cities() {
    let mut cfg = city_cfg(vec![200], 2, 1);
    cfg.exact_only = true;
    assert!(matches!(run_city_trials(&cfg), Err(Error::Policy(_))));
}

#[test]
fn injected_fault_names_the_seed() {
    let mut cfg = city_cfg(vec![64], 3, 8);
    cfg.inject_fault = true;
    match run_city_trials(&cfg) {
        Err(Error::Invariant { seed, .. }) => assert!(Error::Invariant { seed, what: String::new() }.to_string().contains(&seed.to_string())),
        other => panic!("expected an invariant error, got {other:?}"),
    }
}

#[test]
fn per_city_length_ratio_is_stable() {
    let recs = run_city_trials(&city_cfg(vec![32, 64], 300, 2)).unwrap();
    let ratio = |n: usize| {
        let scale = 0.1 * (n as f64 / 4.0).sqrt();
        let v: Vec<f64> = recs.iter().filter(|r| r.n == n).flat_map(|r| r.per_city.iter().map(|c| c.length / scale)).collect();
        mean(&v)
    };
    let (a, b) = (ratio(32), ratio(64));
    assert!((a - b).abs() / a.min(b) < 0.25, "{a} vs {b}");
}

#[test]
fn occupancy_window_probability_respects_calibrated_rate() {
    let delta4 = locked_value("delta4_hat").unwrap();
    let recs = run_city_trials(&city_cfg(vec![32, 64, 128], 300, 6)).unwrap();
    for n in [32, 64, 128] {
        let hits: Vec<f64> = recs
            .iter()
            .filter(|r| r.n == n)
            .flat_map(|r| r.per_city.iter().map(|c| f64::from(u8::from(c.in_window))))
            .collect();
        let p = mean(&hits);
        let se = (p * (1.0 - p) / hits.len() as f64).sqrt().max(1.0 / hits.len() as f64);
        let floor = 1.0 - (-delta4 * n as f64 / 4.0).exp();
        assert!(p + 3.0 * se >= floor, "n={n}: {p} vs {floor}");
    }
}

#[test]
fn aggregation_ignores_record_order() {
    let recs = run_city_trials(&city_cfg(vec![24], 400, 3)).unwrap();
    let mut shuffled = recs.clone();
    shuffled.reverse();
    shuffled.rotate_left(137);
    let (a, b) = (aggregate(&recs).unwrap(), aggregate(&shuffled).unwrap());
    for (x, y) in a.columns.iter().zip(&b.columns) {
        assert!((x.mean - y.mean).abs() <= 1e-10 * x.mean.abs().max(1e-300), "{}", x.name);
        assert!(x.variance >= 0.0);
    }
    assert!(aggregate(&[]).is_err());
}

#[test]
fn nn_distance_scales_like_inverse_root_k() {
    let t = estimate_nn_distance_scaling(&[8, 16, 32, 64], 0.1, &DensityField::checker(2.0).unwrap(), 2000, 5).unwrap();
    assert!(t.slope > -0.6 && t.slope < -0.4, "{}", t.slope);
    assert!(t.normalized_spread < 1.5);
}

#[test]
fn covariance_rejects_a_repeated_city() {
    let mut cfg = ExperimentConfig::new(Study::Covariance);
    cfg.pair = (1, 1);
    assert!(matches!(estimate_covariance_decay(&cfg, &[(64, 4)]), Err(Error::Parameter(_))));
}

#[test]
fn poissonized_city_lengths_are_uncorrelated() {
    let mut cfg = ExperimentConfig::new(Study::Covariance);
    cfg.process = ProcessKind::Poisson;
    cfg.trials = 1000;
    cfg.bootstrap = 100;
    cfg.seed = 12;
    let row = estimate_covariance_decay(&cfg, &[(48, 4)]).unwrap()[0];
    assert!(row.cov.abs() <= 3.0 * row.cov_se, "{row:?}");
    assert!(!row.low_trials);
}

#[test]
fn binomial_covariance_does_not_grow_with_more_cities() {
    let mut cfg = ExperimentConfig::new(Study::Covariance);
    cfg.trials = 1000;
    cfg.bootstrap = 100;
    cfg.seed = 4;
    let rows = estimate_covariance_decay(&cfg, &[(64, 4), (64, 8)]).unwrap();
    let c = locked_value("covariance_constant").unwrap();
    assert!(rows[1].cov.abs() <= rows[0].cov.abs() + 3.0 * rows[1].cov_se.hypot(rows[0].cov_se));
    for r in &rows {
        assert!(r.normalized <= 2.0 * c + 3.0 * r.cov_se / r.scale, "{r:?}");
    }
}

#[test]
fn scaling_ratios_stay_in_band() {
    let mut cfg = ExperimentConfig::new(Study::Scaling);
    cfg.n = vec![64, 128, 256];
    cfg.n_cities_schedule = vec![4, 8, 16];
    cfg.trials = 200;
    cfg.seed = 21;
    let (rows, _) = scaling_study(&cfg).unwrap();
    for r in &rows {
        assert!((0.1..=3.0).contains(&r.mean_lower), "{r:?}");
        assert!((0.1..=3.0).contains(&r.mean_upper), "{r:?}");
        assert!(r.within_theta5 >= 0.95, "{r:?}");
    }
}

#[test]
fn unconstrained_nn_bound_scales_like_root_n() {
    let mut cfg = ExperimentConfig::new(Study::Unconstrained);
    cfg.n = vec![10, 200, 800];
    cfg.trials = 40;
    let rows = unconstrained_study(&cfg).unwrap();
    let (a, b) = (rows[1].nn_normalized, rows[2].nn_normalized);
    assert!((a - b).abs() / a.min(b) < 0.3, "{a} vs {b}");
    assert!(rows.iter().all(|r| r.max_strips <= r.ceiling));
}

#[test]
fn pmf_gap_stays_below_the_calibrated_linear_constant() {
    let c = locked_value("pmf_linear_constant").unwrap();
    for (n, nc) in PMF_SCHEDULE {
        let ratio = n as f64 / (nc * nc) as f64;
        assert!(pmf_rel_dev(n, nc).unwrap() <= c * ratio * (1.0 + 1e-12));
    }
}

#[test]
fn depoissonization_bound_holds_for_a_count_event() {
    // A = {count of one of N cells is at most its mean}
    let (n, nc) = (400u64, 8u64);
    let p = 1.0 / nc as f64;
    let k_max = n / nc;
    let pb: f64 = (0..=k_max).map(|k| binomial_pmf(k, n, p).unwrap()).sum();
    let poisson_in: f64 = (0..=k_max).map(|k| poisson_pmf(k, n as f64 * p).unwrap()).sum();
    let check = depoissonization_check(pb, 1.0 - poisson_in, n).unwrap();
    assert!(check.satisfied);
    assert!(check.d1 > 0.39 && check.d1 < 0.4, "{}", check.d1);
}
