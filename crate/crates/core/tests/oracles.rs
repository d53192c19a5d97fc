mod common;

use common::{brute_force_tsp, uniform_points};
use dense_tsp::geometry::Square;
use dense_tsp::probability::{binomial_pmf, ln_binomial_pmf, ln_multinomial_two_cell_pmf, ln_poisson_pmf};
use dense_tsp::{build_city_grid, exact_tsp, nn_lower_bound, sample_binomial, sample_unit_square, select_well_connected};
use dense_tsp::{DensityField, Point};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive};

#[test]
fn exact_matches_brute_force() {
    for seed in 0..60 {
        let n = 5 + (seed as usize % 4);
        let pts = uniform_points(n, seed);
        let opt = exact_tsp(&pts).unwrap().length();
        assert!((opt - brute_force_tsp(&pts)).abs() <= 1e-9, "seed {seed}");
        assert!(nn_lower_bound(&pts).unwrap() <= opt + 1e-12);
    }
}

#[test]
fn exact_on_regular_polygon_is_its_perimeter() {
    let k = 9;
    let pts: Vec<Point> = (0..k)
        .map(|i| {
            let t = std::f64::consts::TAU * ((i * 4) % k) as f64 / k as f64;
            Point::new(0.5 + 0.4 * t.cos(), 0.5 + 0.4 * t.sin())
        })
        .collect();
    let side = 2.0 * 0.4 * (std::f64::consts::PI / k as f64).sin();
    assert!((exact_tsp(&pts).unwrap().length() - k as f64 * side).abs() < 1e-12);
}

fn rational(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn binomial_exact(k: u64, n: u64, p: &BigRational) -> BigRational {
    let mut c = BigRational::one();
    for i in 0..k {
        c *= rational(n - i, i + 1);
    }
    let q = BigRational::one() - p;
    c * num::pow(p.clone(), k as usize) * num::pow(q, (n - k) as usize)
}

#[test]
fn binomial_pmf_matches_big_rational() {
    for (n, den) in [(20u64, 4u64), (150, 10), (400, 16)] {
        let p = rational(1, den);
        let pf = 1.0 / den as f64;
        for k in [0, 1, n / den, n / den + 3, n / 2, n] {
            let exact = binomial_exact(k, n, &p);
            let want = exact.to_f64().unwrap();
            let got = binomial_pmf(k, n, pf).unwrap();
            if want > 1e-300 {
                assert!((got / want - 1.0).abs() < 1e-12, "n={n} k={k}: {got} vs {want}");
            } else {
                assert!(got < 1e-280);
            }
        }
    }
}

#[test]
fn poisson_pmf_matches_big_rational() {
    for (lambda, ks) in [(3u64, vec![0u64, 1, 3, 10]), (40, vec![20, 40, 80]), (100, vec![50, 100, 150])] {
        for k in ks {
            let mut term = BigRational::one();
            for i in 1..=k {
                term *= rational(lambda, i);
            }
            let want = term.to_f64().unwrap().ln() - lambda as f64;
            let got = ln_poisson_pmf(k, lambda as f64).unwrap();
            assert!((got - want).abs() < 1e-11 * want.abs().max(1.0), "lambda={lambda} k={k}");
        }
    }
}

#[test]
fn two_cell_multinomial_matches_big_rational() {
    let (n, k1, k2) = (60u64, 7u64, 9u64);
    let (p1, p2) = (rational(1, 8), rational(1, 5));
    let mut coef = BigRational::one();
    for i in 0..(k1 + k2) {
        coef *= rational(n - i, 1);
    }
    for i in 1..=k1 {
        coef /= rational(i, 1);
    }
    for i in 1..=k2 {
        coef /= rational(i, 1);
    }
    let rest = BigRational::one() - &p1 - &p2;
    let exact = coef * num::pow(p1, k1 as usize) * num::pow(p2, k2 as usize) * num::pow(rest, (n - k1 - k2) as usize);
    let got = ln_multinomial_two_cell_pmf(k1, k2, n, 0.125, 0.2).unwrap();
    assert!((got - exact.to_f64().unwrap().ln()).abs() < 1e-11);
}

#[test]
fn large_n_pmfs_are_finite() {
    let v = ln_binomial_pmf(10_000, 1_000_000, 0.01).unwrap();
    assert!(v.is_finite() && v < 0.0);
    assert!(ln_poisson_pmf(1_000_000, 1_000_000.0).unwrap().is_finite());
}

/// Pearson statistic of observed counts against expected counts.
fn chi_square(observed: &[usize], expected: &[f64]) -> f64 {
    observed.iter().zip(expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum()
}

#[test]
fn uniform_sampling_passes_chi_square() {
    let inst = sample_unit_square(&DensityField::uniform(), 16_000, 9).unwrap();
    let mut counts = vec![0; 16];
    for p in &inst.nodes {
        let i = ((p.x * 4.0) as usize).min(3);
        let j = ((p.y * 4.0) as usize).min(3);
        counts[4 * j + i] += 1;
    }
    // 99.9% quantile of chi-square with 15 degrees of freedom
    assert!(chi_square(&counts, &[1000.0; 16]) < 37.7);
}

#[test]
fn checker_density_shifts_mass_to_high_cells() {
    let f = DensityField::checker(3.0).unwrap();
    let inst = sample_unit_square(&f, 20_000, 4).unwrap();
    let high = inst.nodes.iter().filter(|&&p| f.value_at(p) > 1.0).count();
    // half the cells carry 3 parts of mass against 1
    let expected = 0.75 * 20_000.0;
    let se = (20_000.0f64 * 0.75 * 0.25).sqrt();
    assert!((high as f64 - expected).abs() < 4.0 * se, "{high}");
}

#[test]
fn city_counts_are_multinomial() {
    let grid = build_city_grid(0.1, 0.2).unwrap();
    let sel = select_well_connected(&grid, 4, 3).unwrap();
    let inst = sample_binomial(&sel, &DensityField::uniform(), 8_000, 3).unwrap();
    // 99.9% quantile with 3 degrees of freedom
    assert!(chi_square(&inst.city_counts(), &[2000.0; 4]) < 16.27);
    for (i, &p) in inst.nodes.iter().enumerate() {
        assert!(sel.square(inst.city_of[i]).contains(p));
    }
}

#[test]
fn conditional_sampling_stays_in_square() {
    let sq = Square::new(Point::new(0.3, 0.6), 0.1);
    let mut rng = dense_tsp::rng::stream(1, dense_tsp::rng::Purpose::Sampling);
    let pts = dense_tsp::geometry::sample_conditional(sq, &DensityField::checker(2.0).unwrap(), 500, &mut rng);
    assert!(pts.iter().all(|&p| sq.contains(p)));
}
