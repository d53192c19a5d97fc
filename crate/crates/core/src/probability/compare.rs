use serde::{Deserialize, Serialize};

use super::pmf::{ln_binomial_pmf, ln_poisson_pmf};
use crate::error::{Error, Result};

/// Worst relative gap between `B(k; n, p)` and `Poi(k; np)` over the
/// typical-count window `[η1 n/(2N), 2 η2 n/N]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmfComparison {
    pub k_min: u64,
    pub k_max: u64,
    /// `max_k |B/Poi − 1|`.
    pub max_rel_dev: f64,
    pub argmax_k: u64,
    /// `n/N²`, the predicted scale of `max_rel_dev`.
    pub ratio_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub k: u64,
    pub binomial: f64,
    pub poisson: f64,
    pub ratio: f64,
}

fn window(n: u64, n_cities: u64, eta1: f64, eta2: f64) -> Result<(u64, u64)> {
    let per_city = n as f64 / n_cities as f64;
    let lo = (eta1 * per_city / 2.0).ceil().max(1.0) as u64;
    let hi = ((2.0 * eta2 * per_city).floor() as u64).min(n);
    if eta1 * per_city / 2.0 < 1.0 || lo > hi {
        return Err(Error::EmptyRange(format!(
            "count window [{}, {}] is empty; need n/N >= 2/eta1",
            eta1 * per_city / 2.0,
            2.0 * eta2 * per_city
        )));
    }
    Ok((lo, hi))
}

pub fn compare_binomial_poisson(n: u64, n_cities: u64, p: f64, eta1: f64, eta2: f64) -> Result<PmfComparison> {
    if n == 0 || n_cities == 0 {
        return Err(Error::param("need n >= 1 and N >= 1"));
    }
    if !(eta1 > 0.0 && eta1 <= 1.0 && eta2 >= 1.0) {
        return Err(Error::param(format!("need 0 < eta1 <= 1 <= eta2, got {eta1}, {eta2}")));
    }
    let nc = n_cities as f64;
    let slack = 1e-12;
    if p < eta1 / nc * (1.0 - slack) || p > eta2 / nc * (1.0 + slack) {
        return Err(Error::Precondition(format!("p = {p} outside [eta1/N, eta2/N] = [{}, {}]", eta1 / nc, eta2 / nc)));
    }
    let (k_min, k_max) = window(n, n_cities, eta1, eta2)?;
    let lambda = n as f64 * p;
    let mut max_rel_dev = 0.0;
    let mut argmax_k = k_min;
    for k in k_min..=k_max {
        let dev = (ln_binomial_pmf(k, n, p)? - ln_poisson_pmf(k, lambda)?).exp_m1().abs();
        if dev > max_rel_dev {
            max_rel_dev = dev;
            argmax_k = k;
        }
    }
    Ok(PmfComparison { k_min, k_max, max_rel_dev, argmax_k, ratio_scale: n as f64 / (nc * nc) })
}

/// Per-`k` rows `(k, B, Poi, B/Poi)` over `k_min..=k_max`.
pub fn comparison_rows(n: u64, p: f64, k_min: u64, k_max: u64) -> Result<Vec<ComparisonRow>> {
    let lambda = n as f64 * p;
    (k_min..=k_max.min(n))
        .map(|k| {
            let lb = ln_binomial_pmf(k, n, p)?;
            let lp = ln_poisson_pmf(k, lambda)?;
            Ok(ComparisonRow { k, binomial: lb.exp(), poisson: lp.exp(), ratio: (lb - lp).exp() })
        })
        .collect()
}
