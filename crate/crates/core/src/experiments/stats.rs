use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TrialRecord;
use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};

/// Neumaier-compensated sum of the values in ascending order, which makes
/// the result independent of the input order.
pub fn stable_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in sorted {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

pub fn mean(values: &[f64]) -> f64 {
    stable_sum(values) / values.len() as f64
}

/// Unbiased sample variance (0 for a single value).
pub fn variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let dev: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    stable_sum(&dev) / (values.len() - 1) as f64
}

/// Unbiased sample covariance of paired values.
pub fn covariance(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return 0.0;
    }
    let (mx, my) = (mean(xs), mean(ys));
    let prods: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    stable_sum(&prods) / (xs.len() - 1) as f64
}

pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let denom = (variance(xs) * variance(ys)).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        covariance(xs, ys) / denom
    }
}

/// Coefficient of variation `sd/mean`.
pub fn coefficient_of_variation(values: &[f64]) -> f64 {
    variance(values).sqrt() / mean(values)
}

/// Least-squares slope of `ys` on `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    covariance(xs, ys) / variance(xs)
}

/// Bootstrap standard error of `statistic` over `b` resamples of the rows.
pub fn bootstrap_se<T, F>(rows: &[T], b: usize, seed: u64, statistic: F) -> f64
where
    T: Clone,
    F: Fn(&[T]) -> f64,
{
    if rows.is_empty() || b < 2 {
        return f64::NAN;
    }
    let mut rng = stream(seed, Purpose::Bootstrap);
    let mut resample = Vec::with_capacity(rows.len());
    let stats: Vec<f64> = (0..b)
        .map(|_| {
            resample.clear();
            resample.extend((0..rows.len()).map(|_| rows[rng.random_range(0..rows.len())].clone()));
            statistic(&resample)
        })
        .collect();
    variance(&stats).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarStats {
    pub name: String,
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

impl ScalarStats {
    pub fn from_values(name: &str, values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param(format!("no values to summarize for `{name}`")));
        }
        let var = variance(values);
        Ok(ScalarStats {
            name: name.to_string(),
            count: values.len(),
            mean: mean(values),
            variance: var,
            std_error: (var / values.len() as f64).sqrt(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub columns: Vec<ScalarStats>,
    /// Sample covariance matrix of the per-city lengths `T_l`.
    pub city_covariance: Vec<Vec<f64>>,
}

impl SummaryStats {
    pub fn column(&self, name: &str) -> Option<&ScalarStats> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Summary of the tracked trial scalars plus the per-city covariance matrix.
pub fn aggregate(records: &[TrialRecord]) -> Result<SummaryStats> {
    if records.is_empty() {
        return Err(Error::param("cannot aggregate zero trial records"));
    }
    let pick = |f: fn(&TrialRecord) -> f64| records.iter().map(f).collect::<Vec<_>>();
    let columns = vec![
        ScalarStats::from_values("V_n", &pick(|r| r.v_n))?,
        ScalarStats::from_values("merged", &pick(|r| r.merged_length))?,
        ScalarStats::from_values("upper_slack", &pick(|r| r.upper_slack))?,
        ScalarStats::from_values("V_n/b_n", &pick(|r| r.v_n / r.b_n))?,
        ScalarStats::from_values("merged/b_n", &pick(|r| r.merged_length / r.b_n))?,
        ScalarStats::from_values("U_tot", &pick(|r| if r.u_tot { 1.0 } else { 0.0 }))?,
        ScalarStats::from_values("nodes", &pick(|r| r.node_count as f64))?,
    ];
    let cities = records.iter().map(|r| r.per_city.len()).min().unwrap_or(0);
    let per_city: Vec<Vec<f64>> =
        (0..cities).map(|l| records.iter().map(|r| r.per_city[l].length).collect()).collect();
    let city_covariance = (0..cities)
        .map(|a| (0..cities).map(|b| covariance(&per_city[a], &per_city[b])).collect())
        .collect();
    Ok(SummaryStats { columns, city_covariance })
}
