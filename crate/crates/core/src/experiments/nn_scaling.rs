use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{mean, ols_slope, variance};
use crate::error::{Error, Result};
use crate::geometry::{sample_conditional, DensityField, Point, Square};
use crate::rng::{substream, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NnScalingRow {
    pub k: usize,
    pub mean_d: f64,
    pub std_error: f64,
    /// `mean_d · √k / r`; roughly constant in `k`.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NnScalingTable {
    pub r: f64,
    pub rows: Vec<NnScalingRow>,
    /// Least-squares slope of `ln mean_d` against `ln k`.
    pub slope: f64,
    /// max/min of the normalized column.
    pub normalized_spread: f64,
}

/// Monte Carlo estimate of `E d(Z_k, {Z_1..Z_{k-1}})` for `k` i.i.d. points in
/// the `r × r` square at the origin with density proportional to `f`.
pub fn estimate_nn_distance_scaling(
    k_schedule: &[usize],
    r: f64,
    f: &DensityField,
    samples: usize,
    seed: u64,
) -> Result<NnScalingTable> {
    if k_schedule.len() < 2 {
        return Err(Error::param("need at least two values of k"));
    }
    if let Some(k) = k_schedule.iter().find(|&&k| k < 2) {
        return Err(Error::param(format!("need k >= 2, got {k}")));
    }
    if samples < 1000 {
        return Err(Error::param(format!("need at least 1000 samples, got {samples}")));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::param(format!("need 0 < r <= 1, got {r}")));
    }
    let square = Square::new(Point::new(0.0, 0.0), r);
    let rows: Vec<NnScalingRow> = k_schedule
        .iter()
        .map(|&k| {
            let ds: Vec<f64> = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = substream(seed, Purpose::Sampling, ((k as u64) << 32) | i as u64);
                    let pts = sample_conditional(square, f, k, &mut rng);
                    let last = pts[k - 1];
                    pts[..k - 1].iter().map(|&p| p.dist(last)).fold(f64::INFINITY, f64::min)
                })
                .collect();
            let m = mean(&ds);
            NnScalingRow {
                k,
                mean_d: m,
                std_error: (variance(&ds) / samples as f64).sqrt(),
                normalized: m * (k as f64).sqrt() / r,
            }
        })
        .collect();
    let lk: Vec<f64> = rows.iter().map(|row| (row.k as f64).ln()).collect();
    let ld: Vec<f64> = rows.iter().map(|row| row.mean_d.ln()).collect();
    let norm = rows.iter().map(|row| row.normalized);
    let spread = norm.clone().fold(0.0, f64::max) / norm.fold(f64::INFINITY, f64::min);
    Ok(NnScalingTable { r, slope: ols_slope(&lk, &ld), normalized_spread: spread, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_bounded_by_diagonal() {
        let t = estimate_nn_distance_scaling(&[2, 3], 0.2, &DensityField::uniform(), 2000, 4).unwrap();
        let d = t.rows[0].mean_d;
        assert!(d > 0.0 && d < 0.2 * 2f64.sqrt());
        // two uniform points in a unit square are 0.5214 apart on average
        assert!((d / 0.2 - 0.5214).abs() < 0.03);
    }

    #[test]
    fn argument_checks() {
        let f = DensityField::uniform();
        assert!(estimate_nn_distance_scaling(&[1, 4], 0.2, &f, 2000, 0).is_err());
        assert!(estimate_nn_distance_scaling(&[2, 4], 0.2, &f, 10, 0).is_err());
    }
}
