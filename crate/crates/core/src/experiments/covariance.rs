use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{bootstrap_se, correlation, covariance};
use super::{ExperimentConfig, ProcessKind, TrialSetup};
use crate::error::{Error, Result};
use crate::geometry::{sample_binomial, sample_poisson, Point};
use crate::rng::{derive_seed, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceRow {
    pub n: usize,
    pub n_cities: usize,
    pub trials: usize,
    pub cov: f64,
    pub cov_se: f64,
    pub corr: f64,
    pub corr_se: f64,
    /// `r² n² / N³`.
    pub scale: f64,
    /// `|cov| / scale`.
    pub normalized: f64,
    /// Fewer than 1000 trials: the standard errors are unreliable.
    pub low_trials: bool,
}

pub const MIN_COVARIANCE_TRIALS: usize = 1000;

/// Covariance of the optimal lengths of cities `pair.0` and `pair.1` along a
/// schedule of `(n, N)` points, with bootstrap standard errors.
pub fn estimate_covariance_decay(cfg: &ExperimentConfig, schedule: &[(usize, usize)]) -> Result<Vec<CovarianceRow>> {
    let (l1, l2) = cfg.pair;
    if l1 == l2 {
        return Err(Error::param(format!("covariance needs two distinct cities, got {l1} twice")));
    }
    schedule
        .iter()
        .enumerate()
        .map(|(point, &(n, n_cities))| {
            if l1.max(l2) >= n_cities {
                return Err(Error::param(format!("pair ({l1}, {l2}) out of range for N={n_cities}")));
            }
            let setup = TrialSetup::from_config(cfg, n_cities)?;
            let point_seed = derive_seed(cfg.seed, point as u64);
            let pairs: Vec<(f64, f64)> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = derive_seed(point_seed, t as u64);
                    let inst = match cfg.process {
                        ProcessKind::Binomial => sample_binomial(&setup.selection, &setup.density, n, seed)?,
                        ProcessKind::Poisson => sample_poisson(&setup.selection, &setup.density, n as f64, seed)?,
                    };
                    let len = |l: usize| -> Result<f64> {
                        let pts: Vec<Point> = inst.city_points(l);
                        Ok(setup.solve_city(&pts, setup.selection.square(l))?.1)
                    };
                    Ok((len(l1)?, len(l2)?))
                })
                .collect::<Result<_>>()?;
            let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let boot_seed = derive_seed(point_seed, u64::MAX - Purpose::Bootstrap as u64);
            let split = |rows: &[(f64, f64)]| -> (Vec<f64>, Vec<f64>) { rows.iter().copied().unzip() };
            let cov = covariance(&xs, &ys);
            let cov_se = bootstrap_se(&pairs, cfg.bootstrap, boot_seed, |rows| {
                let (a, b) = split(rows);
                covariance(&a, &b)
            });
            let corr_se = bootstrap_se(&pairs, cfg.bootstrap, boot_seed ^ 1, |rows| {
                let (a, b) = split(rows);
                correlation(&a, &b)
            });
            let nc = n_cities as f64;
            let scale = cfg.r * cfg.r * (n as f64).powi(2) / nc.powi(3);
            Ok(CovarianceRow {
                n,
                n_cities,
                trials: cfg.trials,
                cov,
                cov_se,
                corr: correlation(&xs, &ys),
                corr_se,
                scale,
                normalized: cov.abs() / scale,
                low_trials: cfg.trials < MIN_COVARIANCE_TRIALS,
            })
        })
        .collect()
}
