use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::stats::{bootstrap_se, coefficient_of_variation, mean, variance};
use super::{run_trials, ExperimentConfig, TrialRecord, TrialSetup};
use crate::error::{Error, Result};
use crate::rng::derive_seed;

/// Headroom over the observed mean ratio used for the upper-tail check.
pub const THETA5_FACTOR: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub n_cities: usize,
    pub b_n: f64,
    pub trials: usize,
    pub mean_lower: f64,
    pub se_lower: f64,
    pub mean_upper: f64,
    pub se_upper: f64,
    /// Coefficient of variation of `merged / b_n` across trials.
    pub cv_upper: f64,
    pub cv_upper_se: f64,
    pub fallback_rate: f64,
    pub u_tot_rate: f64,
    /// `THETA5_FACTOR × mean_upper`.
    pub theta5: f64,
    /// Fraction of trials with `merged / b_n ≤ theta5`.
    pub within_theta5: f64,
}

fn check_regime(cfg: &ExperimentConfig, schedule: &[(usize, usize)]) -> Result<()> {
    if cfg.s <= cfg.r * SQRT_2 {
        return Err(Error::Regime(format!("s > r sqrt(2) fails: s = {}, r sqrt(2) = {}", cfg.s, cfg.r * SQRT_2)));
    }
    let ratio = |&(n, nc): &(usize, usize)| n as f64 / (nc * nc) as f64;
    for w in schedule.windows(2) {
        if ratio(&w[1]) > ratio(&w[0]) {
            return Err(Error::Regime(format!(
                "n/N^2 must not increase along the schedule: {} at (n={}, N={}) after {} at (n={}, N={})",
                ratio(&w[1]),
                w[1].0,
                w[1].1,
                ratio(&w[0]),
                w[0].0,
                w[0].1
            )));
        }
    }
    Ok(())
}

/// Runs the city trials at every `(n, N)` point and summarizes the lower and
/// upper proxies `V_n / b_n` and `merged / b_n`.
pub fn scaling_study(cfg: &ExperimentConfig) -> Result<(Vec<ScalingRow>, Vec<TrialRecord>)> {
    cfg.validate()?;
    let schedule = cfg.schedule()?;
    check_regime(cfg, &schedule)?;
    let mut rows = Vec::with_capacity(schedule.len());
    let mut records = Vec::new();
    for (point, &(n, n_cities)) in schedule.iter().enumerate() {
        let setup = TrialSetup::from_config(cfg, n_cities)?;
        let point_seed = derive_seed(cfg.seed, point as u64);
        let recs = run_trials(&setup, n, cfg.trials, point_seed, cfg.inject_fault)?;
        rows.push(summarize(cfg, n, n_cities, &recs, point_seed));
        records.extend(recs);
    }
    Ok((rows, records))
}

fn summarize(cfg: &ExperimentConfig, n: usize, n_cities: usize, recs: &[TrialRecord], seed: u64) -> ScalingRow {
    let b_n = cfg.r * ((n * n_cities) as f64).sqrt();
    let lower: Vec<f64> = recs.iter().map(|r| r.v_n / b_n).collect();
    let upper: Vec<f64> = recs.iter().map(|r| r.merged_length / b_n).collect();
    let t = recs.len() as f64;
    let se = |v: &[f64]| (variance(v) / t).sqrt();
    let mean_upper = mean(&upper);
    let theta5 = THETA5_FACTOR * mean_upper;
    let frac = |pred: &dyn Fn(&TrialRecord) -> bool| recs.iter().filter(|r| pred(r)).count() as f64 / t;
    ScalingRow {
        n,
        n_cities,
        b_n,
        trials: recs.len(),
        mean_lower: mean(&lower),
        se_lower: se(&lower),
        mean_upper,
        se_upper: se(&upper),
        cv_upper: coefficient_of_variation(&upper),
        cv_upper_se: bootstrap_se(&upper, cfg.bootstrap, seed, coefficient_of_variation),
        fallback_rate: frac(&|r| !r.merge_path),
        u_tot_rate: frac(&|r| r.u_tot),
        theta5,
        within_theta5: upper.iter().filter(|&&u| u <= theta5).count() as f64 / t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Study;

    #[test]
    fn regime_violations_are_named() {
        let mut cfg = ExperimentConfig::new(Study::Scaling);
        cfg.r = 0.19;
        cfg.s = 0.215;
        cfg.n = vec![64];
        let err = scaling_study(&cfg).unwrap_err();
        assert!(err.to_string().contains("s > r sqrt(2)"), "{err}");

        let mut cfg = ExperimentConfig::new(Study::Scaling);
        cfg.n = vec![64, 256];
        cfg.n_cities_schedule = vec![4, 4];
        let err = scaling_study(&cfg).unwrap_err();
        assert!(err.to_string().contains("n/N^2"), "{err}");
    }

    #[test]
    fn small_study_rows() {
        let mut cfg = ExperimentConfig::new(Study::Scaling);
        cfg.n = vec![64, 128];
        cfg.n_cities_schedule = vec![4, 8];
        cfg.trials = 20;
        let (rows, recs) = scaling_study(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(recs.len(), 40);
        for row in &rows {
            assert!(row.mean_lower > 0.0 && row.mean_lower <= row.mean_upper);
            assert!(row.cv_upper >= 0.0 && row.within_theta5 > 0.5);
        }
    }
}
