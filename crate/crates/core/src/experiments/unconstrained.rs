use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{mean, variance};
use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::geometry::{sample_unit_square, Square};
use crate::rng::derive_seed;
use crate::tours::{exact_tsp, nn_lower_bound, strips_tour, StripWidth, EXACT_CAP};

/// Largest `n` for which the exact column is filled.
pub const UNCONSTRAINED_EXACT_MAX: usize = 12;
pub const UNCONSTRAINED_MAX: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnconstrainedRow {
    pub n: usize,
    pub trials: usize,
    pub mean_exact: Option<f64>,
    pub mean_strips: f64,
    pub max_strips: f64,
    pub var_strips: f64,
    pub mean_nn: f64,
    /// `mean_nn / √n`.
    pub nn_normalized: f64,
    pub ceiling: f64,
}

struct Sample {
    exact: Option<f64>,
    strips: f64,
    nn: f64,
}

/// Unit-square instances (no cities): strips length against `5√n`, the
/// nearest-neighbour lower bound, and the optimum for small `n`.
pub fn unconstrained_study(cfg: &ExperimentConfig) -> Result<Vec<UnconstrainedRow>> {
    if cfg.trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let f = cfg.density_field()?;
    let tol = 1e-9;
    cfg.n
        .iter()
        .enumerate()
        .map(|(point, &n)| {
            if !(3..=UNCONSTRAINED_MAX).contains(&n) {
                return Err(Error::param(format!("unconstrained n must be in [3, {UNCONSTRAINED_MAX}], got {n}")));
            }
            let ceiling = 5.0 * (n as f64).sqrt();
            let with_exact = n <= UNCONSTRAINED_EXACT_MAX.min(EXACT_CAP);
            let point_seed = derive_seed(cfg.seed, point as u64);
            let samples: Vec<Sample> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = derive_seed(point_seed, t as u64);
                    let inst = sample_unit_square(&f, n, seed)?;
                    let (tour, _) = strips_tour(&inst.nodes, Square::UNIT, StripWidth::Auto)?;
                    let strips = tour.length();
                    let nn = nn_lower_bound(&inst.nodes)?;
                    let fail = |what: String| Err(Error::Invariant { seed, what });
                    if strips > ceiling + tol {
                        return fail(format!("strips length {strips} exceeds 5 sqrt(n) = {ceiling}"));
                    }
                    let exact = if with_exact { Some(exact_tsp(&inst.nodes)?.length()) } else { None };
                    match exact {
                        Some(opt) if nn > opt + tol || opt > strips + tol => {
                            fail(format!("nn <= exact <= strips fails: {nn}, {opt}, {strips}"))
                        }
                        None if nn > strips + tol => fail(format!("nn bound {nn} exceeds strips length {strips}")),
                        _ => Ok(Sample { exact, strips, nn }),
                    }
                })
                .collect::<Result<_>>()?;
            let strips: Vec<f64> = samples.iter().map(|s| s.strips).collect();
            let nn: Vec<f64> = samples.iter().map(|s| s.nn).collect();
            let exact: Option<Vec<f64>> = samples.iter().map(|s| s.exact).collect();
            let mean_nn = mean(&nn);
            Ok(UnconstrainedRow {
                n,
                trials: cfg.trials,
                mean_exact: exact.map(|e| mean(&e)),
                mean_strips: mean(&strips),
                max_strips: strips.iter().copied().fold(0.0, f64::max),
                var_strips: variance(&strips),
                mean_nn,
                nn_normalized: mean_nn / (n as f64).sqrt(),
                ceiling,
            })
        })
        .collect()
}
