use std::f64::consts::SQRT_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ProcessKind};
use crate::error::{Error, Result};
use crate::geometry::{
    build_city_grid, sample_binomial, sample_poisson, select_well_connected, CitySelection, DensityField, Instance,
    Point, Square,
};
use crate::rng::derive_seed;
use crate::tours::{exact_tsp, merge_cycles, strips_tour, CityCycle, MergeTrace, StripWidth, Tour, EXACT_CAP};

/// How a per-city length was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// At most two nodes: `T_l = 0` by convention.
    Trivial,
    Exact,
    Strips,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CityResult {
    pub count: usize,
    pub length: f64,
    pub solver: Solver,
    /// `U_l`: `η1 n/(2N) ≤ N_l ≤ 2 η2 n/N`.
    pub in_window: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// Nominal `n` (the mean for Poisson trials).
    pub n: usize,
    pub node_count: usize,
    pub n_cities: usize,
    pub r: f64,
    pub s: f64,
    pub per_city: Vec<CityResult>,
    pub v_n: f64,
    /// Merged tour length, or the whole-square strips tour when merging was
    /// not possible.
    pub merged_length: f64,
    pub merge_path: bool,
    pub upper_slack: f64,
    pub u_tot: bool,
    /// `r √(nN)`.
    pub b_n: f64,
    /// Exact optimum of the whole instance when it is small enough.
    pub global_exact: Option<f64>,
    #[serde(skip)]
    pub trace: Option<MergeTrace>,
}

impl TrialRecord {
    pub fn solver_mix(&self) -> String {
        let count = |s: Solver| self.per_city.iter().filter(|c| c.solver == s).count();
        format!("exact={};strips={};trivial={}", count(Solver::Exact), count(Solver::Strips), count(Solver::Trivial))
    }
}

/// Everything fixed across the trials of one schedule point.
#[derive(Debug, Clone)]
pub struct TrialSetup {
    pub selection: CitySelection,
    pub density: DensityField,
    pub process: ProcessKind,
    pub exact_threshold: usize,
    pub exact_only: bool,
    /// Solve the whole instance exactly when it has at most this many nodes.
    pub global_exact_limit: usize,
}

impl TrialSetup {
    pub fn from_config(cfg: &ExperimentConfig, n_cities: usize) -> Result<Self> {
        let grid = build_city_grid(cfg.r, cfg.s)?;
        Ok(TrialSetup {
            selection: select_well_connected(&grid, n_cities, cfg.seed)?,
            density: cfg.density_field()?,
            process: cfg.process,
            exact_threshold: cfg.exact_threshold,
            exact_only: cfg.exact_only,
            global_exact_limit: 12,
        })
    }

    fn sample(&self, n: usize, seed: u64) -> Result<Instance> {
        match self.process {
            ProcessKind::Binomial => sample_binomial(&self.selection, &self.density, n, seed),
            ProcessKind::Poisson => sample_poisson(&self.selection, &self.density, n as f64, seed),
        }
    }

    /// Optimal-or-strips cycle through `points` (local indices).
    pub fn solve_city(&self, points: &[Point], square: Square) -> Result<(Vec<usize>, f64, Solver)> {
        match points.len() {
            0 => Ok((Vec::new(), 0.0, Solver::Trivial)),
            1 | 2 => Ok(((0..points.len()).collect(), 0.0, Solver::Trivial)),
            k if k <= self.exact_threshold => {
                let t = exact_tsp(points)?;
                let len = t.length();
                Ok((t.into_order(), len, Solver::Exact))
            }
            k => {
                if self.exact_only {
                    return Err(Error::Policy(format!(
                        "city with {k} nodes exceeds exact_threshold {} in exact-only mode",
                        self.exact_threshold
                    )));
                }
                let (t, _) = strips_tour(points, square, StripWidth::Auto)?;
                let len = t.length();
                Ok((t.into_order(), len, Solver::Strips))
            }
        }
    }
}

const MERGE_MIN_NODES: usize = 8;

/// One trial: sample, solve every city, merge (or fall back to a strips tour
/// of the whole square), and record the model quantities.
pub fn run_trial(setup: &TrialSetup, n: usize, trial: usize, seed: u64, inject_fault: bool) -> Result<TrialRecord> {
    let inst = setup.sample(n, seed)?;
    let sel = &setup.selection;
    let n_cities = sel.len();
    let (r, s) = (sel.grid().r(), sel.grid().s());
    let eta1 = setup.density.eta1();
    let eta2 = setup.density.eta2();
    let per_city_mean = n as f64 / n_cities as f64;
    let window = (eta1 * per_city_mean / 2.0, 2.0 * eta2 * per_city_mean);

    let mut per_city = Vec::with_capacity(n_cities);
    let mut cycles = Vec::with_capacity(n_cities);
    for l in 0..n_cities {
        let ids = inst.nodes_in_city(l);
        let pts: Vec<Point> = ids.iter().map(|&i| inst.nodes[i]).collect();
        let (order, length, solver) = setup.solve_city(&pts, sel.square(l))?;
        let count = ids.len();
        per_city.push(CityResult {
            count,
            length,
            solver,
            in_window: count as f64 >= window.0 && count as f64 <= window.1,
        });
        cycles.push(CityCycle { city: l, order: order.into_iter().map(|k| ids[k]).collect() });
    }
    let v_n: f64 = per_city.iter().map(|c| c.length).sum();
    let u_tot = per_city.iter().all(|c| c.in_window);

    let can_merge = if n_cities == 1 {
        inst.len() >= 3
    } else {
        per_city.iter().all(|c| c.count >= MERGE_MIN_NODES)
    };
    let (mut tour, trace) = if can_merge {
        let (t, tr) = merge_cycles(&inst.nodes, sel, &cycles)?;
        (Some(t), Some(tr))
    } else if inst.len() >= 3 {
        let (t, _) = strips_tour(&inst.nodes, Square::UNIT, StripWidth::Auto)?;
        (Some(t), None)
    } else {
        (None, None)
    };
    if inject_fault {
        if let Some(t) = tour.as_mut() {
            t.corrupt_length(0.5 * t.length() - 1.0);
        }
    }
    if let Some(t) = &tour {
        t.verify(&inst.nodes).map_err(|e| Error::Invariant { seed, what: format!("produced tour is invalid: {e}") })?;
    }
    let merged_length = tour.as_ref().map_or(0.0, Tour::length);
    let global_exact = if inst.len() >= 3 && inst.len() <= setup.global_exact_limit.min(EXACT_CAP) {
        Some(exact_tsp(&inst.nodes)?.length())
    } else {
        None
    };

    Ok(TrialRecord {
        trial,
        seed,
        n,
        node_count: inst.len(),
        n_cities,
        r,
        s,
        per_city,
        v_n,
        merged_length,
        merge_path: trace.is_some(),
        upper_slack: merged_length - v_n,
        u_tot,
        b_n: r * ((n * n_cities) as f64).sqrt(),
        global_exact,
        trace,
    })
}

/// Hard invariants every trial must satisfy.
pub fn check_record(rec: &TrialRecord) -> Result<()> {
    let fail = |what: String| Err(Error::Invariant { seed: rec.seed, what });
    let tol = 1e-9;
    let cap = rec.s + 8.0 * rec.r;
    let lower_bound_applies = rec.s > rec.r * SQRT_2;
    let exact_cities = rec.per_city.iter().all(|c| c.solver != Solver::Strips);
    if rec.merge_path {
        if lower_bound_applies && rec.v_n > rec.merged_length + tol {
            return fail(format!("V_n = {} exceeds merged length {}", rec.v_n, rec.merged_length));
        }
        let budget = 2.0 * (rec.n_cities as f64 - 1.0) * cap;
        if rec.upper_slack > budget + tol {
            return fail(format!("merge added {} > 2(N-1)(s+8r) = {budget}", rec.upper_slack));
        }
        if let Some(trace) = &rec.trace {
            trace.check(1e-9).or_else(&fail)?;
        }
    } else if rec.node_count >= 3 && rec.merged_length > 5.0 * (rec.node_count as f64).sqrt() + tol {
        return fail(format!("fallback strips tour {} exceeds 5 sqrt(n)", rec.merged_length));
    }
    if let Some(opt) = rec.global_exact {
        if lower_bound_applies && exact_cities && rec.v_n > opt + tol {
            return fail(format!("V_n = {} exceeds the global optimum {opt}", rec.v_n));
        }
        if rec.node_count >= 3 && opt > rec.merged_length + tol {
            return fail(format!("global optimum {opt} exceeds the constructed tour {}", rec.merged_length));
        }
    }
    Ok(())
}

/// Runs `trials` trials at every schedule point of a `city_trials` config
/// (one point per entry of `n`). Stops with [`Error::Invariant`] naming the
/// first failing trial seed.
pub fn run_city_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for (point, (n, n_cities)) in cfg.schedule()?.into_iter().enumerate() {
        let setup = TrialSetup::from_config(cfg, n_cities)?;
        let point_seed = derive_seed(cfg.seed, point as u64);
        out.extend(run_trials(&setup, n, cfg.trials, point_seed, cfg.inject_fault)?);
    }
    Ok(out)
}

/// `trials` independent trials of `setup` at `n` nodes, checked and returned
/// in trial order.
pub fn run_trials(setup: &TrialSetup, n: usize, trials: usize, seed: u64, inject_fault: bool) -> Result<Vec<TrialRecord>> {
    let results: Vec<Result<TrialRecord>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = derive_seed(seed, t as u64);
            let rec = run_trial(setup, n, t, trial_seed, inject_fault && t == 0)?;
            check_record(&rec)?;
            Ok(rec)
        })
        .collect();
    results.into_iter().collect()
}
