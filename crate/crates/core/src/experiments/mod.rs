//! Seeded Monte Carlo studies of the dense-cities model.
//!
//! Every study is a pure function of its configuration and seed. Trials get
//! their own derived seeds (reported in the outputs), run in parallel, and
//! are collected in trial order, so reruns are bit-identical.

pub mod calibration;
mod config;
mod covariance;
mod nn_scaling;
pub mod report;
mod scaling;
pub mod stats;
mod trials;
mod unconstrained;

pub use config::{ExperimentConfig, ProcessKind, Study};
pub use covariance::{estimate_covariance_decay, CovarianceRow};
pub use nn_scaling::{estimate_nn_distance_scaling, NnScalingRow, NnScalingTable};
pub use scaling::{scaling_study, ScalingRow};
pub use stats::{aggregate, ScalarStats, SummaryStats};
pub use trials::{check_record, run_city_trials, run_trial, run_trials, CityResult, Solver, TrialRecord, TrialSetup};
pub use unconstrained::{unconstrained_study, UnconstrainedRow};
