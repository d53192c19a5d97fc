//! Plain-text report writers. Floats use Rust's shortest round-trip
//! formatting, which is locale-free and always uses `.` as the separator.

use std::fmt::Write;

use super::{CovarianceRow, NnScalingTable, ScalingRow, TrialRecord, UnconstrainedRow};
use crate::probability::ComparisonRow;

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

pub const TRIAL_COLUMNS: [&str; 13] = [
    "trial_seed", "n", "N", "r", "s", "V_n", "merged", "b_n", "U_tot", "solver_mix", "V_n/b_n", "merged/b_n", "merge_path",
];

pub fn trials_csv(records: &[TrialRecord]) -> String {
    csv(
        &TRIAL_COLUMNS,
        records.iter().map(|r| {
            vec![
                r.seed.to_string(),
                r.n.to_string(),
                r.n_cities.to_string(),
                r.r.to_string(),
                r.s.to_string(),
                r.v_n.to_string(),
                r.merged_length.to_string(),
                r.b_n.to_string(),
                r.u_tot.to_string(),
                r.solver_mix(),
                (r.v_n / r.b_n).to_string(),
                (r.merged_length / r.b_n).to_string(),
                r.merge_path.to_string(),
            ]
        }),
    )
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    csv(
        &[
            "n", "N", "b_n", "trials", "V_n/b_n", "V_n/b_n_se", "merged/b_n", "merged/b_n_se", "cv_merged/b_n",
            "cv_se", "fallback_rate", "U_tot_rate", "theta5", "within_theta5",
        ],
        rows.iter().map(|r| {
            [
                r.n as f64,
                r.n_cities as f64,
                r.b_n,
                r.trials as f64,
                r.mean_lower,
                r.se_lower,
                r.mean_upper,
                r.se_upper,
                r.cv_upper,
                r.cv_upper_se,
                r.fallback_rate,
                r.u_tot_rate,
                r.theta5,
                r.within_theta5,
            ]
            .iter()
            .map(f64::to_string)
            .collect()
        }),
    )
}

pub fn nn_scaling_csv(table: &NnScalingTable) -> String {
    csv(
        &["k", "mean_d", "se", "normalized"],
        table.rows.iter().map(|r| vec![r.k.to_string(), r.mean_d.to_string(), r.std_error.to_string(), r.normalized.to_string()]),
    )
}

pub fn covariance_csv(rows: &[CovarianceRow]) -> String {
    csv(
        &["n", "N", "trials", "cov", "cov_se", "corr", "corr_se", "scale", "normalized", "low_trials"],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.n_cities.to_string(),
                r.trials.to_string(),
                r.cov.to_string(),
                r.cov_se.to_string(),
                r.corr.to_string(),
                r.corr_se.to_string(),
                r.scale.to_string(),
                r.normalized.to_string(),
                r.low_trials.to_string(),
            ]
        }),
    )
}

pub fn unconstrained_csv(rows: &[UnconstrainedRow]) -> String {
    csv(
        &["n", "trials", "exact", "strips", "strips_max", "strips_var", "nn", "nn/sqrt(n)", "5sqrt(n)"],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.trials.to_string(),
                opt(r.mean_exact),
                r.mean_strips.to_string(),
                r.max_strips.to_string(),
                r.var_strips.to_string(),
                r.mean_nn.to_string(),
                r.nn_normalized.to_string(),
                r.ceiling.to_string(),
            ]
        }),
    )
}

pub fn pmf_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("k,B,Poi,ratio\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.k, r.binomial, r.poisson, r.ratio);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_rows() {
        let rows = [ComparisonRow { k: 3, binomial: 0.25, poisson: 0.5, ratio: 0.5 }];
        assert_eq!(pmf_csv(&rows), "k,B,Poi,ratio\n3,0.25,0.5,0.5\n");
        assert_eq!(trials_csv(&[]).lines().next().unwrap(), TRIAL_COLUMNS.join(","));
    }
}
