use std::f64::consts::SQRT_2;

use super::exact_tsp;
use crate::error::{Error, Result};
use crate::geometry::{Instance, Point};

/// `Σ_i min_{j≠i} d(x_i, x_j)`, a lower bound on every spanning cycle
/// (each vertex has two incident edges, each at least its nearest-neighbour
/// distance).
pub fn nn_lower_bound(points: &[Point]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::Degenerate(format!("nearest-neighbour bound needs at least 3 points, got {}", points.len())));
    }
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &q)| p.dist(q))
                .fold(f64::INFINITY, f64::min)
        })
        .sum())
}

/// Exact optimal cycle length of every selected city, `0` for cities with at
/// most two nodes.
pub fn city_exact_lengths(instance: &Instance) -> Result<Vec<f64>> {
    (0..instance.city_count())
        .map(|l| {
            let pts = instance.city_points(l);
            if pts.len() <= 2 {
                Ok(0.0)
            } else {
                Ok(exact_tsp(&pts)?.length())
            }
        })
        .collect()
}

/// `V_n = Σ_l T_l`, with `T_l = 0` whenever city `l` holds at most two nodes.
///
/// Any spanning cycle of the instance is at least `V_n` provided the gap
/// between cities exceeds their diagonal, `s > r√2`.
pub fn city_cycle_lower_bound(instance: &Instance, per_city_exact_lengths: &[f64]) -> Result<f64> {
    let sel = instance
        .selection
        .as_ref()
        .ok_or_else(|| Error::Inapplicable("instance has no city structure".into()))?;
    let (r, s) = (sel.grid().r(), sel.grid().s());
    if s <= r * SQRT_2 {
        return Err(Error::Inapplicable(format!("lower bound needs s > r*sqrt(2), got s={s}, r*sqrt(2)={}", r * SQRT_2)));
    }
    if per_city_exact_lengths.len() != sel.len() {
        return Err(Error::param(format!(
            "{} per-city lengths for {} cities",
            per_city_exact_lengths.len(),
            sel.len()
        )));
    }
    Ok(instance
        .city_counts()
        .iter()
        .zip(per_city_exact_lengths)
        .map(|(&count, &t)| if count <= 2 { 0.0 } else { t })
        .sum())
}
