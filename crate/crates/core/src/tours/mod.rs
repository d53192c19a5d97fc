//! Tours: representation, constructions, exact solver and bounds.

mod bounds;
mod exact;
mod insertion;
mod merge;
mod strips;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::SCHEMA_VERSION;

pub use bounds::{city_cycle_lower_bound, city_exact_lengths, nn_lower_bound};
pub use exact::{exact_tsp, EXACT_CAP};
pub use insertion::{insert_node, InsertionGrid, InsertionOutcome};
pub use merge::{merge_cycles, CityCycle, CrossEdge, MergeTrace, MAX_REMOVALS, MIN_CYCLE_EDGES};
pub use strips::{strips_tour, StripWidth, StripsCertificate};

/// Tolerance between a cached tour length and its recomputation.
pub const LENGTH_TOL: f64 = 1e-9;

/// Length of the closed walk `order[0] → order[1] → … → order[0]`.
pub fn cycle_length(points: &[Point], order: &[usize]) -> f64 {
    match order.len() {
        0 | 1 => 0.0,
        len => (0..len).map(|i| points[order[i]].dist(points[order[(i + 1) % len]])).sum(),
    }
}

/// Same length via per-vertex incident edge sums: `½ Σ l(Y_i, C)`.
pub fn half_sum_length(points: &[Point], order: &[usize]) -> f64 {
    let len = order.len();
    if len < 2 {
        return 0.0;
    }
    let incident: f64 = (0..len)
        .map(|i| {
            let here = points[order[i]];
            here.dist(points[order[(i + len - 1) % len]]) + here.dist(points[order[(i + 1) % len]])
        })
        .sum();
    0.5 * incident
}

pub(crate) fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// A spanning cycle over point indices `0..n`, with its cached length.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    order: Vec<usize>,
    length: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TourDoc {
    schema_version: u32,
    order: Vec<usize>,
    length: f64,
}

impl Tour {
    pub fn new(points: &[Point], order: Vec<usize>) -> Result<Self> {
        if !is_permutation(&order, points.len()) {
            return Err(Error::param(format!("tour order is not a permutation of 0..{}", points.len())));
        }
        let length = cycle_length(points, &order);
        Ok(Tour { order, length })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Cycle edges `(order[i], order[i+1])`, closing edge last.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let len = self.order.len();
        (0..len).map(move |i| (self.order[i], self.order[(i + 1) % len]))
    }

    /// Permutation check plus cached-length check against `points`.
    pub fn verify(&self, points: &[Point]) -> Result<()> {
        if !is_permutation(&self.order, points.len()) {
            return Err(Error::param("tour order is not a permutation"));
        }
        let fresh = cycle_length(points, &self.order);
        if (fresh - self.length).abs() > LENGTH_TOL * fresh.max(1.0) {
            return Err(Error::param(format!("cached length {} differs from recomputed {fresh}", self.length)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = TourDoc { schema_version: SCHEMA_VERSION, order: self.order.clone(), length: self.length };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Reads a tour document and checks it against `points`.
    pub fn from_json(text: &str, points: &[Point]) -> Result<Self> {
        let doc: TourDoc = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::param(format!("unsupported schema_version {}", doc.schema_version)));
        }
        let tour = Tour { order: doc.order, length: doc.length };
        tour.verify(points)?;
        Ok(tour)
    }

    /// Test hook: overwrite the cached length without recomputation.
    #[doc(hidden)]
    pub fn corrupt_length(&mut self, length: f64) {
        self.length = length;
    }
}

/// Euclidean length of `tour` over `points`, recomputed from scratch.
pub fn tour_length(points: &[Point], tour: &Tour) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::Degenerate(format!("a tour needs at least 3 points, got {}", points.len())));
    }
    if !is_permutation(tour.order(), points.len()) {
        return Err(Error::param("tour order is not a permutation"));
    }
    Ok(cycle_length(points, tour.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn pts(raw: &[(f64, f64)]) -> Vec<Point> {
        raw.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn triangle_and_square() {
        let tri = pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let t = Tour::new(&tri, vec![0, 1, 2]).unwrap();
        assert!((tour_length(&tri, &t).unwrap() - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        let sq = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let t = Tour::new(&sq, vec![0, 1, 2, 3]).unwrap();
        assert!((tour_length(&sq, &t).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn seeded_points_match_naive_sum_and_half_sum() {
        let mut rng = crate::rng::stream(5, crate::rng::Purpose::Sampling);
        let p: Vec<Point> = (0..5).map(|_| Point::new(rng.random(), rng.random())).collect();
        let order = vec![3, 0, 4, 1, 2];
        let t = Tour::new(&p, order.clone()).unwrap();
        let mut naive = 0.0;
        for k in 0..5 {
            let (a, b) = (p[order[k]], p[order[(k + 1) % 5]]);
            naive += ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
        }
        assert!((tour_length(&p, &t).unwrap() - naive).abs() < 1e-12);
        assert!((half_sum_length(&p, &order) - naive).abs() < 1e-9);
    }

    #[test]
    fn degenerate_and_invalid() {
        let two = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        let t = Tour::new(&two, vec![0, 1]).unwrap();
        assert!(matches!(tour_length(&two, &t), Err(Error::Degenerate(_))));
        let tri = pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert!(Tour::new(&tri, vec![0, 1, 1]).is_err());
        assert!(Tour::new(&tri, vec![0, 1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let tri = pts(&[(0.1, 0.0), (1.0, 0.3), (0.0, 1.0 / 3.0)]);
        let t = Tour::new(&tri, vec![0, 2, 1]).unwrap();
        let back = Tour::from_json(&t.to_json().unwrap(), &tri).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.length().to_bits(), t.length().to_bits());
    }
}
