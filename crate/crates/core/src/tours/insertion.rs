use std::f64::consts::SQRT_2;

use super::{cycle_length, is_permutation, Tour};
use crate::error::{Error, Result};
use crate::geometry::{Point, Square};

/// Grid of `2Aw × 2Aw` cells covering the unit square, with `1/(2Aw)` an
/// integer. Each cell has a concentric `4Aw × 4Aw` neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InsertionGrid {
    w: f64,
    a: f64,
    cells: usize,
}

impl InsertionGrid {
    pub fn new(w: f64, a: f64) -> Result<Self> {
        if !(w > 0.0 && a > 0.0 && w.is_finite() && a.is_finite()) {
            return Err(Error::param(format!("need w > 0 and A > 0, got w={w}, A={a}")));
        }
        let ratio = 1.0 / (2.0 * a * w);
        let cells = ratio.round();
        if cells < 1.0 || (ratio - cells).abs() > 1e-9 {
            return Err(Error::param(format!("1/(2Aw) = {ratio} is not a positive integer")));
        }
        Ok(InsertionGrid { w, a, cells: cells as usize })
    }

    /// Grid for `n` nodes of a density bounded below by `eps1`:
    /// `A = (3/eps1)^{1/3}` and the largest `w ≥ n^{-1/6}` making `1/(2Aw)`
    /// integral (a single cell when no such `w` exists).
    pub fn for_nodes(n: usize, eps1: f64) -> Result<Self> {
        if n == 0 || !(eps1 > 0.0) {
            return Err(Error::param("need n >= 1 and eps1 > 0"));
        }
        let a = (3.0 / eps1).cbrt();
        let w_min = (n as f64).powf(-1.0 / 6.0);
        let cells = ((1.0 / (2.0 * a * w_min)).floor() as usize).max(1);
        Self::new(1.0 / (2.0 * a * cells as f64), a)
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells
    }

    pub fn cell_side(&self) -> f64 {
        1.0 / self.cells as f64
    }

    /// `4 A w √2`.
    pub fn bound(&self) -> f64 {
        4.0 * self.a * self.w * SQRT_2
    }

    pub fn inner_cell(&self, p: Point) -> Square {
        let h = self.cell_side();
        let idx = |t: f64| ((t / h).floor().max(0.0) as usize).min(self.cells - 1) as f64;
        Square::new(Point::new(idx(p.x) * h, idx(p.y) * h), h)
    }

    pub fn outer_cell(&self, p: Point) -> Square {
        let inner = self.inner_cell(p);
        let h = inner.side;
        Square::new(Point::new(inner.origin.x - 0.5 * h, inner.origin.y - 0.5 * h), 2.0 * h)
    }
}

#[derive(Debug, Clone)]
pub struct InsertionOutcome {
    /// Tour over `points` plus the new point, which gets index `points.len()`.
    pub tour: Tour,
    /// Added minus removed length.
    pub cost: f64,
    /// An edge with both ends in the new point's cell was split.
    pub in_cell: bool,
    /// Some edge has both ends in the concentric `4Aw` neighbourhood.
    pub neighbourhood_edge: bool,
    pub bound: f64,
}

impl InsertionOutcome {
    pub fn fell_back(&self) -> bool {
        !self.in_cell
    }
}

/// Inserts `new_point` into `tour`.
///
/// If some tour edge has both endpoints in the `2Aw` cell of `new_point`, the
/// shortest such edge `(z1, z2)` is replaced by `(z1, new), (new, z2)`; both
/// new edges lie in that cell, so the cost is at most `4Aw√2`. Otherwise the
/// point goes in by cheapest insertion over all edges and the outcome is
/// flagged as a fallback.
pub fn insert_node(points: &[Point], tour: &Tour, new_point: Point, grid: &InsertionGrid) -> Result<InsertionOutcome> {
    if points.len() < 3 {
        return Err(Error::Degenerate("insertion needs a tour over at least 3 points".into()));
    }
    if !is_permutation(tour.order(), points.len()) {
        return Err(Error::param("tour does not span the given points"));
    }
    if !Square::UNIT.contains(new_point) {
        return Err(Error::Containment { index: points.len(), x: new_point.x, y: new_point.y });
    }
    let inner = grid.inner_cell(new_point);
    let outer = grid.outer_cell(new_point);
    let order = tour.order();
    let len = order.len();
    let cost_at = |pos: usize| {
        let (z1, z2) = (points[order[pos]], points[order[(pos + 1) % len]]);
        z1.dist(new_point) + new_point.dist(z2) - z1.dist(z2)
    };

    let mut in_cell: Option<(usize, f64)> = None;
    let mut neighbourhood_edge = false;
    for pos in 0..len {
        let (z1, z2) = (points[order[pos]], points[order[(pos + 1) % len]]);
        if outer.contains(z1) && outer.contains(z2) {
            neighbourhood_edge = true;
        }
        if inner.contains(z1) && inner.contains(z2) {
            let l = z1.dist(z2);
            if in_cell.is_none_or(|(_, best)| l < best) {
                in_cell = Some((pos, l));
            }
        }
    }

    let pos = match in_cell {
        Some((pos, _)) => pos,
        None => (0..len)
            .map(|p| (p, cost_at(p)))
            .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc })
            .0,
    };
    let cost = cost_at(pos);
    let mut new_order = Vec::with_capacity(len + 1);
    new_order.extend_from_slice(&order[..=pos]);
    new_order.push(points.len());
    new_order.extend_from_slice(&order[pos + 1..]);
    let mut all = points.to_vec();
    all.push(new_point);
    let length = cycle_length(&all, &new_order);
    Ok(InsertionOutcome {
        tour: Tour { order: new_order, length },
        cost,
        in_cell: in_cell.is_some(),
        neighbourhood_edge,
        bound: grid.bound(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        let g = InsertionGrid::for_nodes(500, 1.0).unwrap();
        assert_eq!(g.cells_per_axis(), 1);
        assert!((2.0 * g.a() * g.w() - 1.0).abs() < 1e-12);
        let big = InsertionGrid::for_nodes(10_000_000, 1.0).unwrap();
        assert_eq!(big.cells_per_axis(), 5);
        assert!(big.w() >= 1e7f64.powf(-1.0 / 6.0));
        assert!(InsertionGrid::new(0.3, 1.0).is_err());
    }

    #[test]
    fn point_on_edge_costs_nothing() {
        let p = vec![Point::new(0.1, 0.1), Point::new(0.2, 0.1), Point::new(0.15, 0.2)];
        let t = Tour::new(&p, vec![0, 1, 2]).unwrap();
        let g = InsertionGrid::new(1.0 / (2.0 * 4.0), 2.0).unwrap();
        let out = insert_node(&p, &t, Point::new(0.15, 0.1), &g).unwrap();
        assert!(out.in_cell);
        assert!(out.cost.abs() < 1e-12);
        assert!((out.tour.length() - t.length()).abs() < 1e-12);
        assert_eq!(out.tour.order(), &[0, 3, 1, 2]);
    }

    #[test]
    fn far_tour_falls_back() {
        let p = vec![Point::new(0.9, 0.9), Point::new(0.95, 0.9), Point::new(0.92, 0.95)];
        let t = Tour::new(&p, vec![0, 1, 2]).unwrap();
        // 4 x 4 cells of side 0.25
        let g = InsertionGrid::new(1.0 / 8.0, 1.0).unwrap();
        let out = insert_node(&p, &t, Point::new(0.05, 0.05), &g).unwrap();
        assert!(out.fell_back());
        assert!(!out.neighbourhood_edge);
        assert!(out.tour.verify(&[p.clone(), vec![Point::new(0.05, 0.05)]].concat()).is_ok());
    }
}
