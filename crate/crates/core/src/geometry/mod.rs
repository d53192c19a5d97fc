//! City tiling, densities and node processes.

mod density;
mod grid;
mod instance;
mod sampling;
mod selection;

use serde::{Deserialize, Serialize};

pub use density::DensityField;
pub use grid::{build_city_grid, snap_parameters, CityGrid};
pub use instance::{Instance, Process};
pub use sampling::{acceptance_rate, city_probabilities, sample_conditional, sample_binomial, sample_poisson, sample_unit_square};
pub use selection::{select_well_connected, CitySelection};

/// A point of the unit square `[0,1]²`. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Axis-aligned square `[origin.x, origin.x + side] × [origin.y, origin.y + side]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square {
    pub origin: Point,
    pub side: f64,
}

impl Square {
    pub const UNIT: Square = Square { origin: Point::new(0.0, 0.0), side: 1.0 };

    pub fn new(origin: Point, side: f64) -> Self {
        Square { origin, side }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.origin.x
            && p.x <= self.origin.x + self.side
            && p.y >= self.origin.y
            && p.y <= self.origin.y + self.side
    }

    pub fn center(&self) -> Point {
        Point::new(self.origin.x + 0.5 * self.side, self.origin.y + 0.5 * self.side)
    }
}
