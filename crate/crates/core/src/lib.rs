//! Random Euclidean TSP across dense cities.
//!
//! Nodes are scattered across `N` small `r × r` squares ("cities") tiled inside
//! the unit square with gap `s`. The crate builds instances of that model,
//! constructs tours (strips sweep, exact Held-Karp, cross-edge merging of
//! per-city cycles), evaluates the binomial/Poisson machinery behind the
//! model's probability estimates, and runs seeded Monte Carlo studies that
//! check the resulting finite-`n` inequalities and scalings.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod probability;
pub mod rng;
pub mod tours;

pub use error::{Error, Result};
pub use geometry::{
    build_city_grid, sample_binomial, sample_poisson, sample_unit_square, select_well_connected,
    snap_parameters, CityGrid, CitySelection, DensityField, Instance, Point, Process,
};
pub use tours::{
    city_cycle_lower_bound, exact_tsp, insert_node, merge_cycles, nn_lower_bound, strips_tour,
    tour_length, MergeTrace, StripWidth, StripsCertificate, Tour,
};

/// Version tag written into every serialized document.
pub const SCHEMA_VERSION: u32 = 1;
