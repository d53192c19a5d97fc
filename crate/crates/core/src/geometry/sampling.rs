use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::rng::{stream, Purpose, Stream};

use super::{CitySelection, DensityField, Instance, Point, Process, Square};

/// Draws one point of `square` with density proportional to `f`, by
/// rejection against the bound `eps2`.
fn sample_in_square(square: Square, f: &DensityField, rng: &mut Stream) -> Point {
    loop {
        let p = Point::new(
            square.origin.x + square.side * rng.random::<f64>(),
            square.origin.y + square.side * rng.random::<f64>(),
        );
        if rng.random::<f64>() * f.eps2() <= f.value_at(p) {
            return p;
        }
    }
}

/// `p_l`: the probability that one node lands in city `l`.
pub fn city_probabilities(selection: &CitySelection, f: &DensityField) -> Vec<f64> {
    let masses: Vec<f64> = (0..selection.len())
        .map(|l| {
            let sq = selection.square(l);
            f.integrate_rect(sq.origin.x, sq.origin.y, sq.origin.x + sq.side, sq.origin.y + sq.side)
        })
        .collect();
    let total: f64 = masses.iter().sum();
    masses.into_iter().map(|m| m / total).collect()
}

/// Probability that one proposal of the city rejection sampler is accepted.
/// Never below `eps1/eps2`.
pub fn acceptance_rate(selection: &CitySelection, f: &DensityField) -> f64 {
    let area = selection.len() as f64 * selection.grid().r().powi(2);
    let mass: f64 = (0..selection.len())
        .map(|l| {
            let sq = selection.square(l);
            f.integrate_rect(sq.origin.x, sq.origin.y, sq.origin.x + sq.side, sq.origin.y + sq.side)
        })
        .sum();
    mass / (area * f.eps2())
}

/// `n` i.i.d. nodes with density `f` restricted to the selected cities.
pub fn sample_binomial(selection: &CitySelection, f: &DensityField, n: usize, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::param("need n >= 1 nodes"));
    }
    let mut rng = stream(seed, Purpose::Sampling);
    let cities = selection.len();
    let mut nodes = Vec::with_capacity(n);
    let mut city_of = Vec::with_capacity(n);
    // All cities have equal area, so choosing one uniformly and accepting
    // with probability f/eps2 yields density f on their union.
    while nodes.len() < n {
        let l = rng.random_range(0..cities);
        let sq = selection.square(l);
        let p = Point::new(sq.origin.x + sq.side * rng.random::<f64>(), sq.origin.y + sq.side * rng.random::<f64>());
        if rng.random::<f64>() * f.eps2() <= f.value_at(p) {
            nodes.push(p);
            city_of.push(l);
        }
    }
    Ok(Instance { nodes, city_of, process: Process::Binomial { n: n as u64 }, seed, selection: Some(selection.clone()) })
}

/// Poisson process with intensity `mean_n · g_N`: independent Poisson counts
/// per city, then i.i.d. points inside each city.
pub fn sample_poisson(selection: &CitySelection, f: &DensityField, mean_n: f64, seed: u64) -> Result<Instance> {
    if !(mean_n.is_finite() && mean_n > 0.0) {
        return Err(Error::param(format!("Poisson mean must be positive, got {mean_n}")));
    }
    let mut rng = stream(seed, Purpose::Sampling);
    let mut nodes = Vec::new();
    let mut city_of = Vec::new();
    for (l, p_l) in city_probabilities(selection, f).into_iter().enumerate() {
        let poisson = Poisson::new(mean_n * p_l).map_err(|e| Error::param(e.to_string()))?;
        let count = poisson.sample(&mut rng) as usize;
        let sq = selection.square(l);
        for _ in 0..count {
            nodes.push(sample_in_square(sq, f, &mut rng));
            city_of.push(l);
        }
    }
    Ok(Instance { nodes, city_of, process: Process::Poisson { n: mean_n }, seed, selection: Some(selection.clone()) })
}

/// `n` i.i.d. nodes with density `f` on the whole unit square.
pub fn sample_unit_square(f: &DensityField, n: usize, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::param("need n >= 1 nodes"));
    }
    let mut rng = stream(seed, Purpose::Sampling);
    let nodes: Vec<Point> = (0..n).map(|_| sample_in_square(Square::UNIT, f, &mut rng)).collect();
    Ok(Instance { nodes, city_of: vec![0; n], process: Process::Binomial { n: n as u64 }, seed, selection: None })
}

/// Points i.i.d. in `square` with density proportional to `f` there (the
/// conditional law of a city's nodes given their count).
pub fn sample_conditional(square: Square, f: &DensityField, k: usize, rng: &mut Stream) -> Vec<Point> {
    (0..k).map(|_| sample_in_square(square, f, rng)).collect()
}
