#![allow(dead_code)]

use dense_tsp::rng::{stream, Purpose};
use dense_tsp::Point;
use rand::Rng;

/// Optimal cycle length by trying every permutation with node 0 fixed.
pub fn brute_force_tsp(points: &[Point]) -> f64 {
    fn go(points: &[Point], path: &mut Vec<usize>, used: &mut [bool], acc: f64, best: &mut f64) {
        let n = points.len();
        let last = *path.last().unwrap();
        if path.len() == n {
            *best = best.min(acc + points[last].dist(points[0]));
            return;
        }
        for j in 1..n {
            if !used[j] {
                used[j] = true;
                path.push(j);
                go(points, path, used, acc + points[last].dist(points[j]), best);
                path.pop();
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; points.len()];
    used[0] = true;
    go(points, &mut vec![0], &mut used, 0.0, &mut best);
    best
}

pub fn uniform_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = stream(seed, Purpose::Sampling);
    (0..n).map(|_| Point::new(rng.random(), rng.random())).collect()
}
