// Held-Karp dynamic program over subsets.
//
// Node 0 is the fixed start. best[mask][j] is the length of the shortest path
// that leaves node 0, visits exactly the nodes of `mask` (bit j-1 for node j)
// and ends at j.

use super::{cycle_length, Tour};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Largest instance the exact solver accepts.
pub const EXACT_CAP: usize = 18;

const NONE: u8 = u8::MAX;

/// Minimum-length spanning cycle by Held-Karp.
///
/// Ties are broken deterministically: predecessors and final nodes are
/// scanned in increasing index order and only a strict improvement replaces
/// the incumbent. The returned order starts at node 0 and is oriented so the
/// second entry is smaller than the last.
pub fn exact_tsp(points: &[Point]) -> Result<Tour> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Degenerate(format!("exact solver needs at least 3 points, got {n}")));
    }
    if n > EXACT_CAP {
        return Err(Error::TooLarge { n, cap: EXACT_CAP });
    }
    let m = n - 1;
    let dist: Vec<f64> = (0..n * n).map(|idx| points[idx / n].dist(points[idx % n])).collect();
    let d = |i: usize, j: usize| dist[i * n + j];

    let masks = 1usize << m;
    let mut best = vec![f64::INFINITY; masks * m];
    let mut parent = vec![NONE; masks * m];
    for j in 0..m {
        best[(1 << j) * m + j] = d(0, j + 1);
    }
    for mask in 1..masks {
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let prev_mask = mask ^ (1 << j);
            if prev_mask == 0 {
                continue;
            }
            let mut cur = f64::INFINITY;
            let mut arg = NONE;
            for k in 0..m {
                if prev_mask & (1 << k) == 0 {
                    continue;
                }
                let cand = best[prev_mask * m + k] + d(k + 1, j + 1);
                if cand < cur {
                    cur = cand;
                    arg = k as u8;
                }
            }
            best[mask * m + j] = cur;
            parent[mask * m + j] = arg;
        }
    }

    let full = masks - 1;
    let mut last = 0;
    let mut total = f64::INFINITY;
    for j in 0..m {
        let cand = best[full * m + j] + d(j + 1, 0);
        if cand < total {
            total = cand;
            last = j;
        }
    }

    let mut rev = Vec::with_capacity(n);
    let mut mask = full;
    let mut cur = last;
    loop {
        rev.push(cur + 1);
        let p = parent[mask * m + cur];
        mask ^= 1 << cur;
        if p == NONE {
            break;
        }
        cur = p as usize;
    }
    let mut order = Vec::with_capacity(n);
    order.push(0);
    order.extend(rev.into_iter().rev());
    if order[1] > order[n - 1] {
        order[1..].reverse();
    }
    let length = cycle_length(points, &order);
    Ok(Tour { order, length })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_corners() {
        let p = vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        let t = exact_tsp(&p).unwrap();
        assert!((t.length() - 4.0).abs() < 1e-12);
        assert_eq!(t.order(), &[0, 2, 1, 3]);
    }

    #[test]
    fn cap_and_degenerate() {
        let p: Vec<Point> = (0..19).map(|i| Point::new(i as f64 / 19.0, 0.5)).collect();
        assert!(matches!(exact_tsp(&p), Err(Error::TooLarge { n: 19, cap: 18 })));
        assert!(matches!(exact_tsp(&p[..2]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn coincident_points() {
        let p = vec![Point::new(0.5, 0.5); 5];
        assert_eq!(exact_tsp(&p).unwrap().length(), 0.0);
    }
}
