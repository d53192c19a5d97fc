use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{cycle_length, Tour};
use crate::error::{Error, Result};
use crate::geometry::{Point, Square};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StripWidth {
    /// `c ≈ b/√a`, rounded so that `b/c` is an integer.
    Auto,
    /// Explicit width; `b/c` must be an integer.
    Fixed(f64),
}

/// Certified upper bound `b²/c + a·c·√2 + 2b` for a strips tour of `a`
/// points in a square of side `b` swept by strips of width `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripsCertificate {
    pub a: usize,
    pub b: f64,
    pub c: f64,
    pub bound: f64,
}

impl StripsCertificate {
    pub fn new(a: usize, b: f64, c: f64) -> Self {
        StripsCertificate { a, b, c, bound: b * b / c + a as f64 * c * SQRT_2 + 2.0 * b }
    }

    /// The width-free ceiling `5 b √a`.
    pub fn ceiling(&self) -> f64 {
        5.0 * self.b * (self.a as f64).sqrt()
    }
}

fn strip_count(a: usize, b: f64, width: StripWidth) -> Result<usize> {
    match width {
        StripWidth::Auto => {
            let root = (a as f64).sqrt();
            let lo = (root.floor() as usize).max(1);
            let hi = (root.ceil() as usize).max(1);
            let bound = |k: usize| StripsCertificate::new(a, b, b / k as f64).bound;
            Ok(if bound(hi) < bound(lo) { hi } else { lo })
        }
        StripWidth::Fixed(c) => {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::param(format!("strip width must be positive, got {c}")));
            }
            let ratio = b / c;
            let k = ratio.round();
            if k < 1.0 || (ratio - k).abs() > 1e-9 {
                return Err(Error::param(format!("side/width = {ratio} is not a positive integer")));
            }
            Ok(k as usize)
        }
    }
}

/// Serpentine strips tour of `points` inside `square`.
///
/// The square is cut into `k` vertical strips; strips are visited left to
/// right, alternately top-to-bottom and bottom-to-top. The tour length is
/// checked against the certificate bound before returning.
pub fn strips_tour(points: &[Point], square: Square, width: StripWidth) -> Result<(Tour, StripsCertificate)> {
    let a = points.len();
    if a < 3 {
        return Err(Error::Degenerate(format!("strips tour needs at least 3 points, got {a}")));
    }
    if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| !square.contains(**p)) {
        return Err(Error::Containment { index, x: p.x, y: p.y });
    }
    let b = square.side;
    let k = strip_count(a, b, width)?;
    let c = b / k as f64;

    let strip_of = |p: &Point| (((p.x - square.origin.x) / c).floor().max(0.0) as usize).min(k - 1);
    let mut order: Vec<usize> = (0..a).collect();
    order.sort_by(|&i, &j| {
        let (pi, pj) = (points[i], points[j]);
        let (si, sj) = (strip_of(&pi), strip_of(&pj));
        si.cmp(&sj).then_with(|| {
            let by_y = if si % 2 == 0 { pj.y.total_cmp(&pi.y) } else { pi.y.total_cmp(&pj.y) };
            by_y.then(pi.x.total_cmp(&pj.x)).then(i.cmp(&j))
        })
    });

    let length = cycle_length(points, &order);
    let cert = StripsCertificate::new(a, b, c);
    assert!(
        length <= cert.bound * (1.0 + 1e-12),
        "strips tour of length {length} exceeds its certificate {cert:?}"
    );
    Ok((Tour { order, length }, cert))
}
