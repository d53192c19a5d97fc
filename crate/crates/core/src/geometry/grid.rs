use crate::error::{Error, Result};

use super::{Point, Square};

const RATIO_TOL: f64 = 1e-9;

/// Regular tiling of `[0,1]²` by `r × r` cities separated by gap `s`.
///
/// City `id = j * per_axis + i` has lower-left corner `(i (r+s), j (r+s))` and
/// lattice coordinates `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CityGrid {
    r: f64,
    s: f64,
    per_axis: usize,
    origins: Vec<Point>,
}

fn check_open_params(r: f64, s: f64) -> Result<()> {
    if !(r.is_finite() && s.is_finite()) || r <= 0.0 || s <= 0.0 {
        return Err(Error::param(format!("need r > 0 and s > 0, got r={r}, s={s}")));
    }
    if r + s >= 1.0 {
        return Err(Error::param(format!("need r + s < 1, got r + s = {}", r + s)));
    }
    Ok(())
}

/// Integer `m` with `(1 - r)/(r + s) = m`, if the ratio is integral.
fn integral_ratio(r: f64, s: f64) -> Option<usize> {
    let ratio = (1.0 - r) / (r + s);
    let m = ratio.round();
    ((ratio - m).abs() <= RATIO_TOL && m >= 1.0).then_some(m as usize)
}

pub fn build_city_grid(r: f64, s: f64) -> Result<CityGrid> {
    check_open_params(r, s)?;
    let m = integral_ratio(r, s).ok_or_else(|| {
        let hint = match snap_parameters(r, s) {
            Ok((rs, ss)) => format!("; nearest admissible pair is r={rs}, s={ss}"),
            Err(_) => String::new(),
        };
        Error::param(format!(
            "(1 - r)/(r + s) = {} is not an integer{hint}",
            (1.0 - r) / (r + s)
        ))
    })?;
    let per_axis = m + 1;
    let pitch = r + s;
    let origins = (0..per_axis)
        .flat_map(|j| (0..per_axis).map(move |i| Point::new(i as f64 * pitch, j as f64 * pitch)))
        .collect();
    Ok(CityGrid { r, s, per_axis, origins })
}

/// Moves `(r_target, s_target)` to the closest admissible pair: `r` is kept,
/// `m = floor((1 - r)/(r + s_target))`, and `s = (1 - r)/m - r ≥ s_target`.
pub fn snap_parameters(r_target: f64, s_target: f64) -> Result<(f64, f64)> {
    check_open_params(r_target, s_target)?;
    if integral_ratio(r_target, s_target).is_some() {
        return Ok((r_target, s_target));
    }
    let r = r_target;
    let mut m = ((1.0 - r) / (r + s_target)).floor() as usize;
    while m >= 1 {
        let s = (1.0 - r) / m as f64 - r;
        if s >= s_target {
            return Ok((r, s));
        }
        m -= 1;
    }
    Err(Error::param(format!(
        "no admissible (r, s) with at least two cities per axis near r={r_target}, s={s_target}"
    )))
}

impl CityGrid {
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    pub fn origins(&self) -> &[Point] {
        &self.origins
    }

    pub fn city_count(&self) -> usize {
        self.origins.len()
    }

    pub fn square(&self, id: usize) -> Square {
        Square::new(self.origins[id], self.r)
    }

    pub fn lattice(&self, id: usize) -> (i64, i64) {
        ((id % self.per_axis) as i64, (id / self.per_axis) as i64)
    }

    pub fn id_of(&self, (i, j): (i64, i64)) -> Option<usize> {
        let m = self.per_axis as i64;
        (0..m).contains(&i).then_some(())?;
        (0..m).contains(&j).then_some(())?;
        Some((j * m + i) as usize)
    }

    /// Lattice neighbours of city `id`, in the order left, right, down, up.
    pub fn neighbors(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = self.lattice(id);
        [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)].into_iter().filter_map(|c| self.id_of(c))
    }

    /// City whose closed square contains `p`.
    pub fn locate(&self, p: Point) -> Option<usize> {
        let pitch = self.r + self.s;
        let i = (p.x / pitch).floor() as i64;
        let j = (p.y / pitch).floor() as i64;
        let id = self.id_of((i.min(self.per_axis as i64 - 1), j.min(self.per_axis as i64 - 1)))?;
        self.square(id).contains(p).then_some(id)
    }
}
