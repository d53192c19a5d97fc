use crate::error::{Error, Result};

use super::Point;

pub const DEFAULT_RESOLUTION: usize = 16;

/// Piecewise-constant density on `[0,1]²` with `resolution × resolution` cells.
///
/// Cell values are bounded by `eps1 ≤ v ≤ eps2` with `eps1 > 0`, and the cells
/// average to one so the density integrates to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    cells: Vec<f64>,
    resolution: usize,
    eps1: f64,
    eps2: f64,
}

impl DensityField {
    pub fn uniform() -> Self {
        Self::from_cells(vec![1.0; DEFAULT_RESOLUTION * DEFAULT_RESOLUTION], DEFAULT_RESOLUTION)
            .expect("uniform density is valid")
    }

    /// Checkerboard with two levels whose ratio is `ratio` (`eps2/eps1`).
    pub fn checker(ratio: f64) -> Result<Self> {
        Self::checker_with_resolution(ratio, DEFAULT_RESOLUTION)
    }

    pub fn checker_with_resolution(ratio: f64, resolution: usize) -> Result<Self> {
        if !(ratio.is_finite() && ratio >= 1.0) {
            return Err(Error::param(format!("checker ratio must be finite and >= 1, got {ratio}")));
        }
        if resolution == 0 || !resolution.is_multiple_of(2) {
            return Err(Error::param("checker density needs an even resolution"));
        }
        let low = 2.0 / (1.0 + ratio);
        let high = ratio * low;
        let cells = (0..resolution * resolution)
            .map(|idx| if (idx / resolution + idx % resolution).is_multiple_of(2) { low } else { high })
            .collect();
        Self::from_cells(cells, resolution)
    }

    /// Builds a density from raw non-negative weights, rescaled so the
    /// integral over the unit square is one. Zero weights are rejected since
    /// the density must be bounded away from zero.
    pub fn from_cells(cells: Vec<f64>, resolution: usize) -> Result<Self> {
        if resolution == 0 || cells.len() != resolution * resolution {
            return Err(Error::param(format!(
                "expected {}x{} cells, got {}",
                resolution,
                resolution,
                cells.len()
            )));
        }
        if let Some(bad) = cells.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::param(format!("density cells must be finite and positive, got {bad}")));
        }
        let mean = cells.iter().sum::<f64>() / cells.len() as f64;
        let cells: Vec<f64> = cells.into_iter().map(|v| v / mean).collect();
        let eps1 = cells.iter().copied().fold(f64::INFINITY, f64::min);
        let eps2 = cells.iter().copied().fold(0.0, f64::max);
        Ok(DensityField { cells, resolution, eps1, eps2 })
    }

    /// Parses `uniform` or `checker:<ratio>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "uniform" {
            return Ok(Self::uniform());
        }
        if let Some(ratio) = spec.strip_prefix("checker:") {
            let ratio: f64 = ratio
                .trim()
                .parse()
                .map_err(|_| Error::param(format!("bad checker ratio in density `{spec}`")))?;
            return Self::checker(ratio);
        }
        Err(Error::param(format!("unknown density `{spec}` (expected uniform or checker:<ratio>)")))
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    /// `eps1/eps2`, the lower constant in `eta1/N <= p_l`.
    pub fn eta1(&self) -> f64 {
        self.eps1 / self.eps2
    }

    /// `eps2/eps1`, the upper constant in `p_l <= eta2/N`.
    pub fn eta2(&self) -> f64 {
        self.eps2 / self.eps1
    }

    fn cell_index(&self, t: f64) -> usize {
        ((t * self.resolution as f64).floor().max(0.0) as usize).min(self.resolution - 1)
    }

    pub fn value_at(&self, p: Point) -> f64 {
        self.cells[self.cell_index(p.y) * self.resolution + self.cell_index(p.x)]
    }

    /// Exact integral over the rectangle `[x0,x1] × [y0,y1]` (clipped to the unit square).
    pub fn integrate_rect(&self, x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
        let k = self.resolution;
        let h = 1.0 / k as f64;
        let (x0, x1) = (x0.max(0.0), x1.min(1.0));
        let (y0, y1) = (y0.max(0.0), y1.min(1.0));
        if x1 <= x0 || y1 <= y0 {
            return 0.0;
        }
        let mut total = 0.0;
        for j in self.cell_index(y0)..=self.cell_index(y1) {
            let oy = (y1.min((j + 1) as f64 * h) - y0.max(j as f64 * h)).max(0.0);
            if oy == 0.0 {
                continue;
            }
            for i in self.cell_index(x0)..=self.cell_index(x1) {
                let ox = (x1.min((i + 1) as f64 * h) - x0.max(i as f64 * h)).max(0.0);
                total += ox * oy * self.cells[j * k + i];
            }
        }
        total
    }

    /// Riemann sum over the cells; one up to rounding.
    pub fn total_mass(&self) -> f64 {
        let h = 1.0 / self.resolution as f64;
        self.cells.iter().sum::<f64>() * h * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_and_checker_integrate_to_one() {
        for f in [DensityField::uniform(), DensityField::checker(2.0).unwrap(), DensityField::checker(5.0).unwrap()] {
            assert!((f.total_mass() - 1.0).abs() < 1e-12);
            assert!((f.integrate_rect(0.0, 0.0, 1.0, 1.0) - 1.0).abs() < 1e-12);
            assert!(f.eps1() > 0.0 && f.eps1() <= f.eps2());
            assert!(f.cells().iter().all(|&v| v >= f.eps1() && v <= f.eps2()));
        }
    }

    #[test]
    fn checker_levels() {
        let f = DensityField::checker(2.0).unwrap();
        assert!((f.eps1() - 2.0 / 3.0).abs() < 1e-15);
        assert!((f.eps2() - 4.0 / 3.0).abs() < 1e-15);
        assert!((f.eta2() - 2.0).abs() < 1e-12);
        assert!((f.eta1() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rect_integral_matches_cell_sum() {
        let f = DensityField::checker(3.0).unwrap();
        // one full cell plus half of its right neighbour
        let h = 1.0 / 16.0;
        let expected = h * h * (f.cells()[0] + 0.5 * f.cells()[1]);
        assert!((f.integrate_rect(0.0, 0.0, 1.5 * h, h) - expected).abs() < 1e-15);
    }

    #[test]
    fn parse_specs() {
        assert_eq!(DensityField::parse("uniform").unwrap(), DensityField::uniform());
        assert!(DensityField::parse("checker:2").is_ok());
        assert!(DensityField::parse("checker:0.5").is_err());
        assert!(DensityField::parse("gaussian").is_err());
        assert!(DensityField::from_cells(vec![1.0, 0.0, 1.0, 1.0], 2).is_err());
    }
}
