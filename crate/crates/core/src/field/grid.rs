use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Uniform `(cells+1) x (cells+1)` lattice on the closed unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleGrid {
    cells: usize,
    level: i32,
}

impl SampleGrid {
    pub fn new(cells: usize, level: i32) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidArgument("lattice needs at least one cell".into()));
        }
        Ok(SampleGrid { cells, level })
    }

    /// Smallest lattice whose point spacing does not exceed `max_spacing`.
    pub fn from_spacing(max_spacing: f64, level: i32) -> Result<Self> {
        if !(max_spacing.is_finite() && max_spacing > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grid spacing must be positive, got {max_spacing}"
            )));
        }
        let cells = (1.0 / max_spacing - 1e-9).ceil().max(1.0) as usize;
        SampleGrid::new(cells, level)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn points_per_side(&self) -> usize {
        self.cells + 1
    }

    pub fn len(&self) -> usize {
        self.points_per_side() * self.points_per_side()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.cells as f64
    }

    pub fn level(&self) -> i32 {
        self.level
    }

    /// Row-major index, `i` along x and `j` along y.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.points_per_side() + i
    }

    pub fn point(&self, i: usize, j: usize) -> Point {
        let m = self.cells as f64;
        Point::new(i as f64 / m, j as f64 / m)
    }

    pub fn coarsen(&self) -> Result<SampleGrid> {
        if self.cells % 2 != 0 {
            return Err(Error::NotCoarsenable { cells: self.cells });
        }
        SampleGrid::new(self.cells / 2, self.level - 1)
    }
}

/// Values on a [`SampleGrid`], extended to the square by piecewise-linear
/// interpolation on the triangulation that splits each cell along its
/// lower-left to upper-right diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    grid: SampleGrid,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(grid: SampleGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(GridField { grid, values })
    }

    pub fn constant(grid: SampleGrid, c: f64) -> Self {
        GridField {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn from_fn(grid: SampleGrid, f: impl Fn(Point) -> f64) -> Self {
        let n = grid.points_per_side();
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..n {
            for i in 0..n {
                values.push(f(grid.point(i, j)));
            }
        }
        GridField { grid, values }
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn interpolate(&self, p: Point) -> Result<f64> {
        p.check_in_domain()?;
        Ok(self.interpolate_unchecked(p))
    }

    pub(crate) fn interpolate_unchecked(&self, p: Point) -> f64 {
        let m = self.grid.cells;
        // snap coordinates that land on a lattice line up to rounding
        let snap = |c: f64| {
            let f = c.clamp(0.0, 1.0) * m as f64;
            if (f - f.round()).abs() < 1e-9 {
                f.round()
            } else {
                f
            }
        };
        let fx = snap(p.x);
        let fy = snap(p.y);
        let i = (fx.floor() as usize).min(m - 1);
        let j = (fy.floor() as usize).min(m - 1);
        let s = fx - i as f64;
        let t = fy - j as f64;
        let v00 = self.value(i, j);
        let v11 = self.value(i + 1, j + 1);
        if s >= t {
            let v10 = self.value(i + 1, j);
            (1.0 - s) * v00 + (s - t) * v10 + t * v11
        } else {
            let v01 = self.value(i, j + 1);
            (1.0 - t) * v00 + (t - s) * v01 + s * v11
        }
    }

    /// Restriction to the sub-lattice of every other point.
    pub fn coarsen_nested(&self) -> Result<GridField> {
        let coarse = self.grid.coarsen()?;
        let n = coarse.points_per_side();
        let mut values = Vec::with_capacity(coarse.len());
        for j in 0..n {
            for i in 0..n {
                values.push(self.value(2 * i, 2 * j));
            }
        }
        Ok(GridField {
            grid: coarse,
            values,
        })
    }

    /// Apply [`coarsen_nested`](Self::coarsen_nested) `times` times.
    pub fn coarsen_by(&self, times: usize) -> Result<GridField> {
        let mut f = self.clone();
        for _ in 0..times {
            f = f.coarsen_nested()?;
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lattice_from_spacing() {
        let g = SampleGrid::from_spacing(1.0 / 16.0, 0).unwrap();
        assert_eq!(g.cells(), 16);
        assert_eq!(g.len(), 17 * 17);
        let g = SampleGrid::from_spacing(0.3, 0).unwrap();
        assert_eq!(g.cells(), 4);
        assert!(g.spacing() <= 0.3);
        assert!(SampleGrid::from_spacing(0.0, 0).is_err());
    }

    #[test]
    fn reproduces_nodes_constants_and_linear_functions() {
        let g = SampleGrid::new(8, 0).unwrap();
        let lin = GridField::from_fn(g, |p| p.x + p.y);
        let c = GridField::constant(g, 2.5);
        for j in 0..=8 {
            for i in 0..=8 {
                let p = g.point(i, j);
                assert_eq!(lin.interpolate(p).unwrap(), lin.value(i, j));
            }
        }
        for k in 0..200 {
            let p = Point::new((k as f64 * 0.137).fract(), (k as f64 * 0.291).fract());
            assert!((lin.interpolate(p).unwrap() - (p.x + p.y)).abs() < 1e-14);
            assert_eq!(c.interpolate(p).unwrap(), 2.5);
        }
        assert!((lin.interpolate(Point::new(1.0, 1.0)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_split_rule() {
        // one cell, only the upper-right corner is non-zero
        let g = SampleGrid::new(1, 0).unwrap();
        let f = GridField::new(g, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        // on the diagonal the value is linear along it
        assert!((f.interpolate(Point::new(0.5, 0.5)).unwrap() - 0.5).abs() < 1e-15);
        // below the diagonal only depends on y, above only on x
        assert!((f.interpolate(Point::new(0.75, 0.25)).unwrap() - 0.25).abs() < 1e-15);
        assert!((f.interpolate(Point::new(0.25, 0.75)).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn outside_points_rejected() {
        let f = GridField::constant(SampleGrid::new(2, 0).unwrap(), 1.0);
        assert!(f.interpolate(Point::new(1.1, 0.5)).is_err());
        assert!(f.interpolate(Point::new(0.5, -0.1)).is_err());
    }

    #[test]
    fn coarsening_rules() {
        let g = SampleGrid::new(3, 0).unwrap();
        assert!(GridField::constant(g, 1.0).coarsen_nested().is_err());
        let g = SampleGrid::new(8, 2).unwrap();
        let c = GridField::constant(g, 3.0).coarsen_nested().unwrap();
        assert_eq!(c.grid().cells(), 4);
        assert_eq!(c.grid().level(), 1);
        assert!(c.values().iter().all(|&v| v == 3.0));
    }

    proptest! {
        #[test]
        fn coarsening_is_exact_restriction(seed in 0u64..1000, k in 1usize..4) {
            let cells = 4 * k;
            let g = SampleGrid::new(cells, 0).unwrap();
            let f = GridField::from_fn(g, |p| (p.x * 13.1 + p.y * 7.7 + seed as f64).sin());
            let c = f.coarsen_nested().unwrap();
            for j in 0..=cells / 2 {
                for i in 0..=cells / 2 {
                    prop_assert_eq!(c.value(i, j).to_bits(), f.value(2 * i, 2 * j).to_bits());
                    let p = c.grid().point(i, j);
                    prop_assert_eq!(c.interpolate(p).unwrap().to_bits(), f.value(2 * i, 2 * j).to_bits());
                }
            }
            let twice = c.coarsen_nested().unwrap();
            let direct = GridField::from_fn(SampleGrid::new(cells / 4, -2).unwrap(), |p| {
                let i = (p.x * cells as f64).round() as usize;
                let j = (p.y * cells as f64).round() as usize;
                f.value(i, j)
            });
            prop_assert_eq!(twice.values(), direct.values());
        }
    }
}
