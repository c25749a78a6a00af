use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::heights::{JumpHeights, JumpLaw};
use super::partition::Partition;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::field::GridField;
use crate::geometry::{Point, Polygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Clamp {
    Min,
    #[default]
    Max,
}

/// Positive map applied to the Gaussian field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PositiveMap {
    #[default]
    Exp,
}

impl PositiveMap {
    pub fn apply(self, w: f64) -> f64 {
        match self {
            PositiveMap::Exp => w.exp(),
        }
    }
}

/// `b = clamp(scale(x) * a(x), cap(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvectionMap {
    pub scale: Expr,
    pub cap: Expr,
    pub clamp: Clamp,
}

impl Default for AdvectionMap {
    fn default() -> Self {
        AdvectionMap {
            scale: Expr::constant(-2.0),
            cap: Expr::constant(-5.0),
            clamp: Clamp::Max,
        }
    }
}

impl AdvectionMap {
    pub fn apply(&self, p: Point, a: f64) -> f64 {
        let scaled = self.scale.eval(p, 0.0) * a;
        let cap = self.cap.eval(p, 0.0);
        match self.clamp {
            Clamp::Min => scaled.min(cap),
            Clamp::Max => scaled.max(cap),
        }
    }

    /// Advection that vanishes identically.
    pub fn zero() -> Self {
        AdvectionMap {
            scale: Expr::constant(0.0),
            cap: Expr::constant(0.0),
            clamp: Clamp::Max,
        }
    }
}

/// Deterministic ingredients of the coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientModel {
    pub a_bar: Expr,
    pub phi: PositiveMap,
    pub advection: AdvectionMap,
}

impl Default for CoefficientModel {
    fn default() -> Self {
        CoefficientModel {
            a_bar: Expr::constant(0.0),
            phi: PositiveMap::Exp,
            advection: AdvectionMap::default(),
        }
    }
}

impl CoefficientModel {
    /// Checks that the base function is non-negative on a 33x33 lattice.
    pub fn validate(&self) -> Result<()> {
        for j in 0..=32 {
            for i in 0..=32 {
                let p = Point::new(i as f64 / 32.0, j as f64 / 32.0);
                let v = self.a_bar.eval(p, 0.0);
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::Config(format!(
                        "a_bar must be non-negative, got {v} at ({}, {})",
                        p.x, p.y
                    )));
                }
                for (name, e) in [("b1", &self.advection.scale), ("b2", &self.advection.cap)] {
                    if !e.eval(p, 0.0).is_finite() {
                        return Err(Error::Config(format!("{name} is not finite at ({}, {})", p.x, p.y)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One realization of the jump-diffusion and jump-advection coefficients.
///
/// The partition and jump heights sit behind `Arc`s so that the coarse
/// versions of a realization used for level coupling share them.
#[derive(Debug, Clone)]
pub struct CoefficientSample {
    field: GridField,
    partition: Arc<Partition>,
    jumps: Arc<JumpHeights>,
    model: Arc<CoefficientModel>,
}

impl CoefficientSample {
    pub fn new(
        field: GridField,
        partition: Arc<Partition>,
        jumps: Arc<JumpHeights>,
        model: Arc<CoefficientModel>,
    ) -> Result<Self> {
        if jumps.values().len() != partition.tau() {
            return Err(Error::DimensionMismatch {
                expected: partition.tau(),
                got: jumps.values().len(),
            });
        }
        Ok(CoefficientSample {
            field,
            partition,
            jumps,
            model,
        })
    }

    /// Same partition and jumps with a different field.
    pub fn with_field(&self, field: GridField) -> Self {
        CoefficientSample {
            field,
            partition: Arc::clone(&self.partition),
            jumps: Arc::clone(&self.jumps),
            model: Arc::clone(&self.model),
        }
    }

    /// Restriction of the field to the next coarser nested lattice.
    pub fn coarsen(&self) -> Result<Self> {
        Ok(self.with_field(self.field.coarsen_nested()?))
    }

    pub fn field(&self) -> &GridField {
        &self.field
    }

    pub fn partition(&self) -> &Arc<Partition> {
        &self.partition
    }

    pub fn jumps(&self) -> &Arc<JumpHeights> {
        &self.jumps
    }

    pub fn model(&self) -> &CoefficientModel {
        &self.model
    }

    pub fn eval_a(&self, p: Point) -> Result<f64> {
        p.check_in_domain()?;
        Ok(self.a_in_region(p, self.partition.locate(p)))
    }

    pub fn eval_b(&self, p: Point) -> Result<f64> {
        let a = self.eval_a(p)?;
        Ok(self.model.advection.apply(p, a))
    }

    /// `a` at `p`, with the region already known.
    pub(crate) fn a_in_region(&self, p: Point, region: usize) -> f64 {
        self.model.a_bar.eval(p, 0.0)
            + self.model.phi.apply(self.field.interpolate_unchecked(p))
            + self.jumps.values()[region]
    }

    /// `(a, b)` at `p` in `region`.
    pub(crate) fn coefficients_in_region(&self, p: Point, region: usize) -> (f64, f64) {
        let a = self.a_in_region(p, region);
        (a, self.model.advection.apply(p, a))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RegionRecord {
    vertices: Vec<[f64; 2]>,
    law: [f64; 2],
    height: f64,
}

/// Text record of a partition and its jump heights, for debugging and replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRecord {
    chords: Vec<[[f64; 2]; 2]>,
    regions: Vec<RegionRecord>,
}

impl PartitionRecord {
    pub fn new(partition: &Partition, jumps: &JumpHeights) -> Self {
        PartitionRecord {
            chords: partition
                .chords()
                .iter()
                .map(|c| [[c.a.x, c.a.y], [c.b.x, c.b.y]])
                .collect(),
            regions: partition
                .regions()
                .iter()
                .zip(jumps.values().iter().zip(jumps.laws()))
                .map(|(poly, (&height, law))| RegionRecord {
                    vertices: poly.vertices.iter().map(|p| [p.x, p.y]).collect(),
                    law: [law.low, law.high],
                    height,
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuild the partition and jump heights.
    pub fn restore(&self) -> Result<(Partition, JumpHeights)> {
        use crate::geometry::Segment;
        let chords = self
            .chords
            .iter()
            .map(|c| Segment::new(Point::new(c[0][0], c[0][1]), Point::new(c[1][0], c[1][1])))
            .collect();
        let partition = Partition::from_chords(chords)?;
        if partition.tau() != self.regions.len() {
            return Err(Error::InvalidArgument("record region count mismatch".into()));
        }
        for (rebuilt, rec) in partition.regions().iter().zip(&self.regions) {
            let stored = Polygon::new(rec.vertices.iter().map(|v| Point::new(v[0], v[1])).collect());
            if (rebuilt.area() - stored.area()).abs() > 1e-12 {
                return Err(Error::InvalidArgument("record regions do not match chords".into()));
            }
        }
        let jumps = JumpHeights::new(
            self.regions.iter().map(|r| r.height).collect(),
            self.regions.iter().map(|r| JumpLaw::uniform(r.law[0], r.law[1])).collect(),
        )?;
        Ok((partition, jumps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SampleGrid;
    use crate::jump::{sample_jump_heights, JumpTable};
    use crate::rng::RandomStream;

    fn flat_sample(jumps: Vec<f64>, advection: AdvectionMap) -> CoefficientSample {
        let laws = jumps.iter().map(|&v| JumpLaw::uniform(v, v)).collect();
        CoefficientSample::new(
            GridField::constant(SampleGrid::new(4, 0).unwrap(), 0.0),
            Arc::new(Partition::symmetric_cross()),
            Arc::new(JumpHeights::new(jumps, laws).unwrap()),
            Arc::new(CoefficientModel {
                advection,
                ..CoefficientModel::default()
            }),
        )
        .unwrap()
    }

    #[test]
    fn composition_with_zero_field() {
        let s = flat_sample(vec![0.0; 4], AdvectionMap::default());
        assert_eq!(s.eval_a(Point::new(0.3, 0.6)).unwrap(), 1.0);
        let s = flat_sample(vec![0.0, 0.0, 0.0, 10.5], AdvectionMap::default());
        assert_eq!(s.eval_a(Point::new(0.25, 0.75)).unwrap(), 11.5);
    }

    #[test]
    fn clamp_modes() {
        let s = flat_sample(vec![0.0; 4], AdvectionMap::default());
        assert_eq!(s.eval_b(Point::new(0.1, 0.1)).unwrap(), -2.0);
        let s = flat_sample(vec![0.0, 0.0, 0.0, 10.5], AdvectionMap::default());
        assert_eq!(s.eval_b(Point::new(0.25, 0.75)).unwrap(), -5.0);
        let min_map = AdvectionMap {
            scale: Expr::constant(1.0),
            cap: Expr::constant(2.0),
            clamp: Clamp::Min,
        };
        let s = flat_sample(vec![2.0; 4], min_map);
        assert_eq!(s.eval_b(Point::new(0.5, 0.2)).unwrap(), 2.0);
    }

    #[test]
    fn sampled_coefficients_are_positive_and_bounded() {
        let root = RandomStream::from_seed(11);
        let grid = SampleGrid::new(16, 0).unwrap();
        let emb = crate::field::CirculantEmbedding::build(grid, Default::default()).unwrap();
        for k in 0..10 {
            let s = root.child(k);
            let partition = crate::jump::sample_partition_quadrangles(&s.child(1));
            let jumps = sample_jump_heights(&partition, &JumpTable::default(), &s.child(2)).unwrap();
            let sample = CoefficientSample::new(
                emb.sample(&s.child(0)),
                Arc::new(partition),
                Arc::new(jumps),
                Arc::new(CoefficientModel::default()),
            )
            .unwrap();
            for i in 0..1000 {
                let p = Point::new((i as f64 * 0.6180339).fract(), (i as f64 * 0.41421).fract());
                let a = sample.eval_a(p).unwrap();
                let b = sample.eval_b(p).unwrap();
                assert!(a > 0.0);
                assert!((-5.0..0.0).contains(&b), "b = {b}");
            }
        }
    }

    #[test]
    fn record_round_trip() {
        let p = Partition::from_uniforms([0.3, 0.6, 0.45, 0.7]).unwrap();
        let j = sample_jump_heights(&p, &JumpTable::default(), &RandomStream::from_seed(2)).unwrap();
        let text = PartitionRecord::new(&p, &j).to_text().unwrap();
        let (p2, j2) = PartitionRecord::from_text(&text).unwrap().restore().unwrap();
        assert_eq!(p2.tau(), 4);
        assert_eq!(j2, j);
        for (a, b) in p.regions().iter().zip(p2.regions()) {
            assert!((a.area() - b.area()).abs() < 1e-15);
        }
    }
}
