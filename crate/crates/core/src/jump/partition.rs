use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Polygon, Segment};
use crate::rng::RandomStream;

/// Lower and upper bound of the chord endpoint positions.
pub const CHORD_RANGE: (f64, f64) = (0.2, 0.8);

/// Decomposition of the unit square by straight chords running from boundary
/// to boundary.
///
/// Each region is the convex cell of points lying on a fixed side of every
/// chord. Points exactly on a chord count as lying on its left (chords are
/// oriented from `a` to `b`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    regions: Vec<Polygon>,
    chords: Vec<Segment>,
    signatures: Vec<Vec<bool>>,
    interface_segments: Vec<Segment>,
}

impl Partition {
    pub fn from_chords(chords: Vec<Segment>) -> Result<Partition> {
        for c in &chords {
            if !(c.a.on_unit_boundary() && c.b.on_unit_boundary()) || c.length() < 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "chord {c:?} must join two distinct boundary points"
                )));
            }
        }
        let k = chords.len();
        let mut cells = Vec::new();
        for mask in 0..(1usize << k) {
            let signature: Vec<bool> = (0..k).map(|i| mask & (1 << i) != 0).collect();
            let mut poly = Polygon::unit_square();
            for (c, &left) in chords.iter().zip(&signature) {
                poly = poly.clip(c, left);
                if poly.vertices.len() < 3 {
                    break;
                }
            }
            if poly.vertices.len() >= 3 && poly.area() > 1e-12 {
                cells.push((poly, signature));
            }
        }

        let pivot = match (chords.first(), chords.get(1)) {
            (Some(c0), Some(c1)) => c0.intersect(c1).unwrap_or(Point::new(0.5, 0.5)),
            _ => Point::new(0.5, 0.5),
        };
        let angle = |p: &Polygon| {
            let c = p.centroid() - pivot;
            c.y.atan2(c.x)
        };
        cells.sort_by(|a, b| angle(&a.0).total_cmp(&angle(&b.0)));

        // crossing points computed once so both chords share the same vertex
        let mut stops: Vec<Vec<(f64, Point)>> = chords
            .iter()
            .map(|c| vec![(0.0, c.a), (1.0, c.b)])
            .collect();
        for i in 0..k {
            for j in i + 1..k {
                if let Some(p) = chords[i].intersect(&chords[j]) {
                    for (idx, c) in [(i, &chords[i]), (j, &chords[j])] {
                        let t = c.param(p);
                        if t > 1e-12 && t < 1.0 - 1e-12 {
                            stops[idx].push((t, p));
                        }
                    }
                }
            }
        }
        let mut interface_segments = Vec::new();
        for mut s in stops {
            s.sort_by(|a, b| a.0.total_cmp(&b.0));
            s.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12);
            for w in s.windows(2) {
                interface_segments.push(Segment::new(w[0].1, w[1].1));
            }
        }

        let mut partition = Partition {
            regions: cells.iter().map(|c| c.0.clone()).collect(),
            signatures: cells.into_iter().map(|c| c.1).collect(),
            chords,
            interface_segments,
        };
        let first = partition.locate(Point::new(0.0, 0.0));
        partition.regions.rotate_left(first);
        partition.signatures.rotate_left(first);
        Ok(partition)
    }

    /// Two crossing chords: bottom `(u[0], 0)` to top `(u[1], 1)`, and
    /// left `(0, u[2])` to right `(1, u[3])`.
    pub fn from_uniforms(u: [f64; 4]) -> Result<Partition> {
        Partition::from_chords(vec![
            Segment::new(Point::new(u[0], 0.0), Point::new(u[1], 1.0)),
            Segment::new(Point::new(0.0, u[2]), Point::new(1.0, u[3])),
        ])
    }

    pub fn symmetric_cross() -> Partition {
        Partition::from_uniforms([0.5; 4]).expect("valid chords")
    }

    pub fn tau(&self) -> usize {
        self.regions.len()
    }

    pub fn regions(&self) -> &[Polygon] {
        &self.regions
    }

    pub fn chords(&self) -> &[Segment] {
        &self.chords
    }

    pub fn interface_segments(&self) -> &[Segment] {
        &self.interface_segments
    }

    /// Region whose closure contains `p`; interface points go to the
    /// region on the chord's left.
    pub fn locate(&self, p: Point) -> usize {
        let sig = |i: usize| self.chords[i].side(p) >= 0.0;
        self.signatures
            .iter()
            .position(|s| s.iter().enumerate().all(|(i, &left)| left == sig(i)))
            .unwrap_or_else(|| {
                // sign pattern of an empty cell: fall back to the nearest region
                self.regions
                    .iter()
                    .enumerate()
                    .min_by(|a, b| {
                        a.1.centroid()
                            .dist(p)
                            .total_cmp(&b.1.centroid().dist(p))
                    })
                    .map(|(i, _)| i)
                    .unwrap_or(0)
            })
    }

    /// True when regions `i` and `j` share an interface segment of positive length.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let diff = self.signatures[i]
            .iter()
            .zip(&self.signatures[j])
            .filter(|(a, b)| a != b)
            .count();
        if diff != 1 {
            return false;
        }
        let (pi, pj) = (&self.regions[i], &self.regions[j]);
        let shared = pi
            .vertices
            .iter()
            .filter(|p| pj.vertices.iter().any(|q| q.dist(**p) < 1e-9))
            .count();
        shared >= 2
    }
}

/// Sample the four-quadrangle partition from four uniform chord endpoints.
pub fn sample_partition_quadrangles(stream: &RandomStream) -> Partition {
    let mut rng = stream.rng();
    let (lo, hi) = CHORD_RANGE;
    let mut u = [0.0; 4];
    for v in u.iter_mut() {
        *v = lo + (hi - lo) * rng.random::<f64>();
    }
    Partition::from_uniforms(u).expect("chords with interior endpoints are valid")
}
