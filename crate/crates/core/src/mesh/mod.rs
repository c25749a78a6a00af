//! Conforming triangulations of the unit square.
//!
//! [`triangulate_adapted`] builds a mesh whose edges resolve the interfaces
//! of a [`Partition`](crate::jump::Partition), regenerated per sample;
//! [`triangulate_uniform`] builds the fixed structured mesh used by the
//! non-adapted method.

mod adapted;
mod conformity;
mod io;
mod uniform;

use crate::error::{Error, Result};
use crate::geometry::{orient, Point};

pub use adapted::{triangulate_adapted, MIN_ANGLE_DEG};
pub use conformity::check_conformity;
pub use uniform::{triangulate_uniform, triangulate_uniform_cells};

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
    regions: Option<Vec<usize>>,
    h: f64,
    theta: f64,
}

/// Longest edge of a triangle.
pub fn diameter(p: [Point; 3]) -> f64 {
    p[0].dist(p[1]).max(p[1].dist(p[2])).max(p[2].dist(p[0]))
}

/// Smallest interior angle in degrees.
pub fn min_angle_deg(p: [Point; 3]) -> f64 {
    (0..3)
        .map(|i| {
            let a = p[i];
            let u = p[(i + 1) % 3] - a;
            let v = p[(i + 2) % 3] - a;
            u.cross(v).abs().atan2(u.dot(v)).to_degrees()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Diameter over inscribed-circle diameter of one triangle.
pub fn triangle_shape_ratio(p: [Point; 3]) -> f64 {
    let area = 0.5 * orient(p[0], p[1], p[2]).abs();
    let perimeter = p[0].dist(p[1]) + p[1].dist(p[2]) + p[2].dist(p[0]);
    // inradius = area / semi-perimeter
    let incircle_diameter = 4.0 * area / perimeter;
    diameter(p) / incircle_diameter
}

impl Mesh {
    /// Builds a mesh, orienting triangles counter-clockwise and flagging
    /// vertices on the boundary of the unit square.
    pub fn new(
        vertices: Vec<Point>,
        mut triangles: Vec<[usize; 3]>,
        regions: Option<Vec<usize>>,
    ) -> Result<Self> {
        if let Some(r) = &regions {
            if r.len() != triangles.len() {
                return Err(Error::DimensionMismatch {
                    expected: triangles.len(),
                    got: r.len(),
                });
            }
        }
        let mut h: f64 = 0.0;
        let mut theta: f64 = 0.0;
        for (index, t) in triangles.iter_mut().enumerate() {
            if t.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidArgument(format!("triangle {index} references a missing vertex")));
            }
            let p = t.map(|v| vertices[v]);
            let twice_area = orient(p[0], p[1], p[2]);
            let d = diameter(p);
            if twice_area.abs() <= 1e-14 * d * d {
                return Err(Error::DegenerateTriangle {
                    index,
                    area: 0.5 * twice_area.abs(),
                });
            }
            if twice_area < 0.0 {
                t.swap(1, 2);
            }
            h = h.max(d);
            theta = theta.max(triangle_shape_ratio(p));
        }
        let boundary = vertices.iter().map(|p| p.on_unit_boundary()).collect();
        Ok(Mesh {
            vertices,
            triangles,
            boundary,
            regions,
            h,
            theta,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    /// Region of each triangle, for meshes adapted to a partition.
    pub fn regions(&self) -> Option<&[usize]> {
        self.regions.as_deref()
    }

    /// Largest triangle diameter.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Largest diameter-to-incircle ratio.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn num_interior_vertices(&self) -> usize {
        self.boundary.iter().filter(|b| !**b).count()
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn area(&self, t: usize) -> f64 {
        let p = self.corners(t);
        0.5 * orient(p[0], p[1], p[2])
    }

    pub fn centroid(&self, t: usize) -> Point {
        let p = self.corners(t);
        Point::new((p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.area(t)).sum()
    }

    pub fn min_angle_deg(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| min_angle_deg(self.corners(t)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Undirected edges as sorted vertex pairs, each once.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut edges: Vec<[usize; 2]> = self
            .triangles
            .iter()
            .flat_map(|t| {
                (0..3).map(move |i| {
                    let (a, b) = (t[i], t[(i + 1) % 3]);
                    [a.min(b), a.max(b)]
                })
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Split every triangle into four by its edge midpoints.
    pub fn refine_midpoint(&self) -> Result<Mesh> {
        use std::collections::HashMap;
        let mut vertices = self.vertices.clone();
        let mut mids: HashMap<[usize; 2], usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point>| {
            *mids.entry([a.min(b), a.max(b)]).or_insert_with(|| {
                vertices.push(vertices[a].lerp(vertices[b], 0.5));
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        let mut regions = self.regions.as_ref().map(|_| Vec::with_capacity(4 * self.triangles.len()));
        for (k, &[a, b, c]) in self.triangles.iter().enumerate() {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
            if let (Some(out), Some(src)) = (regions.as_mut(), self.regions.as_ref()) {
                out.extend([src[k]; 4]);
            }
        }
        Mesh::new(vertices, triangles, regions)
    }
}

/// Shape regularity of a mesh: `max diam(K) / incircle_diameter(K)`.
pub fn shape_regularity(mesh: &Mesh) -> Result<f64> {
    for t in 0..mesh.triangles.len() {
        let a = mesh.area(t);
        if a <= 0.0 {
            return Err(Error::DegenerateTriangle { index: t, area: a });
        }
    }
    Ok(mesh.theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_ratio_closed_forms() {
        let right = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!((triangle_shape_ratio(right) - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        let eq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 3f64.sqrt() / 2.0),
        ];
        assert!((triangle_shape_ratio(eq) - 3f64.sqrt()).abs() < 1e-14);
        assert!((min_angle_deg(eq) - 60.0).abs() < 1e-12);
        assert!((min_angle_deg(right) - 45.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_triangles_rejected() {
        let v = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
        assert!(matches!(
            Mesh::new(v, vec![[0, 1, 2]], None),
            Err(Error::DegenerateTriangle { .. })
        ));
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let v = vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)];
        let m = Mesh::new(v, vec![[0, 1, 2]], None).unwrap();
        assert!(m.area(0) > 0.0);
    }

    #[test]
    fn midpoint_refinement_keeps_theta() {
        let m = triangulate_uniform_cells(3).unwrap();
        let r = m.refine_midpoint().unwrap();
        assert!((r.theta() - m.theta()).abs() < 1e-12);
        assert!((r.total_area() - 1.0).abs() < 1e-14);
        assert_eq!(r.triangles().len(), 4 * m.triangles().len());
        assert!((r.h() - m.h() / 2.0).abs() < 1e-14);
    }
}
