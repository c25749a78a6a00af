use super::Mesh;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Structured mesh with `cells x cells` squares, each split along its
/// lower-left to upper-right diagonal.
pub fn triangulate_uniform_cells(cells: usize) -> Result<Mesh> {
    if cells == 0 {
        return Err(Error::InvalidArgument("uniform mesh needs at least one cell".into()));
    }
    let n = cells + 1;
    let h = 1.0 / cells as f64;
    let mut vertices = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let x = if i == cells { 1.0 } else { i as f64 * h };
            let y = if j == cells { 1.0 } else { j as f64 * h };
            vertices.push(Point::new(x, y));
        }
    }
    let mut triangles = Vec::with_capacity(2 * cells * cells);
    for j in 0..cells {
        for i in 0..cells {
            let v00 = j * n + i;
            let v10 = v00 + 1;
            let v01 = v00 + n;
            let v11 = v01 + 1;
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    Mesh::new(vertices, triangles, None)
}

/// Structured mesh with diameter `sqrt(2)/m <= h_max`, `m = ceil(sqrt(2)/h_max)`.
pub fn triangulate_uniform(h_max: f64) -> Result<Mesh> {
    if !(h_max.is_finite() && h_max > 0.0) {
        return Err(Error::InvalidArgument(format!("h_max must be positive, got {h_max}")));
    }
    let cells = (std::f64::consts::SQRT_2 / h_max - 1e-9).ceil().max(1.0) as usize;
    triangulate_uniform_cells(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_quarter_diagonal() {
        let m = triangulate_uniform(2f64.sqrt() / 4.0).unwrap();
        assert_eq!(m.triangles().len(), 32);
        assert_eq!(m.vertices().len(), 25);
        assert_eq!(m.num_interior_vertices(), 9);
        assert!((m.h() - 2f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn structured_topology() {
        for cells in [2usize, 5, 8] {
            let m = triangulate_uniform_cells(cells).unwrap();
            let mut degree = vec![0usize; m.vertices().len()];
            for [a, b] in m.edges() {
                degree[a] += 1;
                degree[b] += 1;
            }
            for (v, p) in m.vertices().iter().enumerate() {
                if !m.boundary_flags()[v] {
                    assert_eq!(degree[v], 6);
                }
                let corner = (p.x == 0.0 || p.x == 1.0) && (p.y == 0.0 || p.y == 1.0);
                if corner {
                    assert!(degree[v] <= 3);
                }
            }
            let d = 2f64.sqrt() / cells as f64;
            for t in 0..m.triangles().len() {
                assert!((super::super::diameter(m.corners(t)) - d).abs() < 1e-14);
            }
            assert!((m.theta() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
            assert!((m.total_area() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_size() {
        assert!(triangulate_uniform(0.0).is_err());
        assert!(triangulate_uniform(f64::NAN).is_err());
    }
}
