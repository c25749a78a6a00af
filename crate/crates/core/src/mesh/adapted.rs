use spade::{
    AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation,
};

use super::{diameter, Mesh};
use crate::error::{Error, Result};
use crate::geometry::{Point, Segment};
use crate::jump::Partition;

/// Every triangle of an adapted mesh has all angles at least this large.
pub const MIN_ANGLE_DEG: f64 = 20.0;

/// Angle target handed to Delaunay refinement; above the contract to leave
/// headroom for the diameter pass.
const REFINE_ANGLE_DEG: f64 = 25.0;
/// Input segments are pre-split into pieces of at most this fraction of `h_max`.
const SEGMENT_FRACTION: f64 = 0.7;
const MAX_DIAMETER_ROUNDS: usize = 64;

type Cdt = ConstrainedDelaunayTriangulation<Point2<f64>>;

/// Planar straight-line graph of the square boundary and the partition
/// interfaces, with every segment split into short pieces.
fn build_pslg(partition: &Partition, h_max: f64) -> (Vec<Point>, Vec<[usize; 2]>) {
    let mut points: Vec<Point> = Vec::new();
    let index_of = |p: Point, points: &mut Vec<Point>| -> usize {
        match points.iter().position(|q| q.dist(p) < 1e-13) {
            Some(i) => i,
            None => {
                points.push(p);
                points.len() - 1
            }
        }
    };

    let corners = [
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ];
    let mut segments: Vec<Segment> = Vec::new();
    for side in 0..4 {
        let (a, b) = (corners[side], corners[(side + 1) % 4]);
        let edge = Segment::new(a, b);
        let mut stops: Vec<(f64, Point)> = vec![(0.0, a), (1.0, b)];
        for c in partition.chords() {
            for end in [c.a, c.b] {
                if edge.contains(end, 1e-12) {
                    // snap onto the exact boundary line
                    let t = edge.param(end);
                    let snapped = match side {
                        0 => Point::new(end.x, 0.0),
                        1 => Point::new(1.0, end.y),
                        2 => Point::new(end.x, 1.0),
                        _ => Point::new(0.0, end.y),
                    };
                    stops.push((t, snapped));
                }
            }
        }
        stops.sort_by(|x, y| x.0.total_cmp(&y.0));
        stops.dedup_by(|x, y| x.1.dist(y.1) < 1e-13);
        for w in stops.windows(2) {
            segments.push(Segment::new(w[0].1, w[1].1));
        }
    }
    segments.extend_from_slice(partition.interface_segments());

    let mut edges = Vec::new();
    let piece = SEGMENT_FRACTION * h_max;
    for s in &segments {
        let n = (s.length() / piece).ceil().max(1.0) as usize;
        let mut prev = index_of(s.a, &mut points);
        for k in 1..=n {
            let p = if k == n {
                s.b
            } else {
                s.a.lerp(s.b, k as f64 / n as f64)
            };
            let next = index_of(p, &mut points);
            edges.push([prev, next]);
            prev = next;
        }
    }
    (points, edges)
}

fn to_point(p: Point2<f64>) -> Point {
    Point::new(p.x, p.y)
}

fn oversized_centroids(cdt: &Cdt, h_max: f64) -> Vec<Point2<f64>> {
    cdt.inner_faces()
        .filter_map(|f| {
            let p = f.vertices().map(|v| to_point(v.position()));
            (diameter(p) > h_max).then(|| {
                Point2::new((p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0)
            })
        })
        .collect()
}

/// Conforming mesh whose edges cover every interface of `partition`, with
/// all triangle diameters at most `h_max` and all angles at least
/// [`MIN_ANGLE_DEG`].
pub fn triangulate_adapted(partition: &Partition, h_max: f64) -> Result<Mesh> {
    if !(h_max.is_finite() && h_max > 0.0) {
        return Err(Error::InvalidArgument(format!("h_max must be positive, got {h_max}")));
    }
    let (points, edges) = build_pslg(partition, h_max);
    let vertices: Vec<Point2<f64>> = points.iter().map(|p| Point2::new(p.x, p.y)).collect();
    let mut cdt = Cdt::bulk_load_cdt(vertices, edges)
        .map_err(|e| Error::Meshing(format!("constrained triangulation failed: {e:?}")))?;

    let piece = SEGMENT_FRACTION * h_max;
    let params = || {
        RefinementParameters::<f64>::new()
            .with_angle_limit(AngleLimit::from_deg(REFINE_ANGLE_DEG))
            .with_max_allowed_area(0.25 * 3f64.sqrt() * piece * piece)
            .with_max_additional_vertices(2_000_000)
    };
    let mut done = cdt.refine(params()).refinement_complete;
    for _ in 0..MAX_DIAMETER_ROUNDS {
        let oversized = oversized_centroids(&cdt, h_max);
        if oversized.is_empty() {
            break;
        }
        for c in oversized {
            cdt.insert(c)
                .map_err(|e| Error::Meshing(format!("steiner insertion failed: {e:?}")))?;
        }
        done = cdt.refine(params()).refinement_complete;
    }
    if !done {
        return Err(Error::Meshing("Delaunay refinement ran out of vertices".into()));
    }

    let mut vertex_points = vec![Point::default(); cdt.num_vertices()];
    for v in cdt.vertices() {
        vertex_points[v.fix().index()] = to_point(v.position());
    }
    let triangles: Vec<[usize; 3]> = cdt
        .inner_faces()
        .map(|f| f.vertices().map(|v| v.fix().index()))
        .collect();
    let regions = triangles
        .iter()
        .map(|t| {
            let p = t.map(|v| vertex_points[v]);
            partition.locate(Point::new(
                (p[0].x + p[1].x + p[2].x) / 3.0,
                (p[0].y + p[1].y + p[2].y) / 3.0,
            ))
        })
        .collect();
    let mesh = Mesh::new(vertex_points, triangles, Some(regions))?;

    if mesh.h() > h_max {
        return Err(Error::Meshing(format!(
            "diameter {} exceeds {h_max} after refinement",
            mesh.h()
        )));
    }
    let angle = mesh.min_angle_deg();
    if angle < MIN_ANGLE_DEG {
        return Err(Error::Meshing(format!(
            "minimum angle {angle:.2} deg below {MIN_ANGLE_DEG} deg"
        )));
    }
    Ok(mesh)
}
