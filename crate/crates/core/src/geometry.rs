//! Planar primitives on the unit square.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for "on the boundary" and "on a segment" tests.
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl std::ops::Sub for Point {
    type Output = Point;

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Add for Point {
    type Output = Point;

    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + t * (o.x - self.x), self.y + t * (o.y - self.y))
    }

    pub fn in_unit_square(self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && (-GEOM_TOL..=1.0 + GEOM_TOL).contains(&self.x)
            && (-GEOM_TOL..=1.0 + GEOM_TOL).contains(&self.y)
    }

    pub fn on_unit_boundary(self) -> bool {
        self.in_unit_square()
            && (self.x.abs() <= GEOM_TOL
                || (self.x - 1.0).abs() <= GEOM_TOL
                || self.y.abs() <= GEOM_TOL
                || (self.y - 1.0).abs() <= GEOM_TOL)
    }

    pub(crate) fn check_in_domain(self) -> Result<()> {
        if self.in_unit_square() {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                x: self.x,
                y: self.y,
            })
        }
    }
}

/// Twice the signed area of (a, b, c); positive when counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Signed side of `p`: positive on the left of a→b.
    pub fn side(&self, p: Point) -> f64 {
        orient(self.a, self.b, p)
    }

    /// Distance from `p` to the infinite line through the segment.
    pub fn line_distance(&self, p: Point) -> f64 {
        self.side(p).abs() / self.length()
    }

    /// Parameter of the orthogonal projection of `p` (0 at `a`, 1 at `b`).
    pub fn param(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        (p - self.a).dot(d) / d.dot(d)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let t = self.param(p);
        let slack = tol / self.length();
        self.line_distance(p) <= tol && t >= -slack && t <= 1.0 + slack
    }

    /// Intersection of two segments, if they cross at a single point.
    pub fn intersect(&self, other: &Segment) -> Option<Point> {
        let r = self.b - self.a;
        let s = other.b - other.a;
        let denom = r.cross(s);
        if denom.abs() < 1e-300 {
            return None;
        }
        let q = other.a - self.a;
        let t = q.cross(s) / denom;
        let u = q.cross(r) / denom;
        let eps = 1e-14;
        if (-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u) {
            Some(self.a.lerp(self.b, t))
        } else {
            None
        }
    }
}

/// Counter-clockwise polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Self {
        Polygon { vertices }
    }

    pub fn unit_square() -> Self {
        Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
            * 0.5
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len();
        let a = self.signed_area();
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        Point::new(cx / (6.0 * a), cy / (6.0 * a))
    }

    /// All turns strictly left.
    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        n >= 3
            && (0..n).all(|i| {
                orient(
                    self.vertices[i],
                    self.vertices[(i + 1) % n],
                    self.vertices[(i + 2) % n],
                ) > 0.0
            })
    }

    /// Keep the part on the left of (or on) the directed line a→b,
    /// or the right part when `keep_left` is false.
    pub fn clip(&self, line: &Segment, keep_left: bool) -> Polygon {
        let sign = if keep_left { 1.0 } else { -1.0 };
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 2);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let sp = sign * line.side(p);
            let sq = sign * line.side(q);
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
                out.push(p.lerp(q, sp / (sp - sq)));
            }
        }
        out.dedup_by(|a, b| a.dist(*b) < GEOM_TOL);
        if out.len() > 1 && out[0].dist(*out.last().unwrap()) < GEOM_TOL {
            out.pop();
        }
        Polygon::new(out)
    }
}
