//! Plain-text mesh format:
//!
//! ```text
//! vertices <n>
//! <x> <y> <boundary 0|1>        (n lines)
//! triangles <m>
//! <v0> <v1> <v2> <region|->     (m lines)
//! ```

use std::fmt::Write as _;

use super::Mesh;
use crate::error::{Error, Result};
use crate::geometry::Point;

impl Mesh {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "vertices {}", self.vertices.len()).unwrap();
        for (p, b) in self.vertices.iter().zip(&self.boundary) {
            writeln!(out, "{:?} {:?} {}", p.x, p.y, u8::from(*b)).unwrap();
        }
        writeln!(out, "triangles {}", self.triangles.len()).unwrap();
        for (k, t) in self.triangles.iter().enumerate() {
            let region = match &self.regions {
                Some(r) => r[k].to_string(),
                None => "-".to_string(),
            };
            writeln!(out, "{} {} {} {}", t[0], t[1], t[2], region).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Mesh> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, l))
            .collect();
        let bad = |line: usize, msg: &str| Error::InvalidArgument(format!("mesh line {line}: {msg}"));
        let mut cursor = 0usize;
        let header = |name: &str, cursor: &mut usize| -> Result<usize> {
            let &(no, l) = lines.get(*cursor).ok_or_else(|| bad(0, "unexpected end of file"))?;
            *cursor += 1;
            let mut it = l.split_whitespace();
            if it.next() != Some(name) {
                return Err(bad(no, &format!("expected '{name}'")));
            }
            it.next()
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| bad(no, "missing count"))
        };

        let nv = header("vertices", &mut cursor)?;
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let &(no, l) = lines.get(cursor).ok_or_else(|| bad(0, "truncated vertex table"))?;
            cursor += 1;
            let f: Vec<f64> = l
                .split_whitespace()
                .take(2)
                .map(|s| s.parse().map_err(|_| bad(no, "bad coordinate")))
                .collect::<Result<_>>()?;
            if f.len() != 2 {
                return Err(bad(no, "expected x y"));
            }
            vertices.push(Point::new(f[0], f[1]));
        }

        let nt = header("triangles", &mut cursor)?;
        let mut triangles = Vec::with_capacity(nt);
        let mut regions = Vec::with_capacity(nt);
        let mut has_regions = true;
        for _ in 0..nt {
            let &(no, l) = lines.get(cursor).ok_or_else(|| bad(0, "truncated triangle table"))?;
            cursor += 1;
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 4 {
                return Err(bad(no, "expected v0 v1 v2 region"));
            }
            let v: Vec<usize> = f[..3]
                .iter()
                .map(|s| s.parse().map_err(|_| bad(no, "bad vertex index")))
                .collect::<Result<_>>()?;
            triangles.push([v[0], v[1], v[2]]);
            match f[3].parse::<usize>() {
                Ok(r) => regions.push(r),
                Err(_) => has_regions = false,
            }
        }
        Mesh::new(vertices, triangles, has_regions.then_some(regions))
    }
}
