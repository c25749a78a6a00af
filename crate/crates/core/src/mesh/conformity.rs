use std::collections::HashSet;

use super::Mesh;
use crate::jump::Partition;

const ON_LINE_TOL: f64 = 1e-10;

/// True iff every interface segment is exactly a chain of mesh edges and no
/// triangle has vertices strictly on both sides of a chord.
pub fn check_conformity(mesh: &Mesh, partition: &Partition) -> bool {
    let edges: HashSet<[usize; 2]> = mesh.edges().into_iter().collect();

    for seg in partition.interface_segments() {
        let len = seg.length();
        let mut on: Vec<(f64, usize)> = mesh
            .vertices()
            .iter()
            .enumerate()
            .filter(|(_, p)| seg.contains(**p, ON_LINE_TOL))
            .map(|(i, p)| (seg.param(*p), i))
            .collect();
        on.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (Some(first), Some(last)) = (on.first(), on.last()) else {
            return false;
        };
        if first.0 * len > ON_LINE_TOL || (1.0 - last.0) * len > ON_LINE_TOL {
            return false;
        }
        for w in on.windows(2) {
            let (a, b) = (w[0].1, w[1].1);
            if !edges.contains(&[a.min(b), a.max(b)]) {
                return false;
            }
        }
    }

    for t in mesh.triangles() {
        for chord in partition.chords() {
            let len = chord.length();
            let sides = t.map(|v| chord.side(mesh.vertices()[v]) / len);
            let left = sides.iter().any(|&s| s > ON_LINE_TOL);
            let right = sides.iter().any(|&s| s < -ON_LINE_TOL);
            if left && right {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{triangulate_adapted, triangulate_uniform_cells};
    use crate::rng::RandomStream;

    #[test]
    fn uniform_mesh_and_symmetric_cross() {
        let p = Partition::symmetric_cross();
        assert!(check_conformity(&triangulate_uniform_cells(8).unwrap(), &p));
        // odd cell counts miss x = 0.5
        assert!(!check_conformity(&triangulate_uniform_cells(7).unwrap(), &p));
    }

    #[test]
    fn uniform_mesh_misses_generic_partitions() {
        let root = RandomStream::from_seed(5);
        let mesh = triangulate_uniform_cells(16).unwrap();
        for k in 0..20 {
            let p = crate::jump::sample_partition_quadrangles(&root.child(k));
            assert!(!check_conformity(&mesh, &p));
            assert!(check_conformity(&triangulate_adapted(&p, 0.3).unwrap(), &p));
        }
    }
}
