use jumpmc_core::jump::{sample_partition_quadrangles, Partition};
use jumpmc_core::mesh::{
    check_conformity, shape_regularity, triangulate_adapted, triangulate_uniform, MIN_ANGLE_DEG,
};
use jumpmc_core::RandomStream;
use proptest::prelude::*;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Largest diameter-to-incircle ratio of any triangle whose angles all reach
/// `min_deg`, found by scanning the angle simplex.
fn shape_bound(min_deg: f64) -> f64 {
    let steps = 400;
    let span = 180.0 - 3.0 * min_deg;
    let mut worst: f64 = 0.0;
    for i in 0..=steps {
        for j in 0..=(steps - i) {
            let a = (min_deg + span * i as f64 / steps as f64).to_radians();
            let b = (min_deg + span * j as f64 / steps as f64).to_radians();
            let c = std::f64::consts::PI - a - b;
            // unit circumradius: longest side faces the largest angle
            let longest = 2.0 * a.max(b).max(c).sin();
            let inradius = 4.0 * (a / 2.0).sin() * (b / 2.0).sin() * (c / 2.0).sin();
            worst = worst.max(longest / (2.0 * inradius));
        }
    }
    worst
}

fn vertex_degrees(mesh: &jumpmc_core::mesh::Mesh) -> Vec<usize> {
    let mut deg = vec![0; mesh.vertices().len()];
    for [a, b] in mesh.edges() {
        deg[a] += 1;
        deg[b] += 1;
    }
    deg
}

#[test]
fn symmetric_cross_quadrants() {
    let p = Partition::symmetric_cross();
    let mesh = triangulate_adapted(&p, SQRT2 / 4.0).unwrap();
    assert!(check_conformity(&mesh, &p));
    let regions = mesh.regions().unwrap();
    for (t, &region) in regions.iter().enumerate() {
        assert_eq!(region, p.locate(mesh.centroid(t)));
    }
}

#[test]
fn uniform_counts_and_topology() {
    let mesh = triangulate_uniform(SQRT2 / 4.0).unwrap();
    assert_eq!(mesh.triangles().len(), 32);
    assert_eq!(mesh.vertices().len(), 25);
    assert!((mesh.h() - SQRT2 / 4.0).abs() < 1e-15);
    assert!((shape_regularity(&mesh).unwrap() - (1.0 + SQRT2)).abs() < 1e-12);
    for m in [3usize, 4, 7] {
        let mesh = triangulate_uniform(SQRT2 / m as f64).unwrap();
        let deg = vertex_degrees(&mesh);
        for (v, p) in mesh.vertices().iter().enumerate() {
            let corner = (p.x == 0.0 || p.x == 1.0) && (p.y == 0.0 || p.y == 1.0);
            if !mesh.boundary_flags()[v] {
                assert_eq!(deg[v], 6);
            } else if corner {
                assert!(deg[v] <= 3);
            }
        }
        for t in 0..mesh.triangles().len() {
            let c = mesh.corners(t);
            let d = c[0].dist(c[1]).max(c[1].dist(c[2])).max(c[2].dist(c[0]));
            assert!((d - SQRT2 / m as f64).abs() < 1e-14);
        }
    }
}

#[test]
fn boundary_flags_mark_the_square_boundary() {
    let p = Partition::from_uniforms([0.2, 0.7, 0.4, 0.9]).unwrap();
    let mesh = triangulate_adapted(&p, 0.2).unwrap();
    for (v, q) in mesh.vertices().iter().enumerate() {
        let on = q.x.abs() < 1e-14 || q.y.abs() < 1e-14 || (q.x - 1.0).abs() < 1e-14 || (q.y - 1.0).abs() < 1e-14;
        assert_eq!(mesh.boundary_flags()[v], on, "vertex {v} at {q:?}");
    }
}

#[test]
fn uniform_mesh_conformity() {
    let root = RandomStream::from_seed(7);
    let uniform = triangulate_uniform(SQRT2 / 8.0).unwrap();
    for k in 0..20 {
        let p = sample_partition_quadrangles(&root.child(k));
        assert!(!check_conformity(&uniform, &p));
    }
    assert!(check_conformity(&uniform, &Partition::symmetric_cross()));
}

#[test]
fn sampled_partitions_meet_the_contract() {
    let root = RandomStream::from_seed(99);
    let bound = shape_bound(MIN_ANGLE_DEG);
    assert!((bound - 5.7).abs() < 0.2, "bound {bound}");
    for k in 0..100 {
        let p = sample_partition_quadrangles(&root.child(k));
        let mesh = triangulate_adapted(&p, SQRT2 / 8.0).unwrap();
        assert!(check_conformity(&mesh, &p));
        assert!((mesh.total_area() - 1.0).abs() < 1e-12);
        assert!(mesh.h() <= SQRT2 / 8.0);
        assert!(mesh.min_angle_deg() >= MIN_ANGLE_DEG);
        assert!(mesh.theta() <= bound + 1e-9);
        for t in 0..mesh.triangles().len() {
            assert!(mesh.area(t) > 0.0);
        }
    }
}

#[test]
fn halving_the_diameter_never_coarsens() {
    let root = RandomStream::from_seed(5);
    for k in 0..10 {
        let p = sample_partition_quadrangles(&root.child(k));
        let mut h = f64::INFINITY;
        for level in 0..4 {
            let mesh = triangulate_adapted(&p, 0.25 / 2f64.powi(level)).unwrap();
            assert!(mesh.h() <= h);
            h = mesh.h();
        }
    }
}

#[test]
fn midpoint_refinement_keeps_theta() {
    let p = Partition::from_uniforms([0.31, 0.62, 0.47, 0.58]).unwrap();
    let mesh = triangulate_adapted(&p, 0.3).unwrap();
    let fine = mesh.refine_midpoint().unwrap();
    assert!((fine.theta() - mesh.theta()).abs() < 1e-9);
    assert!(check_conformity(&fine, &p));
}

#[test]
fn text_round_trip() {
    let p = Partition::from_uniforms([0.3, 0.6, 0.45, 0.7]).unwrap();
    let mesh = triangulate_adapted(&p, 0.2).unwrap();
    let back = jumpmc_core::mesh::Mesh::from_text(&mesh.to_text()).unwrap();
    assert_eq!(back, mesh);
}

#[test]
fn unattainable_angle_is_reported() {
    // the chords cross at about 2.4 degrees, so no conforming mesh can reach 20
    let p = Partition::from_uniforms([0.02, 0.98, 0.02, 0.98]).unwrap();
    assert!(matches!(
        triangulate_adapted(&p, 0.1),
        Err(jumpmc_core::Error::Meshing(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn any_chords_give_a_conforming_mesh(
        u in prop::array::uniform4(0.2f64..0.8),
        h in 0.08f64..0.5,
    ) {
        let p = Partition::from_uniforms(u).unwrap();
        let mesh = triangulate_adapted(&p, h).unwrap();
        prop_assert!(check_conformity(&mesh, &p));
        prop_assert!(mesh.h() <= h);
        prop_assert!(mesh.min_angle_deg() >= MIN_ANGLE_DEG);
        prop_assert!((mesh.total_area() - 1.0).abs() < 1e-12);
        let regions = mesh.regions().unwrap();
        for (t, &region) in regions.iter().enumerate() {
            prop_assert_eq!(region, p.locate(mesh.centroid(t)));
        }
    }
}
