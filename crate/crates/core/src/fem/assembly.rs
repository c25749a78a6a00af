use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::Point;
use crate::jump::CoefficientSample;
use crate::mesh::Mesh;
use crate::sparse::{SolverKind, SparseMatrix};

/// Diffusion `a` and advection `b` evaluated at triangle centroids.
pub trait Coefficients {
    /// `(a, b)` at `p`; `region` is the triangle's partition region when
    /// the mesh records one.
    fn at(&self, p: Point, region: Option<usize>) -> (f64, f64);
}

impl Coefficients for CoefficientSample {
    fn at(&self, p: Point, region: Option<usize>) -> (f64, f64) {
        let region = region.unwrap_or_else(|| self.partition().locate(p));
        self.coefficients_in_region(p, region)
    }
}

/// Spatially constant coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCoefficients {
    pub a: f64,
    pub b: f64,
}

impl Coefficients for ConstantCoefficients {
    fn at(&self, _: Point, _: Option<usize>) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// Element matrix of `∫ a ∇u·∇v + b (∂₁u + ∂₂u) v` with the one-point
/// centroid rule, indexed `[test][trial]`, plus the element area.
pub fn element_stiffness(p: [Point; 3], a: f64, b: f64) -> Result<([[f64; 3]; 3], f64)> {
    let twice_area = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
    let area = 0.5 * twice_area.abs();
    if !area.is_finite() || area <= 0.0 {
        return Err(Error::DegenerateTriangle { index: 0, area });
    }
    let mut grad = [[0.0; 2]; 3];
    for (i, g) in grad.iter_mut().enumerate() {
        let q1 = p[(i + 1) % 3];
        let q2 = p[(i + 2) % 3];
        *g = [(q1.y - q2.y) / twice_area, (q2.x - q1.x) / twice_area];
    }
    let mut k = [[0.0; 3]; 3];
    for (test, row) in k.iter_mut().enumerate() {
        for (trial, entry) in row.iter_mut().enumerate() {
            let diffusion = grad[trial][0] * grad[test][0] + grad[trial][1] * grad[test][1];
            let advection = (grad[trial][0] + grad[trial][1]) / 3.0;
            *entry = (a * diffusion + b * advection) * area;
        }
    }
    Ok((k, area))
}

/// Stiffness and mass matrices on all vertices, without boundary conditions.
pub fn assemble_unconstrained(
    mesh: &Mesh,
    coefficients: &impl Coefficients,
) -> Result<(SparseMatrix, SparseMatrix)> {
    let all: Vec<Option<usize>> = (0..mesh.vertices().len()).map(Some).collect();
    assemble_on(mesh, coefficients, &all, mesh.vertices().len())
}

fn assemble_on(
    mesh: &Mesh,
    coefficients: &impl Coefficients,
    dof: &[Option<usize>],
    n: usize,
) -> Result<(SparseMatrix, SparseMatrix)> {
    let regions = mesh.regions();
    let mut stiff = Vec::with_capacity(9 * mesh.triangles().len());
    let mut mass = Vec::with_capacity(9 * mesh.triangles().len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let corners = mesh.corners(t);
        let centroid = mesh.centroid(t);
        let (a, b) = coefficients.at(centroid, regions.map(|r| r[t]));
        let (k, area) = element_stiffness(corners, a, b).map_err(|e| match e {
            Error::DegenerateTriangle { area, .. } => Error::DegenerateTriangle { index: t, area },
            other => other,
        })?;
        for (test, &vt) in tri.iter().enumerate() {
            let Some(row) = dof[vt] else { continue };
            for (trial, &vs) in tri.iter().enumerate() {
                let Some(col) = dof[vs] else { continue };
                stiff.push((row, col, k[test][trial]));
                let m = if test == trial { area / 6.0 } else { area / 12.0 };
                mass.push((row, col, m));
            }
        }
    }
    Ok((
        SparseMatrix::from_triplets(n, &stiff)?,
        SparseMatrix::from_triplets(n, &mass)?,
    ))
}

/// Reduced finite element system for one sample on one mesh, with
/// homogeneous Dirichlet conditions eliminated.
#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    mesh: Arc<Mesh>,
    stiffness: SparseMatrix,
    mass: SparseMatrix,
    free: Vec<usize>,
    dof: Vec<Option<usize>>,
    source: Expr,
    constant_load: Option<Vec<f64>>,
    solver: SolverKind,
}

impl DiscreteSystem {
    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn stiffness(&self) -> &SparseMatrix {
        &self.stiffness
    }

    pub fn mass(&self) -> &SparseMatrix {
        &self.mass
    }

    /// Vertex index of each degree of freedom.
    pub fn free_dofs(&self) -> &[usize] {
        &self.free
    }

    /// Degree of freedom of each vertex, `None` on the boundary.
    pub fn dof_of_vertex(&self) -> &[Option<usize>] {
        &self.dof
    }

    pub fn solver(&self) -> SolverKind {
        self.solver
    }

    pub fn with_solver(mut self, solver: SolverKind) -> Self {
        self.solver = solver;
        self
    }

    /// Load vector `F(t)` from the centroid rule.
    pub fn load(&self, t: f64) -> Vec<f64> {
        if let Some(load) = &self.constant_load {
            return load.clone();
        }
        load_vector(&self.mesh, &self.dof, self.free.len(), &self.source, t)
    }

    /// Extend a reduced vector by zeros on the boundary.
    pub fn to_nodal(&self, reduced: &[f64]) -> Vec<f64> {
        let mut nodal = vec![0.0; self.dof.len()];
        for (&v, &c) in self.free.iter().zip(reduced) {
            nodal[v] = c;
        }
        nodal
    }
}

fn load_vector(mesh: &Mesh, dof: &[Option<usize>], n: usize, f: &Expr, t: f64) -> Vec<f64> {
    let mut load = vec![0.0; n];
    for (k, tri) in mesh.triangles().iter().enumerate() {
        let share = f.eval(mesh.centroid(k), t) * mesh.area(k) / 3.0;
        for &v in tri {
            if let Some(d) = dof[v] {
                load[d] += share;
            }
        }
    }
    load
}

/// Assemble the reduced system for `coefficients` and source `f`.
pub fn assemble(
    mesh: Arc<Mesh>,
    coefficients: &impl Coefficients,
    f: &Expr,
) -> Result<DiscreteSystem> {
    let mut free = Vec::new();
    let dof: Vec<Option<usize>> = mesh
        .boundary_flags()
        .iter()
        .enumerate()
        .map(|(v, &on_boundary)| {
            (!on_boundary).then(|| {
                free.push(v);
                free.len() - 1
            })
        })
        .collect();
    let (stiffness, mass) = assemble_on(&mesh, coefficients, &dof, free.len())?;
    let constant_load =
        (!f.is_time_dependent()).then(|| load_vector(&mesh, &dof, free.len(), f, 0.0));
    Ok(DiscreteSystem {
        mesh,
        stiffness,
        mass,
        free,
        dof,
        source: f.clone(),
        constant_load,
        solver: SolverKind::Direct,
    })
}

/// Nodal interpolation of `u0` on the degrees of freedom.
pub fn interpolate_initial(system: &DiscreteSystem, u0: &Expr) -> Vec<f64> {
    let vertices = system.mesh.vertices();
    system.free.iter().map(|&v| u0.eval(vertices[v], 0.0)).collect()
}
