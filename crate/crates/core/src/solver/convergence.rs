//! Mesh-refinement studies with a manufactured solution.

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{DomainSpec, Mesh};
use crate::operator::coefficients::CoefficientSet;
use crate::operator::field::FieldRef;
use crate::operator::Point;
use crate::scalar::Scalar;
use crate::solver::{assemble, energy_identity, BoundaryData, EnergyField, SolutionField, SolverOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceConfig {
    /// Boundary segment counts, coarsest first.
    pub levels: Vec<usize>,
    /// `n_r = n_θ / radial_ratio` (at least 4).
    pub radial_ratio: usize,
    pub options: SolverOptions,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self { levels: vec![32, 64, 128], radial_ratio: 2, options: SolverOptions::default() }
    }
}

impl ConvergenceConfig {
    pub fn radial_levels(&self, n_theta: usize) -> usize {
        (n_theta / self.radial_ratio.max(1)).max(4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_theta: usize,
    pub n_r: usize,
    pub h: f64,
    /// `‖U_h − U*‖_{L²}`
    pub l2_error: f64,
    /// Discrete least-squares functional at `U_h`.
    pub functional: f64,
    /// Energy-identity defect of `U*` on the same mesh.
    pub energy_defect: f64,
    /// `‖U_h‖ / ‖F‖`
    pub stability_ratio: f64,
    pub iterations: usize,
}

/// `‖(f₁, f₂)‖_{L²}` over the mesh polygon (edge-midpoint rule).
pub fn source_norm<T: Scalar>(mesh: &Mesh<T>, coefficients: &CoefficientSet<T>) -> Result<T> {
    let mut total = T::zero();
    let third = T::one() / T::lit(3.0);
    for k in 0..mesh.triangles.len() {
        let c = mesh.corners(k);
        let mut s = T::zero();
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            let p = Point::new((c[a].x + c[b].x) * T::half(), (c[a].y + c[b].y) * T::half());
            let v = coefficients.eval(p)?;
            s = s + v.f1 * v.f1 + v.f2 * v.f2;
        }
        total = total + mesh.triangle_area(k) * s * third;
    }
    Ok(total.sqrt())
}

/// Solves with the source manufactured from `exact` and its trace as
/// boundary data on each level.
pub fn convergence_study<T: Scalar>(
    spec: &DomainSpec<T>,
    coefficients: &CoefficientSet<T>,
    exact: &FieldRef<T>,
    config: &ConvergenceConfig,
) -> Result<Vec<ConvergenceRow>> {
    let manufactured = coefficients.with_manufactured_source(exact.clone());
    let boundary = BoundaryData::Trace(exact.clone());
    let mut rows = Vec::with_capacity(config.levels.len());
    for &n_theta in &config.levels {
        let n_r = config.radial_levels(n_theta);
        let mesh = spec.generate_mesh(n_theta, n_r)?;
        let problem = assemble(&mesh, &manufactured, &boundary, config.options)?;
        let result = problem.solve()?;
        let defect = energy_identity(&EnergyField::Analytic(exact.as_ref()), coefficients, &mesh)?.defect;
        let f_norm = source_norm(&mesh, &manufactured)?;
        rows.push(ConvergenceRow {
            n_theta,
            n_r,
            h: mesh.h_max().as_f64(),
            l2_error: result.solution.l2_error(&mesh, exact).as_f64(),
            functional: result.functional.as_f64(),
            energy_defect: defect.as_f64(),
            stability_ratio: (result.solution.l2_norm(&mesh) / f_norm).as_f64(),
            iterations: result.iterations,
        });
    }
    Ok(rows)
}

/// `‖U_h‖ / ‖F‖` for the given source with homogeneous boundary data.
pub fn stability_ratio<T: Scalar>(mesh: &Mesh<T>, coefficients: &CoefficientSet<T>, options: SolverOptions) -> Result<T> {
    let problem = assemble(mesh, coefficients, &BoundaryData::Homogeneous, options)?;
    let result = problem.solve()?;
    Ok(result.solution.l2_norm(mesh) / source_norm(mesh, coefficients)?)
}

/// Least-squares functional of the nodal interpolant of `field` on the same
/// discrete problem, for comparison with the minimizer.
pub fn interpolant_functional<T: Scalar>(
    mesh: &Mesh<T>,
    coefficients: &CoefficientSet<T>,
    boundary: &BoundaryData<T>,
    field: &FieldRef<T>,
    options: SolverOptions,
) -> Result<T> {
    let problem = assemble(mesh, coefficients, boundary, options)?;
    Ok(problem.functional(&SolutionField::interpolate(mesh, field)))
}
