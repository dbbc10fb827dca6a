//! P1 least-squares discretization of the symmetric system with boundary
//! conditions `β₋U = 0` (or `β₋U = β₋G` for a prescribed trace `G`)
//! imposed by a weighted penalty.
//!
//! Unknowns are nodal values, ordered `(u₁, u₂)` per vertex. On each triangle
//! the residual `LU_h − T·F` is evaluated at the centroid, so the discrete
//! functional is
//!
//! ```text
//! J(U) = Σ_K |K| · |LU_h(c_K) − T·F(c_K)|² + Σ_e (λ/h) w_e Σ_rows (row · U_h(m_e) − g_e)²
//! ```
//!
//! and its normal equations form a symmetric positive semidefinite system.

pub mod convergence;
pub mod energy;
pub mod export;
pub mod krylov;
pub mod sparse;

use serde::Serialize;

use crate::boundary::{boundary_condition_rows, decompose, FilletSplit};
use crate::error::Result;
use crate::geometry::Mesh;
use crate::linalg::{Mat2, StateVector};
use crate::operator::coefficients::CoefficientSet;
use crate::operator::field::FieldRef;
use crate::operator::{gbound_at, matrices_at, symmetric_source, Point};
use crate::scalar::Scalar;

pub use convergence::{convergence_study, ConvergenceConfig, ConvergenceRow};
pub use energy::{energy_identity, EnergyField, EnergyReport};
pub use krylov::{conjugate_residual, KrylovOutput};
pub use sparse::{CsrMatrix, TripletBuilder};

pub const DEFAULT_PENALTY: f64 = 10.0;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Data imposed through `β₋U = β₋G` on the boundary.
#[derive(Clone, Default)]
pub enum BoundaryData<T> {
    #[default]
    Homogeneous,
    Trace(FieldRef<T>),
}

impl<T: Scalar> BoundaryData<T> {
    fn value(&self, p: Point<T>) -> StateVector<T> {
        match self {
            Self::Homogeneous => StateVector::zero(),
            Self::Trace(f) => f.value(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Penalty coefficient `c` in `λ = c/h`.
    pub penalty: f64,
    pub tolerance: f64,
    /// `None` selects `500·√N` for `N` unknowns.
    pub max_iterations: Option<usize>,
    pub fillet_split: FilletSplit,
}

impl SolverOptions {
    pub fn iteration_limit(&self, unknowns: usize) -> usize {
        self.max_iterations.unwrap_or_else(|| (500.0 * (unknowns as f64).sqrt()).ceil() as usize)
    }
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            penalty: DEFAULT_PENALTY,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: None,
            fillet_split: FilletSplit::default(),
        }
    }
}

/// Centroid where the coefficient condition fails. Assembly proceeds; the
/// estimate is simply not guaranteed there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GboundWarning {
    pub triangle: usize,
    pub x: f64,
    pub y: f64,
    pub margin: f64,
    pub q_positive_definite: bool,
}

/// Nodal values of a P1 field.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField<T> {
    pub values: Vec<StateVector<T>>,
}

impl<T: Scalar> SolutionField<T> {
    pub fn from_dofs(dofs: &[T]) -> Self {
        Self { values: dofs.chunks_exact(2).map(|c| StateVector::new(c[0], c[1])).collect() }
    }

    pub fn to_dofs(&self) -> Vec<T> {
        self.values.iter().flat_map(|v| [v.u1, v.u2]).collect()
    }

    pub fn interpolate(mesh: &Mesh<T>, field: &FieldRef<T>) -> Self {
        Self { values: mesh.vertices.iter().map(|&p| field.value(p)).collect() }
    }

    /// Value at barycentric coordinates `bary` inside triangle `k`.
    pub fn eval_in(&self, mesh: &Mesh<T>, k: usize, bary: [T; 3]) -> StateVector<T> {
        let t = mesh.triangles[k];
        (0..3).fold(StateVector::zero(), |acc, a| acc + self.values[t[a]].scale(bary[a]))
    }

    /// Constant gradient `(∂ₓU, ∂ᵧU)` on triangle `k`.
    pub fn gradient_in(&self, mesh: &Mesh<T>, k: usize) -> (StateVector<T>, StateVector<T>) {
        let t = mesh.triangles[k];
        let g = mesh.basis_gradients(k);
        (0..3).fold((StateVector::zero(), StateVector::zero()), |(dx, dy), a| {
            (dx + self.values[t[a]].scale(g[a].0), dy + self.values[t[a]].scale(g[a].1))
        })
    }

    /// `(∫|U_h − U|²)^{1/2}` by the edge-midpoint rule, exact for quadratics.
    pub fn l2_error(&self, mesh: &Mesh<T>, exact: &FieldRef<T>) -> T {
        l2_by_midpoints(mesh, |k, bary, p| (self.eval_in(mesh, k, bary) - exact.value(p)).dot(self.eval_in(mesh, k, bary) - exact.value(p)))
    }

    pub fn l2_norm(&self, mesh: &Mesh<T>) -> T {
        l2_by_midpoints(mesh, |k, bary, _| {
            let v = self.eval_in(mesh, k, bary);
            v.dot(v)
        })
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.max_abs()))
    }
}

fn l2_by_midpoints<T: Scalar>(mesh: &Mesh<T>, f: impl Fn(usize, [T; 3], Point<T>) -> T) -> T {
    let h = T::half();
    let z = T::zero();
    let third = T::one() / T::lit(3.0);
    let bary = [[h, h, z], [z, h, h], [h, z, h]];
    let mut total = T::zero();
    for k in 0..mesh.triangles.len() {
        let c = mesh.corners(k);
        let mut s = T::zero();
        for b in bary {
            let p = Point::new(
                b[0] * c[0].x + b[1] * c[1].x + b[2] * c[2].x,
                b[0] * c[0].y + b[1] * c[1].y + b[2] * c[2].y,
            );
            s = s + f(k, b, p);
        }
        total = total + mesh.triangle_area(k) * s * third;
    }
    total.sqrt()
}

/// Assembled normal equations `M u = b` with `J(u) = uᵀMu − 2bᵀu + c`.
#[derive(Debug, Clone)]
pub struct DiscreteProblem<'m, T> {
    pub mesh: &'m Mesh<T>,
    pub coefficients: CoefficientSet<T>,
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
    pub constant: T,
    pub penalty_weight: T,
    pub options: SolverOptions,
    pub warnings: Vec<GboundWarning>,
}

#[derive(Debug, Clone)]
pub struct SolveResult<T> {
    pub solution: SolutionField<T>,
    pub residual_history: Vec<T>,
    pub iterations: usize,
    /// Discrete least-squares functional at the solution.
    pub functional: T,
    pub energy: EnergyReport<T>,
}

/// Assembles the discrete problem on `mesh`.
pub fn assemble<'m, T: Scalar>(
    mesh: &'m Mesh<T>,
    coefficients: &CoefficientSet<T>,
    boundary: &BoundaryData<T>,
    options: SolverOptions,
) -> Result<DiscreteProblem<'m, T>> {
    let n = 2 * mesh.num_vertices();
    let mut builder = TripletBuilder::new(n);
    let mut rhs = vec![T::zero(); n];
    let mut constant = T::zero();
    let mut warnings = Vec::new();
    let third = T::one() / T::lit(3.0);

    for k in 0..mesh.triangles.len() {
        let tri = mesh.triangles[k];
        let c = mesh.centroid(k);
        let area = mesh.triangle_area(k);
        let v = coefficients.eval(c)?;
        let gb = gbound_at(c, &v)?;
        if !gb.passed() || !gb.q_positive_definite {
            warnings.push(GboundWarning {
                triangle: k,
                x: c.x.as_f64(),
                y: c.y.as_f64(),
                margin: gb.margin.as_f64(),
                q_positive_definite: gb.q_positive_definite,
            });
        }
        let m = matrices_at(c, &v);
        let grads = mesh.basis_gradients(k);
        // 2×6 local operator: columns (u₁, u₂) of each corner.
        let blocks: [Mat2<T>; 3] =
            std::array::from_fn(|a| m.a1.scale(grads[a].0) + m.a2.scale(grads[a].1) + m.b.scale(third));
        let col = |j: usize| -> (T, T) {
            let b = &blocks[j / 2];
            (b.get(0, j % 2), b.get(1, j % 2))
        };
        let dofs: [usize; 6] = std::array::from_fn(|j| 2 * tri[j / 2] + j % 2);
        let f = symmetric_source(c, &v);
        for i in 0..6 {
            let ci = col(i);
            for j in 0..6 {
                let cj = col(j);
                builder.add(dofs[i], dofs[j], area * (ci.0 * cj.0 + ci.1 * cj.1));
            }
            rhs[dofs[i]] = rhs[dofs[i]] + area * (ci.0 * f.u1 + ci.1 * f.u2);
        }
        constant = constant + area * f.dot(f);
    }

    let penalty_weight = T::lit(options.penalty) / mesh.h_boundary();
    for edge in &mesh.boundary_edges {
        let s = &edge.sample;
        let d = decompose(s.point, s.normal, s.arc_class, options.fillet_split)?;
        let g_val = boundary.value(s.point);
        let w = penalty_weight * s.weight;
        let [a, b] = edge.vertices;
        let dofs = [2 * a, 2 * a + 1, 2 * b, 2 * b + 1];
        for row in boundary_condition_rows(&d, s.normal) {
            let coef = [row.u1 * T::half(), row.u2 * T::half(), row.u1 * T::half(), row.u2 * T::half()];
            let g = row.dot(g_val);
            for i in 0..4 {
                for j in 0..4 {
                    builder.add(dofs[i], dofs[j], w * (coef[i] * coef[j]));
                }
                rhs[dofs[i]] = rhs[dofs[i]] + w * coef[i] * g;
            }
            constant = constant + w * g * g;
        }
    }

    Ok(DiscreteProblem {
        mesh,
        coefficients: coefficients.clone(),
        matrix: builder.build(),
        rhs,
        constant,
        penalty_weight,
        options,
        warnings,
    })
}

impl<'m, T: Scalar> DiscreteProblem<'m, T> {
    /// `J(u) = uᵀMu − 2bᵀu + c`.
    pub fn functional(&self, field: &SolutionField<T>) -> T {
        let u = field.to_dofs();
        self.matrix.quadratic(&u) - T::two() * sparse::dot(&self.rhs, &u) + self.constant
    }

    pub fn solve(&self) -> Result<SolveResult<T>> {
        let out = conjugate_residual(
            &self.matrix,
            &self.rhs,
            T::lit(self.options.tolerance),
            self.options.iteration_limit(self.rhs.len()),
        )?;
        let solution = SolutionField::from_dofs(&out.x);
        let functional = self.functional(&solution);
        let energy = energy_identity(&EnergyField::Discrete(&solution), &self.coefficients, self.mesh)?;
        Ok(SolveResult {
            solution,
            residual_history: out.residual_history,
            iterations: out.iterations,
            functional,
            energy,
        })
    }
}
