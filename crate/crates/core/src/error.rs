use thiserror::Error;

use crate::geometry::ArcClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("coefficient `{field}` is not finite at ({x}, {y})")]
    CoefficientEvaluation { field: &'static str, x: f64, y: f64 },

    #[error("internal consistency check `{what}` failed: discrepancy {discrepancy:e}")]
    InternalConsistency { what: &'static str, discrepancy: f64 },

    #[error("point ({x}, {y}) lies on a degenerate line y^2 = 1")]
    DegenerateLine { x: f64, y: f64 },

    #[error("right-side transform is singular at y = {y}")]
    TransformSingular { y: f64 },

    #[error("direction must be nonzero")]
    InvalidDirection,

    #[error("normal ({n1}, {n2}) is not a unit vector")]
    NormalNotUnit { n1: f64, n2: f64 },

    #[error("parameter `{name}` = {value} out of range: {reason}")]
    Parameter { name: &'static str, value: f64, reason: &'static str },

    #[error("cap radius solve did not converge at theta = {theta}")]
    CapSolve { theta: f64 },

    #[error("point ({x}, {y}) is {distance:e} away from the boundary")]
    Classification { x: f64, y: f64, distance: f64 },

    #[error("arc class {class:?} is inconsistent with normal component n1 = {n1}")]
    ClassificationMismatch { class: ArcClass, n1: f64 },

    #[error("domain is not star-shaped about the origin near theta = {theta}")]
    MeshDomain { theta: f64 },

    #[error("triangle {triangle} has non-positive area {area:e}")]
    MeshQuality { triangle: usize, area: f64 },

    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {final_residual:e})")]
    NonConvergence {
        iterations: usize,
        final_residual: f64,
        residual_history: Vec<f64>,
    },
}
