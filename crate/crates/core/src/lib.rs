//! Symmetric positive system for the Guderley–Morawetz–Keldysh problem of
//! transonic flow past a profile in the hodograph plane.
//!
//! The crate provides the first-order operator and its symmetric part, the
//! domain bounded by caps, polar lines and a corner fillet, the boundary
//! matrix with its admissible splittings, and a P1 least-squares solver.
//! Everything is generic over the floating point type; aliases for `f64`
//! and `f32` are exported at the root.

// Guards are written as `!(x > 0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod operator;
pub mod scalar;
pub mod solver;
pub mod verify;

pub use boundary::{
    admissibility_sweep, beta, check_admissibility, decompose, AdmissibilityReport, BetaDecomposition, FilletSplit,
    SweepReport,
};
pub use error::{Error, Result};
pub use geometry::{ArcClass, BoundaryPiece, BoundarySample, DomainSpec, Mesh, Normal};
pub use linalg::{Mat2, StateVector};
pub use operator::coefficients::{CoefficientSet, Preset};
pub use operator::field::{ConstantField, FieldRef, PolynomialField, SmoothField, TrigManufactured};
pub use operator::{check_gbound, q_matrix, GboundReport, MixedType, Point, QMatrix};
pub use scalar::{Arith, Scalar};
pub use verify::{verify, CheckRecord, VerificationReport, VerifyOptions, VerifyOutcome};
pub use solver::{assemble, BoundaryData, DiscreteProblem, SolutionField, SolveResult, SolverOptions};

pub type Point64 = Point<f64>;
pub type StateVector64 = StateVector<f64>;
pub type Mat2x64 = Mat2<f64>;
pub type DomainSpec64 = DomainSpec<f64>;
pub type Mesh64 = Mesh<f64>;
pub type CoefficientSet64 = CoefficientSet<f64>;
pub type SolutionField64 = SolutionField<f64>;

pub type Point32 = Point<f32>;
pub type DomainSpec32 = DomainSpec<f32>;
pub type Mesh32 = Mesh<f32>;
pub type CoefficientSet32 = CoefficientSet<f32>;
