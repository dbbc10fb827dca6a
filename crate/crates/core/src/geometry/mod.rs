//! Domain construction, boundary parametrization and meshing.

pub mod domain;
pub mod export;
pub mod mesh;

pub use domain::{
    cap_derivatives, corner_fillet, default_cap, wrap_angle, ArcClass, BoundaryPiece, BoundarySample, DomainSpec,
    Fillet, Normal, CLASSIFY_TOL,
};
pub use mesh::{BoundaryEdge, Mesh};
