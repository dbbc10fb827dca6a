//! The symmetric first-order operator `LU = A¹Uₓ + A²U_y + BU`, its symmetric
//! positivity matrix `Q`, type classification and the characteristic form.
//!
//! The operator is obtained from the original system
//!
//! ```text
//! (1−x²)u₁ₓ − xy(u₁ᵧ + u₂ₓ) + (1−y²)u₂ᵧ − (2x − γ₁)u₁ − 2y·u₂ = f₁
//! u₁ᵧ − u₂ₓ − (u₁Γ₂ − u₂Γ₁)                                    = f₂
//! ```
//!
//! by the row operation `T = [[1, −xy], [0, 1−y²]]`, which eliminates `u₂ₓ`
//! from the first equation and symmetrizes the second. `γ₂` is fixed to zero.
//!
//! Functions generic over [`Arith`] are exact polynomial identities and can be
//! evaluated in rational or dual-number arithmetic; functions generic over
//! [`Scalar`] perform floating-point checks.

pub mod coefficients;
pub mod field;

use serde::Serialize;

pub use coefficients::{CoeffValues, CoefficientSet, Monomial, Polynomial, Preset, ScalarField};
pub use field::{ConstantField, FieldJet, FieldRef, PolynomialField, SmoothField, TrigManufactured};

use crate::error::{Error, Result};
use crate::linalg::{Mat2, StateVector};
use crate::scalar::{Arith, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }
}

impl<T: Scalar> Point<T> {
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// `A¹`, `A²` and `B` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorMatrices<T> {
    pub a1: Mat2<T>,
    pub a2: Mat2<T>,
    pub b: Mat2<T>,
}

impl<T: Arith> OperatorMatrices<T> {
    /// `B* = (B + Bᵀ)/2`
    pub fn b_sym(&self) -> Mat2<T> {
        self.b.sym()
    }

    pub fn apply(&self, jet: &FieldJet<T>) -> StateVector<T> {
        self.a1.apply(jet.dx) + self.a2.apply(jet.dy) + self.b.apply(jet.value)
    }
}

/// Symmetric 2x2 positivity matrix `Q = B* − ½(∂ₓA¹ + ∂ᵧA²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QMatrix<T> {
    pub q11: T,
    pub q12: T,
    pub q22: T,
}

impl<T: Arith> QMatrix<T> {
    pub fn det(&self) -> T {
        self.q11 * self.q22 - self.q12 * self.q12
    }

    pub fn as_mat(&self) -> Mat2<T> {
        Mat2::symmetric(self.q11, self.q12, self.q22)
    }
}

impl<T: Scalar> QMatrix<T> {
    /// Strict positive definiteness: `q11 > 0` and `det Q > 0`.
    pub fn is_positive_definite(&self) -> bool {
        self.q11 > T::zero() && self.det() > T::zero()
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> T {
        self.as_mat().sym_eigenvalues()[0]
    }

    fn max_abs_diff(&self, other: &Self) -> T {
        (self.q11 - other.q11)
            .abs()
            .max((self.q12 - other.q12).abs())
            .max((self.q22 - other.q22).abs())
    }
}

/// `A¹ = [[1−x², 0], [0, y²−1]]`, `A² = [[−2xy, 1−y²], [1−y², 0]]`.
pub fn principal_matrices<R: Arith>(p: Point<R>) -> (Mat2<R>, Mat2<R>) {
    let one = R::one();
    let zero = R::zero();
    let (x, y) = (p.x, p.y);
    let a1 = Mat2::new(one - x * x, zero, zero, y * y - one);
    let a2 = Mat2::new(-R::two() * x * y, one - y * y, one - y * y, zero);
    (a1, a2)
}

/// Hand-differentiated `∂ₓA¹ = [[−2x, 0], [0, 0]]` and
/// `∂ᵧA² = [[−2x, −2y], [−2y, 0]]`.
pub fn principal_derivatives<R: Arith>(p: Point<R>) -> (Mat2<R>, Mat2<R>) {
    let zero = R::zero();
    let two = R::two();
    let d_a1 = Mat2::new(-two * p.x, zero, zero, zero);
    let d_a2 = Mat2::new(-two * p.x, -two * p.y, -two * p.y, zero);
    (d_a1, d_a2)
}

/// Zeroth-order matrix
/// `B = [[xyΓ₂ + γ₁ − 2x, −xyΓ₁ − 2y], [Γ₂(y²−1), Γ₁(1−y²)]]`.
pub fn zeroth_order_matrix<R: Arith>(p: Point<R>, v: &CoeffValues<R>) -> Mat2<R> {
    let (x, y) = (p.x, p.y);
    let one = R::one();
    let two = R::two();
    Mat2::new(
        x * y * v.big_gamma2 + v.gamma1 - two * x,
        -x * y * v.big_gamma1 - two * y,
        v.big_gamma2 * (y * y - one),
        v.big_gamma1 * (one - y * y),
    )
}

pub fn matrices_at<R: Arith>(p: Point<R>, v: &CoeffValues<R>) -> OperatorMatrices<R> {
    let (a1, a2) = principal_matrices(p);
    OperatorMatrices { a1, a2, b: zeroth_order_matrix(p, v) }
}

/// Closed-form entries of `Q`.
pub fn q_closed_form<R: Arith>(p: Point<R>, v: &CoeffValues<R>) -> QMatrix<R> {
    let (x, y) = (p.x, p.y);
    let one = R::one();
    let half = R::half();
    QMatrix {
        q11: x * y * v.big_gamma2 + v.gamma1,
        q12: -x * y * v.big_gamma1 * half + v.big_gamma2 * half * (y * y - one),
        q22: v.big_gamma1 * (one - y * y),
    }
}

/// `Q` computed as `B* − ½(∂ₓA¹ + ∂ᵧA²)` from the supplied derivative matrices.
pub fn q_from_parts<R: Arith>(b: &Mat2<R>, d_a1_dx: &Mat2<R>, d_a2_dy: &Mat2<R>) -> QMatrix<R> {
    let m = b.sym() - (*d_a1_dx + *d_a2_dy).scale(R::half());
    QMatrix { q11: m.get(0, 0), q12: m.get(0, 1), q22: m.get(1, 1) }
}

/// `Q` from the symmetric part of `B` and the hand-differentiated principal part.
pub fn q_from_symmetric_part<R: Arith>(p: Point<R>, v: &CoeffValues<R>) -> QMatrix<R> {
    let (d1, d2) = principal_derivatives(p);
    q_from_parts(&zeroth_order_matrix(p, v), &d1, &d2)
}

/// Assembles `A¹`, `A²`, `B` at `p`.
pub fn assemble_matrices<T: Scalar>(p: Point<T>, c: &CoefficientSet<T>) -> Result<OperatorMatrices<T>> {
    let v = c.eval(p)?;
    Ok(matrices_at(p, &v))
}

/// `Q` at `p`, computed by both routes; a disagreement beyond the identity
/// tolerance is reported as an internal-consistency error.
pub fn q_matrix<T: Scalar>(p: Point<T>, c: &CoefficientSet<T>) -> Result<QMatrix<T>> {
    let v = c.eval(p)?;
    q_checked(p, &v)
}

pub(crate) fn q_checked<T: Scalar>(p: Point<T>, v: &CoeffValues<T>) -> Result<QMatrix<T>> {
    let closed = q_closed_form(p, v);
    let parts = q_from_symmetric_part(p, v);
    let scale = T::one()
        .max(closed.q11.abs())
        .max(closed.q12.abs())
        .max(closed.q22.abs());
    let diff = closed.max_abs_diff(&parts);
    if diff > T::identity_tol() * scale {
        return Err(Error::InternalConsistency { what: "Q closed form vs B* - (A1_x + A2_y)/2", discrepancy: diff.as_f64() });
    }
    Ok(closed)
}

/// Outcome of the coefficient condition at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GboundReport<T> {
    /// `Γ₁ > 0`
    pub big_gamma1_positive: bool,
    /// `|γ₁| ≥ bound`
    pub inequality_holds: bool,
    /// `¼[xyΓ₁ + (y²−1)Γ₂]² / |Γ₁(1−y²)|`
    pub bound: T,
    /// `|γ₁| − bound`
    pub margin: T,
    pub q: QMatrix<T>,
    /// Direct test: `q11 > 0` and `det Q > 0`.
    pub q_positive_definite: bool,
}

impl<T> GboundReport<T> {
    /// The stated coefficient condition (not the direct positive-definiteness test).
    pub fn passed(&self) -> bool {
        self.big_gamma1_positive && self.inequality_holds
    }
}

pub fn check_gbound<T: Scalar>(p: Point<T>, c: &CoefficientSet<T>) -> Result<GboundReport<T>> {
    let v = c.eval(p)?;
    gbound_at(p, &v)
}

pub(crate) fn gbound_at<T: Scalar>(p: Point<T>, v: &CoeffValues<T>) -> Result<GboundReport<T>> {
    let one_minus_y2 = T::one() - p.y * p.y;
    if one_minus_y2.abs() <= T::epsilon() {
        return Err(Error::DegenerateLine { x: p.x.as_f64(), y: p.y.as_f64() });
    }
    let s = p.x * p.y * v.big_gamma1 + (p.y * p.y - T::one()) * v.big_gamma2;
    let denom = (v.big_gamma1 * one_minus_y2).abs();
    let bound = if denom > T::zero() {
        s * s / (T::lit(4.0) * denom)
    } else {
        T::infinity()
    };
    let margin = v.gamma1.abs() - bound;
    let q = q_checked(p, v)?;
    Ok(GboundReport {
        big_gamma1_positive: v.big_gamma1 > T::zero(),
        inequality_holds: margin >= T::zero(),
        bound,
        margin,
        q,
        q_positive_definite: q.is_positive_definite(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MixedType {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

pub const DEFAULT_TYPE_TOL: f64 = 1e-12;

/// Elliptic inside the unit circle, hyperbolic outside, parabolic on it
/// (within `tol` of `x² + y² = 1`).
pub fn classify_type<T: Scalar>(p: Point<T>, tol: T) -> MixedType {
    let r2 = p.x * p.x + p.y * p.y;
    if (r2 - T::one()).abs() <= tol {
        MixedType::Parabolic
    } else if r2 < T::one() {
        MixedType::Elliptic
    } else {
        MixedType::Hyperbolic
    }
}

/// `Φ = −(1−y²)dx² − 2xy·dx·dy − (1−x²)dy²` without the zero-direction check.
pub fn char_form_value<R: Arith>(p: Point<R>, dx: R, dy: R) -> R {
    let one = R::one();
    -(one - p.y * p.y) * dx * dx - R::two() * p.x * p.y * dx * dy - (one - p.x * p.x) * dy * dy
}

/// Characteristic quadratic form; characteristic directions are its zeros.
pub fn char_form<T: Scalar>(p: Point<T>, dx: T, dy: T) -> Result<T> {
    if dx == T::zero() && dy == T::zero() {
        return Err(Error::InvalidDirection);
    }
    Ok(char_form_value(p, dx, dy))
}

/// `LU = A¹Uₓ + A²U_y + BU` from a jet of `U` at `p`.
pub fn apply_operator<T: Scalar>(jet: &FieldJet<T>, p: Point<T>, c: &CoefficientSet<T>) -> Result<StateVector<T>> {
    Ok(assemble_matrices(p, c)?.apply(jet))
}

/// Left sides of the original (non-symmetric) pair of equations.
pub fn original_lhs<R: Arith>(jet: &FieldJet<R>, p: Point<R>, v: &CoeffValues<R>) -> StateVector<R> {
    let (x, y) = (p.x, p.y);
    let one = R::one();
    let two = R::two();
    let u = jet.value;
    let (ux, uy) = (jet.dx, jet.dy);
    let first = (one - x * x) * ux.u1 - x * y * (uy.u1 + ux.u2) + (one - y * y) * uy.u2
        - (two * x - v.gamma1) * u.u1
        - two * y * u.u2;
    let second = uy.u1 - ux.u2 - (u.u1 * v.big_gamma2 - u.u2 * v.big_gamma1);
    StateVector::new(first, second)
}

/// Residual of the original pair: left sides minus `(f₁, f₂)`.
pub fn original_residual<T: Scalar>(jet: &FieldJet<T>, p: Point<T>, c: &CoefficientSet<T>) -> Result<StateVector<T>> {
    let v = c.eval(p)?;
    Ok(original_lhs(jet, p, &v) - StateVector::new(v.f1, v.f2))
}

/// `T = [[1, −xy], [0, 1−y²]]`.
pub fn rhs_transform_matrix<R: Arith>(p: Point<R>) -> Mat2<R> {
    Mat2::new(R::one(), -p.x * p.y, R::zero(), R::one() - p.y * p.y)
}

/// Maps the right side of the original pair to the right side of the
/// symmetric system, so that `LU = T·F` whenever the original pair holds.
pub fn rhs_transform<T: Scalar>(p: Point<T>, f: StateVector<T>) -> Result<StateVector<T>> {
    if (T::one() - p.y * p.y).abs() <= T::epsilon() {
        return Err(Error::TransformSingular { y: p.y.as_f64() });
    }
    Ok(rhs_transform_matrix(p).apply(f))
}

/// Right side of the symmetric system at `p`: `T·(f₁, f₂)`.
pub fn symmetric_source<T: Scalar>(p: Point<T>, v: &CoeffValues<T>) -> StateVector<T> {
    rhs_transform_matrix(p).apply(StateVector::new(v.f1, v.f2))
}
