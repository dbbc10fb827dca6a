//! Scalar abstractions.
//!
//! The pointwise algebra (operator matrices, symmetric part, boundary matrix)
//! only needs field arithmetic and is written against [`Arith`], so it can be
//! evaluated in exact rational arithmetic or with dual numbers. Anything that
//! needs square roots, trigonometry or comparisons against tolerances is
//! written against [`Scalar`], which is implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Float, FloatConst, FromPrimitive, One, Zero};

/// Field arithmetic: the minimum needed to evaluate the polynomial entries of
/// the operator and boundary matrices.
pub trait Arith:
    Copy
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl<T> Arith for T where
    T: Copy
        + PartialEq
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
        + Zero
        + One
{
}

/// Floating point scalar used by geometry, solver and all checks.
pub trait Scalar:
    Arith + Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot
    /// represent finite `f64` values, which is not the case for `f32`/`f64`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("scalar literal not representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Absolute tolerance for algebraic identities on unit-scale quantities.
    ///
    /// 1e-12 in double precision; scaled up from machine epsilon for `f32`.
    #[inline]
    fn identity_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(1e4))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
