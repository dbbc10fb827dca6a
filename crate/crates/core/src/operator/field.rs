//! Smooth vector fields with analytic first derivatives, used as
//! manufactured solutions and as comparison fields.

use std::sync::Arc;

use crate::linalg::StateVector;
use crate::operator::coefficients::{CoefficientSet, Polynomial, ScalarField};
use crate::operator::{original_lhs, Point};
use crate::scalar::{Arith, Scalar};

/// Value and first partials of `U` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldJet<T> {
    pub value: StateVector<T>,
    pub dx: StateVector<T>,
    pub dy: StateVector<T>,
}

impl<T: Arith> FieldJet<T> {
    pub fn constant(value: StateVector<T>) -> Self {
        Self { value, dx: StateVector::zero(), dy: StateVector::zero() }
    }
}

pub trait SmoothField<T>: Send + Sync {
    fn jet(&self, p: Point<T>) -> FieldJet<T>;

    fn value(&self, p: Point<T>) -> StateVector<T> {
        self.jet(p).value
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantField<T>(pub StateVector<T>);

impl<T: Arith + Send + Sync> SmoothField<T> for ConstantField<T> {
    fn jet(&self, _p: Point<T>) -> FieldJet<T> {
        FieldJet::constant(self.0)
    }
}

#[derive(Debug, Clone)]
pub struct PolynomialField<T> {
    pub u1: Polynomial<T>,
    pub u2: Polynomial<T>,
}

impl<T: Arith + Send + Sync> SmoothField<T> for PolynomialField<T> {
    fn jet(&self, p: Point<T>) -> FieldJet<T> {
        let (a_x, a_y) = self.u1.grad(p);
        let (b_x, b_y) = self.u2.grad(p);
        FieldJet {
            value: StateVector::new(self.u1.eval(p), self.u2.eval(p)),
            dx: StateVector::new(a_x, b_x),
            dy: StateVector::new(a_y, b_y),
        }
    }
}

/// `U* = (sin x cos y, x² − y)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrigManufactured;

impl<T: Scalar> SmoothField<T> for TrigManufactured {
    fn jet(&self, p: Point<T>) -> FieldJet<T> {
        let (sx, cx) = p.x.sin_cos();
        let (sy, cy) = p.y.sin_cos();
        FieldJet {
            value: StateVector::new(sx * cy, p.x * p.x - p.y),
            dx: StateVector::new(cx * cy, T::two() * p.x),
            dy: StateVector::new(-sx * sy, -T::one()),
        }
    }
}

/// Shared handle to any smooth field.
pub type FieldRef<T> = Arc<dyn SmoothField<T>>;

impl<T: Scalar> CoefficientSet<T> {
    /// Same `Γ, γ₁`, with the source replaced by the original-system left
    /// side applied to `field`, so that `field` solves the system exactly.
    pub fn with_manufactured_source(&self, field: FieldRef<T>) -> Self {
        let base = self.clone();
        let f1_field = field.clone();
        let f1_base = base.clone();
        let lhs1 = move |p: Point<T>| {
            f1_base
                .eval(p)
                .map(|v| original_lhs(&f1_field.jet(p), p, &v).u1)
                .unwrap_or_else(|_| T::nan())
        };
        let f2_base = base.clone();
        let lhs2 = move |p: Point<T>| {
            f2_base
                .eval(p)
                .map(|v| original_lhs(&field.jet(p), p, &v).u2)
                .unwrap_or_else(|_| T::nan())
        };
        Self {
            f1: ScalarField::custom(lhs1),
            f2: ScalarField::custom(lhs2),
            ..base
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_jet_matches_central_differences() {
        let f = TrigManufactured;
        let p = Point::new(0.3, -0.7);
        let h = 1e-6;
        let j: FieldJet<f64> = f.jet(p);
        let fx = (f.value(Point::new(p.x + h, p.y)) - f.value(Point::new(p.x - h, p.y))).scale(0.5 / h);
        let fy = (f.value(Point::new(p.x, p.y + h)) - f.value(Point::new(p.x, p.y - h))).scale(0.5 / h);
        assert!((fx - j.dx).max_abs() < 1e-8);
        assert!((fy - j.dy).max_abs() < 1e-8);
    }
}
