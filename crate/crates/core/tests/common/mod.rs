//! Forward-mode dual numbers: `v + d·ε` with `ε² = 0`.
//!
//! Evaluating any `Arith`-generic expression on duals seeded with `d = 1` in
//! one coordinate yields its exact partial derivative in that coordinate.

#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};

use gmk_core::linalg::Mat2;
use gmk_core::Point;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub fn constant(v: f64) -> Self {
        Self { v, d: 0.0 }
    }

    pub fn variable(v: f64) -> Self {
        Self { v, d: 1.0 }
    }
}

impl Add for Dual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, d: self.d + o.d }
    }
}

impl Sub for Dual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, d: self.d - o.d }
    }
}

impl Mul for Dual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}

impl Div for Dual {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        Self { v: self.v / o.v, d: (self.d * o.v - self.v * o.d) / (o.v * o.v) }
    }
}

impl Neg for Dual {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: -self.v, d: -self.d }
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Self::constant(0.0)
    }
    fn is_zero(&self) -> bool {
        self.v == 0.0 && self.d == 0.0
    }
}

impl One for Dual {
    fn one() -> Self {
        Self::constant(1.0)
    }
}

pub fn derivative(m: &Mat2<Dual>) -> Mat2<f64> {
    m.map(|e| e.d)
}

/// `(∂ₓA¹, ∂ᵧA²)` by forward differentiation of the principal matrices.
pub fn principal_derivatives_ad(x: f64, y: f64) -> (Mat2<f64>, Mat2<f64>) {
    let (a1, _) = gmk_core::operator::principal_matrices(Point::new(Dual::variable(x), Dual::constant(y)));
    let (_, a2) = gmk_core::operator::principal_matrices(Point::new(Dual::constant(x), Dual::variable(y)));
    (derivative(&a1), derivative(&a2))
}
