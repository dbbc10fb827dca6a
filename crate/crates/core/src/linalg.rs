//! 2x2 matrices and 2-vectors, plus the numeric rank/kernel tests used by the
//! admissibility checks.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::scalar::{Arith, Scalar};

/// An unknown pair `U = (u1, u2)`, also used for right sides and residuals.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct StateVector<T> {
    pub u1: T,
    pub u2: T,
}

impl<T: Arith> StateVector<T> {
    pub fn new(u1: T, u2: T) -> Self {
        Self { u1, u2 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(self, other: Self) -> T {
        self.u1 * other.u1 + self.u2 * other.u2
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.u1 * s, self.u2 * s)
    }
}

impl<T: Scalar> StateVector<T> {
    pub fn norm(self) -> T {
        self.u1.hypot(self.u2)
    }

    pub fn max_abs(self) -> T {
        self.u1.abs().max(self.u2.abs())
    }
}

impl<T: Arith> Add for StateVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.u1 + o.u1, self.u2 + o.u2)
    }
}

impl<T: Arith> Sub for StateVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.u1 - o.u1, self.u2 - o.u2)
    }
}

impl<T: Arith> Neg for StateVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.u1, -self.u2)
    }
}

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Mat2<T> {
    pub m: [[T; 2]; 2],
}

impl<T: Arith> Mat2<T> {
    pub const fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Self { m: [[a11, a12], [a21, a22]] }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn diag(a11: T, a22: T) -> Self {
        Self::new(a11, T::zero(), T::zero(), a22)
    }

    pub fn symmetric(a11: T, a12: T, a22: T) -> Self {
        Self::new(a11, a12, a12, a22)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.m[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    /// `(M + M^T) / 2`
    pub fn sym(&self) -> Self {
        let off = (self.m[0][1] + self.m[1][0]) * T::half();
        Self::new(self.m[0][0], off, off, self.m[1][1])
    }

    pub fn det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1]
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.m[0][0] * s, self.m[0][1] * s, self.m[1][0] * s, self.m[1][1] * s)
    }

    pub fn apply(&self, v: StateVector<T>) -> StateVector<T> {
        StateVector::new(
            self.m[0][0] * v.u1 + self.m[0][1] * v.u2,
            self.m[1][0] * v.u1 + self.m[1][1] * v.u2,
        )
    }

    /// `v . M v`
    pub fn quadratic(&self, v: StateVector<T>) -> T {
        v.dot(self.apply(v))
    }

    pub fn row(&self, i: usize) -> StateVector<T> {
        StateVector::new(self.m[i][0], self.m[i][1])
    }

    pub fn map<S>(&self, f: impl Fn(T) -> S) -> Mat2<S> {
        Mat2 {
            m: [[f(self.m[0][0]), f(self.m[0][1])], [f(self.m[1][0]), f(self.m[1][1])]],
        }
    }
}

impl<T: Scalar> Mat2<T> {
    pub fn frobenius(&self) -> T {
        self.m.iter().flatten().fold(T::zero(), |acc, &v| acc + v * v).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .fold(T::zero(), |acc, (i, j)| acc.max((self.m[i][j] - other.m[i][j]).abs()))
    }

    pub fn max_abs(&self) -> T {
        self.m.iter().flatten().fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn sym_eigenvalues(&self) -> [T; 2] {
        let s = self.sym();
        let mean = s.trace() * T::half();
        let diff = (s.m[0][0] - s.m[1][1]) * T::half();
        let rad = diff.hypot(s.m[0][1]);
        [mean - rad, mean + rad]
    }
}

impl<T: Arith> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl<T: Arith> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.m[0][0] - o.m[0][0],
            self.m[0][1] - o.m[0][1],
            self.m[1][0] - o.m[1][0],
            self.m[1][1] - o.m[1][1],
        )
    }
}

impl<T: Arith> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// Singular values (descending) of the 2 x k matrix whose columns are given.
///
/// The largest comes from the Gram matrix; the smallest from
/// `σ₁σ₂ = (Σ 2x2 minors²)^{1/2}` (Cauchy–Binet), which stays accurate when
/// the matrix is nearly rank deficient.
fn singular_values<T: Scalar>(cols: &[[T; 2]]) -> [T; 2] {
    let (mut g11, mut g12, mut g22) = (T::zero(), T::zero(), T::zero());
    for c in cols {
        g11 = g11 + c[0] * c[0];
        g12 = g12 + c[0] * c[1];
        g22 = g22 + c[1] * c[1];
    }
    let mean = (g11 + g22) * T::half();
    let rad = ((g11 - g22) * T::half()).hypot(g12);
    let hi = (mean + rad).max(T::zero()).sqrt();
    let mut minors = T::zero();
    for (i, a) in cols.iter().enumerate() {
        for b in &cols[i + 1..] {
            let m = a[0] * b[1] - a[1] * b[0];
            minors = minors + m * m;
        }
    }
    let lo = if hi > T::zero() { minors.sqrt() / hi } else { T::zero() };
    [hi, lo]
}

fn count_above<T: Scalar>(sv: [T; 2], threshold: T) -> usize {
    sv.iter().filter(|&&s| s > threshold).count()
}

/// Numeric rank of a 2x2 matrix: singular values above `tol * scale` count.
pub fn numeric_rank<T: Scalar>(m: &Mat2<T>, tol: T, scale: T) -> usize {
    let cols = [[m.m[0][0], m.m[1][0]], [m.m[0][1], m.m[1][1]]];
    count_above(singular_values(&cols), tol * scale)
}

/// Numeric rank of the 2x4 block matrix `[a | b]`.
pub fn numeric_rank_pair<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>, tol: T, scale: T) -> usize {
    let cols = [
        [a.m[0][0], a.m[1][0]],
        [a.m[0][1], a.m[1][1]],
        [b.m[0][0], b.m[1][0]],
        [b.m[0][1], b.m[1][1]],
    ];
    count_above(singular_values(&cols), tol * scale)
}

/// Numeric rank of the 4x2 block matrix `[a ; b]` (stacked rows).
///
/// `ker a ∩ ker b` is the kernel of the stacked matrix.
pub fn numeric_rank_stacked<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>, tol: T, scale: T) -> usize {
    // rank of the stack equals rank of its transpose [a^T | b^T].
    numeric_rank_pair(&a.transpose(), &b.transpose(), tol, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_of_simple_matrices() {
        let z = Mat2::<f64>::zero();
        let i = Mat2::diag(1.0, 1.0);
        let r1 = Mat2::new(1.0, 2.0, 2.0, 4.0);
        assert_eq!(numeric_rank(&z, 1e-10, 1.0), 0);
        assert_eq!(numeric_rank(&i, 1e-10, 1.0), 2);
        assert_eq!(numeric_rank(&r1, 1e-10, 1.0), 1);
        assert_eq!(numeric_rank_pair(&r1, &r1, 1e-10, 1.0), 1);
        assert_eq!(numeric_rank_pair(&r1, &Mat2::diag(1.0, 0.0), 1e-10, 1.0), 2);
        assert_eq!(numeric_rank_stacked(&Mat2::diag(1.0, 0.0), &Mat2::diag(2.0, 0.0), 1e-10, 1.0), 1);
    }

    #[test]
    fn sym_eigenvalues_of_diagonal() {
        let m = Mat2::new(3.0, 1.0, -1.0, 2.0);
        assert_eq!(m.sym_eigenvalues(), [2.0, 3.0]);
    }

    #[test]
    fn mat_products() {
        let a = Mat2::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(a * Mat2::diag(1.0, 1.0), a);
        assert_eq!(a.det(), -2.0);
        assert_eq!(a.apply(StateVector::new(1.0, 1.0)), StateVector::new(3.0, 7.0));
    }
}
