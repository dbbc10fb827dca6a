//! Boundary matrix `β = n₁A¹ + n₂A²`, its splittings `β = β₊ + β₋` per arc
//! class, the boundary conditions `β₋U = 0` and admissibility checks.
//!
//! Entries that the textbook form writes with `n₂²/n₁` or `n₁/n₂` are never
//! divided literally: the singular parts are carried as Laurent coefficients
//! in `n₁` and cancelled before evaluation, and `α` is only ever formed as
//! `Φ(tangent)/n₁` on arcs where `n₁` is bounded away from zero.

pub mod admissibility;

use serde::Serialize;

pub use admissibility::{
    admissibility_sweep, check_admissibility, AdmissibilityReport, AdmissibilitySummary, SampleRecord, SweepReport,
    ADMISSIBILITY_TOL, RANK_TOL,
};

use crate::error::{Error, Result};
use crate::geometry::{ArcClass, Normal, CLASSIFY_TOL};
use crate::linalg::{Mat2, StateVector};
use crate::operator::{char_form_value, principal_matrices, Point};
use crate::scalar::{Arith, Scalar};

const UNIT_NORMAL_TOL: f64 = 1e-10;

/// `n₁A¹ + n₂A²` without any normalization check.
pub fn beta_of<R: Arith>(p: Point<R>, n1: R, n2: R) -> Mat2<R> {
    let (a1, a2) = principal_matrices(p);
    a1.scale(n1) + a2.scale(n2)
}

/// `β = n_j A^j` for a unit normal.
pub fn beta<T: Scalar>(p: Point<T>, n: Normal<T>) -> Result<Mat2<T>> {
    if (n.norm() - T::one()).abs() > T::lit(UNIT_NORMAL_TOL) {
        return Err(Error::NormalNotUnit { n1: n.n1.as_f64(), n2: n.n2.as_f64() });
    }
    Ok(beta_of(p, n.n1, n.n2))
}

/// `pole / n₁ + regular`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Laurent<T> {
    pub pole: T,
    pub regular: T,
}

impl<R: Arith> Laurent<R> {
    pub fn regular(v: R) -> Self {
        Self { pole: R::zero(), regular: v }
    }

    /// Evaluates at `n₁`; `None` if a nonzero pole meets `n₁ = 0`.
    pub fn eval(self, n1: R) -> Option<R> {
        if self.pole == R::zero() {
            Some(self.regular)
        } else if n1 == R::zero() {
            None
        } else {
            Some(self.pole / n1 + self.regular)
        }
    }
}

impl<R: Arith> std::ops::Add for Laurent<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { pole: self.pole + o.pole, regular: self.regular + o.regular }
    }
}

impl<R: Arith> std::ops::Neg for Laurent<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { pole: -self.pole, regular: -self.regular }
    }
}

/// `α = [−(1−y²)n₂/n₁ + 2xy − (1−x²)n₁/n₂]·n₂` split into its pole in `n₁`
/// and regular part: `α = −(1−y²)n₂²/n₁ + 2xy·n₂ − (1−x²)n₁`.
pub fn alpha_laurent<R: Arith>(p: Point<R>, n1: R, n2: R) -> Laurent<R> {
    let one = R::one();
    Laurent {
        pole: -(one - p.y * p.y) * n2 * n2,
        regular: R::two() * p.x * p.y * n2 - (one - p.x * p.x) * n1,
    }
}

/// `α = Φ(tangent)/n₁`; `None` where `n₁ = 0`.
pub fn alpha<T: Scalar>(p: Point<T>, n: Normal<T>) -> Option<T> {
    if n.n1 == T::zero() {
        return None;
    }
    let (dx, dy) = n.tangent();
    Some(char_form_value(p, dx, dy) / n.n1)
}

/// `β` in the alternate form
/// `[[−α − (1−y²)n₂²/n₁, (1−y²)n₂], [(1−y²)n₂, (y²−1)n₁]]`, with the pole of
/// the (1,1) entry cancelled symbolically. Defined for every `n₁`, including 0.
pub fn beta_alternate<T: Scalar>(p: Point<T>, n: Normal<T>) -> Result<Mat2<T>> {
    let one = T::one();
    let w = one - p.y * p.y;
    // −α − (1−y²)n₂²/n₁: the pole coefficients (1−y²)n₂² and −(1−y²)n₂² cancel.
    let correction = Laurent { pole: -w * n.n2 * n.n2, regular: T::zero() };
    let entry11 = -alpha_laurent(p, n.n1, n.n2) + correction;
    let b11 = entry11.eval(n.n1).ok_or(Error::InternalConsistency {
        what: "pole of the alternate boundary matrix did not cancel",
        discrepancy: entry11.pole.as_f64(),
    })?;
    Ok(Mat2::new(b11, w * n.n2, w * n.n2, (p.y * p.y - one) * n.n1))
}

/// Literal evaluation of the alternate form, dividing by `n₁` term by term.
/// Loses accuracy as `n₁ → 0`; kept for comparison only.
pub fn beta_alternate_literal<T: Scalar>(p: Point<T>, n: Normal<T>) -> Mat2<T> {
    let one = T::one();
    let w = one - p.y * p.y;
    let a = (-w * n.n2 / n.n1 + T::two() * p.x * p.y - (one - p.x * p.x) * n.n1 / n.n2) * n.n2;
    Mat2::new(-a - w * n.n2 * n.n2 / n.n1, w * n.n2, w * n.n2, (p.y * p.y - one) * n.n1)
}

/// How to split `β` on the corner fillet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum FilletSplit {
    /// `β₋ = 0`, no boundary condition. `β` is positive semidefinite on the
    /// fillet, which makes this the admissible choice there.
    #[default]
    Free,
    /// `β₊ = [[β₁₁, β₁₂], [0, β₂₂]]`, `β₋ = [[0, 0], [β₁₂, 0]]`, imposing
    /// `(1−y²)n₂·u₁ = 0`. Positive, but fails the range and kernel conditions
    /// wherever `n₂ ≠ 0`.
    UpperTriangular,
}

impl FilletSplit {
    pub fn name(self) -> &'static str {
        match self {
            FilletSplit::Free => "free",
            FilletSplit::UpperTriangular => "upper-triangular",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [FilletSplit::Free, FilletSplit::UpperTriangular].into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaDecomposition<T> {
    pub beta: Mat2<T>,
    pub beta_plus: Mat2<T>,
    pub beta_minus: Mat2<T>,
    /// Symmetric part of `β₊ − β₋`.
    pub mu_star: Mat2<T>,
    pub arc_class: ArcClass,
}

impl<T: Arith> BetaDecomposition<T> {
    fn from_plus(beta: Mat2<T>, beta_plus: Mat2<T>, arc_class: ArcClass) -> Self {
        let beta_minus = beta - beta_plus;
        Self { beta, beta_plus, beta_minus, mu_star: (beta_plus - beta_minus).sym(), arc_class }
    }

    fn from_minus(beta: Mat2<T>, beta_minus: Mat2<T>, arc_class: ArcClass) -> Self {
        let beta_plus = beta - beta_minus;
        Self { beta, beta_plus, beta_minus, mu_star: (beta_plus - beta_minus).sym(), arc_class }
    }
}

/// Splits `β` according to the arc class.
///
/// * `Tau1`: `β₊ = diag(−α, 0)`
/// * `Tau2`: `β₋ = diag(−α, 0)`
/// * `Characteristic`: `β₋ = 0`
/// * `CornerFillet`: per [`FilletSplit`]
/// * `Degenerate` (`n₁ ≈ 0`): `β₋ = [[β₁₁/2, 0], [β₁₂ − β₁₁β₂₂/(2β₁₂), 0]]`,
///   which keeps `ker β₋ = {u₁ = 0}`, makes `β₊` rank one and `μ*₁₁ = 0`.
pub fn decompose<T: Scalar>(
    p: Point<T>,
    n: Normal<T>,
    arc_class: ArcClass,
    fillet: FilletSplit,
) -> Result<BetaDecomposition<T>> {
    let b = beta(p, n)?;
    let tol = T::lit(CLASSIFY_TOL);
    let mismatch = || Error::ClassificationMismatch { class: arc_class, n1: n.n1.as_f64() };
    let d = match arc_class {
        ArcClass::Tau1 => {
            if !(n.n1 > T::zero()) {
                return Err(mismatch());
            }
            let a = alpha(p, n).ok_or_else(mismatch)?;
            BetaDecomposition::from_plus(b, Mat2::diag(-a, T::zero()), arc_class)
        }
        ArcClass::Tau2 => {
            if !(n.n1 < T::zero()) {
                return Err(mismatch());
            }
            let a = alpha(p, n).ok_or_else(mismatch)?;
            BetaDecomposition::from_minus(b, Mat2::diag(-a, T::zero()), arc_class)
        }
        ArcClass::Characteristic => {
            if n.n1 > tol {
                return Err(mismatch());
            }
            BetaDecomposition::from_minus(b, Mat2::zero(), arc_class)
        }
        ArcClass::CornerFillet => {
            if !(n.n1 < T::zero()) {
                return Err(mismatch());
            }
            match fillet {
                FilletSplit::Free => BetaDecomposition::from_minus(b, Mat2::zero(), arc_class),
                FilletSplit::UpperTriangular => {
                    let minus = Mat2::new(T::zero(), T::zero(), b.get(1, 0), T::zero());
                    BetaDecomposition::from_minus(b, minus, arc_class)
                }
            }
        }
        ArcClass::Degenerate => {
            if n.n1.abs() > tol {
                return Err(mismatch());
            }
            let (b11, b12, b22) = (b.get(0, 0), b.get(0, 1), b.get(1, 1));
            if b12 == T::zero() {
                return Err(mismatch());
            }
            let minus = Mat2::new(b11 * T::half(), T::zero(), b12 - b11 * b22 / (T::two() * b12), T::zero());
            BetaDecomposition::from_minus(b, minus, arc_class)
        }
    };
    Ok(d)
}

/// Linear constraints `row · U = g` imposed by `β₋U = 0` on this sample.
///
/// * `Tau1`: `(−n₂, n₁)`, i.e. `u₁dx + u₂dy = 0`
/// * `Tau2`, `Degenerate`: `(1, 0)`, i.e. `u₁ = 0`
/// * `Characteristic`: none
/// * `CornerFillet`: the nonzero rows of `β₋`
pub fn boundary_condition_rows<T: Scalar>(d: &BetaDecomposition<T>, n: Normal<T>) -> Vec<StateVector<T>> {
    match d.arc_class {
        ArcClass::Tau1 => vec![StateVector::new(-n.n2, n.n1)],
        ArcClass::Tau2 | ArcClass::Degenerate => vec![StateVector::new(T::one(), T::zero())],
        ArcClass::Characteristic => Vec::new(),
        ArcClass::CornerFillet => {
            let scale = d.beta.max_abs();
            (0..2)
                .map(|i| d.beta_minus.row(i))
                .filter(|r| r.max_abs() > T::lit(RANK_TOL) * scale)
                .collect()
        }
    }
}
