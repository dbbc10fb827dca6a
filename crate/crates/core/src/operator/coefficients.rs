//! Prescribed coefficient fields: `Γ = (Γ₁, Γ₂)`, `γ₁` and the source `(f₁, f₂)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operator::Point;
use crate::scalar::{Arith, Scalar};

/// `c · xⁱ yʲ`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial<T> {
    pub i: u32,
    pub j: u32,
    pub c: T,
}

fn pow<R: Arith>(base: R, e: u32) -> R {
    (0..e).fold(R::one(), |acc, _| acc * base)
}

/// Bivariate polynomial stored as a list of monomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial<T> {
    pub terms: Vec<Monomial<T>>,
}

impl<T: Arith> Polynomial<T> {
    pub fn new(terms: Vec<Monomial<T>>) -> Self {
        Self { terms }
    }

    /// Builds from `(i, j, c)` triples.
    pub fn from_triples(triples: &[(u32, u32, T)]) -> Self {
        Self::new(triples.iter().map(|&(i, j, c)| Monomial { i, j, c }).collect())
    }

    pub fn constant(c: T) -> Self {
        Self::from_triples(&[(0, 0, c)])
    }

    pub fn eval(&self, p: Point<T>) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, m| acc + m.c * pow(p.x, m.i) * pow(p.y, m.j))
    }

    /// `(∂ₓ, ∂_y)` at `p`.
    pub fn grad(&self, p: Point<T>) -> (T, T) {
        let mut gx = T::zero();
        let mut gy = T::zero();
        for m in &self.terms {
            if m.i > 0 {
                let k = (0..m.i).fold(T::zero(), |a, _| a + T::one());
                gx = gx + m.c * k * pow(p.x, m.i - 1) * pow(p.y, m.j);
            }
            if m.j > 0 {
                let k = (0..m.j).fold(T::zero(), |a, _| a + T::one());
                gy = gy + m.c * k * pow(p.x, m.i) * pow(p.y, m.j - 1);
            }
        }
        (gx, gy)
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|m| m.i + m.j).max().unwrap_or(0)
    }
}

/// A scalar field over the plane.
#[derive(Clone)]
pub enum ScalarField<T> {
    Constant(T),
    Polynomial(Polynomial<T>),
    Custom(Arc<dyn Fn(Point<T>) -> T + Send + Sync>),
}

impl<T: fmt::Debug> fmt::Debug for ScalarField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Self::Polynomial(p) => f.debug_tuple("Polynomial").field(p).finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl<T: Arith> ScalarField<T> {
    pub fn zero() -> Self {
        Self::Constant(T::zero())
    }

    pub fn custom(f: impl Fn(Point<T>) -> T + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn eval(&self, p: Point<T>) -> T {
        match self {
            Self::Constant(c) => *c,
            Self::Polynomial(poly) => poly.eval(p),
            Self::Custom(f) => f(p),
        }
    }
}

/// Coefficient values at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffValues<T> {
    pub big_gamma1: T,
    pub big_gamma2: T,
    pub gamma1: T,
    pub f1: T,
    pub f2: T,
}

impl<T: Arith> CoeffValues<T> {
    pub fn new(big_gamma1: T, big_gamma2: T, gamma1: T) -> Self {
        Self { big_gamma1, big_gamma2, gamma1, f1: T::zero(), f2: T::zero() }
    }
}

/// Named coefficient presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `Γ = (1, 0)`, `γ₁ = 2`, `F = (1, 0)`.
    Default,
    /// As `Default` but `γ₁ = 0`; `Q` is singular wherever `xy = 0`.
    ZeroGamma1,
    /// `Γ = (1 + x/4, y/2)`, `γ₁ = 3 + x`, `F = (1, 0)`.
    Affine,
    /// `Γ = (1 + xy/2, xy/4)`, `γ₁ = 2 + x²y²`, `F = (1 + xy, 1/2)`.
    Product,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Default, Preset::ZeroGamma1, Preset::Affine, Preset::Product];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Default => "default",
            Preset::ZeroGamma1 => "zero-gamma1",
            Preset::Affine => "affine",
            Preset::Product => "product",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

/// The prescribed fields `Γ₁, Γ₂, γ₁, f₁, f₂`. `γ₂` is identically zero.
#[derive(Debug, Clone)]
pub struct CoefficientSet<T> {
    pub big_gamma1: ScalarField<T>,
    pub big_gamma2: ScalarField<T>,
    pub gamma1: ScalarField<T>,
    pub f1: ScalarField<T>,
    pub f2: ScalarField<T>,
}

impl<T: Scalar> Default for CoefficientSet<T> {
    fn default() -> Self {
        Self::preset(Preset::Default)
    }
}

impl<T: Scalar> CoefficientSet<T> {
    pub fn constant(big_gamma1: T, big_gamma2: T, gamma1: T, f1: T, f2: T) -> Self {
        Self {
            big_gamma1: ScalarField::Constant(big_gamma1),
            big_gamma2: ScalarField::Constant(big_gamma2),
            gamma1: ScalarField::Constant(gamma1),
            f1: ScalarField::Constant(f1),
            f2: ScalarField::Constant(f2),
        }
    }

    pub fn preset(preset: Preset) -> Self {
        let l = T::lit;
        let poly = |t: &[(u32, u32, f64)]| {
            ScalarField::Polynomial(Polynomial::new(
                t.iter().map(|&(i, j, c)| Monomial { i, j, c: l(c) }).collect(),
            ))
        };
        match preset {
            Preset::Default => Self::constant(l(1.0), l(0.0), l(2.0), l(1.0), l(0.0)),
            Preset::ZeroGamma1 => Self::constant(l(1.0), l(0.0), l(0.0), l(1.0), l(0.0)),
            Preset::Affine => Self {
                big_gamma1: poly(&[(0, 0, 1.0), (1, 0, 0.25)]),
                big_gamma2: poly(&[(0, 1, 0.5)]),
                gamma1: poly(&[(0, 0, 3.0), (1, 0, 1.0)]),
                f1: ScalarField::Constant(l(1.0)),
                f2: ScalarField::zero(),
            },
            Preset::Product => Self {
                big_gamma1: poly(&[(0, 0, 1.0), (1, 1, 0.5)]),
                big_gamma2: poly(&[(1, 1, 0.25)]),
                gamma1: poly(&[(0, 0, 2.0), (2, 2, 1.0)]),
                f1: poly(&[(0, 0, 1.0), (1, 1, 1.0)]),
                f2: ScalarField::Constant(l(0.5)),
            },
        }
    }

    /// Replaces the source with `F = 0`.
    pub fn without_source(mut self) -> Self {
        self.f1 = ScalarField::zero();
        self.f2 = ScalarField::zero();
        self
    }

    /// Evaluates every field at `p`, rejecting non-finite values.
    pub fn eval(&self, p: Point<T>) -> Result<CoeffValues<T>> {
        let get = |name: &'static str, f: &ScalarField<T>| {
            let v = f.eval(p);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::CoefficientEvaluation { field: name, x: p.x.as_f64(), y: p.y.as_f64() })
            }
        };
        Ok(CoeffValues {
            big_gamma1: get("Gamma1", &self.big_gamma1)?,
            big_gamma2: get("Gamma2", &self.big_gamma2)?,
            gamma1: get("gamma1", &self.gamma1)?,
            f1: get("f1", &self.f1)?,
            f2: get("f2", &self.f2)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_eval_and_grad() {
        // 3x²y - y + 2
        let p = Polynomial::from_triples(&[(2, 1, 3.0), (0, 1, -1.0), (0, 0, 2.0)]);
        let at = Point::new(2.0, -1.0);
        assert_eq!(p.eval(at), -12.0 + 1.0 + 2.0);
        assert_eq!(p.grad(at), (-12.0, 3.0 * 4.0 - 1.0));
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn presets_round_trip_by_name() {
        for p in Preset::ALL {
            assert_eq!(Preset::from_name(p.name()), Some(p));
        }
        assert_eq!(Preset::from_name("nope"), None);
    }

    #[test]
    fn non_finite_coefficient_is_rejected() {
        let c = CoefficientSet::<f64> { gamma1: ScalarField::custom(|p| 1.0 / p.x), ..Default::default() };
        let err = c.eval(Point::new(0.0, 0.5)).unwrap_err();
        assert!(matches!(err, Error::CoefficientEvaluation { field: "gamma1", .. }));
        assert!(c.eval(Point::new(0.5, 0.5)).is_ok());
    }
}
