//! The domain: unit disc flattened by two polar caps, closed on the left by
//! the two characteristic lines tangent to the unit circle at
//! `(−√2/2, ±√2/2)`, with a C² fillet replacing their corner at `(−√2, 0)`.
//!
//! The boundary is star-shaped about the origin and is parametrized by polar
//! angle `θ ∈ (−π, π]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::Point;
use crate::scalar::Scalar;

pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_DELTA: f64 = 0.05;
pub const EPSILON_MAX: f64 = 0.3;
pub const DELTA_MAX: f64 = 0.2;
/// Tolerance on unit-normalized normals for the `n₁ = 0` test.
pub const CLASSIFY_TOL: f64 = 1e-9;
const MAX_RADIUS_ITERS: usize = 100;

/// Default cap profile `h(x) = ε(1 − 2x²)³` for `|x| ≤ √2/2`, zero outside.
///
/// C² everywhere; `h`, `h'` and `h''` vanish at `x = ±√2/2`.
pub fn default_cap<T: Scalar>(x: T, epsilon: T) -> T {
    cap_derivatives(x, epsilon)[0]
}

/// `[h, h', h'']` of the default cap at `x`.
pub fn cap_derivatives<T: Scalar>(x: T, epsilon: T) -> [T; 3] {
    let s = T::one() - T::two() * x * x;
    if s <= T::zero() {
        return [T::zero(); 3];
    }
    let h = epsilon * s * s * s;
    let dh = -T::lit(12.0) * epsilon * x * s * s;
    let d2h = -T::lit(12.0) * epsilon * s * (T::one() - T::lit(10.0) * x * x);
    [h, dh, d2h]
}

/// The corner-smoothing curve `x = g(y) = a + b·y² + c·y⁴` on `|y| ≤ δ`.
///
/// Matches position, slope and curvature of `x = y − √2` at `y = δ` and of
/// `x = −y − √2` at `y = −δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fillet<T> {
    pub delta: T,
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> Fillet<T> {
    pub fn g(&self, y: T) -> T {
        let y2 = y * y;
        self.a + self.b * y2 + self.c * y2 * y2
    }

    pub fn dg(&self, y: T) -> T {
        T::two() * self.b * y + T::lit(4.0) * self.c * y * y * y
    }

    pub fn d2g(&self, y: T) -> T {
        T::two() * self.b + T::lit(12.0) * self.c * y * y
    }
}

/// Builds the fillet for half-width `δ ∈ (0, 0.2]`.
pub fn corner_fillet<T: Scalar>(delta: T) -> Result<Fillet<T>> {
    if !(delta > T::zero() && delta <= T::lit(DELTA_MAX)) {
        return Err(Error::Parameter { name: "delta_corner", value: delta.as_f64(), reason: "fillet half-width must lie in (0, 0.2]" });
    }
    let d3 = delta * delta * delta;
    Ok(Fillet {
        delta,
        a: T::lit(0.375) * delta - T::SQRT_2(),
        b: T::lit(0.75) / delta,
        c: -T::one() / (T::lit(8.0) * d3),
    })
}

/// Which analytic piece of the boundary a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryPiece {
    /// Circle `x² + y² = 1` with the caps `x² + y² + h(x) = 1` cut in.
    CapCircle,
    /// `y = x + √2`
    UpperLine,
    /// `y = −x − √2`
    LowerLine,
    Fillet,
    /// The unsmoothed corner `(−√2, 0)` when `δ = 0`.
    Corner,
}

/// Boundary arc classes driving the choice of boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ArcClass {
    /// `n₁ > 0`: tangential condition `u₁dx + u₂dy = 0`.
    Tau1,
    /// `n₁ < 0`: `u₁ = 0`.
    Tau2,
    /// Polar lines: no condition.
    Characteristic,
    CornerFillet,
    /// `|n₁| ≤ tol`; isolated points.
    Degenerate,
}

impl ArcClass {
    pub fn name(self) -> &'static str {
        match self {
            ArcClass::Tau1 => "tau1",
            ArcClass::Tau2 => "tau2",
            ArcClass::Characteristic => "characteristic",
            ArcClass::CornerFillet => "corner_fillet",
            ArcClass::Degenerate => "degenerate",
        }
    }
}

/// Unit outward normal `(n₁, n₂) = (dy, −dx)/ds` for counterclockwise traversal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normal<T> {
    pub n1: T,
    pub n2: T,
}

impl<T: Scalar> Normal<T> {
    pub fn new(n1: T, n2: T) -> Self {
        Self { n1, n2 }
    }

    /// Normalizes `(a, b)`.
    pub fn from_vector(a: T, b: T) -> Self {
        let l = a.hypot(b);
        Self { n1: a / l, n2: b / l }
    }

    /// Counterclockwise unit tangent `(dx, dy) = (−n₂, n₁)`.
    pub fn tangent(self) -> (T, T) {
        (-self.n2, self.n1)
    }

    pub fn norm(self) -> T {
        self.n1.hypot(self.n2)
    }
}

/// A point on `∂Ω` with its local frame and class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample<T> {
    pub theta: T,
    pub point: Point<T>,
    pub normal: Normal<T>,
    pub tangent: (T, T),
    pub piece: BoundaryPiece,
    pub arc_class: ArcClass,
    /// Arclength represented by this sample.
    pub weight: T,
}

/// Parameters of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainSpec<T> {
    /// Cap amplitude `ε = h(0)`.
    pub epsilon: T,
    /// Fillet half-width `δ`; zero leaves the corner sharp.
    pub delta: T,
}

impl<T: Scalar> Default for DomainSpec<T> {
    fn default() -> Self {
        Self { epsilon: T::lit(DEFAULT_EPSILON), delta: T::lit(DEFAULT_DELTA) }
    }
}

/// `θ` normalized into `(−π, π]`.
pub fn wrap_angle<T: Scalar>(theta: T) -> T {
    let two_pi = T::TAU();
    let mut t = theta % two_pi;
    if t <= -T::PI() {
        t = t + two_pi;
    } else if t > T::PI() {
        t = t - two_pi;
    }
    t
}

impl<T: Scalar> DomainSpec<T> {
    /// `ε ∈ [0, 0.3]`, `δ ∈ [0, 0.2]`. `ε = 0` removes the caps and `δ = 0`
    /// the fillet; both are accepted for diagnostics.
    pub fn new(epsilon: T, delta: T) -> Result<Self> {
        if !(epsilon >= T::zero() && epsilon <= T::lit(EPSILON_MAX)) {
            return Err(Error::Parameter { name: "epsilon_cap", value: epsilon.as_f64(), reason: "cap amplitude must lie in [0, 0.3]" });
        }
        if !(delta >= T::zero() && delta <= T::lit(DELTA_MAX)) {
            return Err(Error::Parameter { name: "delta_corner", value: delta.as_f64(), reason: "fillet half-width must lie in [0, 0.2]" });
        }
        Ok(Self { epsilon, delta })
    }

    pub fn cap(&self, x: T) -> T {
        default_cap(x, self.epsilon)
    }

    pub fn fillet(&self) -> Option<Fillet<T>> {
        corner_fillet(self.delta).ok()
    }

    /// Half the polar angle subtended by the fillet, measured from `θ = π`.
    pub fn fillet_half_angle(&self) -> T {
        if self.delta > T::zero() {
            self.delta.atan2(T::SQRT_2() - self.delta)
        } else {
            T::zero()
        }
    }

    pub fn corner(&self) -> Point<T> {
        Point::new(-T::SQRT_2(), T::zero())
    }

    /// Tangency points of the polar lines with the unit circle.
    pub fn tangency_points(&self) -> [Point<T>; 2] {
        let s = T::FRAC_1_SQRT_2();
        [Point::new(-s, s), Point::new(-s, -s)]
    }

    pub fn piece_at(&self, theta: T) -> BoundaryPiece {
        let t = wrap_angle(theta);
        let three_quarter = T::lit(0.75) * T::PI();
        let fillet_start = T::PI() - self.fillet_half_angle();
        if t.abs() <= three_quarter {
            BoundaryPiece::CapCircle
        } else if self.delta == T::zero() && t == T::PI() {
            BoundaryPiece::Corner
        } else if t.abs() >= fillet_start && self.delta > T::zero() {
            BoundaryPiece::Fillet
        } else if t > T::zero() {
            BoundaryPiece::UpperLine
        } else {
            BoundaryPiece::LowerLine
        }
    }

    /// Distance from the origin to `∂Ω` along the ray at angle `θ`.
    pub fn boundary_radius(&self, theta: T) -> Result<T> {
        let t = wrap_angle(theta);
        let (s, c) = t.sin_cos();
        match self.piece_at(t) {
            BoundaryPiece::CapCircle => self.cap_radius(t, c),
            BoundaryPiece::UpperLine => Ok(T::SQRT_2() / (s - c)),
            BoundaryPiece::LowerLine => Ok(-T::SQRT_2() / (s + c)),
            BoundaryPiece::Corner => Ok(T::SQRT_2()),
            BoundaryPiece::Fillet => self.fillet_radius(t, s, c),
        }
    }

    /// Fixed point of `ρ = √(1 − h(ρ cos θ))`.
    fn cap_radius(&self, theta: T, c: T) -> Result<T> {
        let mut rho = T::one();
        let tol = T::epsilon() * T::lit(4.0);
        for _ in 0..MAX_RADIUS_ITERS {
            let next = (T::one() - self.cap(rho * c)).sqrt();
            if (next - rho).abs() <= tol {
                return Ok(next);
            }
            rho = next;
        }
        Err(Error::CapSolve { theta: theta.as_f64() })
    }

    /// Newton on `g(ρ sin θ) − ρ cos θ = 0`.
    fn fillet_radius(&self, theta: T, s: T, c: T) -> Result<T> {
        let f = self.fillet().expect("fillet piece requires delta > 0");
        let mut rho = T::SQRT_2();
        for _ in 0..MAX_RADIUS_ITERS {
            let y = rho * s;
            let r = f.g(y) - rho * c;
            let dr = f.dg(y) * s - c;
            let step = r / dr;
            rho = rho - step;
            if step.abs() <= T::epsilon() * T::lit(4.0) {
                return Ok(rho);
            }
        }
        Err(Error::CapSolve { theta: theta.as_f64() })
    }

    /// Outward unit normal at the boundary point of the given piece.
    fn normal_at(&self, piece: BoundaryPiece, p: Point<T>) -> Normal<T> {
        let s = T::FRAC_1_SQRT_2();
        match piece {
            BoundaryPiece::CapCircle => {
                // gradient of x² + y² + h(x) − 1
                let dh = cap_derivatives(p.x, self.epsilon)[1];
                Normal::from_vector(T::two() * p.x + dh, T::two() * p.y)
            }
            BoundaryPiece::UpperLine => Normal::new(-s, s),
            BoundaryPiece::LowerLine => Normal::new(-s, -s),
            BoundaryPiece::Corner => Normal::new(-T::one(), T::zero()),
            BoundaryPiece::Fillet => {
                // gradient of g(y) − x
                let f = self.fillet().expect("fillet piece requires delta > 0");
                Normal::from_vector(-T::one(), f.dg(p.y))
            }
        }
    }

    /// Boundary sample at angle `θ` with arclength weight `weight`.
    pub fn sample_at(&self, theta: T, weight: T) -> Result<BoundarySample<T>> {
        let t = wrap_angle(theta);
        let rho = self.boundary_radius(t)?;
        let (s, c) = t.sin_cos();
        let point = Point::new(rho * c, rho * s);
        let piece = self.piece_at(t);
        let normal = self.normal_at(piece, point);
        let arc_class = class_for(piece, normal);
        Ok(BoundarySample { theta: t, point, normal, tangent: normal.tangent(), piece, arc_class, weight })
    }

    /// `ds/dθ = ρ / (n · e_r)` for the star-shaped parametrization.
    pub fn arclength_rate(&self, sample: &BoundarySample<T>) -> T {
        let (s, c) = sample.theta.sin_cos();
        let radial = sample.normal.n1 * c + sample.normal.n2 * s;
        sample.point.norm() / radial
    }

    /// `n` samples at the midpoints of `n` equal angular intervals starting
    /// at `θ = −3π/4`, weighted by arclength.
    pub fn sample_boundary(&self, n: usize) -> Result<Vec<BoundarySample<T>>> {
        let start = -T::lit(0.75) * T::PI();
        let dtheta = T::TAU() / T::from_usize(n).unwrap();
        (0..n)
            .map(|k| {
                let theta = start + (T::from_usize(k).unwrap() + T::half()) * dtheta;
                let mut sample = self.sample_at(theta, T::zero())?;
                sample.weight = self.arclength_rate(&sample) * dtheta;
                Ok(sample)
            })
            .collect()
    }

    /// Arc class of a boundary point with outward normal `normal`.
    ///
    /// Fails if the point is farther than `tol` from `∂Ω`.
    pub fn classify_arc(&self, point: Point<T>, normal: Normal<T>, tol: T) -> Result<ArcClass> {
        let theta = point.y.atan2(point.x);
        let rho = self.boundary_radius(theta)?;
        let distance = (point.norm() - rho).abs();
        if !(distance <= tol) {
            return Err(Error::Classification { x: point.x.as_f64(), y: point.y.as_f64(), distance: distance.as_f64() });
        }
        Ok(class_for(self.piece_at(theta), normal))
    }

    /// Signed-distance-like test: `|p| − ρ(θ_p)`; non-positive inside.
    pub fn radial_excess(&self, p: Point<T>) -> Result<T> {
        if p.norm() == T::zero() {
            return Ok(-T::one());
        }
        Ok(p.norm() - self.boundary_radius(p.y.atan2(p.x))?)
    }

    /// Whether every ray from the origin meets `∂Ω` exactly once, tested as
    /// `p · n > 0` at `n` boundary samples. Returns the first failing angle.
    pub fn star_shape_violation(&self, n: usize) -> Result<Option<T>> {
        for s in self.sample_boundary(n)? {
            let support = s.point.x * s.normal.n1 + s.point.y * s.normal.n2;
            if !(support > T::zero()) {
                return Ok(Some(s.theta));
            }
        }
        Ok(None)
    }
}

fn class_for<T: Scalar>(piece: BoundaryPiece, normal: Normal<T>) -> ArcClass {
    match piece {
        BoundaryPiece::UpperLine | BoundaryPiece::LowerLine => ArcClass::Characteristic,
        BoundaryPiece::Fillet | BoundaryPiece::Corner => ArcClass::CornerFillet,
        BoundaryPiece::CapCircle => {
            let tol = T::lit(CLASSIFY_TOL);
            if normal.n1 > tol {
                ArcClass::Tau1
            } else if normal.n1 < -tol {
                ArcClass::Tau2
            } else {
                ArcClass::Degenerate
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    #[test]
    fn cap_vanishes_to_second_order_at_tangency_abscissae() {
        let eps = 0.05;
        for x in [FRAC_1_SQRT_2, -FRAC_1_SQRT_2] {
            let [h, dh, d2h] = cap_derivatives(x, eps);
            assert_abs_diff_eq!(h, 0.0, epsilon = 1e-16);
            assert_abs_diff_eq!(dh, 0.0, epsilon = 1e-16);
            assert_abs_diff_eq!(d2h, 0.0, epsilon = 1e-15);
        }
        assert_eq!(default_cap(0.0, eps), eps);
        assert_eq!(default_cap(0.9, eps), 0.0);
    }

    #[test]
    fn cap_derivatives_match_finite_differences() {
        let eps = 0.2;
        let h = 1e-5;
        for x in [-0.6, -0.2, 0.1, 0.45] {
            let [_, dh, d2h] = cap_derivatives(x, eps);
            let fd1 = (default_cap(x + h, eps) - default_cap(x - h, eps)) / (2.0 * h);
            let fd2 = (default_cap(x + h, eps) - 2.0 * default_cap(x, eps) + default_cap(x - h, eps)) / (h * h);
            assert_abs_diff_eq!(dh, fd1, epsilon = 1e-8);
            assert_abs_diff_eq!(d2h, fd2, epsilon = 1e-4);
        }
    }

    #[test]
    fn cap_stays_below_circle_profile() {
        for k in 0..=200 {
            let x = -1.0 + 0.01 * k as f64;
            let h = default_cap(x, EPSILON_MAX);
            assert!(h >= 0.0 && h <= 1.0 - x * x + 1e-15);
        }
    }

    #[test]
    fn fillet_matches_lines_to_second_order() {
        let d = 0.05;
        let f = corner_fillet(d).unwrap();
        assert_abs_diff_eq!(f.g(d), d - SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(f.g(-d), d - SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(f.dg(d), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(f.dg(-d), -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(f.d2g(d), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(f.d2g(-d), 0.0, epsilon = 1e-10);
        assert_eq!(f.dg(0.0), 0.0);
        assert!(corner_fillet(0.0).is_err());
        assert!(corner_fillet(0.25).is_err());
    }

    #[test]
    fn radius_examples() {
        let spec = DomainSpec::<f64>::default();
        assert_abs_diff_eq!(spec.boundary_radius(0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(spec.boundary_radius(PI / 2.0).unwrap(), (1.0 - spec.epsilon).sqrt(), epsilon = 1e-15);
        let sharp = DomainSpec::new(0.05, 0.0).unwrap();
        assert_abs_diff_eq!(sharp.boundary_radius(PI).unwrap(), SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(sharp.boundary_radius(PI - 1e-9).unwrap(), SQRT_2, epsilon = 1e-8);
        // fillet cuts the corner
        assert_abs_diff_eq!(spec.boundary_radius(PI).unwrap(), SQRT_2 - 0.375 * spec.delta, epsilon = 1e-14);
    }

    #[test]
    fn radius_is_continuous_across_piece_junctions() {
        let spec = DomainSpec::<f64>::default();
        let ta = spec.fillet_half_angle();
        for theta in [0.75 * PI, PI - ta, -PI + ta, -0.75 * PI] {
            let a = spec.boundary_radius(theta - 1e-12).unwrap();
            let b = spec.boundary_radius(theta + 1e-12).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn classification_examples() {
        let spec = DomainSpec::<f64>::default();
        let tol = 1e-9;
        let at = |deg: f64| {
            let t = deg.to_radians();
            (Point::new(t.cos(), t.sin()), Normal::new(t.cos(), t.sin()))
        };
        let (p, n) = at(-45.0);
        assert_eq!(spec.classify_arc(p, n, tol).unwrap(), ArcClass::Tau1);
        let s = spec.sample_at(160f64.to_radians(), 1.0).unwrap();
        assert_eq!(spec.classify_arc(s.point, s.normal, tol).unwrap(), ArcClass::Characteristic);
        assert_abs_diff_eq!(s.point.y, s.point.x + SQRT_2, epsilon = 1e-14);
        // a point on the unit circle at 120 degrees is off the capped boundary
        let (p, n) = at(120.0);
        assert!(matches!(spec.classify_arc(p, n, tol), Err(Error::Classification { .. })));
        // on the circle itself (no cap) it is tau2
        let nocap = DomainSpec::new(0.0, 0.05).unwrap();
        assert_eq!(nocap.classify_arc(p, n, tol).unwrap(), ArcClass::Tau2);
        let crest = spec.sample_at(PI / 2.0, 1.0).unwrap();
        assert_eq!(crest.arc_class, ArcClass::Degenerate);
        let fillet = spec.sample_at(PI, 1.0).unwrap();
        assert_eq!(fillet.arc_class, ArcClass::CornerFillet);
        assert_abs_diff_eq!(fillet.normal.n1, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn normals_are_outward_unit_and_orthogonal_to_tangent() {
        let spec = DomainSpec::<f64>::default();
        for s in spec.sample_boundary(512).unwrap() {
            assert_abs_diff_eq!(s.normal.norm(), 1.0, epsilon = 1e-14);
            let (tx, ty) = s.tangent;
            assert_abs_diff_eq!(tx * s.normal.n1 + ty * s.normal.n2, 0.0, epsilon = 1e-15);
            let probe = Point::new(s.point.x + 1e-6 * s.normal.n1, s.point.y + 1e-6 * s.normal.n2);
            assert!(spec.radial_excess(probe).unwrap() > 0.0);
        }
    }

    #[test]
    fn star_shaped_for_extreme_parameters() {
        for (e, d) in [(0.05, 0.05), (0.3, 0.2), (0.3, 0.0), (0.01, 0.01)] {
            let spec = DomainSpec::new(e, d).unwrap();
            assert_eq!(spec.star_shape_violation(4096).unwrap(), None);
        }
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(DomainSpec::new(-0.1, 0.05).is_err());
        assert!(DomainSpec::new(0.31, 0.05).is_err());
        assert!(DomainSpec::new(0.05, 0.21).is_err());
        assert!(DomainSpec::new(f64::NAN, 0.05).is_err());
    }
}
