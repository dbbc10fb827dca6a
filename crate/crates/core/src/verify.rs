//! Hypothesis checks for a configuration: positivity of `Q`, the coefficient
//! condition, the domain bound, characteristic identities, boundary
//! admissibility, removability of the `n₁ = 0` singularity and regularity of
//! the corner.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boundary::{admissibility_sweep, beta, beta_alternate, FilletSplit, SweepReport};
use crate::error::Result;
use crate::geometry::{BoundaryPiece, DomainSpec, Normal};
use crate::operator::coefficients::CoefficientSet;
use crate::operator::{char_form_value, gbound_at, Point};
use crate::scalar::Scalar;

pub const DEFAULT_BOUNDARY_SAMPLES: usize = 2048;
pub const DEFAULT_INTERIOR_SAMPLES: usize = 10_000;
/// Tolerance for algebraic identities checked in double precision.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Location {
    pub x: f64,
    pub y: f64,
}

impl<T: Scalar> From<Point<T>> for Location {
    fn from(p: Point<T>) -> Self {
        Self { x: p.x.as_f64(), y: p.y.as_f64() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: &'static str,
    /// The condition being tested, in formula form.
    pub condition: &'static str,
    pub passed: bool,
    pub worst_value: f64,
    pub location: Option<Location>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    /// First failing check, if any.
    pub worst_check: Option<&'static str>,
}

impl VerificationReport {
    pub fn new(checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        let worst_check = checks.iter().find(|c| !c.passed).map(|c| c.name);
        Self { checks, passed, worst_check }
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub boundary_samples: usize,
    pub interior_samples: usize,
    pub seed: u64,
    pub fillet_split: FilletSplit,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            boundary_samples: DEFAULT_BOUNDARY_SAMPLES,
            interior_samples: DEFAULT_INTERIOR_SAMPLES,
            seed: 0,
            fillet_split: FilletSplit::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub report: VerificationReport,
    pub sweep: SweepReport,
}

/// Uniform samples of the open domain by rejection from its bounding box.
pub fn interior_samples<T: Scalar>(spec: &DomainSpec<T>, n: usize, seed: u64) -> Result<Vec<Point<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = rng.gen_range(-std::f64::consts::SQRT_2..1.0);
        let y = rng.gen_range(-1.0..1.0);
        let p = Point::new(T::lit(x), T::lit(y));
        if spec.radial_excess(p)? < T::zero() {
            out.push(p);
        }
    }
    Ok(out)
}

struct Worst<T> {
    value: T,
    at: Option<Point<T>>,
}

impl<T: Scalar> Worst<T> {
    fn min() -> Self {
        Self { value: T::infinity(), at: None }
    }

    fn max() -> Self {
        Self { value: T::neg_infinity(), at: None }
    }

    fn take_min(&mut self, v: T, p: Point<T>) {
        if v < self.value || self.at.is_none() {
            self.value = v;
            self.at = Some(p);
        }
    }

    fn take_max(&mut self, v: T, p: Point<T>) {
        if v > self.value || self.at.is_none() {
            self.value = v;
            self.at = Some(p);
        }
    }

    fn record(&self, name: &'static str, condition: &'static str, passed: bool) -> CheckRecord {
        CheckRecord { name, condition, passed, worst_value: self.value.as_f64(), location: self.at.map(Location::from) }
    }
}

pub fn verify<T: Scalar>(spec: &DomainSpec<T>, coefficients: &CoefficientSet<T>, opts: &VerifyOptions) -> Result<VerifyOutcome> {
    let tol = T::lit(IDENTITY_TOL);
    let interior = interior_samples(spec, opts.interior_samples, opts.seed)?;
    let boundary = spec.sample_boundary(opts.boundary_samples)?;
    let mut checks = Vec::new();

    let mut q_min = Worst::min();
    let mut q_ok = true;
    let mut margin = Worst::min();
    let mut gbound_ok = true;
    for &p in &interior {
        let v = coefficients.eval(p)?;
        let g = gbound_at(p, &v)?;
        q_min.take_min(g.q.min_eigenvalue(), p);
        q_ok &= g.q_positive_definite;
        margin.take_min(g.margin, p);
        gbound_ok &= g.passed();
    }
    checks.push(q_min.record("Q positive definite", "Q = B* − ½(∂ₓA¹ + ∂ᵧA²) > 0 in Ω", q_ok));
    checks.push(margin.record("gbound", "Γ₁ > 0 and |γ₁| ≥ [xyΓ₁ + (y²−1)Γ₂]² / (4|Γ₁(1−y²)|)", gbound_ok));

    let mut y2 = Worst::max();
    for p in interior.iter().copied().chain(boundary.iter().map(|s| s.point)) {
        y2.take_max(p.y * p.y, p);
    }
    checks.push(y2.record("domain bound", "y² < 1 on the closure of Ω", y2.value < T::one()));

    let mut star = Worst::min();
    for s in &boundary {
        star.take_min(s.point.x * s.normal.n1 + s.point.y * s.normal.n2, s.point);
    }
    checks.push(star.record("star shaped", "p · n > 0 on ∂Ω", star.value > T::zero()));

    checks.push(characteristic_check(spec, &boundary, opts.seed, tol));

    let sweep = admissibility_sweep(spec, opts.boundary_samples, opts.fillet_split)?;
    let worst = sweep.worst_sample().cloned();
    checks.push(CheckRecord {
        name: "boundary admissibility",
        condition: "μ* ≥ 0, range β₊ ∩ range β₋ = 0, ker β₊ + ker β₋ = ℝ²",
        passed: sweep.summary.passed,
        worst_value: sweep.summary.min_mu11.min(sweep.summary.min_det_mu),
        location: worst.map(|s| Location { x: s.x, y: s.y }),
    });

    let mut gap = Worst::max();
    let probes = [1e-2, 1e-4, 1e-6, 1e-8, 0.0];
    for s in &boundary {
        gap.take_max(beta(s.point, s.normal)?.max_abs_diff(&beta_alternate(s.point, s.normal)?), s.point);
        for &n1 in &probes {
            let n1 = T::lit(n1);
            let n2 = (T::one() - n1 * n1).sqrt();
            for n in [Normal::new(n1, n2), Normal::new(-n1, -n2)] {
                gap.take_max(beta(s.point, n)?.max_abs_diff(&beta_alternate(s.point, n)?), s.point);
            }
        }
    }
    checks.push(gap.record("singularity removal", "β = β_alt as n₁ → 0", gap.value <= tol));

    checks.push(corner_check(spec, tol));

    Ok(VerifyOutcome { report: VerificationReport::new(checks), sweep })
}

/// `Φ(t) = 0` along the polar lines and the unit circle, `Φ ≤ 0` in the
/// closed disc.
fn characteristic_check<T: Scalar>(
    spec: &DomainSpec<T>,
    boundary: &[crate::geometry::BoundarySample<T>],
    seed: u64,
    tol: T,
) -> CheckRecord {
    let mut worst = Worst::max();
    for s in boundary {
        let on_line = matches!(s.piece, BoundaryPiece::UpperLine | BoundaryPiece::LowerLine);
        let on_circle = s.piece == BoundaryPiece::CapCircle && spec.cap(s.point.x) == T::zero();
        if on_line || on_circle {
            let (tx, ty) = s.tangent;
            worst.take_max(char_form_value(s.point, tx, ty).abs(), s.point);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    for _ in 0..1000 {
        let r = rng.gen_range(0.0f64..=1.0).sqrt();
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let p = Point::new(T::lit(r * phi.cos()), T::lit(r * phi.sin()));
        worst.take_max(char_form_value(p, T::lit(a.cos()), T::lit(a.sin())), p);
    }
    worst.record(
        "characteristic identities",
        "Φ(t) = 0 on polar lines and unit circle; Φ ≤ 0 in the closed disc",
        worst.value <= tol,
    )
}

/// Continuity of position, slope and curvature where the fillet meets the
/// polar lines. A sharp corner fails: the normal jumps there.
fn corner_check<T: Scalar>(spec: &DomainSpec<T>, tol: T) -> CheckRecord {
    let corner = spec.corner();
    let condition = "∂Ω is C² through the corner region (fillet present)";
    let Some(f) = spec.fillet() else {
        let s = T::FRAC_1_SQRT_2();
        let jump = (Normal::new(-s, s).n2 - Normal::new(-s, -s).n2).abs();
        return CheckRecord {
            name: "corner regularity",
            condition,
            passed: false,
            worst_value: jump.as_f64(),
            location: Some(corner.into()),
        };
    };
    let d = spec.delta;
    let root2 = T::SQRT_2();
    // upper line x = y − √2 at y = δ, lower line x = −y − √2 at y = −δ
    let mismatch = [
        (f.g(d) - (d - root2)).abs(),
        (f.dg(d) - T::one()).abs(),
        f.d2g(d).abs(),
        (f.g(-d) - (d - root2)).abs(),
        (f.dg(-d) + T::one()).abs(),
        f.d2g(-d).abs(),
    ]
    .into_iter()
    .fold(T::zero(), T::max);
    CheckRecord {
        name: "corner regularity",
        condition,
        passed: mismatch <= tol,
        worst_value: mismatch.as_f64(),
        location: Some(Point::new(d - root2, d).into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::coefficients::Preset;

    fn quick() -> VerifyOptions {
        VerifyOptions { boundary_samples: 512, interior_samples: 2000, ..Default::default() }
    }

    #[test]
    fn default_configuration_passes() {
        let out = verify(&DomainSpec::<f64>::default(), &CoefficientSet::default(), &quick()).unwrap();
        assert!(out.report.passed, "{:#?}", out.report);
    }

    #[test]
    fn zero_gamma1_fails_on_q() {
        let c = CoefficientSet::<f64>::preset(Preset::ZeroGamma1);
        let out = verify(&DomainSpec::default(), &c, &quick()).unwrap();
        assert!(!out.report.passed);
        assert_eq!(out.report.worst_check, Some("Q positive definite"));
    }

    #[test]
    fn sharp_corner_fails_regularity() {
        let spec = DomainSpec::new(0.05, 0.0).unwrap();
        let out = verify(&spec, &CoefficientSet::default(), &quick()).unwrap();
        assert!(!out.report.passed);
        let c = out.report.check("corner regularity").unwrap();
        assert!(!c.passed);
        let loc = c.location.unwrap();
        assert!((loc.x + std::f64::consts::SQRT_2).abs() < 1e-15 && loc.y == 0.0);
    }

    #[test]
    fn same_seed_same_report() {
        let a = verify(&DomainSpec::<f64>::default(), &CoefficientSet::default(), &quick()).unwrap();
        let b = verify(&DomainSpec::<f64>::default(), &CoefficientSet::default(), &quick()).unwrap();
        assert_eq!(a.report, b.report);
    }
}
