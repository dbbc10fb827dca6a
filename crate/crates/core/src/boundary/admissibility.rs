//! Pointwise admissibility tests and the boundary sweep.
//!
//! A splitting `β = β₊ + β₋` is admissible when
//! `μ* = sym(β₊ − β₋) ≥ 0`, `range β₊ ∩ range β₋ = {0}` and
//! `ker β₊ + ker β₋ = ℝ²`. Ranks are numeric, with singular values compared
//! against `RANK_TOL·‖β‖`.

use serde::Serialize;

use crate::boundary::{decompose, BetaDecomposition, FilletSplit};
use crate::error::Result;
use crate::geometry::{ArcClass, DomainSpec};
use crate::linalg::{numeric_rank, numeric_rank_pair, numeric_rank_stacked};
use crate::scalar::Scalar;

/// Absolute tolerance on `μ*₁₁` and `det μ*`.
pub const ADMISSIBILITY_TOL: f64 = 1e-10;
/// Relative rank tolerance.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibilityReport<T> {
    pub mu11: T,
    pub det_mu: T,
    pub mu11_ok: bool,
    pub det_ok: bool,
    /// `range β₊ ∩ range β₋ = {0}`
    pub range_ok: bool,
    /// `ker β₊ + ker β₋ = ℝ²`
    pub span_ok: bool,
}

impl<T> AdmissibilityReport<T> {
    pub fn passed(&self) -> bool {
        self.mu11_ok && self.det_ok && self.range_ok && self.span_ok
    }
}

pub fn check_admissibility<T: Scalar>(d: &BetaDecomposition<T>) -> AdmissibilityReport<T> {
    let tol = T::lit(ADMISSIBILITY_TOL);
    let rank_tol = T::lit(RANK_TOL);
    let scale = d.beta.frobenius().max(T::min_positive_value());
    let r_plus = numeric_rank(&d.beta_plus, rank_tol, scale);
    let r_minus = numeric_rank(&d.beta_minus, rank_tol, scale);
    // dim(range β₊ + range β₋) = rank [β₊ | β₋]
    let r_side = numeric_rank_pair(&d.beta_plus, &d.beta_minus, rank_tol, scale);
    // dim(ker β₊ + ker β₋) = 4 − r₊ − r₋ − (2 − rank [β₊; β₋])
    let r_stack = numeric_rank_stacked(&d.beta_plus, &d.beta_minus, rank_tol, scale);
    let mu11 = d.mu_star.get(0, 0);
    let det_mu = d.mu_star.det();
    AdmissibilityReport {
        mu11,
        det_mu,
        mu11_ok: mu11 >= -tol,
        det_ok: det_mu >= -tol,
        range_ok: r_side == r_plus + r_minus,
        span_ok: r_stack == r_plus + r_minus,
    }
}

/// One line of `admissibility.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub theta: f64,
    pub x: f64,
    pub y: f64,
    pub class: &'static str,
    pub mu11: f64,
    pub det_mu: f64,
    pub range_ok: bool,
    pub span_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilitySummary {
    pub samples: usize,
    pub fillet_split: &'static str,
    pub min_mu11: f64,
    pub min_det_mu: f64,
    pub range_failures: usize,
    pub span_failures: usize,
    pub mu11_failures: usize,
    pub det_failures: usize,
    /// Largest `|det μ*|` over samples on the unit circle and polar lines.
    pub max_abs_det_on_degenerate_arcs: f64,
    /// Number of sign changes of `n₁` along the boundary.
    pub n1_sign_changes: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub samples: Vec<SampleRecord>,
    pub summary: AdmissibilitySummary,
}

impl SweepReport {
    /// Index of the sample with the smallest `min(μ*₁₁, det μ*)`, preferring
    /// samples that fail a rank condition.
    pub fn worst_sample(&self) -> Option<&SampleRecord> {
        self.samples
            .iter()
            .find(|s| !s.range_ok || !s.span_ok)
            .or_else(|| {
                self.samples
                    .iter()
                    .min_by(|a, b| a.mu11.min(a.det_mu).total_cmp(&b.mu11.min(b.det_mu)))
            })
    }
}

/// Whether a cap/circle sample lies on the unit circle itself (`h = 0`).
fn on_circle<T: Scalar>(spec: &DomainSpec<T>, x: T) -> bool {
    spec.cap(x) == T::zero()
}

/// Decomposes and checks `β` at `n` boundary samples. When `δ = 0`, an extra
/// sample sits at the sharp corner, using the one-sided normal of the upper
/// polar line.
pub fn admissibility_sweep<T: Scalar>(spec: &DomainSpec<T>, n: usize, fillet: FilletSplit) -> Result<SweepReport> {
    let mut samples = Vec::with_capacity(n + 1);
    let mut summary = AdmissibilitySummary {
        samples: 0,
        fillet_split: fillet.name(),
        min_mu11: f64::INFINITY,
        min_det_mu: f64::INFINITY,
        range_failures: 0,
        span_failures: 0,
        mu11_failures: 0,
        det_failures: 0,
        max_abs_det_on_degenerate_arcs: 0.0,
        n1_sign_changes: 0,
        passed: false,
    };
    let mut boundary = spec.sample_boundary(n)?;
    if spec.delta == T::zero() {
        let mut corner = spec.sample_at(T::PI(), T::zero())?;
        let s = T::FRAC_1_SQRT_2();
        corner.normal = crate::geometry::Normal::new(-s, s);
        corner.tangent = corner.normal.tangent();
        boundary.push(corner);
    }
    let mut last_sign = 0i8;
    for s in &boundary {
        let d = decompose(s.point, s.normal, s.arc_class, fillet)?;
        let rep = check_admissibility(&d);
        let rec = SampleRecord {
            theta: s.theta.as_f64(),
            x: s.point.x.as_f64(),
            y: s.point.y.as_f64(),
            class: s.arc_class.name(),
            mu11: rep.mu11.as_f64(),
            det_mu: rep.det_mu.as_f64(),
            range_ok: rep.range_ok,
            span_ok: rep.span_ok,
        };
        summary.min_mu11 = summary.min_mu11.min(rec.mu11);
        summary.min_det_mu = summary.min_det_mu.min(rec.det_mu);
        summary.range_failures += usize::from(!rep.range_ok);
        summary.span_failures += usize::from(!rep.span_ok);
        summary.mu11_failures += usize::from(!rep.mu11_ok);
        summary.det_failures += usize::from(!rep.det_ok);
        let degenerate_arc = s.arc_class == ArcClass::Characteristic
            || (matches!(s.arc_class, ArcClass::Tau1 | ArcClass::Tau2) && on_circle(spec, s.point.x));
        if degenerate_arc {
            summary.max_abs_det_on_degenerate_arcs = summary.max_abs_det_on_degenerate_arcs.max(rec.det_mu.abs());
        }
        let sign = if s.arc_class == ArcClass::Degenerate {
            0
        } else if s.normal.n1 > T::zero() {
            1
        } else {
            -1
        };
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                summary.n1_sign_changes += 1;
            }
            last_sign = sign;
        }
        samples.push(rec);
    }
    // close the loop
    let first_sign = boundary
        .iter()
        .find(|s| s.arc_class != ArcClass::Degenerate)
        .map(|s| if s.normal.n1 > T::zero() { 1 } else { -1 })
        .unwrap_or(0);
    if first_sign != 0 && last_sign != 0 && first_sign != last_sign {
        summary.n1_sign_changes += 1;
    }
    summary.samples = samples.len();
    summary.passed = summary.range_failures == 0
        && summary.span_failures == 0
        && summary.mu11_failures == 0
        && summary.det_failures == 0;
    Ok(SweepReport { samples, summary })
}
