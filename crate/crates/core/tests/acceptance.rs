//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits nonzero if any criterion fails.
//!
//! Tolerances and runtime budgets are pinned below.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gmk_core::boundary::{admissibility_sweep, beta, beta_alternate, FilletSplit};
use gmk_core::operator::coefficients::Polynomial;
use gmk_core::operator::{
    apply_operator, char_form_value, check_gbound, original_lhs, q_closed_form, q_from_parts, rhs_transform,
    zeroth_order_matrix,
};
use gmk_core::solver::convergence::{convergence_study, stability_ratio, ConvergenceConfig};
use gmk_core::solver::{assemble, energy_identity, BoundaryData, EnergyField, SolverOptions};
use gmk_core::verify::interior_samples;
use gmk_core::{
    CoefficientSet64, ConstantField, DomainSpec64, FieldRef, Normal, Point64, PolynomialField, Preset, SmoothField,
    StateVector, TrigManufactured,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

const Q_IDENTITY_TOL: f64 = 1e-12;
const Q_SAMPLES: usize = 10_000;
const CHAR_TOL: f64 = 1e-12;
const CHAR_RANDOM_POINTS: usize = 1_000;
const BOUNDARY_SAMPLES: usize = 2048;
const PSD_TOL: f64 = 1e-10;
const DET_ZERO_TOL: f64 = 1e-10;
const BETA_AGREEMENT_TOL: f64 = 1e-12;
/// `|LU − T·ℓ(U)| ≤ tol · max(1, |LU|)` for the original left side `ℓ`.
const EQUIVALENCE_TOL: f64 = 1e-12;
const EQUIVALENCE_FIELDS: usize = 100;
const EQUIVALENCE_POINTS: usize = 100;
const ENERGY_LEVELS: [usize; 3] = [64, 128, 256];
const ENERGY_RATIO: (f64, f64) = (3.0, 5.0);
const CONVERGENCE_LEVELS: [usize; 3] = [32, 64, 128];
/// `n_r = n_θ / RADIAL_RATIO` in all refinement studies.
const RADIAL_RATIO: usize = 2;
const FINEST_OVER_COARSEST: f64 = 0.25;
const CONSTANT_RECOVERY_TOL: f64 = 1e-8;
/// Solver tolerance for the exactness checks.
const EXACTNESS_SOLVER_TOL: f64 = 1e-13;
const CONSTANT_LEVELS: [usize; 4] = [16, 32, 64, 128];
const STABILITY_SPREAD: f64 = 2.0;

struct Outcome {
    passed: bool,
    detail: String,
}

fn criterion(id: u32, name: &str, budget: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = out.passed && in_time;
    println!(
        "{} criterion {id} {name}: {} [{:.2?} of {:.0?}{}]",
        if passed { "PASS" } else { "FAIL" },
        out.detail,
        elapsed,
        budget,
        if in_time { "" } else { ", over budget" },
    );
    passed
}

fn q_identity() -> Outcome {
    let spec = DomainSpec64::default();
    let points = interior_samples(&spec, Q_SAMPLES, SEED).unwrap();
    let mut worst: f64 = 0.0;
    for preset in Preset::ALL {
        let c = CoefficientSet64::preset(preset);
        for &p in &points {
            let v = c.eval(p).unwrap();
            let closed = q_closed_form(p, &v);
            let (d1, d2) = common::principal_derivatives_ad(p.x, p.y);
            let oracle = q_from_parts(&zeroth_order_matrix(p, &v), &d1, &d2);
            worst = worst
                .max((closed.q11 - oracle.q11).abs())
                .max((closed.q12 - oracle.q12).abs())
                .max((closed.q22 - oracle.q22).abs());
        }
    }
    Outcome {
        passed: worst <= Q_IDENTITY_TOL,
        detail: format!("max |Q_closed − Q_oracle| = {worst:.3e} over {} points × {} presets", points.len(), Preset::ALL.len()),
    }
}

fn positivity() -> Outcome {
    let spec = DomainSpec64::default();
    let c = CoefficientSet64::default();
    let points = interior_samples(&spec, Q_SAMPLES, SEED + 1).unwrap();
    let mut all_pass = true;
    let mut min_margin = f64::INFINITY;
    let mut flipped = 0usize;
    let mut perturbed = 0usize;
    for &p in &points {
        let r = check_gbound(p, &c).unwrap();
        all_pass &= r.passed() && r.q_positive_definite;
        min_margin = min_margin.min(r.margin);
        if r.bound > 1e-6 {
            let below = CoefficientSet64::constant(1.0, 0.0, 0.5 * r.bound, 1.0, 0.0);
            perturbed += 1;
            flipped += usize::from(!check_gbound(p, &below).unwrap().passed());
        }
    }
    Outcome {
        passed: all_pass && perturbed > 0 && flipped == perturbed,
        detail: format!("default min margin {min_margin:.4}; γ₁ = bound/2 flips {flipped}/{perturbed}"),
    }
}

fn characteristic_identities() -> Outcome {
    let s2 = std::f64::consts::SQRT_2;
    let mut on_curves: f64 = 0.0;
    for k in 0..=1000 {
        let x = -3.0 + 5.0 * k as f64 / 1000.0;
        on_curves = on_curves
            .max(char_form_value(Point64::new(x, x + s2), 1.0, 1.0).abs())
            .max(char_form_value(Point64::new(x, -x - s2), 1.0, -1.0).abs());
        let th = std::f64::consts::TAU * k as f64 / 1000.0;
        let (s, c) = th.sin_cos();
        on_curves = on_curves.max(char_form_value(Point64::new(c, s), -s, c).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut max_phi = f64::NEG_INFINITY;
    for _ in 0..CHAR_RANDOM_POINTS {
        let r = rng.gen_range(0.0f64..=1.0).sqrt();
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let p = Point64::new(r * a.cos(), r * a.sin());
        for _ in 0..16 {
            let d = rng.gen_range(0.0..std::f64::consts::TAU);
            max_phi = max_phi.max(char_form_value(p, d.cos(), d.sin()));
        }
    }
    Outcome {
        passed: on_curves <= CHAR_TOL && max_phi <= CHAR_TOL,
        detail: format!("max |Φ(t)| on polar lines and circle {on_curves:.3e}; max Φ in disc {max_phi:.3e}"),
    }
}

fn admissibility() -> Outcome {
    let spec = DomainSpec64::default();
    let sweep = admissibility_sweep(&spec, BOUNDARY_SAMPLES, FilletSplit::Free).unwrap();
    let s = &sweep.summary;
    let passed = s.samples >= BOUNDARY_SAMPLES
        && s.min_mu11 >= -PSD_TOL
        && s.min_det_mu >= -PSD_TOL
        && s.range_failures == 0
        && s.span_failures == 0
        && s.max_abs_det_on_degenerate_arcs <= DET_ZERO_TOL;
    Outcome {
        passed,
        detail: format!(
            "{} samples, min μ*₁₁ {:.3e}, min det μ* {:.3e}, range/span failures {}/{}, max |det μ*| on circle and polar lines {:.3e}",
            s.samples, s.min_mu11, s.min_det_mu, s.range_failures, s.span_failures, s.max_abs_det_on_degenerate_arcs
        ),
    }
}

fn singularity_removal() -> Outcome {
    let spec = DomainSpec64::default();
    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    for s in spec.sample_boundary(256).unwrap() {
        for k in 1..=8 {
            for n1 in [10f64.powi(-k), 0.0] {
                let n2 = (1.0 - n1 * n1).sqrt();
                for n in [Normal::new(n1, n2), Normal::new(-n1, n2), Normal::new(n1, -n2), Normal::new(-n1, -n2)] {
                    let d = beta(s.point, n).unwrap().max_abs_diff(&beta_alternate(s.point, n).unwrap());
                    worst = worst.max(d);
                    count += 1;
                }
            }
        }
    }
    Outcome {
        passed: worst <= BETA_AGREEMENT_TOL,
        detail: format!("max |β − β_alt| = {worst:.3e} over {count} (point, normal) pairs with |n₁| ∈ {{10⁻¹..10⁻⁸, 0}}"),
    }
}

fn random_polynomial(rng: &mut ChaCha8Rng) -> Polynomial<f64> {
    let mut triples = Vec::new();
    for i in 0..=3u32 {
        for j in 0..=(3 - i) {
            triples.push((i, j, rng.gen_range(-1.0..1.0)));
        }
    }
    Polynomial::from_triples(&triples)
}

fn equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let c = CoefficientSet64::preset(Preset::Product);
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for _ in 0..EQUIVALENCE_FIELDS {
        let field = PolynomialField { u1: random_polynomial(&mut rng), u2: random_polynomial(&mut rng) };
        let mut n = 0;
        while n < EQUIVALENCE_POINTS {
            let p = Point64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if (1.0 - p.y * p.y).abs() < 1e-6 {
                continue;
            }
            let jet = field.jet(p);
            let lu = apply_operator(&jet, p, &c).unwrap();
            let v = c.eval(p).unwrap();
            let rhs = rhs_transform(p, original_lhs(&jet, p, &v)).unwrap();
            let scale = 1f64.max(lu.max_abs());
            worst = worst.max((lu - rhs).max_abs() / scale);
            n += 1;
            checked += 1;
        }
    }
    Outcome {
        passed: worst <= EQUIVALENCE_TOL,
        detail: format!("max scaled |LU − T·ℓ(U)| = {worst:.3e} over {checked} evaluations"),
    }
}

fn energy() -> Outcome {
    let spec = DomainSpec64::default();
    let c = CoefficientSet64::default();
    let one = ConstantField(StateVector::new(1.0, 0.0));
    let fields: [(&str, &dyn SmoothField<f64>); 2] = [("U=(1,0)", &one), ("U*", &TrigManufactured)];
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, f) in fields {
        let defects: Vec<f64> = ENERGY_LEVELS
            .iter()
            .map(|&n| {
                let mesh = spec.generate_mesh(n, n / RADIAL_RATIO).unwrap();
                energy_identity(&EnergyField::Analytic(f), &c, &mesh).unwrap().defect
            })
            .collect();
        let ratios: Vec<f64> = defects.windows(2).map(|w| w[0] / w[1]).collect();
        passed &= ratios.iter().all(|r| (ENERGY_RATIO.0..=ENERGY_RATIO.1).contains(r));
        parts.push(format!(
            "{name} defects {:.2e}/{:.2e}/{:.2e} ratios {:.2}, {:.2}",
            defects[0], defects[1], defects[2], ratios[0], ratios[1]
        ));
    }
    Outcome { passed, detail: parts.join("; ") }
}

fn convergence() -> Outcome {
    let spec = DomainSpec64::default();
    let c = CoefficientSet64::default();
    let exact: FieldRef<f64> = Arc::new(TrigManufactured);
    let cfg = ConvergenceConfig { levels: CONVERGENCE_LEVELS.to_vec(), radial_ratio: RADIAL_RATIO, options: SolverOptions::default() };
    let rows = convergence_study(&spec, &c, &exact, &cfg).unwrap();
    let errs: Vec<f64> = rows.iter().map(|r| r.l2_error).collect();
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    let reduction = errs[errs.len() - 1] / errs[0];

    let constant: FieldRef<f64> = Arc::new(ConstantField(StateVector::new(1.0, 2.0)));
    let exact_opts = SolverOptions { tolerance: EXACTNESS_SOLVER_TOL, ..Default::default() };
    let mut constant_err: f64 = 0.0;
    let mut constant_nodal: f64 = 0.0;
    let mut zero_max: f64 = 0.0;
    for n in CONSTANT_LEVELS {
        let mesh = spec.generate_mesh(n, n / RADIAL_RATIO).unwrap();
        let manufactured = c.with_manufactured_source(constant.clone());
        let r = assemble(&mesh, &manufactured, &BoundaryData::Trace(constant.clone()), exact_opts).unwrap().solve().unwrap();
        constant_err = constant_err.max(r.solution.l2_error(&mesh, &constant));
        for v in &r.solution.values {
            constant_nodal = constant_nodal.max((*v - StateVector::new(1.0, 2.0)).max_abs());
        }
        let z = assemble(&mesh, &c.clone().without_source(), &BoundaryData::Homogeneous, exact_opts).unwrap().solve().unwrap();
        zero_max = zero_max.max(z.solution.max_abs());
    }
    Outcome {
        passed: decreasing && reduction < FINEST_OVER_COARSEST && constant_err <= CONSTANT_RECOVERY_TOL && zero_max == 0.0,
        detail: format!(
            "L² errors {} (finest/coarsest {reduction:.3}); constant (1,2) L² error {constant_err:.2e} (max nodal {constant_nodal:.2e}); homogeneous max |U_h| {zero_max:.1e}",
            errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(" > ")
        ),
    }
}

fn stability() -> Outcome {
    let spec = DomainSpec64::default();
    let c = CoefficientSet64::default();
    let ratios: Vec<f64> = CONVERGENCE_LEVELS
        .iter()
        .map(|&n| {
            let mesh = spec.generate_mesh(n, n / RADIAL_RATIO).unwrap();
            stability_ratio(&mesh, &c, SolverOptions::default()).unwrap()
        })
        .collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    Outcome {
        passed: lo > 0.0 && hi / lo < STABILITY_SPREAD,
        detail: format!(
            "‖U_h‖/‖F‖ = {} (spread {:.3})",
            ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(", "),
            hi / lo
        ),
    }
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "Q identity", s(1), q_identity),
        criterion(2, "positivity", s(1), positivity),
        criterion(3, "characteristic identities", s(1), characteristic_identities),
        criterion(4, "admissibility sweep", s(5), admissibility),
        criterion(5, "singularity removal", s(1), singularity_removal),
        criterion(6, "equivalence", s(1), equivalence),
        criterion(7, "energy identity", s(30), energy),
        criterion(8, "manufactured convergence", s(300), convergence),
        criterion(9, "stability", s(300), stability),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
