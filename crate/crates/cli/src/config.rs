//! JSON run configuration. Every section is optional; unknown keys are
//! rejected with the path of the offending entry.

use std::fmt;
use std::path::Path;

use gmk_core::boundary::FilletSplit;
use gmk_core::geometry::domain::{DEFAULT_DELTA, DEFAULT_EPSILON};
use gmk_core::operator::coefficients::{Monomial, Polynomial, ScalarField};
use gmk_core::solver::{SolverOptions, DEFAULT_PENALTY, DEFAULT_TOLERANCE};
use gmk_core::verify::{VerifyOptions, DEFAULT_BOUNDARY_SAMPLES, DEFAULT_INTERIOR_SAMPLES};
use gmk_core::{CoefficientSet64, DomainSpec64, Preset};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "config error: {}", self.message)
        } else {
            write!(f, "config error at `{}`: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { path: path.to_string(), message: message.into() }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub domain: DomainConfig,
    pub coefficients: CoefficientConfig,
    pub boundary: BoundaryConfig,
    pub mesh: MeshConfig,
    pub solver: SolverConfig,
    pub sampling: SamplingConfig,
    pub convergence: ConvergenceSection,
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct DomainConfig {
    pub epsilon_cap: f64,
    pub delta_corner: f64,
}

impl Default for DomainConfig {
    fn default() -> Self {
        Self { epsilon_cap: DEFAULT_EPSILON, delta_corner: DEFAULT_DELTA }
    }
}

/// A coefficient field: a constant or a list of `[i, j, c]` monomials `c xⁱ yʲ`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Constant(f64),
    Monomials(Vec<(u32, u32, f64)>),
}

impl FieldSpec {
    fn to_field(&self) -> ScalarField<f64> {
        match self {
            Self::Constant(c) => ScalarField::Constant(*c),
            Self::Monomials(terms) => ScalarField::Polynomial(Polynomial::new(
                terms.iter().map(|&(i, j, c)| Monomial { i, j, c }).collect(),
            )),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoefficientConfig {
    pub preset: String,
    pub big_gamma1: Option<FieldSpec>,
    pub big_gamma2: Option<FieldSpec>,
    pub gamma1: Option<FieldSpec>,
    pub f1: Option<FieldSpec>,
    pub f2: Option<FieldSpec>,
}

impl Default for CoefficientConfig {
    fn default() -> Self {
        Self { preset: Preset::Default.name().to_string(), big_gamma1: None, big_gamma2: None, gamma1: None, f1: None, f2: None }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundaryConfig {
    pub fillet_split: String,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self { fillet_split: FilletSplit::default().name().to_string() }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshConfig {
    pub n_theta: usize,
    pub n_r: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self { n_theta: 64, n_r: 32 }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub lambda: f64,
    pub tol: f64,
    pub max_iter: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { lambda: DEFAULT_PENALTY, tol: DEFAULT_TOLERANCE, max_iter: None }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    pub boundary_samples: usize,
    pub interior_samples: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { boundary_samples: DEFAULT_BOUNDARY_SAMPLES, interior_samples: DEFAULT_INTERIOR_SAMPLES }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Manufactured {
    /// `(sin x cos y, x² − y)`
    Trig,
    /// `(1, 2)`
    Constant,
    Zero,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceSection {
    pub levels: Vec<usize>,
    pub radial_ratio: usize,
    pub manufactured: Manufactured,
}

impl Default for ConvergenceSection {
    fn default() -> Self {
        Self { levels: vec![32, 64, 128], radial_ratio: 2, manufactured: Manufactured::Trig }
    }
}

/// Validated inputs for the pipelines.
pub struct Resolved {
    pub spec: DomainSpec64,
    pub coefficients: CoefficientSet64,
    pub solver: SolverOptions,
    pub verify: VerifyOptions,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            let message = format!("{inner}");
            ConfigError { path: e.path().to_string(), message }
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let spec = DomainSpec64::new(self.domain.epsilon_cap, self.domain.delta_corner).map_err(|e| {
            let field = if e.to_string().contains("epsilon") { "domain.epsilon_cap" } else { "domain.delta_corner" };
            invalid(field, e.to_string())
        })?;

        let preset = Preset::from_name(&self.coefficients.preset).ok_or_else(|| {
            let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            invalid("coefficients.preset", format!("unknown preset `{}` (expected one of {})", self.coefficients.preset, names.join(", ")))
        })?;
        let mut coefficients = CoefficientSet64::preset(preset);
        let c = &self.coefficients;
        for (name, spec_field, slot) in [
            ("big_gamma1", &c.big_gamma1, &mut coefficients.big_gamma1),
            ("big_gamma2", &c.big_gamma2, &mut coefficients.big_gamma2),
            ("gamma1", &c.gamma1, &mut coefficients.gamma1),
            ("f1", &c.f1, &mut coefficients.f1),
            ("f2", &c.f2, &mut coefficients.f2),
        ] {
            if let Some(f) = spec_field {
                let finite = match f {
                    FieldSpec::Constant(v) => v.is_finite(),
                    FieldSpec::Monomials(t) => t.iter().all(|m| m.2.is_finite() && m.0 <= 16 && m.1 <= 16),
                };
                if !finite {
                    return Err(invalid(&format!("coefficients.{name}"), "coefficients must be finite with exponents at most 16"));
                }
                *slot = f.to_field();
            }
        }

        let fillet_split = FilletSplit::from_name(&self.boundary.fillet_split).ok_or_else(|| {
            invalid("boundary.fillet_split", format!("unknown split `{}` (expected free or upper-triangular)", self.boundary.fillet_split))
        })?;

        if self.mesh.n_theta < 16 {
            return Err(invalid("mesh.n_theta", "must be at least 16"));
        }
        if self.mesh.n_r < 4 {
            return Err(invalid("mesh.n_r", "must be at least 4"));
        }
        if !(self.solver.lambda > 0.0 && self.solver.lambda.is_finite()) {
            return Err(invalid("solver.lambda", "must be positive"));
        }
        if !(self.solver.tol > 0.0 && self.solver.tol < 1.0) {
            return Err(invalid("solver.tol", "must lie in (0, 1)"));
        }
        if self.solver.max_iter == Some(0) {
            return Err(invalid("solver.max_iter", "must be positive"));
        }
        if self.sampling.boundary_samples < 4 {
            return Err(invalid("sampling.boundary_samples", "must be at least 4"));
        }
        if self.sampling.interior_samples == 0 {
            return Err(invalid("sampling.interior_samples", "must be positive"));
        }
        let levels = &self.convergence.levels;
        if levels.len() < 3 {
            return Err(invalid("convergence.levels", "at least 3 levels are required"));
        }
        if levels.iter().any(|&n| n < 16) || levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("convergence.levels", "levels must be increasing and at least 16"));
        }
        if self.convergence.radial_ratio == 0 {
            return Err(invalid("convergence.radial_ratio", "must be positive"));
        }

        let solver = SolverOptions {
            penalty: self.solver.lambda,
            tolerance: self.solver.tol,
            max_iterations: self.solver.max_iter,
            fillet_split,
        };
        let verify = VerifyOptions {
            boundary_samples: self.sampling.boundary_samples,
            interior_samples: self.sampling.interior_samples,
            seed: self.seed,
            fillet_split,
        };
        Ok(Resolved { spec, coefficients, solver, verify })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_default() {
        let c = RunConfig::from_json("{}").unwrap();
        assert_eq!(c.mesh.n_theta, 64);
        assert!(c.resolve().is_ok());
    }

    #[test]
    fn unknown_key_reports_path() {
        let e = RunConfig::from_json(r#"{"mesh": {"n_theta": 32, "nr": 4}}"#).unwrap_err();
        assert_eq!(e.path, "mesh.nr");
        assert!(e.message.contains("unknown field"), "{}", e.message);
    }

    #[test]
    fn wrong_type_reports_path() {
        let e = RunConfig::from_json(r#"{"solver": {"tol": "small"}}"#).unwrap_err();
        assert_eq!(e.path, "solver.tol");
    }

    #[test]
    fn monomial_overrides() {
        let c = RunConfig::from_json(r#"{"coefficients": {"preset": "zero-gamma1", "gamma1": [[0, 0, 2.0], [2, 0, 0.5]]}}"#).unwrap();
        let r = c.resolve().unwrap();
        let v = r.coefficients.eval(gmk_core::Point::new(2.0, 0.0)).unwrap();
        assert_eq!(v.gamma1, 4.0);
    }

    #[test]
    fn range_violations_name_the_field() {
        let e = RunConfig::from_json(r#"{"domain": {"delta_corner": 0.5}}"#).unwrap().resolve().err().unwrap();
        assert_eq!(e.path, "domain.delta_corner");
        let e = RunConfig::from_json(r#"{"convergence": {"levels": [32, 64]}}"#).unwrap().resolve().err().unwrap();
        assert_eq!(e.path, "convergence.levels");
    }
}
