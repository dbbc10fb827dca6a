//! Discrete check of `∫ U·LU = ∫ U·QU + ½ ∮ U·βU`.
//!
//! Both sides are integrated over the mesh polygon: centroid rule on
//! triangles, midpoint rule on boundary chords with the chord normal. The
//! polygon satisfies the divergence theorem exactly, so the defect is pure
//! quadrature error, `O(h²)` for smooth fields.

use serde::Serialize;

use crate::boundary::beta_of;
use crate::error::Result;
use crate::geometry::Mesh;
use crate::linalg::StateVector;
use crate::operator::coefficients::CoefficientSet;
use crate::operator::field::{FieldJet, SmoothField};
use crate::operator::{matrices_at, q_checked, Point};
use crate::scalar::Scalar;
use crate::solver::SolutionField;

pub enum EnergyField<'a, T> {
    Analytic(&'a dyn SmoothField<T>),
    Discrete(&'a SolutionField<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport<T> {
    /// `∫ U·LU`
    pub source_term: T,
    /// `∫ U·QU`
    pub volume_term: T,
    /// `½ ∮ U·βU`
    pub boundary_term: T,
    /// `|source − volume − boundary|`
    pub defect: T,
    /// `defect / max(|source|, |volume|, |boundary|)`
    pub relative_defect: T,
}

pub fn energy_identity<T: Scalar>(field: &EnergyField<'_, T>, coefficients: &CoefficientSet<T>, mesh: &Mesh<T>) -> Result<EnergyReport<T>> {
    let mut source = T::zero();
    let mut volume = T::zero();
    for k in 0..mesh.triangles.len() {
        let c = mesh.centroid(k);
        let third = T::one() / T::lit(3.0);
        let jet = match field {
            EnergyField::Analytic(f) => f.jet(c),
            EnergyField::Discrete(u) => {
                let (dx, dy) = u.gradient_in(mesh, k);
                FieldJet { value: u.eval_in(mesh, k, [third; 3]), dx, dy }
            }
        };
        let v = coefficients.eval(c)?;
        let lu = matrices_at(c, &v).apply(&jet);
        let q = q_checked(c, &v)?.as_mat();
        let area = mesh.triangle_area(k);
        source = source + area * jet.value.dot(lu);
        volume = volume + area * q.quadratic(jet.value);
    }

    let mut boundary = T::zero();
    for edge in &mesh.boundary_edges {
        let [a, b] = edge.vertices;
        let (pa, pb) = (mesh.vertices[a], mesh.vertices[b]);
        let len = pa.dist(pb);
        let (tx, ty) = ((pb.x - pa.x) / len, (pb.y - pa.y) / len);
        let m = Point::new((pa.x + pb.x) * T::half(), (pa.y + pb.y) * T::half());
        let u: StateVector<T> = match field {
            EnergyField::Analytic(f) => f.value(m),
            EnergyField::Discrete(s) => (s.values[a] + s.values[b]).scale(T::half()),
        };
        boundary = boundary + len * T::half() * beta_of(m, ty, -tx).quadratic(u);
    }

    let defect = (source - volume - boundary).abs();
    let scale = source.abs().max(volume.abs()).max(boundary.abs());
    let relative_defect = if scale > T::zero() { defect / scale } else { T::zero() };
    Ok(EnergyReport { source_term: source, volume_term: volume, boundary_term: boundary, defect, relative_defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::operator::field::{ConstantField, TrigManufactured};

    #[test]
    fn constant_field_volume_term_is_twice_area() {
        let mesh: Mesh<f64> = DomainSpec::default().generate_mesh(32, 8).unwrap();
        let f = ConstantField(StateVector::new(1.0, 0.0));
        let r = energy_identity(&EnergyField::Analytic(&f), &CoefficientSet::default(), &mesh).unwrap();
        assert!((r.volume_term - 2.0 * mesh.area()).abs() < 1e-12);
    }

    #[test]
    fn defect_shrinks_quadratically() {
        let spec = DomainSpec::default();
        let c = CoefficientSet::default();
        let d: Vec<f64> = [128, 256]
            .iter()
            .map(|&n| {
                let mesh = spec.generate_mesh(n, n / 4).unwrap();
                energy_identity(&EnergyField::Analytic(&TrigManufactured), &c, &mesh).unwrap().defect
            })
            .collect();
        let ratio = d[0] / d[1];
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    }
}
