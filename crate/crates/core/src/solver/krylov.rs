//! Jacobi-preconditioned conjugate residual method.
//!
//! For a symmetric matrix `A` and diagonal preconditioner `D`, every iterate
//! minimizes `‖r‖_{D⁻¹} = √(rᵀD⁻¹r)` over the Krylov space, so the recorded
//! residual history is nonincreasing.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::sparse::{dot, CsrMatrix};

#[derive(Debug, Clone)]
pub struct KrylovOutput<T> {
    pub x: Vec<T>,
    /// `‖r_k‖_{D⁻¹} / ‖b‖_{D⁻¹}`, starting with the initial residual.
    pub residual_history: Vec<T>,
    pub iterations: usize,
}

fn axpy<T: Scalar>(y: &mut [T], a: T, x: &[T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + a * xi;
    }
}

pub fn conjugate_residual<T: Scalar>(a: &CsrMatrix<T>, b: &[T], tol: T, max_iter: usize) -> Result<KrylovOutput<T>> {
    let n = a.n;
    let inv_diag: Vec<T> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > T::zero() { T::one() / d } else { T::one() })
        .collect();
    let precond = |v: &[T]| -> Vec<T> { v.iter().zip(&inv_diag).map(|(&x, &d)| x * d).collect() };

    let mut x = vec![T::zero(); n];
    let mut r = b.to_vec();
    let mut z = precond(&r);
    let b_norm = dot(&r, &z).sqrt();
    if b_norm == T::zero() {
        return Ok(KrylovOutput { x, residual_history: vec![T::zero()], iterations: 0 });
    }
    let mut history = vec![T::one()];
    let mut az = a.mul_vec(&z);
    let mut p = z.clone();
    let mut ap = az.clone();
    let mut z_az = dot(&z, &az);

    for it in 1..=max_iter {
        let m_ap = precond(&ap);
        let denom = dot(&ap, &m_ap);
        if denom <= T::zero() {
            break;
        }
        let step = z_az / denom;
        axpy(&mut x, step, &p);
        axpy(&mut r, -step, &ap);
        axpy(&mut z, -step, &m_ap);
        let rel = dot(&r, &z).max(T::zero()).sqrt() / b_norm;
        history.push(rel);
        if rel <= tol {
            return Ok(KrylovOutput { x, residual_history: history, iterations: it });
        }
        a.mul_vec_into(&z, &mut az);
        let z_az_new = dot(&z, &az);
        let beta = z_az_new / z_az;
        z_az = z_az_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
            ap[i] = az[i] + beta * ap[i];
        }
    }
    Err(Error::NonConvergence {
        iterations: history.len() - 1,
        final_residual: history.last().map(|v| v.as_f64()).unwrap_or(f64::NAN),
        residual_history: history.iter().map(|v| v.as_f64()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::sparse::TripletBuilder;

    fn laplacian_1d(n: usize) -> CsrMatrix<f64> {
        let mut b = TripletBuilder::new(n);
        for i in 0..n {
            b.add(i, i, 2.0 + i as f64 * 0.01);
            if i + 1 < n {
                b.add(i, i + 1, -1.0);
                b.add(i + 1, i, -1.0);
            }
        }
        b.build()
    }

    #[test]
    fn solves_spd_system_with_monotone_history() {
        let a = laplacian_1d(50);
        let x_true: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let rhs = a.mul_vec(&x_true);
        let out = conjugate_residual(&a, &rhs, 1e-12, 500).unwrap();
        let err = out.x.iter().zip(&x_true).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
        assert!(out.residual_history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }

    #[test]
    fn zero_rhs_returns_immediately() {
        let a = laplacian_1d(5);
        let out = conjugate_residual(&a, &[0.0; 5], 1e-10, 10).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn reports_nonconvergence_with_history() {
        let a = laplacian_1d(200);
        let rhs = vec![1.0; 200];
        match conjugate_residual(&a, &rhs, 1e-14, 3) {
            Err(Error::NonConvergence { iterations, residual_history, .. }) => {
                assert_eq!(iterations, 3);
                assert_eq!(residual_history.len(), 4);
            }
            other => panic!("expected nonconvergence, got {other:?}"),
        }
    }
}
