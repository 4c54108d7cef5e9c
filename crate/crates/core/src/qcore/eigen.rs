//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation acts on a `(p, q)` plane with the unitary
//!
//! ```text
//!   U_pp = c          U_pq = s
//!   U_qp = −s e^{−iα}  U_qq = c e^{−iα}
//! ```
//!
//! where `a_pq = |a_pq| e^{iα}`, which first removes the phase of the pivot
//! and then applies the real symmetric Jacobi rotation.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Off-diagonal Frobenius norm threshold, relative to `max(1, ‖A‖_F)`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order, with eigenvectors stored as the columns
/// of `vectors` in the same order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Eigenvector `k` as a column.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.vectors.dim();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `Σ λ_k v_k v_k†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut m = ComplexMatrix::zeros(n);
        for (k, &lam) in self.values.iter().enumerate() {
            let v = self.vector(k);
            m.add_scaled(&ComplexMatrix::outer(&v, &v), lam);
        }
        m
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let scale = m.as_slice().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let err = m.hermiticity_error();
    if err > HERMITIAN_TOL * scale {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian (deviation {err:e})"
        )));
    }
    Ok(())
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut a: Vec<Complex64> = m.hermitian_part().as_slice().to_vec();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm().max(1.0);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = apq / r; // e^{iα}
                let phase_conj = phase.conj();

                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = -phase_conj * s;
                let u_qq = phase_conj * c;

                // A ← A U (columns p, q)
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = aip * u_pp + aiq * u_qp;
                    a[i * n + q] = aip * u_pq + aiq * u_qq;
                }
                // A ← U† A (rows p, q)
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = u_pp.conj() * apj + u_qp.conj() * aqj;
                    a[q * n + j] = u_pq.conj() * apj + u_qq.conj() * aqj;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;

                if let Some(v) = v.as_mut() {
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * u_pp + viq * u_qp;
                        v[(i, q)] = vip * u_pq + viq * u_qq;
                    }
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a, n) > threshold {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| {
        let mut sorted = ComplexMatrix::zeros(n);
        for (new, &old) in order.iter().enumerate() {
            for i in 0..n {
                sorted[(i, new)] = v[(i, old)];
            }
        }
        sorted
    });
    Ok((values, vectors))
}

/// Real spectrum of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    jacobi(m, false).map(|(values, _)| values)
}

/// Spectrum and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let (values, vectors) = jacobi(m, true)?;
    Ok(HermitianEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}
