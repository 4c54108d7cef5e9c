use num_complex::Complex64;

use super::eigen::{hermitian_eigen, hermitian_eigenvalues};
use super::matrix::ComplexMatrix;
use crate::error::{invalid, Error, Result};
use crate::numeric::{neg_plog2p, sum_compensated};

/// Structural validation tolerance (norms, traces, Hermiticity).
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Eigenvalues above `−SPECTRAL_TOL` are accepted and clamped to zero.
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Normalized ket in a `dim`-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return invalid("pure state needs at least one amplitude");
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("pure state has non-finite amplitudes");
        }
        let norm2: f64 = sum_compensated(amplitudes.iter().map(|z| z.norm_sqr()));
        if (norm2 - 1.0).abs() > STRUCTURE_TOL {
            return invalid(format!("pure state not normalized (norm² = {norm2})"));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes the given (non-zero) vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return invalid("cannot normalize a zero or non-finite vector");
        }
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if herm > STRUCTURE_TOL {
            return invalid(format!("density operator not Hermitian (deviation {herm:e})"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STRUCTURE_TOL || tr.im.abs() > STRUCTURE_TOL {
            return invalid(format!("density operator trace is {tr}, expected 1"));
        }
        let min = hermitian_eigenvalues(&matrix)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -SPECTRAL_TOL {
            return Err(Error::NotAState(min));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix that is Hermitian with unit trace by construction
    /// (convex mixtures of valid states). Hermiticity is enforced exactly.
    pub(crate) fn from_mixture(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Convex combination `Σ w_k ρ_k`; weights must be non-negative and sum
    /// to one.
    pub fn mixture(terms: &[(f64, &DensityOperator)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return invalid("mixture of zero states");
        };
        let dim = first.dim();
        let mut m = ComplexMatrix::zeros(dim);
        let mut total = 0.0;
        for &(w, rho) in terms {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: rho.dim(),
                });
            }
            if !(w >= 0.0) {
                return invalid("mixture weights must be non-negative");
            }
            m.add_scaled(rho.matrix(), w);
            total += w;
        }
        if (total - 1.0).abs() > STRUCTURE_TOL {
            return invalid(format!("mixture weights sum to {total}, expected 1"));
        }
        Ok(Self::from_mixture(m))
    }
}

/// `|ψ⟩⟨ψ|`
pub fn pure_density(psi: &PureState) -> DensityOperator {
    DensityOperator {
        matrix: psi.projector(),
    }
}

/// Entropy in bits of a spectrum, clamping values in `[−1e-10, 0)` to zero.
pub fn spectrum_entropy(values: &[f64]) -> Result<f64> {
    if let Some(&bad) = values.iter().find(|&&v| v < -SPECTRAL_TOL) {
        return Err(Error::NotAState(bad));
    }
    Ok(sum_compensated(values.iter().map(|&v| neg_plog2p(v.max(0.0)))).max(0.0))
}

/// von Neumann entropy `−tr(ρ log₂ ρ)` in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    spectrum_entropy(&rho.eigenvalues()?)
}

/// Fubini–Study angle `arccos |⟨a|b⟩|` in `[0, π/2]`.
pub fn fubini_study_angle(a: &PureState, b: &PureState) -> Result<f64> {
    let overlap = a.inner(b)?.norm().min(1.0);
    Ok(overlap.acos())
}

/// Reduced system state of a joint state on `d_sys ⊗ d_env` (system index
/// major).
pub fn partial_trace_env(joint: &ComplexMatrix, d_sys: usize, d_env: usize) -> Result<DensityOperator> {
    if d_sys == 0 || d_env == 0 || joint.dim() != d_sys * d_env {
        return Err(Error::DimensionMismatch {
            expected: d_sys * d_env,
            got: joint.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(d_sys);
    for i in 0..d_sys {
        for j in 0..d_sys {
            out[(i, j)] = (0..d_env).map(|k| joint[(i * d_env + k, j * d_env + k)]).sum();
        }
    }
    DensityOperator::new(out)
}

/// Eigenvector of the largest eigenvalue, as a normalized pure state.
pub fn dominant_eigenvector(m: &ComplexMatrix) -> Result<PureState> {
    let eig = hermitian_eigen(m)?;
    PureState::normalized(eig.vector(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn plus() -> PureState {
        PureState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }

    #[test]
    fn pure_density_of_basis_state() {
        let rho = pure_density(&PureState::basis(2, 0));
        assert_eq!(rho.matrix(), &ComplexMatrix::diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn pure_density_of_plus_has_all_halves() {
        let rho = pure_density(&plus());
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.matrix()[(i, j)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
            }
        }
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_ket() {
        assert!(PureState::from_real(&[1.0, 1.0]).is_err());
        assert!(PureState::normalized(vec![Complex64::new(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityOperator::new(ComplexMatrix::diagonal(&[0.5, 0.6])).is_err());
        assert!(matches!(
            DensityOperator::new(ComplexMatrix::diagonal(&[1.1, -0.1])),
            Err(Error::NotAState(_))
        ));
        // Slightly negative eigenvalue within tolerance is accepted.
        assert!(DensityOperator::new(ComplexMatrix::diagonal(&[1.0 + 5e-11, -5e-11])).is_ok());
    }

    #[test]
    fn entropy_values() {
        assert_eq!(von_neumann_entropy(&pure_density(&plus())).unwrap(), 0.0);
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(spectrum_entropy(&[1.1, -0.1]), Err(Error::NotAState(_))));
        assert_eq!(spectrum_entropy(&[1.0, -1e-11]).unwrap(), 0.0);
    }

    #[test]
    fn entropy_of_paired_qubit_mixture() {
        // (|0⟩⟨0| + |+⟩⟨+|)/2 has eigenvalues (1 ± 1/√2)/2.
        let rho = DensityOperator::mixture(&[
            (0.5, &pure_density(&PureState::basis(2, 0))),
            (0.5, &pure_density(&plus())),
        ])
        .unwrap();
        let p: f64 = (1.0 + FRAC_1_SQRT_2) / 2.0;
        let h = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        assert!((von_neumann_entropy(&rho).unwrap() - h).abs() < 1e-12);
        assert!((h - 0.600876).abs() < 1e-6);
    }

    #[test]
    fn fubini_study_examples() {
        let zero = PureState::basis(2, 0);
        let one = PureState::basis(2, 1);
        let phased = PureState::new(
            plus()
                .amplitudes()
                .iter()
                .map(|z| z * Complex64::from_polar(1.0, 0.7))
                .collect(),
        )
        .unwrap();
        assert!(fubini_study_angle(&plus(), &phased).unwrap() < 1e-7);
        assert!((fubini_study_angle(&zero, &one).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((fubini_study_angle(&zero, &plus()).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!(fubini_study_angle(&zero, &PureState::basis(3, 0)).is_err());
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let rho_a = ComplexMatrix::from_real_rows(&[vec![0.7, 0.2], vec![0.2, 0.3]]).unwrap();
        let rho_b = ComplexMatrix::diagonal(&[0.1, 0.5, 0.4]);
        let red = partial_trace_env(&rho_a.kron(&rho_b), 2, 3).unwrap();
        assert!(red.matrix().max_abs_diff(&rho_a) < 1e-15);

        let bell = PureState::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
        let red = partial_trace_env(&bell.projector(), 2, 2).unwrap();
        assert!(red.matrix().max_abs_diff(&ComplexMatrix::diagonal(&[0.5, 0.5])) < 1e-15);

        assert!(partial_trace_env(&bell.projector(), 3, 2).is_err());
    }
}
