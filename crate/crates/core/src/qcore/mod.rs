//! Complex Hermitian linear algebra, quantum state types and entropy.

mod eigen;
mod matrix;
mod state;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::ComplexMatrix;
pub use state::{
    dominant_eigenvector, fubini_study_angle, partial_trace_env, pure_density, spectrum_entropy,
    von_neumann_entropy, DensityOperator, PureState, SPECTRAL_TOL, STRUCTURE_TOL,
};
