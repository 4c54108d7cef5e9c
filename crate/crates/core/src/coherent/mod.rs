//! Spin coherent states and the spectra of their uniform mixtures over
//! polar caps.
//!
//! Cap eigenvalues come from a terminating hypergeometric series evaluated
//! in log domain; the hemisphere case has a closed form through the
//! `p = 1/2` binomial CDF. [`verify_suite`] cross-checks both against
//! direct quadrature and the tail bounds.

mod special;
mod spectrum;
mod verify;

pub use special::{
    binom_cdf_half, gauss_recurrence_coefficients, hyp2f1_terminating, hyp2f1_unit_gap,
    hyp_at_minus_one, integrate, lambda_complete, lambda_quadrature, QUADRATURE_TOL,
};
pub use spectrum::{
    cap_eigenvalues, cap_entropy, cap_information, chernoff_bounds_check, coherent_state,
    hemisphere_eigenvalues, ratio_convergence, tradeoff_curve_coherent, CapSpectrum,
    ChernoffReport, ChernoffRow, Spin,
};
pub use verify::{cap_eigenvalue_oracle, verify_suite, CheckResult, VerifyReport, MAX_VERIFY_J};
