//! Haar-random kets grouped into Fubini–Study balls of radius `φ`.
//!
//! A uniform mixture of kets inside a ball of radius `φ` around `|c⟩` has
//! one eigenvalue `1 − (D−1)/D · sin²φ` along `|c⟩` and `D − 1` eigenvalues
//! `sin²φ / D`. A ball occupies a fraction `sin^{2(D−1)} φ` of projective
//! Hilbert space, so naming one of them costs `−(D−1) log₂ sin²φ` bits.
//! These closed forms give the information/entropy tradeoff curve; the
//! samplers below check them by Monte Carlo.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::numeric::neg_plog2p;
use crate::qcore::{ComplexMatrix, DensityOperator, PureState};

use std::f64::consts::{FRAC_PI_2, LN_2};

/// Samples per independent RNG stream in the Monte-Carlo mixture.
pub const SAMPLES_PER_STREAM: usize = 4096;

/// One sample of an information–entropy curve, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    /// Curve parameter: ball radius, cap half-angle, or requested reduction.
    pub param: f64,
    pub delta_h_bits: f64,
    pub info_bits: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereModelParams {
    dim: usize,
    phi: f64,
}

impl SphereModelParams {
    pub fn new(dim: usize, phi: f64) -> Result<Self> {
        if dim < 2 {
            return invalid(format!("Hilbert-space dimension must be >= 2, got {dim}"));
        }
        if !(phi > 0.0 && phi <= FRAC_PI_2) {
            return invalid(format!("ball radius must lie in (0, π/2], got {phi}"));
        }
        Ok(Self { dim, phi })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    fn sin2(&self) -> f64 {
        self.phi.sin().powi(2)
    }
}

/// `(λ_center, λ_rest)` of the uniform ball mixture.
pub fn ball_spectrum(params: SphereModelParams) -> (f64, f64) {
    let d = params.dim as f64;
    let rest = params.sin2() / d;
    (1.0 - (d - 1.0) * rest, rest)
}

/// Entropy in bits of the uniform mixture over one ball.
pub fn sphere_entropy(params: SphereModelParams) -> f64 {
    let d = params.dim as f64;
    let s2 = params.sin2();
    if s2 == 1.0 {
        return d.log2();
    }
    let a = (d - 1.0) / d * s2;
    neg_plog2p(1.0 - a) - a * (s2 / d).log2()
}

/// `log₂ D − H̄(φ)`
pub fn sphere_entropy_reduction(params: SphereModelParams) -> f64 {
    if params.sin2() == 1.0 {
        return 0.0;
    }
    (params.dim as f64).log2() - sphere_entropy(params)
}

/// Bits needed to name one ball: `−(D−1) log₂ sin²φ`.
pub fn sphere_information(params: SphereModelParams) -> f64 {
    let s2 = params.sin2();
    if s2 == 1.0 {
        return 0.0;
    }
    -((params.dim - 1) as f64) * s2.log2()
}

/// Density operator of the uniform mixture over the ball around `center`.
pub fn ball_mixture_density(center: &PureState, phi: f64) -> Result<DensityOperator> {
    let params = SphereModelParams::new(center.dim(), phi)?;
    let (top, rest) = ball_spectrum(params);
    let mut m = ComplexMatrix::identity(center.dim()).scale(rest);
    m.add_scaled(&center.projector(), top - rest);
    DensityOperator::new(m)
}

/// `dĨ/dΔH̄`; at `φ = π/2` the slope diverges and is flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffSlope {
    pub value: f64,
    pub divergent: bool,
}

/// Marginal information cost per bit of entropy reduction,
/// `D / (sin²φ · ln(1 + D cot²φ))`.
pub fn tradeoff_derivative(params: SphereModelParams) -> TradeoffSlope {
    let d = params.dim as f64;
    let cot2 = (params.phi.cos() / params.phi.sin()).powi(2);
    let denom = params.sin2() * (d * cot2).ln_1p();
    if params.phi == FRAC_PI_2 || denom <= 0.0 {
        return TradeoffSlope {
            value: f64::INFINITY,
            divergent: true,
        };
    }
    TradeoffSlope {
        value: d / denom,
        divergent: false,
    }
}

/// Slope near `φ = π/2` with `ε = π/2 − φ`: `D / ln(1 + D ε²)`.
pub fn small_cap_slope(dim: usize, eps: f64) -> f64 {
    let d = dim as f64;
    d / (d * eps * eps).ln_1p()
}

/// Information near `φ = π/2`: `(D − 1) ε² / ln 2`.
pub fn small_cap_information(dim: usize, eps: f64) -> f64 {
    (dim as f64 - 1.0) * eps * eps / LN_2
}

/// Curve points `(φ, ΔH̄, Ĩ)` for radii given in descending order.
pub fn tradeoff_curve(dim: usize, phis: &[f64]) -> Result<Vec<TradeoffPoint>> {
    if phis.windows(2).any(|w| !(w[0] > w[1])) {
        return invalid("radii must be strictly descending");
    }
    phis.iter()
        .map(|&phi| {
            let p = SphereModelParams::new(dim, phi)?;
            Ok(TradeoffPoint {
                param: phi,
                delta_h_bits: sphere_entropy_reduction(p),
                info_bits: sphere_information(p),
            })
        })
        .collect()
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random ket from i.i.d. complex Gaussian amplitudes.
pub fn sample_haar_rng<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PureState> {
    if dim < 2 {
        return invalid(format!("Hilbert-space dimension must be >= 2, got {dim}"));
    }
    PureState::normalized((0..dim).map(|_| complex_gaussian(rng)).collect())
}

pub fn sample_haar(dim: usize, seed: u64) -> Result<PureState> {
    sample_haar_rng(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Uniform ket inside the Fubini–Study ball of radius `phi` around
/// `center`: the angle is drawn from the CDF `(sin θ / sin φ)^{2(D−1)}`
/// and the direction uniformly in the orthogonal complement.
pub fn sample_cap_rng<R: Rng + ?Sized>(center: &PureState, phi: f64, rng: &mut R) -> Result<PureState> {
    let params = SphereModelParams::new(center.dim(), phi)?;
    let d = params.dim;
    let u: f64 = rng.random();
    let sin_theta = (phi.sin() * u.powf(1.0 / (2.0 * (d as f64 - 1.0)))).min(1.0);
    let theta = sin_theta.asin().min(phi);

    let c = center.amplitudes();
    let mut dir: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    let overlap: Complex64 = c.iter().zip(&dir).map(|(a, b)| a.conj() * b).sum();
    for (x, a) in dir.iter_mut().zip(c) {
        *x -= overlap * a;
    }
    let norm = dir.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    let amps = c
        .iter()
        .zip(&dir)
        .map(|(a, x)| a * cos_t + x * (sin_t / norm))
        .collect();
    PureState::normalized(amps)
}

pub fn sample_cap(center: &PureState, phi: f64, seed: u64) -> Result<PureState> {
    sample_cap_rng(center, phi, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Average of `|ψ⟩⟨ψ|` over `samples` cap draws. Stream `s` of the seeded
/// generator produces samples `s·4096 ..`; partial sums are merged in
/// stream order, so the result does not depend on the thread count.
pub fn empirical_cap_mixture(center: &PureState, phi: f64, samples: usize, seed: u64) -> Result<DensityOperator> {
    SphereModelParams::new(center.dim(), phi)?;
    if samples == 0 {
        return invalid("need at least one sample");
    }
    let streams = samples.div_ceil(SAMPLES_PER_STREAM);
    let partials = (0..streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let count = SAMPLES_PER_STREAM.min(samples - s * SAMPLES_PER_STREAM);
            let mut acc = ComplexMatrix::zeros(center.dim());
            for _ in 0..count {
                acc.add_scaled(&sample_cap_rng(center, phi, &mut rng)?.projector(), 1.0);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = ComplexMatrix::zeros(center.dim());
    for p in &partials {
        total.add_scaled(p, 1.0);
    }
    DensityOperator::new(total.scale(1.0 / samples as f64).hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{fubini_study_angle, von_neumann_entropy};

    fn params(d: usize, phi: f64) -> SphereModelParams {
        SphereModelParams::new(d, phi).unwrap()
    }

    fn binary(p: f64) -> f64 {
        neg_plog2p(p) + neg_plog2p(1.0 - p)
    }

    #[test]
    fn parameter_validation() {
        assert!(SphereModelParams::new(1, 1.0).is_err());
        assert!(SphereModelParams::new(2, 0.0).is_err());
        assert!(SphereModelParams::new(2, 1.6).is_err());
        assert!(SphereModelParams::new(2, FRAC_PI_2).is_ok());
    }

    #[test]
    fn whole_space_ball() {
        for d in [2, 7, 101] {
            let p = params(d, FRAC_PI_2);
            assert_eq!(sphere_entropy(p), (d as f64).log2());
            assert_eq!(sphere_information(p), 0.0);
            assert_eq!(sphere_entropy_reduction(p), 0.0);
        }
    }

    #[test]
    fn qubit_quarter_ball() {
        // eigenvalues (1 − sin²φ/2, sin²φ/2) = (3/4, 1/4) at φ = π/4
        let p = params(2, std::f64::consts::FRAC_PI_4);
        assert!((sphere_entropy(p) - binary(0.75)).abs() < 1e-14);
        assert!((sphere_information(p) - 1.0).abs() < 1e-14);
        let rho = ball_mixture_density(&PureState::basis(2, 0), std::f64::consts::FRAC_PI_4).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::diagonal(&[0.75, 0.25])) < 1e-15);
    }

    #[test]
    fn ball_mixture_limits() {
        let c = sample_haar(4, 3).unwrap();
        let full = ball_mixture_density(&c, FRAC_PI_2).unwrap();
        assert!(full.matrix().max_abs_diff(DensityOperator::maximally_mixed(4).matrix()) < 1e-15);
        let tiny = ball_mixture_density(&c, 1e-9).unwrap();
        assert!(tiny.matrix().max_abs_diff(&c.projector()) < 1e-15);
    }

    #[test]
    fn ball_mixture_entropy_matches_closed_form_on_grid() {
        for i in 0..50 {
            let d = 2 + i * 2;
            let c = PureState::basis(d, 0);
            for k in 1..=50 {
                let phi = FRAC_PI_2 * k as f64 / 50.0;
                let rho = ball_mixture_density(&c, phi).unwrap();
                let (top, rest) = ball_spectrum(params(d, phi));
                assert!((top + (d - 1) as f64 * rest - 1.0).abs() < 1e-15);
                let h = von_neumann_entropy(&rho).unwrap();
                assert!((h - sphere_entropy(params(d, phi))).abs() < 1e-12, "D = {d}, φ = {phi}");
            }
        }
    }

    #[test]
    fn derivative_is_flagged_at_whole_space() {
        let s = tradeoff_derivative(params(101, FRAC_PI_2));
        assert!(s.divergent);
        assert_eq!(s.value, f64::INFINITY);
        assert!(!tradeoff_derivative(params(101, 1.025)).divergent);
    }

    #[test]
    fn curve_requires_descending_radii() {
        assert!(tradeoff_curve(5, &[0.5, 1.0]).is_err());
        assert!(tradeoff_curve(5, &[1.0, 1.0]).is_err());
        assert!(tradeoff_curve(5, &[1.0, 0.0]).is_err());
        let pts = tradeoff_curve(5, &[FRAC_PI_2, 1.0]).unwrap();
        assert_eq!((pts[0].delta_h_bits, pts[0].info_bits), (0.0, 0.0));
    }

    #[test]
    fn samples_are_normalized_and_reproducible() {
        for seed in 0..20 {
            let psi = sample_haar(2, seed).unwrap();
            let n: f64 = psi.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert_eq!(sample_haar(5, 42).unwrap(), sample_haar(5, 42).unwrap());
        assert_ne!(sample_haar(5, 42).unwrap(), sample_haar(5, 43).unwrap());
    }

    #[test]
    fn cap_samples_stay_in_the_ball() {
        let c = sample_haar(6, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for phi in [0.1, 0.8, FRAC_PI_2] {
            for _ in 0..500 {
                let psi = sample_cap_rng(&c, phi, &mut rng).unwrap();
                assert!(fubini_study_angle(&c, &psi).unwrap() <= phi + 1e-7);
            }
        }
        let degenerate = sample_cap(&c, 1e-9, 5).unwrap();
        assert!(fubini_study_angle(&c, &degenerate).unwrap() < 1e-6);
    }
}
