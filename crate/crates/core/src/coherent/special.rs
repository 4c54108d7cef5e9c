//! Terminating hypergeometric series, the `p = 1/2` binomial CDF and the
//! adaptive Gauss–Legendre quadrature used to certify the cap spectra.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};
use crate::numeric::{ln_binomial, ln_factorial, log_sum_exp, CompensatedSum};

/// `₂F₁(−p, b; c; z) = Σ_{k=0}^{p} (−p)_k (b)_k / ((c)_k k!) z^k`.
///
/// Summed forward with compensated accumulation; consecutive terms are
/// combined in pairs first so that alternating terms partially cancel
/// before they reach the accumulator.
pub fn hyp2f1_terminating(p: u32, b: f64, c: f64, z: f64) -> Result<f64> {
    if !b.is_finite() || !c.is_finite() || !z.is_finite() {
        return invalid("hypergeometric parameters must be finite");
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return invalid(format!("c = {c} is a non-positive integer"));
    }
    let mut acc = CompensatedSum::new();
    let mut term = 1.0;
    let mut pending: Option<f64> = None;
    for k in 0..=p {
        match pending.take() {
            Some(prev) => acc.add(prev + term),
            None => pending = Some(term),
        }
        if k == p {
            break;
        }
        let kf = k as f64;
        term *= (kf - p as f64) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
    }
    if let Some(last) = pending {
        acc.add(last);
    }
    Ok(acc.value())
}

/// `ln ₂F₁(−p, b; b+1; z)` for `z ∈ [0, 1]`, `b > 0`, given `1 − z`
/// separately to avoid cancellation.
///
/// Uses the reflection `F(−p, b; b+1; z) = p!/(b+1)_p · Σ_k (b)_k/k! (1−z)^k`,
/// whose terms are all non-negative.
pub(crate) fn ln_hyp2f1_unit_gap_with(p: u32, b: f64, z: f64, one_minus_z: f64) -> Result<f64> {
    if !(b > 0.0) {
        return invalid(format!("b must be positive, got {b}"));
    }
    if !(0.0..=1.0).contains(&z) || !(0.0..=1.0).contains(&one_minus_z) {
        return invalid(format!("z must lie in [0, 1], got {z}"));
    }
    let mut ln_prefactor = CompensatedSum::new();
    for i in 1..=p {
        let i = i as f64;
        ln_prefactor.add(i.ln() - (b + i).ln());
    }
    let ln_w = one_minus_z.ln();
    let mut terms = Vec::with_capacity(p as usize + 1);
    let mut ln_t = 0.0;
    for k in 0..=p {
        if k > 0 {
            let kf = k as f64;
            ln_t += ((b + kf - 1.0) / kf).ln() + ln_w;
        }
        terms.push(ln_t);
    }
    Ok(ln_prefactor.value() + log_sum_exp(&terms))
}

/// `₂F₁(−p, b; b+1; z)` on `[0, 1]` by the cancellation-free reflected
/// series.
pub fn hyp2f1_unit_gap(p: u32, b: f64, z: f64) -> Result<f64> {
    ln_hyp2f1_unit_gap_with(p, b, z, 1.0 - z).map(f64::exp)
}

/// Σ_{x=0}^{y} C(n, x) 2^{−n}, summed directly (intended for the lower half).
fn binom_half_lower_sum(y: u64, n: u64) -> f64 {
    let ln_half_n = n as f64 * LN_2;
    let mut acc = CompensatedSum::new();
    for x in 0..=y {
        acc.add((ln_binomial(n, x) - ln_half_n).exp());
    }
    acc.value()
}

/// Binomial CDF `G(y; n, 1/2)`.
///
/// The upper half is evaluated as `1 − G(n−1−y)`, so that
/// `G(y) + G(n−1−y) = 1` holds to rounding, and the median of an odd `n`
/// is exactly `1/2`.
pub fn binom_cdf_half(y: u64, n: u64) -> Result<f64> {
    if y > n {
        return invalid(format!("y = {y} out of range 0..={n}"));
    }
    if y == n {
        return Ok(1.0);
    }
    let twice = 2 * y + 1;
    if twice == n {
        Ok(0.5)
    } else if twice < n {
        Ok(binom_half_lower_sum(y, n))
    } else {
        Ok(1.0 - binom_half_lower_sum(n - 1 - y, n))
    }
}

/// `F(a, b; b+1; −1) = b!(a−b−1)!/(a−1)! · [1 − 2^{1−a} Σ_{x=0}^{b−1} C(a−1, x)]`
/// for integers `a > b ≥ 1`.
///
/// The bracket equals `G(a−1−b; a−1, 1/2)` (the complementary binomial
/// tail), which is evaluated without cancellation; the factorial prefactor
/// is formed in log domain.
pub fn hyp_at_minus_one(a: u64, b: u64) -> Result<f64> {
    if b < 1 || a <= b {
        return invalid(format!("need a > b >= 1, got a = {a}, b = {b}"));
    }
    let ln_pref = ln_factorial(b) + ln_factorial(a - b - 1) - ln_factorial(a - 1);
    let bracket = binom_cdf_half(a - 1 - b, a - 1)?;
    let v = ln_pref.exp() * bracket;
    if !v.is_finite() {
        return Err(Error::Numeric(format!("F({a},{b};{};-1) is not finite", b + 1)));
    }
    Ok(v)
}

/// Gauss recurrence coefficients `α(b) = b/(a−b)`, `β(b) = −2^{1−a} α(b)`
/// linking `F(a,b;b+1;−1) = α F(a,b−1;b;−1) + β`.
pub fn gauss_recurrence_coefficients(a: u64, b: u64) -> (f64, f64) {
    let alpha = b as f64 / (a as f64 - b as f64);
    let beta = -(2f64.powi(1 - a as i32)) * alpha;
    (alpha, beta)
}

const GL_ORDER: usize = 64;
/// Absolute tolerance of the quadrature; tightened to relative for
/// integrals below one.
pub const QUADRATURE_TOL: f64 = 1e-13;
const MAX_DEPTH: u32 = 40;

fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

fn gl_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = CompensatedSum::new();
    for (x, w) in nodes.iter().zip(weights) {
        acc.add(w * f(mid + half * x));
    }
    half * acc.value()
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = gl_panel(f, a, m);
    let right = gl_panel(f, m, b);
    let refined = left + right;
    let tol = QUADRATURE_TOL * refined.abs().min(1.0);
    let err = (refined - whole).abs();
    if err <= tol || err < f64::MIN_POSITIVE {
        return Ok(refined);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureFailure(QUADRATURE_TOL));
    }
    Ok(adaptive(f, a, m, left, depth + 1)? + adaptive(f, m, b, right, depth + 1)?)
}

/// Adaptive Gauss–Legendre integral of `f` over `[a, b]` with degree-64
/// panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = gl_panel(&f, a, b);
    adaptive(&f, a, b, whole, 0)
}

/// `Λ^Θ(p, q) = ∫₀^{Θ/2} cos^{2p+1}ϑ sin^{2q+1}ϑ dϑ` by quadrature.
pub fn lambda_quadrature(p: u32, q: u32, theta: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return invalid(format!("Θ must lie in [0, π], got {theta}"));
    }
    let (ep, eq) = (2 * p as i32 + 1, 2 * q as i32 + 1);
    integrate(|t: f64| t.cos().powi(ep) * t.sin().powi(eq), 0.0, 0.5 * theta)
}

/// `Λ^π(p, q) = p! q! / (2 (p+q+1)!)`, the complete beta integral.
pub fn lambda_complete(p: u32, q: u32) -> f64 {
    let (p, q) = (p as u64, q as u64);
    (ln_factorial(p) + ln_factorial(q) - ln_factorial(p + q + 1)).exp() / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn empty_series_is_one() {
        assert_eq!(hyp2f1_terminating(0, 3.3, 1.7, 0.9).unwrap(), 1.0);
    }

    #[test]
    fn binomial_theorem_form() {
        // F(−n, b; b; −z) = (1 + z)^n
        let v = hyp2f1_terminating(3, 2.5, 2.5, -0.7).unwrap();
        assert!((v - 1.7f64.powi(3)).abs() < 1e-14);
    }

    #[test]
    fn three_term_hand_sum() {
        // 1 + (−2)(1)/(2·1)·½ + (−2)(−1)(1)(2)/((2)(3)·2)·¼ = 1 − ½ + 1/12
        let v = hyp2f1_terminating(2, 1.0, 2.0, 0.5).unwrap();
        assert!((v - (1.0 - 0.5 + 1.0 / 12.0)).abs() < 1e-15);
    }

    #[test]
    fn invalid_c_rejected() {
        assert!(hyp2f1_terminating(2, 1.0, 0.0, 0.5).is_err());
        assert!(hyp2f1_terminating(2, 1.0, -3.0, 0.5).is_err());
        assert!(hyp2f1_terminating(2, 1.0, -2.5, 0.5).is_ok());
    }

    #[test]
    fn reflected_series_matches_direct_sum() {
        for p in 0..12 {
            for &b in &[1.0, 2.0, 3.5, 7.0] {
                for &z in &[0.0, 0.1, 0.5, 0.9, 1.0] {
                    let direct = hyp2f1_terminating(p, b, b + 1.0, z).unwrap();
                    let refl = hyp2f1_unit_gap(p, b, z).unwrap();
                    assert!(
                        (direct - refl).abs() <= 1e-10 * direct.abs().max(1e-3),
                        "p={p} b={b} z={z}: {direct} vs {refl}"
                    );
                }
            }
        }
    }

    #[test]
    fn binom_cdf_values() {
        assert_eq!(binom_cdf_half(5, 5).unwrap(), 1.0);
        assert_eq!(binom_cdf_half(50, 101).unwrap(), 0.5);
        assert!((binom_cdf_half(2, 5).unwrap() - 0.5).abs() < 1e-15);
        assert!((binom_cdf_half(1, 5).unwrap() - 6.0 / 32.0).abs() < 1e-15);
        assert!((binom_cdf_half(0, 4).unwrap() - 1.0 / 16.0).abs() < 1e-16);
        assert!(binom_cdf_half(6, 5).is_err());
        for n in 1..60u64 {
            for y in 0..n {
                let s = binom_cdf_half(y, n).unwrap() + binom_cdf_half(n - 1 - y, n).unwrap();
                assert!((s - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn hyp_at_minus_one_special_cases() {
        assert!((hyp_at_minus_one(3, 1).unwrap() - 0.375).abs() < 1e-15);
        for a in 2..40u64 {
            let closed = (1.0 - 2f64.powi(1 - a as i32)) / (a as f64 - 1.0);
            assert!((hyp_at_minus_one(a, 1).unwrap() - closed).abs() < 1e-15);
        }
        // a = b + 1 = 2: one recurrence step from F(2,0;1;−1) = 1
        let (alpha, beta) = gauss_recurrence_coefficients(2, 1);
        assert!((hyp_at_minus_one(2, 1).unwrap() - (alpha + beta)).abs() < 1e-15);
        assert!(hyp_at_minus_one(3, 3).is_err());
        assert!(hyp_at_minus_one(3, 0).is_err());
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let v = integrate(|x| x.powi(10), 0.0, 1.0).unwrap();
        assert!((v - 1.0 / 11.0).abs() < 1e-15);
        let (_, w) = gauss_legendre();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn lambda_quadrature_examples() {
        assert!((lambda_quadrature(2, 3, PI).unwrap() - 1.0 / 120.0).abs() < 1e-15);
        assert!((lambda_complete(2, 3) - 1.0 / 120.0).abs() < 1e-16);
        assert!((lambda_quadrature(0, 0, FRAC_PI_2).unwrap() - 0.25).abs() < 1e-15);
        let lhs = lambda_quadrature(1, 2, 1.0).unwrap() + lambda_quadrature(2, 1, PI - 1.0).unwrap();
        assert!((lhs - lambda_complete(1, 2)).abs() < 1e-15);
        assert!(lambda_quadrature(1, 1, 4.0).is_err());
    }
}
