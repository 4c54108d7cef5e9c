//! Self-consistency checks over a range of spins.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use super::special::{
    binom_cdf_half, gauss_recurrence_coefficients, hyp_at_minus_one, lambda_complete, lambda_quadrature,
};
use super::spectrum::{cap_eigenvalues, chernoff_bounds_check, hemisphere_eigenvalues, Spin};
use crate::error::{invalid, Result};
use crate::numeric::ln_binomial;

/// Largest `j` accepted by [`verify_suite`].
pub const MAX_VERIFY_J: u32 = 60;

const THETAS: [f64; 8] = [0.3, 0.7, 1.0, FRAC_PI_2, 2.0, 2.5, 3.0, PI];
const ORACLE_MAX_TWICE_J: u32 = 20;
const ORACLE_RTOL: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-12;
const CLOSED_FORM_TOL: f64 = 1e-10;
const STEP_SPINS: [u32; 3] = [10, 50, 200];

/// Cap eigenvalue by direct quadrature:
/// `λ_m = 2 C(2j, j+m) Λ^Θ(j+m, j−m) / sin²(Θ/2)`.
pub fn cap_eigenvalue_oracle(spin: Spin, twice_m: i64, theta: f64) -> Result<f64> {
    let t = spin.twice() as i64;
    if twice_m.abs() > t || (t + twice_m) % 2 != 0 {
        return invalid(format!("2m = {twice_m} is not a level of spin {spin}"));
    }
    let p = ((t + twice_m) / 2) as u32;
    let q = ((t - twice_m) / 2) as u32;
    let s2 = (0.5 * theta).sin().powi(2);
    let big_lambda = lambda_quadrature(p, q, theta)?;
    Ok(2.0 * ln_binomial(t as u64, p as u64).exp() * big_lambda / s2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub violations: Vec<String>,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases", self.name, self.cases)?;
        if !self.passed() {
            write!(f, ", {} violations; first: {}", self.violations.len(), self.violations[0])?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub j_max: u32,
    pub checks: Vec<CheckResult>,
    /// Spins whose tail ranges contain no `m`.
    pub vacuous_chernoff: Vec<u32>,
    /// `H̄(j_max, π/2)` in bits.
    pub hemisphere_entropy: f64,
    /// `|H̄(j_max, π/2) − log₂ j_max|`.
    pub log_gap: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Runs every spectral self-check for integer and half-integer spins up to
/// `j_max` (at least 1, at most [`MAX_VERIFY_J`]). Tail bounds need
/// `j >= 2` and are checked from there.
pub fn verify_suite(j_max: u32) -> Result<VerifyReport> {
    if !(1..=MAX_VERIFY_J).contains(&j_max) {
        return invalid(format!("j_max must lie in 1..={MAX_VERIFY_J}, got {j_max}"));
    }
    let max_twice = 2 * j_max;
    let spins = || (1..=max_twice).map(Spin::from_twice);
    let mut checks = Vec::new();

    let mut oracle = CheckResult::new("cap eigenvalues vs quadrature");
    for spin in spins().take_while(|s| s.twice() <= ORACLE_MAX_TWICE_J) {
        for &theta in &THETAS {
            let spec = cap_eigenvalues(spin, theta)?;
            for (twice_m, &lambda) in spin.twice_ms().zip(&spec.lambdas) {
                let want = cap_eigenvalue_oracle(spin, twice_m, theta)?;
                let err = rel_err(lambda, want);
                oracle.record(err <= ORACLE_RTOL, || {
                    format!("j = {spin}, 2m = {twice_m}, Θ = {theta}: rel err {err:.3e}")
                });
            }
        }
    }
    checks.push(oracle);

    let mut reflection = CheckResult::new("Λ^Θ(p,q) + Λ^(π−Θ)(q,p) = Λ^π(p,q)");
    for p in 0..=12u32 {
        for q in 0..=12u32 {
            for &theta in &THETAS[..7] {
                let lhs = lambda_quadrature(p, q, theta)? + lambda_quadrature(q, p, PI - theta)?;
                let want = lambda_complete(p, q);
                let err = rel_err(lhs, want);
                reflection.record(err <= IDENTITY_TOL, || {
                    format!("p = {p}, q = {q}, Θ = {theta}: rel err {err:.3e}")
                });
            }
        }
    }
    checks.push(reflection);

    let mut pairing = CheckResult::new("hemisphere λ_m + λ_−m = 2/(2j+1)");
    let mut complement = CheckResult::new("complementary caps sum to the identity");
    let mut closed_form = CheckResult::new("hemisphere series vs binomial CDF");
    let mut normalization = CheckResult::new("Σ λ_m = 1");
    for spin in spins() {
        let d = spin.dim() as f64;
        let hemi = hemisphere_eigenvalues(spin)?;
        let series = cap_eigenvalues(spin, FRAC_PI_2)?;
        for (twice_m, (&a, &b)) in spin.twice_ms().zip(hemi.lambdas.iter().zip(&series.lambdas)) {
            let sum = a + hemi.lambda(-twice_m);
            pairing.record((sum - 2.0 / d).abs() <= IDENTITY_TOL, || {
                format!("j = {spin}, 2m = {twice_m}: sum {sum}")
            });
            closed_form.record((a - b).abs() <= CLOSED_FORM_TOL, || {
                format!("j = {spin}, 2m = {twice_m}: {a} vs {b}")
            });
        }
        for &theta in &THETAS[..7] {
            let north = cap_eigenvalues(spin, theta)?;
            let south = cap_eigenvalues(spin, PI - theta)?;
            // (1 − cos Θ) λ_m(Θ) + (1 + cos Θ) λ_−m(π − Θ) = 2/(2j+1)
            let (wn, ws) = (1.0 - theta.cos(), 1.0 + theta.cos());
            for twice_m in spin.twice_ms() {
                let total = wn * north.lambda(twice_m) + ws * south.lambda(-twice_m);
                complement.record((total - 2.0 / d).abs() <= IDENTITY_TOL, || {
                    format!("j = {spin}, 2m = {twice_m}, Θ = {theta}: {total}")
                });
            }
            let s = north.sum();
            normalization.record((s - 1.0).abs() <= CLOSED_FORM_TOL, || {
                format!("j = {spin}, Θ = {theta}: Σ = {s}")
            });
        }
    }
    checks.extend([pairing, complement, closed_form, normalization]);

    let mut chernoff = CheckResult::new("tail bounds on hemisphere eigenvalues");
    let mut vacuous_chernoff = Vec::new();
    for j in 2..=j_max {
        let report = chernoff_bounds_check(Spin::from_twice(2 * j))?;
        if report.is_vacuous() {
            vacuous_chernoff.push(j);
        }
        for row in report.rows() {
            chernoff.record(row.satisfied, || {
                format!("j = {j}, m = {}: λ = {:e} not in [{:e}, {:e}]", row.m, row.lambda, row.lower, row.upper)
            });
        }
    }
    checks.push(chernoff);

    let mut recurrence = CheckResult::new("Gauss recurrence at z = −1");
    for a in 2..=30u64 {
        let mut prev = 1.0;
        for b in 1..a {
            let (alpha, beta) = gauss_recurrence_coefficients(a, b);
            let stepped = alpha * prev + beta;
            let direct = hyp_at_minus_one(a, b)?;
            let err = rel_err(stepped, direct);
            recurrence.record(err <= CLOSED_FORM_TOL, || format!("a = {a}, b = {b}: rel err {err:.3e}"));
            prev = direct;
        }
    }
    checks.push(recurrence);

    let mut step = CheckResult::new("hemisphere spectrum approaches a step");
    let mut last = (f64::INFINITY, f64::INFINITY);
    for &j in &STEP_SPINS {
        // G(j ± ⌊j/2⌋; 2j+1, 1/2) → 1 above and → 0 below
        let (n, h) = (2 * j as u64 + 1, j as u64 / 2);
        let high = 1.0 - binom_cdf_half(j as u64 + h, n)?;
        let low = binom_cdf_half(j as u64 - h, n)?;
        step.record(high < last.0 && low < last.1, || {
            format!("j = {j}: gaps ({high:e}, {low:e}) did not shrink")
        });
        last = (high, low);
    }
    checks.push(step);

    let hemisphere_entropy = hemisphere_eigenvalues(Spin::from_twice(max_twice))?.entropy_bits();
    Ok(VerifyReport {
        j_max,
        checks,
        vacuous_chernoff,
        hemisphere_entropy,
        log_gap: (hemisphere_entropy - (j_max as f64).log2()).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_spin_half_whole_sphere() {
        let s = Spin::from_twice(1);
        assert!((cap_eigenvalue_oracle(s, 1, PI).unwrap() - 0.5).abs() < 1e-13);
        assert!((cap_eigenvalue_oracle(s, 1, FRAC_PI_2).unwrap() - 0.75).abs() < 1e-13);
        assert!(cap_eigenvalue_oracle(s, 0, PI).is_err());
    }

    #[test]
    fn suite_passes_for_small_spins() {
        let r = verify_suite(4).unwrap();
        for c in &r.checks {
            assert!(c.passed(), "{c}");
            assert!(c.cases > 0, "{}", c.name);
        }
        assert!(verify_suite(0).is_err());
        assert_eq!(verify_suite(2).unwrap().vacuous_chernoff, vec![2]);
        assert!(verify_suite(61).is_err());
    }
}
