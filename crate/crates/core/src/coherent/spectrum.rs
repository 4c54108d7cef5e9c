use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::fmt;

use num_complex::Complex64;

use super::special::{binom_cdf_half, ln_hyp2f1_unit_gap_with};
use crate::error::{invalid, Error, Result};
use crate::numeric::{ln_binomial, ln_factorial, neg_plog2p, sum_compensated};
use crate::qcore::PureState;
use crate::randsphere::TradeoffPoint;

/// Spin quantum number `j`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Self {
        Self { twice }
    }

    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !(twice >= 0.0) || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return invalid(format!("spin must be a non-negative multiple of 1/2, got {j}"));
        }
        Ok(Self { twice: twice as u32 })
    }

    pub fn j(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    /// `D = 2j + 1`
    pub fn dim(&self) -> usize {
        self.twice as usize + 1
    }

    /// `2m` for `m = −j, …, j`, ascending.
    pub fn twice_ms(&self) -> impl Iterator<Item = i64> {
        let t = self.twice as i64;
        (0..=t).map(move |k| 2 * k - t)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Spin coherent state `|θ, φ⟩` with amplitudes ordered `m = j, j−1, …, −j`.
pub fn coherent_state(spin: Spin, theta: f64, phi: f64) -> Result<PureState> {
    if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
        return invalid(format!("need θ ∈ [0, π] and finite φ, got ({theta}, {phi})"));
    }
    let t = spin.twice as i64;
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let amps = (0..=t)
        .map(|k| {
            // k = j − m
            let up = (t - k) as u64; // j + m
            let down = k as u64; // j − m
            let twice_m = t - 2 * k;
            let magnitude = power_product(0.5 * ln_binomial(t as u64, up), c, up, s, down);
            Complex64::from_polar(magnitude, -(twice_m as f64) * 0.5 * phi)
        })
        .collect();
    PureState::normalized(amps)
}

/// `exp(ln_coef) · c^a · s^b` with `0^0 = 1`, in log domain when possible.
fn power_product(ln_coef: f64, c: f64, a: u64, s: f64, b: u64) -> f64 {
    let ln_pow = |x: f64, e: u64| if e == 0 { Some(0.0) } else if x <= 0.0 { None } else { Some(e as f64 * x.ln()) };
    match (ln_pow(c, a), ln_pow(s, b)) {
        (Some(lc), Some(ls)) => (ln_coef + lc + ls).exp(),
        _ => 0.0,
    }
}

/// Eigenvalues `λ_m` of the uniform coherent-state mixture over a cap of
/// half-angle `Θ`, indexed `m = −j, …, j` ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct CapSpectrum {
    pub spin: Spin,
    pub theta: f64,
    pub lambdas: Vec<f64>,
}

impl CapSpectrum {
    /// `λ_m` for a given `2m`.
    pub fn lambda(&self, twice_m: i64) -> f64 {
        let idx = (twice_m + self.spin.twice as i64) / 2;
        self.lambdas[idx as usize]
    }

    pub fn sum(&self) -> f64 {
        sum_compensated(self.lambdas.iter().copied())
    }

    pub fn entropy_bits(&self) -> f64 {
        sum_compensated(self.lambdas.iter().map(|&l| neg_plog2p(l.max(0.0))))
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= PI) {
        return invalid(format!("cap half-angle must lie in (0, π], got {theta}"));
    }
    Ok(())
}

/// Cap eigenvalues from the terminating hypergeometric form
///
/// `λ_m = (2j)! sin^{2(j−m)}(Θ/2) / ((j+m)! (j−m+1)!) · F(−j−m, j−m+1; j−m+2; sin²(Θ/2))`,
///
/// assembled in log domain so that large `j` neither overflows nor
/// underflows before the final exponentiation.
pub fn cap_eigenvalues(spin: Spin, theta: f64) -> Result<CapSpectrum> {
    check_theta(theta)?;
    let half = 0.5 * theta;
    let (s, c) = (half.sin(), half.cos());
    let (z, one_minus_z) = (s * s, c * c);
    let t = spin.twice as u64;
    let ln_top = ln_factorial(t);
    let lambdas = spin
        .twice_ms()
        .map(|twice_m| {
            let p = (t as i64 + twice_m) as u64 / 2; // j + m
            let q = t - p; // j − m
            let ln_f = ln_hyp2f1_unit_gap_with(p as u32, q as f64 + 1.0, z, one_minus_z)?;
            let ln_sin = if q == 0 { 0.0 } else { 2.0 * q as f64 * s.ln() };
            let v = (ln_top + ln_sin - ln_factorial(p) - ln_factorial(q + 1) + ln_f).exp();
            if !v.is_finite() {
                return Err(Error::Numeric(format!("λ_m overflow at 2m = {twice_m}")));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CapSpectrum { spin, theta, lambdas })
}

/// Hemisphere spectrum `λ_m = 2/(2j+1) · G(j+m; 2j+1, 1/2)`.
pub fn hemisphere_eigenvalues(spin: Spin) -> Result<CapSpectrum> {
    let n = spin.twice as u64 + 1;
    let scale = 2.0 / n as f64;
    let lambdas = spin
        .twice_ms()
        .map(|twice_m| {
            let y = (spin.twice as i64 + twice_m) as u64 / 2;
            Ok(scale * binom_cdf_half(y, n)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CapSpectrum {
        spin,
        theta: FRAC_PI_2,
        lambdas,
    })
}

/// Entropy in bits of the cap mixture.
pub fn cap_entropy(spin: Spin, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if theta == PI {
        return Ok((spin.dim() as f64).log2());
    }
    let spec = if theta == FRAC_PI_2 {
        hemisphere_eigenvalues(spin)?
    } else {
        cap_eigenvalues(spin, theta)?
    };
    Ok(spec.entropy_bits())
}

/// Bits needed to name one cap: `log₂(4π / (2π(1 − cos Θ)))`.
pub fn cap_information(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if theta >= 1.0 {
        Ok(1.0 - (-theta.cos()).ln_1p() / LN_2)
    } else {
        // 1 − cos Θ = 2 sin²(Θ/2)
        Ok(-2.0 * (0.5 * theta).sin().log2())
    }
}

/// Curve points `(Θ, log₂ D − H̄, Ĩ)` for half-angles given in descending
/// order.
pub fn tradeoff_curve_coherent(spin: Spin, thetas: &[f64]) -> Result<Vec<TradeoffPoint>> {
    if thetas.windows(2).any(|w| !(w[0] > w[1])) {
        return invalid("cap half-angles must be strictly descending");
    }
    let h = (spin.dim() as f64).log2();
    thetas
        .iter()
        .map(|&theta| {
            let delta = if theta == PI { 0.0 } else { h - cap_entropy(spin, theta)? };
            Ok(TradeoffPoint {
                param: theta,
                delta_h_bits: delta,
                info_bits: cap_information(theta)?,
            })
        })
        .collect()
}

/// `Ī_min / ΔH̄ = 1 / (log₂(2j+1) − H̄(j, π/2))` for each spin.
pub fn ratio_convergence(spins: &[Spin]) -> Result<Vec<(Spin, f64)>> {
    if spins.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("spins must be strictly increasing");
    }
    spins
        .iter()
        .map(|&spin| {
            let delta = (spin.dim() as f64).log2() - hemisphere_eigenvalues(spin)?.entropy_bits();
            Ok((spin, 1.0 / delta))
        })
        .collect()
}

/// One eigenvalue checked against the tail bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffRow {
    pub m: f64,
    pub lambda: f64,
    pub lower: f64,
    pub upper: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffReport {
    pub spin: Spin,
    /// Rows with `m < −1 − j^{2/3}`.
    pub lower_tail: Vec<ChernoffRow>,
    /// Rows with `m > 1 + j^{2/3}`.
    pub upper_tail: Vec<ChernoffRow>,
}

impl ChernoffReport {
    pub fn rows(&self) -> impl Iterator<Item = &ChernoffRow> {
        self.lower_tail.iter().chain(&self.upper_tail)
    }

    pub fn violations(&self) -> Vec<&ChernoffRow> {
        self.rows().filter(|r| !r.satisfied).collect()
    }

    /// Both index ranges empty.
    pub fn is_vacuous(&self) -> bool {
        self.lower_tail.is_empty() && self.upper_tail.is_empty()
    }
}

/// Checks the hemisphere eigenvalues against
///
/// - `0 ≤ λ_m ≤ e^{−j^{1/3}/3} / j` for `m < −1 − j^{2/3}`,
/// - `2/(2j+1) (1 − e^{−j^{1/3}/3} − 4^{−j}) ≤ λ_m ≤ 1/j` for `m > 1 + j^{2/3}`,
///
/// using strict inequalities on the index ranges.
pub fn chernoff_bounds_check(spin: Spin) -> Result<ChernoffReport> {
    let j = spin.j();
    if j < 2.0 {
        return invalid(format!("Chernoff check needs j >= 2, got {j}"));
    }
    let spec = hemisphere_eigenvalues(spin)?;
    let edge = 1.0 + j.powf(2.0 / 3.0);
    let tail = (-j.cbrt() / 3.0).exp();
    let low_upper = tail / j;
    let high_lower = 2.0 / (2.0 * j + 1.0) * (1.0 - tail - 4f64.powf(-j));
    let high_upper = 1.0 / j;

    let mut report = ChernoffReport {
        spin,
        lower_tail: Vec::new(),
        upper_tail: Vec::new(),
    };
    for (twice_m, &lambda) in spin.twice_ms().zip(&spec.lambdas) {
        let m = twice_m as f64 / 2.0;
        if m < -edge {
            report.lower_tail.push(ChernoffRow {
                m,
                lambda,
                lower: 0.0,
                upper: low_upper,
                satisfied: (0.0..=low_upper).contains(&lambda),
            });
        } else if m > edge {
            report.upper_tail.push(ChernoffRow {
                m,
                lambda,
                lower: high_lower,
                upper: high_upper,
                satisfied: (high_lower..=high_upper).contains(&lambda),
            });
        }
    }
    Ok(report)
}
