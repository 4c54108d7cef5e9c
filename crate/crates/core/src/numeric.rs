//! Small numeric helpers shared across modules: compensated summation,
//! log-domain accumulation and log-factorials.

use statrs::function::factorial;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator of floats.
pub fn sum_compensated<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// `ln Σ exp(x_i)` for a list of log-terms, robust to huge and tiny values.
///
/// Returns `-∞` for an empty list or when every term is `-∞`.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s = sum_compensated(terms.iter().map(|&t| (t - max).exp()));
    max + s.ln()
}

pub fn ln_factorial(n: u64) -> f64 {
    factorial::ln_factorial(n)
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    factorial::ln_binomial(n, k)
}

/// `−p log₂ p` with `0 · log 0 = 0`.
pub fn neg_plog2p(p: f64) -> f64 {
    if p > 0.0 && p < 1.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Shannon entropy in bits of a probability vector; non-positive entries
/// contribute nothing.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    sum_compensated(probs.iter().map(|&p| neg_plog2p(p)))
}
