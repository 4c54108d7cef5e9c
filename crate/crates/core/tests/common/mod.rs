#![allow(dead_code)]

use decompq_core::ensembles::ClassicalJointState;
use decompq_core::qcore::{ComplexMatrix, PureState};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    let d = m.dim();
    DMatrix::from_fn(d, d, |r, c| m[(r, c)])
}

/// Eigenvalues from nalgebra, ascending.
pub fn nalgebra_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = to_nalgebra(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// von Neumann entropy in bits of a density matrix, via nalgebra.
pub fn entropy_oracle(m: &ComplexMatrix) -> f64 {
    nalgebra_eigenvalues(m)
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

pub fn random_ket(rng: &mut impl Rng, dim: usize) -> PureState {
    let amps = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::normalized(amps).unwrap()
}

pub fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

pub fn random_joint(rng: &mut impl Rng, d_sys: usize, d_env: usize) -> ClassicalJointState {
    let weights = random_weights(rng, d_env);
    let branches = weights.into_iter().map(|w| (w, random_ket(rng, d_sys))).collect();
    ClassicalJointState::from_pure(branches).unwrap()
}

/// `Σ_k w_k |ψ_k⟩⟨ψ_k|` over the listed branches, with its total weight.
pub fn group_mixture(joint: &ClassicalJointState, members: &[usize]) -> (f64, ComplexMatrix) {
    let d = joint.d_sys();
    let mut m = ComplexMatrix::zeros(d);
    let mut w = 0.0;
    for &k in members {
        let b = &joint.branches()[k];
        m.add_scaled(b.state.matrix(), b.weight);
        w += b.weight;
    }
    (w, m)
}

/// `(Ī, ΔH̄)` of a grouping computed from scratch.
pub fn score_oracle(joint: &ClassicalJointState, groups: &[Vec<usize>]) -> (f64, f64) {
    let all: Vec<usize> = (0..joint.d_env()).collect();
    let (_, total) = group_mixture(joint, &all);
    let h = entropy_oracle(&total);
    let mut info = 0.0;
    let mut h_bar = 0.0;
    for g in groups {
        let (w, m) = group_mixture(joint, g);
        if w > 0.0 {
            info -= w * w.log2();
            h_bar += w * entropy_oracle(&m.scale(1.0 / w));
        }
    }
    (info, h - h_bar)
}

/// Every set partition of `0..n`, built by inserting each label into an
/// existing block or a new one.
pub fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q: Vec<Vec<usize>> = p.clone();
                q[b].push(k);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![k]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Brute-force `Ī_min` subject to `ΔH̄ ≥ delta_h − 1e-9`, or `None`.
pub fn brute_force_min(joint: &ClassicalJointState, delta_h: f64) -> Option<f64> {
    all_partitions(joint.d_env())
        .iter()
        .map(|p| score_oracle(joint, p))
        .filter(|&(_, d)| d >= delta_h - 1e-9)
        .map(|(i, _)| i)
        .min_by(f64::total_cmp)
}
