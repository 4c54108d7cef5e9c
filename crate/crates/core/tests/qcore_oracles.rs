mod common;

use common::{entropy_oracle, nalgebra_eigenvalues, random_ket, rng};
use decompq_core::qcore::{
    fubini_study_angle, hermitian_eigen, hermitian_eigenvalues, partial_trace_env, pure_density,
    von_neumann_entropy, ComplexMatrix, DensityOperator, PureState,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

/// Columns of a Haar-ish unitary by Gram–Schmidt on random kets.
fn random_unitary(seed: u64, d: usize) -> ComplexMatrix {
    let mut r = rng(seed);
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < d {
        let mut v = random_ket(&mut r, d).amplitudes().to_vec();
        for c in &cols {
            let ip: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= ip * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let mut data = vec![Complex64::new(0.0, 0.0); d * d];
    for (c, col) in cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            data[r * d + c] = *z;
        }
    }
    ComplexMatrix::from_vec(d, data).unwrap()
}

fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    u.matmul(m).matmul(&u.adjoint())
}

/// Characteristic polynomial coefficients `c_0 … c_n` (`c_n = 1`) by
/// Faddeev–LeVerrier.
fn char_poly(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n);
    for k in 1..=n {
        // coefficients of a Hermitian matrix are real
        let mut next = a.matmul(&m);
        next.add_scaled(&ComplexMatrix::identity(n), c[n - k + 1].re);
        c[n - k] = -a.matmul(&next).trace() / k as f64;
        m = next;
    }
    c.iter().map(|z| z.re).collect()
}

fn companion_roots(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    let comp = DMatrix::from_fn(n, n, |r, col| {
        if r == 0 {
            -c[n - 1 - col]
        } else if r == col + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = comp.complex_eigenvalues().iter().map(|z| z.re).collect();
    roots.sort_by(f64::total_cmp);
    roots
}

fn spectrum_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..1.0, 1..=6).prop_map(|gaps| {
        let mut acc = -2.0;
        gaps.into_iter()
            .map(|g| {
                acc += g;
                acc
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_characteristic_polynomial(spec in spectrum_strategy(), seed in any::<u64>()) {
        let d = spec.len();
        let a = conjugate(&random_unitary(seed, d), &ComplexMatrix::diagonal(&spec));
        let mut ours = hermitian_eigenvalues(&a).unwrap();
        ours.reverse();
        let roots = companion_roots(&char_poly(&a));
        for ((x, y), z) in ours.iter().zip(&roots).zip(&spec) {
            prop_assert!((x - y).abs() < 1e-9, "{ours:?} vs {roots:?}");
            prop_assert!((x - z).abs() < 1e-9);
        }
        let na = nalgebra_eigenvalues(&a);
        for (x, y) in ours.iter().zip(&na) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn eigenvectors_reconstruct(spec in spectrum_strategy(), seed in any::<u64>()) {
        let d = spec.len();
        let a = conjugate(&random_unitary(seed, d), &ComplexMatrix::diagonal(&spec));
        let eig = hermitian_eigen(&a).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&a) < 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn entropy_bounds_and_unitary_invariance(probs in prop::collection::vec(0.0f64..1.0, 1..=6), seed in any::<u64>()) {
        let total: f64 = probs.iter().sum();
        prop_assume!(total > 1e-3);
        let p: Vec<f64> = probs.iter().map(|x| x / total).collect();
        let d = p.len();
        let diag = ComplexMatrix::diagonal(&p);
        let rho = DensityOperator::new(diag.clone()).unwrap();
        let rotated = DensityOperator::new(conjugate(&random_unitary(seed, d), &diag).hermitian_part()).unwrap();
        let h = von_neumann_entropy(&rho).unwrap();
        let hr = von_neumann_entropy(&rotated).unwrap();
        prop_assert!(h >= -1e-12 && h <= (d as f64).log2() + 1e-12);
        prop_assert!((h - hr).abs() < 1e-9);
        prop_assert!((hr - entropy_oracle(rotated.matrix())).abs() < 1e-9);
    }

    #[test]
    fn pure_states_have_zero_entropy(seed in any::<u64>(), d in 1usize..6) {
        let psi = random_ket(&mut rng(seed), d);
        prop_assert!(von_neumann_entropy(&pure_density(&psi)).unwrap().abs() < 1e-10);
        prop_assert!(fubini_study_angle(&psi, &psi).unwrap().abs() < 1e-6);
    }

    #[test]
    fn partial_trace_is_linear(seed in any::<u64>(), t in 0.0f64..1.0) {
        let mut r = rng(seed);
        let (ds, de) = (2, 3);
        let a = pure_density(&random_ket(&mut r, ds * de)).into_matrix();
        let b = pure_density(&random_ket(&mut r, ds * de)).into_matrix();
        let mut mix = a.scale(t);
        mix.add_scaled(&b, 1.0 - t);
        let lhs = partial_trace_env(&mix, ds, de).unwrap();
        let mut rhs = partial_trace_env(&a, ds, de).unwrap().into_matrix().scale(t);
        rhs.add_scaled(partial_trace_env(&b, ds, de).unwrap().matrix(), 1.0 - t);
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-12);
    }
}

#[test]
fn partial_trace_of_product_state() {
    let mut r = rng(7);
    let s = random_ket(&mut r, 3);
    let e = random_ket(&mut r, 4);
    let joint = s.projector().kron(&e.projector());
    let reduced = partial_trace_env(&joint, 3, 4).unwrap();
    assert!(reduced.matrix().max_abs_diff(&s.projector()) < 1e-12);
}

#[test]
fn entangled_pure_state_entropy_matches_schmidt_weights() {
    // √p |00⟩ + √(1−p) |11⟩ has reduced entropy h(p)
    let p: f64 = 0.3;
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    amps[0] = Complex64::new(p.sqrt(), 0.0);
    amps[3] = Complex64::new((1.0 - p).sqrt(), 0.0);
    let psi = PureState::new(amps).unwrap();
    let reduced = partial_trace_env(&psi.projector(), 2, 2).unwrap();
    let h = -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
    assert!((von_neumann_entropy(&reduced).unwrap() - h).abs() < 1e-12);
}

#[test]
fn degenerate_and_large_spectra() {
    let mut r = rng(11);
    for d in [8, 16, 32] {
        let spec: Vec<f64> = (0..d).map(|k| (k / 3) as f64 * 0.5 + r.random_range(0.0..1e-13)).collect();
        let a = conjugate(&random_unitary(d as u64, d), &ComplexMatrix::diagonal(&spec));
        let ours = hermitian_eigenvalues(&a).unwrap();
        let na = nalgebra_eigenvalues(&a);
        for (x, y) in ours.iter().rev().zip(&na) {
            assert!((x - y).abs() < 1e-9, "d = {d}");
        }
    }
}
