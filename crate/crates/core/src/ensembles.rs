//! POVMs on the environment, classically correlated joint states, induced
//! ensembles and their entropy/information reports.
//!
//! A measurement `{E_r}` on the environment of `ρ_total` yields outcome `r`
//! with probability `p_r = tr(ρ_total E_r)` and leaves the system in
//! `ρ_r = tr_E(ρ_total E_r) / p_r`. The ensemble `{p_r, ρ_r}` always
//! averages back to the reduced state `ρ = tr_E(ρ_total)`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numeric::{shannon_bits, sum_compensated};
use crate::qcore::{
    hermitian_eigenvalues, partial_trace_env, pure_density, von_neumann_entropy, ComplexMatrix,
    DensityOperator, PureState, SPECTRAL_TOL, STRUCTURE_TOL,
};

/// Tolerance on POVM positivity and completeness.
pub const POVM_TOL: f64 = 1e-10;
/// Largest joint dimension accepted by the dense path.
pub const MAX_DENSE_DIM: usize = 256;
/// Dense-path outcome probabilities at or below this are treated as zero.
const DENSE_ZERO_PROB: f64 = 1e-14;

/// Generalized measurement on a `d_env`-dimensional environment.
#[derive(Debug, Clone)]
pub struct Povm {
    d_env: usize,
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return invalid("POVM needs at least one element");
        };
        let d_env = first.dim();
        let mut total = ComplexMatrix::zeros(d_env);
        for (r, e) in elements.iter().enumerate() {
            if e.dim() != d_env {
                return Err(Error::DimensionMismatch {
                    expected: d_env,
                    got: e.dim(),
                });
            }
            let min = hermitian_eigenvalues(e)?.last().copied().unwrap_or(0.0);
            if min < -POVM_TOL {
                return invalid(format!("POVM element {r} is not positive (eigenvalue {min:e})"));
            }
            total.add_scaled(e, 1.0);
        }
        let err = total.max_abs_diff(&ComplexMatrix::identity(d_env));
        if err > POVM_TOL {
            return invalid(format!("POVM elements do not sum to identity (deviation {err:e})"));
        }
        Ok(Self { d_env, elements })
    }

    pub fn d_env(&self) -> usize {
        self.d_env
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }
}

/// Disjoint grouping of the environment labels `0..n` (displayed 1-based).
///
/// Stored in canonical form: each group sorted ascending and groups ordered
/// by their smallest element, so structural equality is partition equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    groups: Vec<Vec<usize>>,
}

impl Partition {
    /// Groups use 0-based labels.
    pub fn new(n: usize, mut groups: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return invalid("partition of an empty set");
        }
        let mut seen = vec![false; n];
        for g in groups.iter_mut() {
            if g.is_empty() {
                return invalid("partition groups must be nonempty");
            }
            g.sort_unstable();
            for &k in g.iter() {
                if k >= n {
                    return invalid(format!("label {} out of range 1..={n}", k + 1));
                }
                if std::mem::replace(&mut seen[k], true) {
                    return invalid(format!("label {} appears in more than one group", k + 1));
                }
            }
        }
        if let Some(k) = seen.iter().position(|&s| !s) {
            return invalid(format!("label {} is not covered", k + 1));
        }
        groups.sort_unstable_by_key(|g| g[0]);
        Ok(Self { n, groups })
    }

    /// Groups given with 1-based labels, as written in the text.
    pub fn from_one_based(n: usize, groups: &[&[usize]]) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(groups.len());
        for g in groups {
            if g.contains(&0) {
                return invalid("1-based labels start at 1");
            }
            zero_based.push(g.iter().map(|&k| k - 1).collect());
        }
        Self::new(n, zero_based)
    }

    /// Builds a partition from a block label per element, e.g. a restricted
    /// growth string.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let n = labels.len();
        let blocks = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut groups = vec![Vec::new(); blocks];
        for (k, &b) in labels.iter().enumerate() {
            groups[b].push(k);
        }
        groups.retain(|g| !g.is_empty());
        Self::new(n, groups)
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            n,
            groups: (0..n).map(|k| vec![k]).collect(),
        }
    }

    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            groups: vec![(0..n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    /// Block index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (b, g) in self.groups.iter().enumerate() {
            for &k in g {
                labels[k] = b;
            }
        }
        labels
    }

    pub fn is_refinement_of(&self, coarser: &Partition) -> bool {
        let labels = coarser.labels();
        self.n == coarser.n
            && self
                .groups
                .iter()
                .all(|g| g.iter().all(|&k| labels[k] == labels[g[0]]))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let labels: Vec<String> = g.iter().map(|k| (k + 1).to_string()).collect();
            write!(f, "{{{}}}", labels.join(","))?;
        }
        write!(f, "}}")
    }
}

/// Grouping POVM `E_r = Σ_{k∈K_r} P_k` built from diagonal projectors.
pub fn grouping_povm(partition: &Partition) -> Povm {
    let n = partition.n();
    let elements = partition
        .groups()
        .iter()
        .map(|g| {
            let mut diag = vec![0.0; n];
            for &k in g {
                diag[k] = 1.0;
            }
            ComplexMatrix::diagonal(&diag)
        })
        .collect();
    Povm { d_env: n, elements }
}

/// One environment branch `w_k ρ_k ⊗ P_k`.
#[derive(Debug, Clone)]
pub struct Branch {
    pub weight: f64,
    pub state: DensityOperator,
    pub pure: Option<PureState>,
}

/// `ρ_total = Σ_k w_k ρ_k ⊗ P_k` with orthogonal environment projectors.
#[derive(Debug, Clone)]
pub struct ClassicalJointState {
    d_sys: usize,
    branches: Vec<Branch>,
}

impl ClassicalJointState {
    pub fn new(d_sys: usize, branches: Vec<(f64, DensityOperator)>) -> Result<Self> {
        Self::from_branches(
            d_sys,
            branches
                .into_iter()
                .map(|(weight, state)| Branch {
                    weight,
                    state,
                    pure: None,
                })
                .collect(),
        )
    }

    pub fn from_pure(branches: Vec<(f64, PureState)>) -> Result<Self> {
        let Some((_, first)) = branches.first() else {
            return invalid("joint state needs at least one branch");
        };
        let d_sys = first.dim();
        Self::from_branches(
            d_sys,
            branches
                .into_iter()
                .map(|(weight, psi)| Branch {
                    weight,
                    state: pure_density(&psi),
                    pure: Some(psi),
                })
                .collect(),
        )
    }

    /// Equal weights `1/D_E` over the given kets.
    pub fn uniform_pure(states: Vec<PureState>) -> Result<Self> {
        let w = 1.0 / states.len().max(1) as f64;
        Self::from_pure(states.into_iter().map(|s| (w, s)).collect())
    }

    fn from_branches(d_sys: usize, branches: Vec<Branch>) -> Result<Self> {
        if branches.is_empty() {
            return invalid("joint state needs at least one branch");
        }
        for b in &branches {
            if b.state.dim() != d_sys {
                return Err(Error::DimensionMismatch {
                    expected: d_sys,
                    got: b.state.dim(),
                });
            }
            if !(b.weight >= 0.0) || !b.weight.is_finite() {
                return invalid("branch weights must be finite and non-negative");
            }
        }
        let total = sum_compensated(branches.iter().map(|b| b.weight));
        if (total - 1.0).abs() > STRUCTURE_TOL {
            return invalid(format!("branch weights sum to {total}, expected 1"));
        }
        Ok(Self { d_sys, branches })
    }

    pub fn d_sys(&self) -> usize {
        self.d_sys
    }

    pub fn d_env(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn weights(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.weight).collect()
    }

    /// Pure kets of every branch, if all branches carry one.
    pub fn pure_states(&self) -> Option<Vec<&PureState>> {
        self.branches.iter().map(|b| b.pure.as_ref()).collect()
    }

    /// `tr_E(ρ_total) = Σ_k w_k ρ_k`
    pub fn reduced_state(&self) -> DensityOperator {
        let mut m = ComplexMatrix::zeros(self.d_sys);
        for b in &self.branches {
            m.add_scaled(b.state.matrix(), b.weight);
        }
        DensityOperator::from_mixture(m)
    }

    /// Dense joint matrix on `d_sys · d_env`, system index major.
    pub fn to_dense(&self) -> ComplexMatrix {
        let d_env = self.d_env();
        let mut out = ComplexMatrix::zeros(self.d_sys * d_env);
        for (k, b) in self.branches.iter().enumerate() {
            for i in 0..self.d_sys {
                for j in 0..self.d_sys {
                    out[(i * d_env + k, j * d_env + k)] = b.state.matrix()[(i, j)] * b.weight;
                }
            }
        }
        out
    }
}

/// Decomposition `{p_r, ρ_r}` of a system state.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, DensityOperator)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, DensityOperator)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return invalid("ensemble needs at least one member");
        };
        let dim = first.dim();
        for (p, rho) in &members {
            if !(*p >= 0.0) {
                return invalid("ensemble probabilities must be non-negative");
            }
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: rho.dim(),
                });
            }
        }
        let total = sum_compensated(members.iter().map(|(p, _)| *p));
        if (total - 1.0).abs() > STRUCTURE_TOL {
            return invalid(format!("ensemble probabilities sum to {total}, expected 1"));
        }
        // rescale so a single member carries probability exactly 1
        let members = members.into_iter().map(|(p, rho)| (p / total, rho)).collect();
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, DensityOperator)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.members.iter().map(|(p, _)| *p).collect()
    }

    /// `Σ p_r ρ_r`
    pub fn average_state(&self) -> DensityOperator {
        let dim = self.members[0].1.dim();
        let mut m = ComplexMatrix::zeros(dim);
        for (p, rho) in &self.members {
            m.add_scaled(rho.matrix(), *p);
        }
        DensityOperator::from_mixture(m)
    }
}

/// Entropy and information figures of an ensemble, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleReport {
    /// Entropy of the averaged state.
    pub h: f64,
    /// Entropy of each member.
    pub h_r: Vec<f64>,
    /// `Σ p_r H_r`
    pub h_bar: f64,
    /// `H − H̄`
    pub delta_h_bar: f64,
    /// `−Σ p_r log₂ p_r`
    pub info: f64,
}

/// Ensemble induced on a classical joint state by a grouping measurement.
pub fn induced_ensemble(joint: &ClassicalJointState, partition: &Partition) -> Result<Ensemble> {
    if partition.n() != joint.d_env() {
        return Err(Error::DimensionMismatch {
            expected: joint.d_env(),
            got: partition.n(),
        });
    }
    let mut members = Vec::with_capacity(partition.num_groups());
    for g in partition.groups() {
        let p = sum_compensated(g.iter().map(|&k| joint.branches[k].weight));
        if p <= 0.0 {
            continue;
        }
        let mut m = ComplexMatrix::zeros(joint.d_sys());
        for &k in g {
            let b = &joint.branches[k];
            m.add_scaled(b.state.matrix(), b.weight / p);
        }
        members.push((p, DensityOperator::from_mixture(m)));
    }
    Ensemble::new(members)
}

/// Ensemble induced by an arbitrary POVM on a dense joint state.
pub fn induced_ensemble_dense(joint: &ComplexMatrix, d_sys: usize, povm: &Povm) -> Result<Ensemble> {
    let d_env = povm.d_env();
    if d_sys == 0 || joint.dim() != d_sys * d_env {
        return Err(Error::DimensionMismatch {
            expected: d_sys * d_env,
            got: joint.dim(),
        });
    }
    if joint.dim() > MAX_DENSE_DIM {
        return invalid(format!(
            "dense joint dimension {} exceeds {MAX_DENSE_DIM}",
            joint.dim()
        ));
    }
    if joint.hermiticity_error() > STRUCTURE_TOL {
        return invalid("joint state is not Hermitian");
    }
    let tr = joint.trace();
    if (tr.re - 1.0).abs() > STRUCTURE_TOL || tr.im.abs() > STRUCTURE_TOL {
        return invalid(format!("joint state trace is {tr}, expected 1"));
    }

    let mut members = Vec::with_capacity(povm.elements().len());
    for e in povm.elements() {
        // tr_E(ρ_total (1 ⊗ E))_{ij} = Σ_{k,l} ρ_{(i,k),(j,l)} E_{l,k}
        let mut m = ComplexMatrix::zeros(d_sys);
        for i in 0..d_sys {
            for j in 0..d_sys {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d_env {
                    for l in 0..d_env {
                        acc += joint[(i * d_env + k, j * d_env + l)] * e[(l, k)];
                    }
                }
                m[(i, j)] = acc;
            }
        }
        let p = m.trace().re;
        if p <= DENSE_ZERO_PROB {
            continue;
        }
        let rho = m.hermitian_part().scale(1.0 / p);
        let min = hermitian_eigenvalues(&rho)?.last().copied().unwrap_or(0.0);
        if min < -SPECTRAL_TOL {
            return Err(Error::NotAState(min));
        }
        members.push((p, DensityOperator::from_mixture(rho)));
    }
    let total: f64 = members.iter().map(|(p, _)| *p).sum();
    for (p, _) in members.iter_mut() {
        *p /= total;
    }
    Ensemble::new(members)
}

/// Computes `H`, `H_r`, `H̄`, `ΔH̄` and `Ī` for an ensemble.
pub fn analyze(ensemble: &Ensemble) -> Result<EnsembleReport> {
    let h = von_neumann_entropy(&ensemble.average_state())?;
    let h_r = ensemble
        .members()
        .iter()
        .map(|(_, rho)| von_neumann_entropy(rho))
        .collect::<Result<Vec<_>>>()?;
    let h_bar = sum_compensated(ensemble.members().iter().zip(&h_r).map(|((p, _), h)| p * h));
    Ok(EnsembleReport {
        h,
        delta_h_bar: h - h_bar,
        h_bar,
        h_r,
        info: shannon_bits(&ensemble.probabilities()),
    })
}

/// Reduced state of a dense joint state; convenience over
/// [`partial_trace_env`] for a POVM's environment dimension.
pub fn reduced_dense(joint: &ComplexMatrix, d_sys: usize, d_env: usize) -> Result<DensityOperator> {
    partial_trace_env(joint, d_sys, d_env)
}

/// The two-level fixture: `|0⟩, |1⟩, |+⟩, |−⟩` with weight 1/4 each.
pub fn qubit_fixture() -> ClassicalJointState {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let kets = [[1.0, 0.0], [0.0, 1.0], [r, r], [r, -r]];
    ClassicalJointState::uniform_pure(
        kets.iter()
            .map(|a| PureState::from_real(a).expect("fixture kets are normalized"))
            .collect(),
    )
    .expect("fixture weights are valid")
}
