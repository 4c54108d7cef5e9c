//! Exhaustive search over grouping POVMs.
//!
//! Group statistics depend only on the member set, so every subset of the
//! environment labels is tabulated once (`2^n − 1` spectra) and a partition
//! is scored by summing its blocks. The enumeration is split on the first
//! few labels of the restricted growth string and scanned in parallel; the
//! partial results are merged by an order-independent min-reduction.

use rayon::prelude::*;

use super::partitions::{RgsIter, MAX_ENUMERATION_N};
use super::{finish, Optimality, OptimizationResult, FEASIBILITY_TOL};
use crate::ensembles::{ClassicalJointState, Partition};
use crate::error::{invalid, Error, Result};
use crate::numeric::neg_plog2p;
use crate::qcore::{hermitian_eigenvalues, spectrum_entropy, ComplexMatrix};

/// Default width within which two information values count as tied.
pub const DEFAULT_TIE_EPSILON: f64 = 1e-6;

const PREFIX_LEN: usize = 5;

/// Per-subset `−w log₂ w` and `w · H(ρ_S)` for every nonempty subset.
pub(crate) struct SubsetTable {
    info_term: Vec<f64>,
    weighted_entropy: Vec<f64>,
    total_entropy: f64,
}

impl SubsetTable {
    pub(crate) fn build(joint: &ClassicalJointState) -> Result<Self> {
        let n = joint.d_env();
        let size = 1usize << n;
        let d = joint.d_sys();
        let mut weight = vec![0.0; size];
        let mut mix = vec![ComplexMatrix::zeros(d); size];
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let b = &joint.branches()[low];
            let mut m = mix[rest].clone();
            m.add_scaled(b.state.matrix(), b.weight);
            mix[mask] = m;
            weight[mask] = weight[rest] + b.weight;
        }
        let weighted_entropy = (0..size)
            .into_par_iter()
            .map(|mask| {
                let w = weight[mask];
                if mask == 0 || w <= 0.0 {
                    return Ok(0.0);
                }
                let vals = hermitian_eigenvalues(&mix[mask].hermitian_part().scale(1.0 / w))?;
                Ok(w * spectrum_entropy(&vals)?)
            })
            .collect::<Result<Vec<f64>>>()?;
        let info_term = weight.iter().map(|&w| neg_plog2p(w)).collect();
        let total_entropy = weighted_entropy[size - 1];
        Ok(Self {
            info_term,
            weighted_entropy,
            total_entropy,
        })
    }

    fn score(&self, masks: &[usize]) -> (f64, f64) {
        let mut info = 0.0;
        let mut h_bar = 0.0;
        for &m in masks {
            info += self.info_term[m];
            h_bar += self.weighted_entropy[m];
        }
        (info, self.total_entropy - h_bar)
    }
}

/// Depth-first completion of every restricted growth string that starts with
/// `prefix`; `visit` receives the block masks of each complete partition.
fn scan_completions(n: usize, prefix: &[usize], visit: &mut impl FnMut(&[usize])) {
    let mut masks: Vec<usize> = Vec::with_capacity(n);
    for (k, &b) in prefix.iter().enumerate() {
        if b == masks.len() {
            masks.push(0);
        }
        masks[b] |= 1 << k;
    }
    fn rec(k: usize, n: usize, masks: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if k == n {
            visit(masks);
            return;
        }
        for b in 0..masks.len() {
            masks[b] |= 1 << k;
            rec(k + 1, n, masks, visit);
            masks[b] &= !(1 << k);
        }
        masks.push(1 << k);
        rec(k + 1, n, masks, visit);
        masks.pop();
    }
    rec(prefix.len(), n, &mut masks, visit);
}

fn prefixes(n: usize) -> Vec<Vec<usize>> {
    RgsIter::new(n.min(PREFIX_LEN)).collect()
}

fn masks_to_partition(n: usize, masks: &[usize]) -> Partition {
    let groups = masks
        .iter()
        .map(|&m| (0..n).filter(|k| m & (1 << k) != 0).collect())
        .collect();
    Partition::new(n, groups).expect("block masks form a partition")
}

#[derive(Clone, Copy)]
struct PassOne {
    min_info: f64,
    max_delta: f64,
}

/// Exhaustive minimum of `Ī` over grouping POVMs reaching `ΔH̄ ≥ delta_h`,
/// with the default tie width.
pub fn optimal_exhaustive(joint: &ClassicalJointState, delta_h: f64) -> Result<OptimizationResult> {
    optimal_exhaustive_with(joint, delta_h, DEFAULT_TIE_EPSILON)
}

/// As [`optimal_exhaustive`]; partitions within `tie_epsilon` bits of the
/// minimum are tied and resolved by fewer groups, then by the
/// lexicographically smallest canonical form.
pub fn optimal_exhaustive_with(
    joint: &ClassicalJointState,
    delta_h: f64,
    tie_epsilon: f64,
) -> Result<OptimizationResult> {
    let n = joint.d_env();
    if n > MAX_ENUMERATION_N {
        return invalid(format!(
            "exhaustive search limited to D_E <= {MAX_ENUMERATION_N}, got {n}"
        ));
    }
    if !delta_h.is_finite() || delta_h < 0.0 {
        return invalid(format!("requested entropy reduction must be >= 0, got {delta_h}"));
    }
    if !(tie_epsilon >= 0.0) {
        return invalid("tie epsilon must be non-negative");
    }
    let table = SubsetTable::build(joint)?;
    let threshold = delta_h - FEASIBILITY_TOL;
    let prefixes = prefixes(n);

    let pass_one = prefixes
        .par_iter()
        .map(|prefix| {
            let mut acc = PassOne {
                min_info: f64::INFINITY,
                max_delta: f64::NEG_INFINITY,
            };
            scan_completions(n, prefix, &mut |masks| {
                let (info, delta) = table.score(masks);
                acc.max_delta = acc.max_delta.max(delta);
                if delta >= threshold {
                    acc.min_info = acc.min_info.min(info);
                }
            });
            acc
        })
        .reduce(
            || PassOne {
                min_info: f64::INFINITY,
                max_delta: f64::NEG_INFINITY,
            },
            |a, b| PassOne {
                min_info: a.min_info.min(b.min_info),
                max_delta: a.max_delta.max(b.max_delta),
            },
        );

    if pass_one.min_info == f64::INFINITY {
        return Err(Error::Infeasible {
            requested: delta_h,
            max_achievable: pass_one.max_delta,
        });
    }

    let cutoff = pass_one.min_info + tie_epsilon;
    let best = prefixes
        .par_iter()
        .filter_map(|prefix| {
            let mut best: Option<(usize, Partition)> = None;
            scan_completions(n, prefix, &mut |masks| {
                let (info, delta) = table.score(masks);
                if delta < threshold || info > cutoff {
                    return;
                }
                if best.as_ref().is_some_and(|(g, _)| masks.len() > *g) {
                    return;
                }
                let cand = (masks.len(), masks_to_partition(n, masks));
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            });
            best
        })
        .min()
        .expect("pass one found a feasible partition");

    let (_, partition) = best;
    let result = finish(joint, partition, Optimality::ExhaustiveOptimal)?;
    let optimality = if result.report.info > pass_one.min_info + 1e-12 {
        Optimality::EpsilonOptimal
    } else {
        Optimality::ExhaustiveOptimal
    };
    Ok(OptimizationResult { optimality, ..result })
}
