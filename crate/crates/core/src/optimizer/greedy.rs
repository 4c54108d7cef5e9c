//! Geometric clustering heuristic for large environments.
//!
//! Candidates come from three sources: agglomerative merging from the
//! singletons, clustering in Fubini–Study distance (farthest-point seeding,
//! then Lloyd iterations with each center set to the dominant eigenvector
//! of its group's mixture) and seeded random labelings. Infeasible starts
//! are first pushed toward feasibility by moves that raise `ΔH̄`. Each is
//! refined by first-improvement local search over pairwise merges,
//! single-label relocations and label swaps that lower `Ī` while keeping
//! `ΔH̄ ≥ delta_h`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{finish, Optimality, OptimizationResult, FEASIBILITY_TOL};
use crate::ensembles::{ClassicalJointState, Partition};
use crate::error::{invalid, Error, Result};
use crate::numeric::neg_plog2p;
use crate::qcore::{
    dominant_eigenvector, fubini_study_angle, hermitian_eigenvalues, spectrum_entropy,
    von_neumann_entropy, ComplexMatrix, PureState,
};

const LLOYD_ITERATIONS: usize = 50;
const LOCAL_SEARCH_ROUNDS: usize = 10_000;
/// Group counts tried beyond the first feasible one.
const EXTRA_GROUP_COUNTS: usize = 2;
const IMPROVEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct GreedyOptions {
    /// Smallest number of groups to try.
    pub target_groups: usize,
    /// Additional clusterings started from a random first seed.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        Self {
            target_groups: 1,
            restarts: 4,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy)]
struct GroupStats {
    info_term: f64,
    weighted_entropy: f64,
}

struct Evaluator<'a> {
    joint: &'a ClassicalJointState,
    total_entropy: f64,
}

impl<'a> Evaluator<'a> {
    fn new(joint: &'a ClassicalJointState) -> Result<Self> {
        Ok(Self {
            joint,
            total_entropy: von_neumann_entropy(&joint.reduced_state())?,
        })
    }

    fn mixture(&self, members: &[usize]) -> (f64, ComplexMatrix) {
        let mut m = ComplexMatrix::zeros(self.joint.d_sys());
        let mut w = 0.0;
        for &k in members {
            let b = &self.joint.branches()[k];
            m.add_scaled(b.state.matrix(), b.weight);
            w += b.weight;
        }
        (w, m)
    }

    fn group(&self, members: &[usize]) -> Result<GroupStats> {
        let (w, m) = self.mixture(members);
        if w <= 0.0 {
            return Ok(GroupStats {
                info_term: 0.0,
                weighted_entropy: 0.0,
            });
        }
        let vals = hermitian_eigenvalues(&m.hermitian_part().scale(1.0 / w))?;
        Ok(GroupStats {
            info_term: neg_plog2p(w),
            weighted_entropy: w * spectrum_entropy(&vals)?,
        })
    }

    fn totals(&self, stats: &[GroupStats]) -> (f64, f64) {
        let info = stats.iter().map(|s| s.info_term).sum();
        let h_bar: f64 = stats.iter().map(|s| s.weighted_entropy).sum();
        (info, self.total_entropy - h_bar)
    }
}

struct Clustering {
    groups: Vec<Vec<usize>>,
    stats: Vec<GroupStats>,
    info: f64,
    delta: f64,
}

impl Clustering {
    fn new(eval: &Evaluator, groups: Vec<Vec<usize>>) -> Result<Self> {
        let groups: Vec<Vec<usize>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
        let stats = groups.iter().map(|g| eval.group(g)).collect::<Result<Vec<_>>>()?;
        let (info, delta) = eval.totals(&stats);
        Ok(Self {
            groups,
            stats,
            info,
            delta,
        })
    }

    fn partition(&self, n: usize) -> Partition {
        Partition::new(n, self.groups.clone()).expect("clustering covers every label once")
    }
}

fn farthest_point_seeds(kets: &[&PureState], weights: &[f64], k: usize, first: usize) -> Result<Vec<usize>> {
    let n = kets.len();
    let mut seeds = vec![first];
    let mut nearest: Vec<f64> = kets
        .iter()
        .map(|psi| fubini_study_angle(psi, kets[first]))
        .collect::<Result<_>>()?;
    while seeds.len() < k {
        // farthest from all seeds; heavier branch, then lower index, on ties
        let next = (0..n)
            .filter(|i| !seeds.contains(i))
            .max_by(|&a, &b| {
                nearest[a]
                    .total_cmp(&nearest[b])
                    .then(weights[a].total_cmp(&weights[b]))
                    .then(b.cmp(&a))
            })
            .expect("k <= n");
        seeds.push(next);
        for i in 0..n {
            nearest[i] = nearest[i].min(fubini_study_angle(kets[i], kets[next])?);
        }
    }
    Ok(seeds)
}

fn lloyd(eval: &Evaluator, kets: &[&PureState], seeds: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = kets.len();
    let mut centers: Vec<PureState> = seeds.iter().map(|&s| kets[s].clone()).collect();
    let mut assignment = vec![usize::MAX; n];
    for _ in 0..LLOYD_ITERATIONS {
        let mut changed = false;
        for i in 0..n {
            let mut best = (f64::INFINITY, 0);
            for (c, center) in centers.iter().enumerate() {
                let d = fubini_study_angle(kets[i], center)?;
                if d < best.0 {
                    best = (d, c);
                }
            }
            if assignment[i] != best.1 {
                assignment[i] = best.1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<usize> = (0..n).filter(|&i| assignment[i] == c).collect();
            if members.is_empty() {
                continue;
            }
            let (w, m) = eval.mixture(&members);
            if w > 0.0 {
                *center = dominant_eigenvector(&m.hermitian_part().scale(1.0 / w))?;
            }
        }
    }
    let mut groups = vec![Vec::new(); centers.len()];
    for (i, &c) in assignment.iter().enumerate() {
        groups[c].push(i);
    }
    Ok(groups)
}

fn local_search(eval: &Evaluator, mut cur: Clustering, threshold: f64) -> Result<Clustering> {
    for _ in 0..LOCAL_SEARCH_ROUNDS {
        let mut improved = false;

        // pairwise merges always lower Ī; keep those that stay feasible
        'merge: for a in 0..cur.groups.len() {
            for b in a + 1..cur.groups.len() {
                let mut merged = cur.groups[a].clone();
                merged.extend_from_slice(&cur.groups[b]);
                let stats = eval.group(&merged)?;
                let mut trial = cur.stats.clone();
                trial[a] = stats;
                trial.remove(b);
                let (info, delta) = eval.totals(&trial);
                if delta >= threshold && info < cur.info - IMPROVEMENT_TOL {
                    let mut groups = cur.groups.clone();
                    groups[a] = merged;
                    groups.remove(b);
                    cur = Clustering {
                        groups,
                        stats: trial,
                        info,
                        delta,
                    };
                    improved = true;
                    break 'merge;
                }
            }
        }
        if improved {
            continue;
        }

        'relocate: for from in 0..cur.groups.len() {
            for pos in 0..cur.groups[from].len() {
                let label = cur.groups[from][pos];
                for to in 0..cur.groups.len() {
                    if to == from {
                        continue;
                    }
                    let mut src = cur.groups[from].clone();
                    src.remove(pos);
                    let mut dst = cur.groups[to].clone();
                    dst.push(label);
                    let mut trial = cur.stats.clone();
                    trial[from] = eval.group(&src)?;
                    trial[to] = eval.group(&dst)?;
                    let (info, delta) = eval.totals(&trial);
                    if delta >= threshold && info < cur.info - IMPROVEMENT_TOL {
                        let mut groups = cur.groups.clone();
                        groups[from] = src;
                        groups[to] = dst;
                        cur = Clustering::new(eval, groups)?;
                        improved = true;
                        break 'relocate;
                    }
                }
            }
        }
        if improved {
            continue;
        }

        'swap: for a in 0..cur.groups.len() {
            for b in a + 1..cur.groups.len() {
                for i in 0..cur.groups[a].len() {
                    for j in 0..cur.groups[b].len() {
                        let mut groups = cur.groups.clone();
                        let (x, y) = (groups[a][i], groups[b][j]);
                        groups[a][i] = y;
                        groups[b][j] = x;
                        let mut trial = cur.stats.clone();
                        trial[a] = eval.group(&groups[a])?;
                        trial[b] = eval.group(&groups[b])?;
                        let (info, delta) = eval.totals(&trial);
                        if delta >= threshold && info < cur.info - IMPROVEMENT_TOL {
                            cur = Clustering {
                                groups,
                                stats: trial,
                                info,
                                delta,
                            };
                            improved = true;
                            break 'swap;
                        }
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(cur)
}

#[derive(Clone, Copy)]
enum MergeCost {
    /// `ΔH̄` lost per bit of `Ī` saved.
    Ratio,
    /// `ΔH̄` lost.
    Loss,
    /// `Ī` after the merge.
    Info,
}

/// Merges from singletons while feasible, each step taking the cheapest
/// merge under `cost`.
fn agglomerate(eval: &Evaluator, start: Clustering, threshold: f64, cost: MergeCost) -> Result<Clustering> {
    let mut cur = start;
    loop {
        let mut pick: Option<(f64, Clustering)> = None;
        for a in 0..cur.groups.len() {
            for b in a + 1..cur.groups.len() {
                let mut groups = cur.groups.clone();
                let moved = groups.remove(b);
                groups[a].extend(moved);
                let trial = Clustering::new(eval, groups)?;
                if trial.delta < threshold {
                    continue;
                }
                let loss = (cur.delta - trial.delta).max(0.0);
                let c = match cost {
                    MergeCost::Ratio => loss / (cur.info - trial.info).max(IMPROVEMENT_TOL),
                    MergeCost::Loss => loss,
                    MergeCost::Info => trial.info,
                };
                if pick.as_ref().is_none_or(|(best, _)| c < *best) {
                    pick = Some((c, trial));
                }
            }
        }
        match pick {
            Some((_, next)) => cur = next,
            None => return Ok(cur),
        }
    }
}

/// Relocations and swaps that raise `ΔH̄` at a fixed group count, until
/// the clustering is feasible or no move helps.
fn repair(eval: &Evaluator, mut cur: Clustering, threshold: f64) -> Result<Option<Clustering>> {
    for _ in 0..LOCAL_SEARCH_ROUNDS {
        if cur.delta >= threshold {
            return Ok(Some(cur));
        }
        let k = cur.groups.len();
        let mut next = None;
        'moves: for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                for i in 0..cur.groups[a].len() {
                    let mut groups = cur.groups.clone();
                    let label = groups[a][i];
                    if groups[a].len() > 1 {
                        groups[a].remove(i);
                        groups[b].push(label);
                        let trial = Clustering::new(eval, groups)?;
                        if trial.delta > cur.delta + IMPROVEMENT_TOL {
                            next = Some(trial);
                            break 'moves;
                        }
                    }
                    if a < b {
                        for j in 0..cur.groups[b].len() {
                            let mut groups = cur.groups.clone();
                            groups[a][i] = cur.groups[b][j];
                            groups[b][j] = label;
                            let trial = Clustering::new(eval, groups)?;
                            if trial.delta > cur.delta + IMPROVEMENT_TOL {
                                next = Some(trial);
                                break 'moves;
                            }
                        }
                    }
                }
            }
        }
        match next {
            Some(n) => cur = n,
            None => return Ok(None),
        }
    }
    Ok(None)
}

fn better(a: &Clustering, b: &Clustering) -> bool {
    a.info < b.info - IMPROVEMENT_TOL
        || ((a.info - b.info).abs() <= IMPROVEMENT_TOL && a.groups.len() < b.groups.len())
}

/// Heuristic search with default options and the given smallest group
/// count.
pub fn optimal_greedy(
    joint: &ClassicalJointState,
    delta_h: f64,
    target_groups: usize,
) -> Result<OptimizationResult> {
    optimal_greedy_with(
        joint,
        delta_h,
        GreedyOptions {
            target_groups,
            ..GreedyOptions::default()
        },
    )
}

pub fn optimal_greedy_with(
    joint: &ClassicalJointState,
    delta_h: f64,
    opts: GreedyOptions,
) -> Result<OptimizationResult> {
    if opts.target_groups == 0 {
        return invalid("target_groups must be at least 1");
    }
    if !delta_h.is_finite() || delta_h < 0.0 {
        return invalid(format!("requested entropy reduction must be >= 0, got {delta_h}"));
    }
    let Some(kets) = joint.pure_states() else {
        return invalid("greedy search needs pure branch states");
    };
    let n = joint.d_env();
    let weights = joint.weights();
    let eval = Evaluator::new(joint)?;
    let threshold = delta_h - FEASIBILITY_TOL;

    let singletons = Clustering::new(&eval, (0..n).map(|k| vec![k]).collect())?;
    let max_achievable = singletons.delta;
    if singletons.delta < threshold {
        return Err(Error::Infeasible {
            requested: delta_h,
            max_achievable,
        });
    }
    let mut best: Option<Clustering> = None;
    for cost in [MergeCost::Ratio, MergeCost::Loss, MergeCost::Info] {
        let start = Clustering::new(&eval, singletons.groups.clone())?;
        let found = local_search(&eval, agglomerate(&eval, start, threshold, cost)?, threshold)?;
        if best.as_ref().is_none_or(|b| better(&found, b)) {
            best = Some(found);
        }
    }

    let heaviest = (0..n)
        .max_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(b.cmp(&a)))
        .expect("joint state has branches");
    let mut firsts = vec![heaviest];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        firsts.push(rng.random_range(0..n));
    }
    firsts.dedup();

    // random labelings into the target count
    let k0 = opts.target_groups.min(n);
    for _ in 0..opts.restarts {
        let mut groups = vec![Vec::new(); k0];
        for i in 0..n {
            groups[rng.random_range(0..k0)].push(i);
        }
        let start = Clustering::new(&eval, groups)?;
        if let Some(start) = repair(&eval, start, threshold)? {
            let found = local_search(&eval, start, threshold)?;
            if best.as_ref().is_none_or(|b| better(&found, b)) {
                best = Some(found);
            }
        }
    }

    for &first in &firsts {
        let mut first_feasible: Option<usize> = None;
        for k in opts.target_groups.min(n)..=n {
            if first_feasible.is_some_and(|k0| k > k0 + EXTRA_GROUP_COUNTS) {
                break;
            }
            let groups = if k == n {
                (0..n).map(|i| vec![i]).collect()
            } else {
                let seeds = farthest_point_seeds(&kets, &weights, k, first)?;
                lloyd(&eval, &kets, &seeds)?
            };
            let Some(start) = repair(&eval, Clustering::new(&eval, groups)?, threshold)? else {
                continue;
            };
            first_feasible.get_or_insert(k);
            let found = local_search(&eval, start, threshold)?;
            if best.as_ref().is_none_or(|b| better(&found, b)) {
                best = Some(found);
            }
        }
    }

    let best = best.expect("the agglomerative candidate is feasible");
    finish(joint, best.partition(n), Optimality::Heuristic)
}
