//! Search over grouping POVMs for decompositions that reach a requested
//! average entropy reduction with minimal average preparation information.

mod exhaustive;
mod greedy;
mod partitions;

use std::fmt;

pub use exhaustive::{optimal_exhaustive, optimal_exhaustive_with, DEFAULT_TIE_EPSILON};
pub use greedy::{optimal_greedy, optimal_greedy_with, GreedyOptions};
pub use partitions::{bell_number, enumerate_partitions, PartitionIter, RgsIter, MAX_ENUMERATION_N};

use crate::ensembles::{analyze, induced_ensemble, ClassicalJointState, EnsembleReport, Partition};
use crate::error::{invalid, Error, Result};
use crate::randsphere::TradeoffPoint;

/// Slack on the `ΔH̄ ≥ delta_h` constraint.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimality {
    /// Minimum over every grouping POVM.
    ExhaustiveOptimal,
    /// Within the tie width of the exhaustive minimum.
    EpsilonOptimal,
    /// Found by the clustering heuristic; no optimality claim.
    Heuristic,
}

impl fmt::Display for Optimality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ExhaustiveOptimal => "exhaustive-optimal",
            Self::EpsilonOptimal => "epsilon-optimal",
            Self::Heuristic => "heuristic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub partition: Partition,
    pub report: EnsembleReport,
    pub optimality: Optimality,
}

pub(crate) fn finish(
    joint: &ClassicalJointState,
    partition: Partition,
    optimality: Optimality,
) -> Result<OptimizationResult> {
    let report = analyze(&induced_ensemble(joint, &partition)?)?;
    Ok(OptimizationResult {
        partition,
        report,
        optimality,
    })
}

/// `Ī_min` versus `ΔH̄` on a fixed joint state. Exhaustive search is used up
/// to `D_E = 13`, the heuristic above. Each point carries the requested
/// reduction as `param` and the achieved reduction as `delta_h_bits`;
/// infeasible requests leave a gap (`None`).
pub fn empirical_tradeoff(joint: &ClassicalJointState, grid: &[f64]) -> Result<Vec<Option<TradeoffPoint>>> {
    if let Some(&bad) = grid.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return invalid(format!("grid values must be finite and non-negative, got {bad}"));
    }
    grid.iter()
        .map(|&delta_h| {
            let res = if joint.d_env() <= MAX_ENUMERATION_N {
                optimal_exhaustive(joint, delta_h)
            } else {
                optimal_greedy(joint, delta_h, 1)
            };
            match res {
                Ok(r) => Ok(Some(TradeoffPoint {
                    param: delta_h,
                    delta_h_bits: r.report.delta_h_bar,
                    info_bits: r.report.info,
                })),
                Err(Error::Infeasible { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::qubit_fixture;

    #[test]
    fn qubit_full_reduction_needs_singletons() {
        let r = optimal_exhaustive(&qubit_fixture(), 1.0).unwrap();
        assert_eq!(r.partition, Partition::singletons(4));
        assert!((r.report.info - 2.0).abs() < 1e-12);
        assert_eq!(r.optimality, Optimality::ExhaustiveOptimal);
    }

    #[test]
    fn qubit_small_reduction_prefers_one_against_three() {
        // {{1},{2,3,4}} reaches ΔH̄ = 1 − (3/4) h(1/3) ≈ 0.311 with Ī = h(1/4).
        let r = optimal_exhaustive(&qubit_fixture(), 0.19).unwrap();
        assert_eq!(r.partition.to_string(), "{{1},{2,3,4}}");
        let h14 = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((r.report.info - h14).abs() < 1e-12);
        assert!(r.report.delta_h_bar >= 0.19);
    }

    #[test]
    fn qubit_paired_optimum() {
        // Between ΔH̄ ≈ 0.311 and 0.399 the paired groupings are optimal.
        let r = optimal_exhaustive(&qubit_fixture(), 0.35).unwrap();
        assert_eq!(r.partition.to_string(), "{{1,3},{2,4}}");
        assert!((r.report.info - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_reduction_is_free() {
        let r = optimal_exhaustive(&qubit_fixture(), 0.0).unwrap();
        assert_eq!(r.partition, Partition::trivial(4));
        assert_eq!(r.report.info, 0.0);
        let g = optimal_greedy(&qubit_fixture(), 0.0, 1).unwrap();
        assert_eq!(g.partition, Partition::trivial(4));
        assert_eq!(g.report.info, 0.0);
        assert_eq!(g.optimality, Optimality::Heuristic);
    }

    #[test]
    fn infeasible_request_names_max() {
        match optimal_exhaustive(&qubit_fixture(), 1.5) {
            Err(Error::Infeasible { max_achievable, .. }) => {
                assert!((max_achievable - 1.0).abs() < 1e-12)
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
        assert!(matches!(
            optimal_greedy(&qubit_fixture(), 1.5, 1),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn greedy_matches_exhaustive_on_fixture() {
        for dh in [0.19, 0.35, 1.0] {
            let g = optimal_greedy(&qubit_fixture(), dh, 1).unwrap();
            let e = optimal_exhaustive(&qubit_fixture(), dh).unwrap();
            assert!((g.report.info - e.report.info).abs() < 1e-12, "deltaH = {dh}");
        }
    }

    #[test]
    fn greedy_rejects_bad_inputs() {
        assert!(optimal_greedy(&qubit_fixture(), 0.5, 0).is_err());
        assert!(optimal_greedy(&qubit_fixture(), -0.5, 1).is_err());
    }

    #[test]
    fn tradeoff_on_fixture() {
        let pts = empirical_tradeoff(&qubit_fixture(), &[0.0, 0.19, 1.0, 1.5]).unwrap();
        let info: Vec<f64> = pts[..3].iter().map(|p| p.unwrap().info_bits).collect();
        assert_eq!(info[0], 0.0);
        assert!((info[1] - 0.811278124459).abs() < 1e-9);
        assert!((info[2] - 2.0).abs() < 1e-12);
        assert!(pts[3].is_none());
        assert_eq!(empirical_tradeoff(&qubit_fixture(), &[0.0]).unwrap()[0].unwrap().info_bits, 0.0);
    }
}
