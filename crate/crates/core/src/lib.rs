//! # decompq-core
//!
//! Preparation information and optimal decompositions of mixed quantum
//! states whose ensembles are induced by measurements on an environment.
//!
//! A joint system–environment state `ρ_total` together with an environment
//! POVM `{E_r}` induces an ensemble `{p_r, ρ_r}` of the reduced system state
//! `ρ = tr_E(ρ_total)`. For every such ensemble we report
//!
//! | Quantity | Meaning |
//! |----------|---------|
//! | `H`      | von Neumann entropy of `ρ` |
//! | `H̄`      | average conditional entropy `Σ p_r H(ρ_r)` |
//! | `ΔH̄`     | average entropy reduction `H − H̄` |
//! | `Ī`      | average preparation information `−Σ p_r log₂ p_r` |
//!
//! and search over grouping POVMs for decompositions that reach a requested
//! entropy reduction with minimal `Ī`.
//!
//! ## Modules
//!
//! - [`qcore`]: complex Hermitian linear algebra, states, entropy.
//! - [`ensembles`]: POVMs, joint states, induced ensembles and their reports.
//! - [`optimizer`]: exhaustive and heuristic search over set partitions.
//! - [`randsphere`]: the analytic model for Haar-random pure states grouped
//!   into Fubini–Study balls, plus Monte-Carlo sampling.
//! - [`coherent`]: spin-`j` coherent states grouped into spherical caps,
//!   with the terminating hypergeometric and binomial machinery behind the
//!   cap spectra.
//!
//! All entropies and information quantities are in bits.

#![forbid(unsafe_code)]
// Negated float comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
pub mod ensembles;
mod error;
pub mod numeric;
pub mod optimizer;
pub mod qcore;
pub mod randsphere;

pub use error::{Error, Result};
