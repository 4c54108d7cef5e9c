//! JSON ensemble files.
//!
//! ```json
//! { "d_sys": 2,
//!   "branches": [
//!     { "weight": 0.5, "state": [[1, 0], [0, 0]] },
//!     { "weight": 0.5, "state": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]] } ] }
//! ```
//!
//! A state is either a ket (amplitudes as `[re, im]` pairs) or a density
//! matrix given row by row.

use std::path::Path;

use decompq_core::ensembles::ClassicalJointState;
use decompq_core::qcore::{pure_density, ComplexMatrix, DensityOperator, PureState};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub d_sys: usize,
    pub branches: Vec<BranchEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchEntry {
    pub weight: f64,
    pub state: StateEntry,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum StateEntry {
    Ket(Vec<[f64; 2]>),
    Matrix(Vec<Vec<[f64; 2]>>),
}

fn complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl EnsembleFile {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_joint(&self) -> std::result::Result<ClassicalJointState, String> {
        let mut kets = Vec::new();
        let mut states = Vec::new();
        for (k, b) in self.branches.iter().enumerate() {
            let label = k + 1;
            let rho = match &b.state {
                StateEntry::Ket(amps) => {
                    if amps.len() != self.d_sys {
                        return Err(format!("branch {label}: {} amplitudes for d_sys = {}", amps.len(), self.d_sys));
                    }
                    let psi = PureState::new(complex(amps)).map_err(|e| format!("branch {label}: {e}"))?;
                    let rho = pure_density(&psi);
                    kets.push((b.weight, psi));
                    rho
                }
                StateEntry::Matrix(rows) => {
                    if rows.len() != self.d_sys {
                        return Err(format!("branch {label}: {} rows for d_sys = {}", rows.len(), self.d_sys));
                    }
                    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| complex(r)).collect();
                    let m = ComplexMatrix::from_rows(&rows).map_err(|e| format!("branch {label}: {e}"))?;
                    DensityOperator::new(m).map_err(|e| format!("branch {label}: {e}"))?
                }
            };
            states.push((b.weight, rho));
        }
        // kets are kept pure so that the clustering heuristic can use them
        let joint = if kets.len() == states.len() {
            ClassicalJointState::from_pure(kets)
        } else {
            ClassicalJointState::new(self.d_sys, states)
        };
        joint.map_err(|e| e.to_string())
    }
}

pub fn read_joint(path: &Path) -> Result<ClassicalJointState> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let parse_err = |msg| CliError::Parse {
        path: path.to_path_buf(),
        msg,
    };
    EnsembleFile::parse(&text).map_err(parse_err)?.to_joint().map_err(parse_err)
}
