//! Command-line front end for `decompq-core`.
//!
//! | command            | output                                         |
//! |--------------------|------------------------------------------------|
//! | `example-qubit`    | report of the two-level fixture                |
//! | `curve-randsphere` | CSV curve of the ball-mixture model            |
//! | `curve-coherent`   | CSV curve of coherent-state caps               |
//! | `decompose`        | optimal grouping of a JSON ensemble            |
//! | `verify`           | spectral self-checks, exit 1 on any violation  |

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod input;

pub use error::{CliError, Status};
