//! Batch driver for equilibrium-potential barycentric interpolation:
//! JSON configs, builtin test functions, parameter sweeps and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod builtins;
pub mod config;
pub mod runner;
pub mod sampling;

use std::path::PathBuf;

use briep_core::Point;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("geometry error: {0}")]
    Geometry(briep_core::Error),
    #[error("solver error: {0}")]
    Solver(briep_core::Error),
    #[error("function evaluation failed at {at}")]
    FunctionEval { at: Point },
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Geometry(_) => 3,
            CliError::Solver(_) | CliError::FunctionEval { .. } => 4,
            CliError::Io { .. } => 5,
        }
    }
}

impl From<briep_core::Error> for CliError {
    fn from(e: briep_core::Error) -> Self {
        use briep_core::Error::*;
        match e {
            InvalidGeometry(_) | OutOfRange { .. } | NonFinite => CliError::Geometry(e),
            _ => CliError::Solver(e),
        }
    }
}
