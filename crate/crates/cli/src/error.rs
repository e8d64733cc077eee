use std::path::PathBuf;

use mfcev::cds::CdsError;
use mfcev::mc::McError;
use mfcev::{EvalError, ParamError, TableCellError};
use thiserror::Error;

use crate::scenario::ScenarioError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("invalid parameter: {0}")]
    Param(#[from] ParamError),
    #[error("invalid contract or grid: {0}")]
    Contract(CdsError),
    #[error("invalid Monte Carlo configuration: {0}")]
    Simulation(McError),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error("{failed} table cells failed; first: {first}")]
    Table { failed: usize, first: TableCellError },
}

impl CliError {
    /// 2 for anything the caller can fix by changing arguments, 3 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Scenario(_)
            | CliError::Param(_)
            | CliError::Contract(_)
            | CliError::Simulation(_)
            | CliError::Output { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Table { first, .. } => CliError::from(first.source.clone()).exit_code(),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<CdsError> for CliError {
    fn from(e: CdsError) -> Self {
        match e {
            CdsError::Param(p) => CliError::Param(p),
            CdsError::Eval(_) | CdsError::LegMismatch { .. } | CdsError::AnnuityUnderflow(_) => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Contract(other),
        }
    }
}

impl From<McError> for CliError {
    fn from(e: McError) -> Self {
        match e {
            McError::Param(p) => CliError::Param(p),
            McError::Contract(c) => c.into(),
            McError::NoPremium => CliError::Numerical(e.to_string()),
            other => CliError::Simulation(other),
        }
    }
}
