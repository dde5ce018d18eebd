use std::path::PathBuf;

use thiserror::Error;

/// Everything the driver can fail with. [`CliError::exit_code`] separates
/// verdict failures (1) from bad input (2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },

    #[error("unsupported format_version {found} in {path} (expected {expected})")]
    Version { path: PathBuf, found: u32, expected: u32 },

    #[error("dimension mismatch: state {state} has {found} amplitudes, but the product of dims is {expected}")]
    AmplitudeCount { state: String, found: usize, expected: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("normalization violation: {0}")]
    Normalization(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("states {i} and {j} are not mutually orthogonal (|<phi_i|phi_j>| = {overlap:e})")]
    NotOrthogonal { i: usize, j: usize, overlap: f64 },

    #[error("{0}")]
    Infeasible(String),

    #[error("measurement is not orthogonality-preserving: {0}")]
    NotPreserving(String),

    #[error("internal defect: {0}")]
    Defect(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotOrthogonal { .. } | CliError::Infeasible(_) | CliError::NotPreserving(_) => 1,
            CliError::Defect(_) => 3,
            _ => 2,
        }
    }
}

impl From<ntop_core::Error> for CliError {
    fn from(e: ntop_core::Error) -> Self {
        use ntop_core::Error as E;
        match e {
            E::NotOrthogonal { i, j, overlap } => CliError::NotOrthogonal { i, j, overlap },
            E::Infeasible { .. } | E::NoQubitParty | E::NotBipartite(_) | E::NotQubit { .. } => {
                CliError::Infeasible(e.to_string())
            }
            E::NotOrthogonalityPreserving { .. } => CliError::NotPreserving(e.to_string()),
            E::DimensionMismatch { .. } | E::LengthMismatch { .. } | E::NotSquare { .. } => {
                CliError::Dimension(e.to_string())
            }
            E::InvalidParams(_) | E::Incomplete { .. } => CliError::Normalization(e.to_string()),
            E::ConditionalOrthogonality { .. } | E::NumericalBreakdown(_) => CliError::Defect(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}
