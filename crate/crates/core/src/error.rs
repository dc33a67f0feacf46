use thiserror::Error;

use crate::optim::SolverReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("coefficient vector violates the {region} region: {detail}")]
    RegionViolation { region: String, detail: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("solver failed to converge after {} iterations (residual {:.3e})", .0.iterations, .0.grad_norm_at_solution)]
    Solver(Box<SolverReport>),

    #[error("grid search requested in dimension {0}; use multi-start above dimension 3")]
    GridDimension(usize),

    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error("invalid scenario:{}", list_issues(.0))]
    Invalid(Vec<ConfigIssue>),

    #[error("ledger data corrupted: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for failures caused by bad user input rather than numerics or IO.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::RegionViolation { .. }
                | Error::InvalidInput(_)
                | Error::GridDimension(_)
                | Error::Config { .. }
                | Error::Invalid(_)
        )
    }
}

/// One validation failure, located by its dotted field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub path: String,
    pub message: String,
}

impl ConfigIssue {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigIssue {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn list_issues(issues: &[ConfigIssue]) -> String {
    issues.iter().map(|i| format!("\n  {i}")).collect()
}
