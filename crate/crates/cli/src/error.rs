//! CLI error classification onto the documented exit codes.

use thiserror::Error;

/// Everything the CLI can fail with, grouped by exit code: configuration and
/// usage problems exit 1, solver convergence failures exit 2, verification
/// gaps exit 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("verification gap exceeded: {0}")]
    Gap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Gap(_) => 3,
        }
    }
}

/// True iff the error chain bottoms out in a convergence failure (as opposed
/// to invalid inputs).
fn is_solver_rooted(e: &secrecy_core::Error) -> bool {
    match e {
        secrecy_core::Error::NoConvergence { .. } | secrecy_core::Error::NoAlphaRoot { .. } => {
            true
        }
        secrecy_core::Error::AtRatio { source, .. } => is_solver_rooted(source),
        _ => false,
    }
}

impl From<secrecy_core::Error> for CliError {
    fn from(e: secrecy_core::Error) -> Self {
        if is_solver_rooted(&e) {
            CliError::Solver(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o error: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
