//! Error type shared across the library.

use thiserror::Error;

/// Errors reported by channel construction, solvers, oracles, and tracers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("channel must have at least one subchannel")]
    EmptyChannel,

    #[error("subchannel {index}: noise variances must be positive and finite (mu_sq={mu_sq}, nu_sq={nu_sq})")]
    InvalidNoise { index: usize, mu_sq: f64, nu_sq: f64 },

    #[error("prefactor must be 0.5 (real signalling) or 1 (proper-complex signalling), got {0}")]
    InvalidPrefactor(f64),

    #[error("allocation has {got} entries but the channel has {expected} subchannels")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("allocation entry {index}: {reason}")]
    InvalidAllocation { index: usize, reason: String },

    #[error("weights must be strictly positive and finite (gamma0={gamma0}, gamma1={gamma1})")]
    InvalidWeights { gamma0: f64, gamma1: f64 },

    #[error("lambda must be strictly positive and finite, got {0}")]
    InvalidLambda(f64),

    #[error("alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),

    #[error("power budget must be nonnegative and finite, got {0}")]
    InvalidBudget(f64),

    #[error("invalid solver config: {0}")]
    InvalidSolverConfig(String),

    #[error("invalid ratio grid: {0}")]
    InvalidRatios(String),

    #[error(
        "bisection did not converge within {max_iters} iterations \
         (bracket [{lo}, {hi}], residual {residual})"
    )]
    NoConvergence {
        max_iters: usize,
        lo: f64,
        hi: f64,
        residual: f64,
    },

    #[error(
        "no alpha in [0, 1] equalizes the two common-rate branches; \
         scanned (alpha, r01 - r02) pairs: {scanned:?}"
    )]
    NoAlphaRoot { scanned: Vec<(f64, f64)> },

    #[error("ratio gamma1/gamma0 = {ratio}: {source}")]
    AtRatio {
        ratio: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("grid search over {dims} power dimensions exceeds the cap of {max_dims}")]
    DimensionCap { dims: usize, max_dims: usize },

    #[error("invalid grid spec: {0}")]
    InvalidGridSpec(String),

    #[error("fading state set must contain at least one state")]
    EmptyStateSet,

    #[error("invalid fading spec: {0}")]
    InvalidFadingSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
