//! Secrecy capacity regions of parallel Gaussian broadcast channels with
//! confidential messages.
//!
//! The library computes boundary-achieving power allocations for the weighted
//! rate objective `gamma0 * r0 + gamma1 * r1` (common rate to both receivers,
//! confidential rate to receiver 1 kept secret from receiver 2), traces rate
//! region boundaries, extends them to ergodic fading through Monte Carlo
//! state discretization, and certifies the closed forms against brute-force
//! oracles.

pub mod allocator;
pub mod channel;
pub mod error;
pub mod fading;
pub mod oracle;
pub mod tracer;

pub use allocator::{
    case_allocation, check_case_condition, optimal_allocation, solve_lambda, CaseTag,
    OptimalAllocation, RateOrdering, SolverConfig,
};
pub use channel::{
    rate_point, rate_r01, rate_r02, rate_r1, weighted_objective, Allocation, ParallelChannel,
    PowerSplit, RatePoint, Subchannel, Weights,
};
pub use error::{Error, Result};
pub use fading::{ergodic_boundary, sample_states, GainModel, StateSet};
pub use tracer::{
    default_ratio_grid, gaussian_beta_sweep, linspace_betas, log_spaced_ratios,
    sampled_hausdorff, trace_region, validate_boundary, Boundary, BoundaryPoint,
    BoundaryViolation,
};
pub use oracle::{grid_search, secrecy_only_search, secrecy_only_waterfill, GridOutcome, GridSpec};
