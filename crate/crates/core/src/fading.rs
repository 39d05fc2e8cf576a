//! Ergodic boundaries for block-fading channels.
//!
//! In the ergodic regime each fading state behaves like one subchannel of a
//! large parallel channel: a state with power gains `(g1, g2)` and base
//! noises `(mu_sq, nu_sq)` is equivalent to a subchannel with effective
//! noises `mu_sq / g1` and `nu_sq / g2`. Sampling `n` states and tracing the
//! resulting `n`-subchannel region under an aggregated budget `n * power`
//! yields per-symbol ergodic rates after dividing by `n` (each state gets a
//! `1/n` share of time, and the budget constrains the average power).
//!
//! Gains are drawn as scaled standard-exponential variates (Rayleigh fading
//! in amplitude means exponential power gains with the given means), so two
//! state sets sampled with the same seed share the same underlying
//! randomness even when the gain means differ - useful for common-random
//! comparisons across fading strengths.

use crate::allocator::SolverConfig;
use crate::channel::{ParallelChannel, RatePoint};
use crate::error::{Error, Result};
use crate::tracer::{trace_region, Boundary, BoundaryPoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

/// Gains below this floor are clamped before inverting, so a zero sampled
/// gain yields a finite (astronomically noisy) effective subchannel instead
/// of a division by zero.
const GAIN_FLOOR: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Gain models and state sets
// ---------------------------------------------------------------------------

/// How fading power gains are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum GainModel {
    /// Independent exponential power gains with means `sigma1` (receiver 1)
    /// and `sigma2` (receiver 2).
    Rayleigh { sigma1: f64, sigma2: f64 },
    /// A fixed list of `(g1, g2)` gain pairs used verbatim.
    Empirical(Vec<(f64, f64)>),
}

/// A discretized fading distribution: the sampled gain pairs plus the seed
/// they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSet {
    states: Vec<(f64, f64)>,
    seed: u64,
}

impl StateSet {
    pub fn states(&self) -> &[(f64, f64)] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Expands the states into one parallel channel (complex-signalling
    /// convention, prefactor 1) with effective noises `base / gain`.
    pub fn to_parallel_channel(&self, mu_sq: f64, nu_sq: f64) -> Result<ParallelChannel> {
        if !(mu_sq.is_finite() && mu_sq > 0.0 && nu_sq.is_finite() && nu_sq > 0.0) {
            return Err(Error::InvalidFadingSpec(format!(
                "base noises must be positive and finite, got mu_sq={mu_sq}, nu_sq={nu_sq}"
            )));
        }
        let pairs: Vec<(f64, f64)> = self
            .states
            .iter()
            .map(|&(g1, g2)| (mu_sq / g1.max(GAIN_FLOOR), nu_sq / g2.max(GAIN_FLOOR)))
            .collect();
        ParallelChannel::complex(&pairs)
    }
}

/// Draws `n` gain states from `model`. Rayleigh states are sampled with a
/// seeded ChaCha stream (two standard-exponential draws per state, scaled by
/// the means); empirical models return their list verbatim and ignore `n`
/// and `seed`.
pub fn sample_states(model: &GainModel, n: usize, seed: u64) -> Result<StateSet> {
    match model {
        GainModel::Rayleigh { sigma1, sigma2 } => {
            if !(sigma1.is_finite() && *sigma1 > 0.0 && sigma2.is_finite() && *sigma2 > 0.0) {
                return Err(Error::InvalidFadingSpec(format!(
                    "gain means must be positive and finite, got sigma1={sigma1}, sigma2={sigma2}"
                )));
            }
            if n == 0 {
                return Err(Error::EmptyStateSet);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let states = (0..n)
                .map(|_| {
                    let e1: f64 = Exp1.sample(&mut rng);
                    let e2: f64 = Exp1.sample(&mut rng);
                    (sigma1 * e1, sigma2 * e2)
                })
                .collect();
            Ok(StateSet { states, seed })
        }
        GainModel::Empirical(list) => {
            if list.is_empty() {
                return Err(Error::EmptyStateSet);
            }
            if let Some(&(g1, g2)) = list
                .iter()
                .find(|(g1, g2)| !(g1.is_finite() && *g1 >= 0.0 && g2.is_finite() && *g2 >= 0.0))
            {
                return Err(Error::InvalidFadingSpec(format!(
                    "gains must be nonnegative and finite, got ({g1}, {g2})"
                )));
            }
            Ok(StateSet {
                states: list.clone(),
                seed,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Ergodic tracing
// ---------------------------------------------------------------------------

/// Traces the ergodic boundary of a fading channel discretized by `states`.
///
/// The per-symbol budget `power` becomes an aggregated budget
/// `power * n_states` over the expanded channel; traced rates are divided
/// back by `n_states`. Allocations stay per-state (they sum to the
/// aggregated budget), and `lambda` prices the aggregated problem.
pub fn ergodic_boundary(
    states: &StateSet,
    mu_sq: f64,
    nu_sq: f64,
    power: f64,
    ratios: &[f64],
    config: &SolverConfig,
) -> Result<Boundary> {
    let channel = states.to_parallel_channel(mu_sq, nu_sq)?;
    let n = states.len() as f64;
    let traced = trace_region(&channel, power * n, ratios, config)?;
    let points = traced
        .into_points()
        .into_iter()
        .map(|p| BoundaryPoint {
            rate: RatePoint {
                r0: p.rate.r0 / n,
                r1: p.rate.r1 / n,
                r01: p.rate.r01 / n,
                r02: p.rate.r02 / n,
            },
            ..p
        })
        .collect();
    Ok(Boundary::from_points(points))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
