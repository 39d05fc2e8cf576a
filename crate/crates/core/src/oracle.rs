//! Brute-force certification oracles.
//!
//! These deliberately know nothing about the closed-form allocator: they
//! enumerate power grids (or run a self-contained one-dimensional dual
//! bisection for the confidential-rate-only problem) and evaluate candidates
//! through the rate operations alone. Their results certify the solver.

use crate::channel::{
    rate_r1, weighted_objective, Allocation, ParallelChannel, PowerSplit, Weights,
};
use crate::error::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;

// ---------------------------------------------------------------------------
// Grid specification
// ---------------------------------------------------------------------------

/// Exhaustive-search control: `resolution` is the power step as a fraction of
/// the budget, `max_dims` caps the number of enumerated power dimensions
/// (each subchannel contributes `p0`, plus `p1` when it sits in `A`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub resolution: f64,
    pub max_dims: usize,
}

impl GridSpec {
    pub const DEFAULT_MAX_DIMS: usize = 4;

    pub fn new(resolution: f64, max_dims: usize) -> Result<Self> {
        if !(resolution.is_finite() && resolution > 0.0 && resolution <= 1.0) {
            return Err(Error::InvalidGridSpec(format!(
                "resolution must lie in (0, 1], got {resolution}"
            )));
        }
        if max_dims == 0 {
            return Err(Error::InvalidGridSpec("max_dims must be at least 1".into()));
        }
        Ok(Self {
            resolution,
            max_dims,
        })
    }

    /// Default step: 1e-3 of the budget for single-subchannel instances,
    /// 1e-2 otherwise (the grid grows combinatorially with dimensions).
    pub fn default_for(channel: &ParallelChannel) -> Self {
        let resolution = if channel.len() == 1 { 1e-3 } else { 1e-2 };
        Self {
            resolution,
            max_dims: Self::DEFAULT_MAX_DIMS,
        }
    }

    fn steps(&self) -> usize {
        (1.0 / self.resolution).round().max(1.0) as usize
    }
}

/// Best grid point found by an exhaustive search.
#[derive(Debug, Clone)]
pub struct GridOutcome {
    pub alloc: Allocation,
    /// Value of the searched objective at `alloc` (weighted objective for
    /// [`grid_search`], plain confidential rate for [`secrecy_only_search`]).
    pub value: f64,
}

// ---------------------------------------------------------------------------
// Exhaustive searches
// ---------------------------------------------------------------------------

/// Which power components are enumerated, in lexicographic dimension order.
#[derive(Debug, Clone, Copy)]
enum Dim {
    Common(usize),
    Confidential(usize),
}

fn dims_for(channel: &ParallelChannel, include_common: bool) -> Vec<Dim> {
    let mut dims = Vec::new();
    for l in 0..channel.len() {
        if include_common {
            dims.push(Dim::Common(l));
        }
        if channel.in_confidential_set(l) {
            dims.push(Dim::Confidential(l));
        }
    }
    dims
}

/// Enumerates every grid point of the simplex `sum_i k_i <= steps` in
/// lexicographic order of `(k_0, k_1, ...)` and keeps the candidate with the
/// strictly largest value; ties keep the earlier (lexicographically smaller)
/// point, so the result is deterministic.
fn simplex_search<F>(
    channel: &ParallelChannel,
    dims: &[Dim],
    budget: f64,
    steps: usize,
    mut eval: F,
) -> Result<GridOutcome>
where
    F: FnMut(&ParallelChannel, &Allocation) -> Result<f64>,
{
    let step_power = budget / steps as f64;
    let mut ks = vec![0usize; dims.len()];
    let mut entries = vec![PowerSplit::default(); channel.len()];
    let mut best: Option<GridOutcome> = None;

    // Depth-first over dimensions; depth == dims.len() is a leaf.
    fn recurse<F>(
        channel: &ParallelChannel,
        dims: &[Dim],
        step_power: f64,
        steps_left: usize,
        depth: usize,
        ks: &mut [usize],
        entries: &mut Vec<PowerSplit>,
        best: &mut Option<GridOutcome>,
        eval: &mut F,
    ) -> Result<()>
    where
        F: FnMut(&ParallelChannel, &Allocation) -> Result<f64>,
    {
        if depth == dims.len() {
            for (i, &k) in ks.iter().enumerate() {
                let p = k as f64 * step_power;
                match dims[i] {
                    Dim::Common(l) => entries[l].p0 = p,
                    Dim::Confidential(l) => entries[l].p1 = p,
                }
            }
            let alloc = Allocation::new(channel, entries.clone())?;
            let value = eval(channel, &alloc)?;
            let better = match best {
                None => true,
                Some(b) => value > b.value,
            };
            if better {
                *best = Some(GridOutcome { alloc, value });
            }
            return Ok(());
        }
        for k in 0..=steps_left {
            ks[depth] = k;
            recurse(
                channel,
                dims,
                step_power,
                steps_left - k,
                depth + 1,
                ks,
                entries,
                best,
                eval,
            )?;
        }
        Ok(())
    }

    recurse(
        channel,
        dims,
        step_power,
        steps,
        0,
        &mut ks,
        &mut entries,
        &mut best,
        &mut eval,
    )?;
    Ok(best.expect("simplex enumeration always visits the origin"))
}

/// Exhaustive maximization of `gamma0 * min(r01, r02) + gamma1 * r1` over the
/// grid `{0, s, 2s, ...}` on every power dimension with total at most
/// `budget` (interior points included), `s = resolution * budget`.
///
/// Refuses instances whose dimension count exceeds `spec.max_dims`.
pub fn grid_search(
    channel: &ParallelChannel,
    weights: &Weights,
    budget: f64,
    spec: &GridSpec,
) -> Result<GridOutcome> {
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::InvalidBudget(budget));
    }
    let dims = dims_for(channel, true);
    if dims.len() > spec.max_dims {
        return Err(Error::DimensionCap {
            dims: dims.len(),
            max_dims: spec.max_dims,
        });
    }
    if budget == 0.0 {
        let alloc = Allocation::zero(channel);
        let value = weighted_objective(channel, weights, &alloc)?;
        return Ok(GridOutcome { alloc, value });
    }
    simplex_search(channel, &dims, budget, spec.steps(), |ch, alloc| {
        weighted_objective(ch, weights, alloc)
    })
}

/// Exhaustive maximization of the confidential rate alone: `p0 = 0`
/// everywhere, `p1` enumerated on the confidential set.
pub fn secrecy_only_search(
    channel: &ParallelChannel,
    budget: f64,
    spec: &GridSpec,
) -> Result<GridOutcome> {
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::InvalidBudget(budget));
    }
    let dims = dims_for(channel, false);
    if dims.len() > spec.max_dims {
        return Err(Error::DimensionCap {
            dims: dims.len(),
            max_dims: spec.max_dims,
        });
    }
    if budget == 0.0 || dims.is_empty() {
        let alloc = Allocation::zero(channel);
        let value = rate_r1(channel, &alloc)?;
        return Ok(GridOutcome { alloc, value });
    }
    simplex_search(channel, &dims, budget, spec.steps(), |ch, alloc| {
        rate_r1(ch, alloc)
    })
}

// ---------------------------------------------------------------------------
// One-dimensional confidential-rate water-filling
// ---------------------------------------------------------------------------

/// Scalable confidential-rate-only oracle for instances too large for the
/// grid (e.g. Monte Carlo state sets): maximizes `rate_r1` under the budget
/// by bisecting the scalar dual price `t`.
///
/// The per-subchannel maximizer of `c * [log2(1+p/m) - log2(1+p/n)] - t * p`
/// solves `(m+p)(n+p) = c (n-m) / (t ln 2)`, giving
///
/// ```text
/// p(t) = ( sqrt((n-m)^2 / 4 + K) - (m+n)/2 )+   with K = c (n-m) / (t ln 2)
/// ```
///
/// Total power is strictly decreasing in `t` wherever positive, so a plain
/// bisection meets the budget. This shares no code with the closed-form
/// boundary allocator.
pub fn secrecy_only_waterfill(channel: &ParallelChannel, budget: f64) -> Result<(Allocation, f64)> {
    const REL_TOL: f64 = 1e-12;
    const MAX_ITERS: usize = 500;

    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::InvalidBudget(budget));
    }
    let c = channel.prefactor();
    let active: Vec<(f64, f64)> = (0..channel.len())
        .filter(|&l| channel.in_confidential_set(l))
        .map(|l| {
            let s = &channel.subchannels()[l];
            (s.mu_sq, s.nu_sq)
        })
        .collect();
    if budget == 0.0 || active.is_empty() {
        let alloc = Allocation::zero(channel);
        let r1 = rate_r1(channel, &alloc)?;
        return Ok((alloc, r1));
    }

    let p_of = |m: f64, n: f64, t: f64| -> f64 {
        let k = c * (n - m) / (t * LN_2);
        let half_gap = 0.5 * (n - m);
        ((half_gap * half_gap + k).sqrt() - 0.5 * (m + n)).max(0.0)
    };
    let total = |t: f64| -> f64 { active.iter().map(|&(m, n)| p_of(m, n, t)).sum() };

    // Bracket the dual price, then bisect geometrically.
    let mut lo = 1.0; // total(lo) >= budget wanted
    let mut hi = 1.0; // total(hi) <= budget wanted
    let mut guard = 0;
    while total(lo) < budget {
        lo /= 8.0;
        guard += 1;
        if guard > MAX_ITERS {
            return Err(Error::NoConvergence {
                max_iters: MAX_ITERS,
                lo,
                hi,
                residual: budget - total(lo),
            });
        }
    }
    guard = 0;
    while total(hi) > budget {
        hi *= 8.0;
        guard += 1;
        if guard > MAX_ITERS {
            return Err(Error::NoConvergence {
                max_iters: MAX_ITERS,
                lo,
                hi,
                residual: total(hi) - budget,
            });
        }
    }
    let mut t = (lo * hi).sqrt();
    for _ in 0..MAX_ITERS {
        t = (lo * hi).sqrt();
        let tot = total(t);
        if (tot - budget).abs() <= REL_TOL * budget.max(1.0) {
            break;
        }
        if tot > budget {
            lo = t;
        } else {
            hi = t;
        }
    }

    // Materialize at the final price, scaled onto the budget exactly.
    let raw_total = total(t);
    let scale = if raw_total > 0.0 { budget / raw_total } else { 0.0 };
    let entries = (0..channel.len())
        .map(|l| {
            let s = &channel.subchannels()[l];
            if channel.in_confidential_set(l) {
                PowerSplit {
                    p0: 0.0,
                    p1: p_of(s.mu_sq, s.nu_sq, t) * scale,
                }
            } else {
                PowerSplit::default()
            }
        })
        .collect();
    let alloc = Allocation::new(channel, entries)?;
    let r1 = rate_r1(channel, &alloc)?;
    Ok((alloc, r1))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::rate_point;

    #[test]
    fn complement_only_channel_spends_everything_on_common() {
        // Single subchannel with mu_sq >= nu_sq: the objective grows with p0,
        // so the best grid point is the full budget on the common message.
        let ch = ParallelChannel::real(&[(2.0, 1.0)]).unwrap();
        let w = Weights::new(1.0, 1.0).unwrap();
        let spec = GridSpec::new(1e-2, 4).unwrap();
        let out = grid_search(&ch, &w, 3.0, &spec).unwrap();
        let e = out.alloc.entries()[0];
        assert!((e.p0 - 3.0).abs() < 1e-12, "expected all power common, got p0 = {}", e.p0);
        assert_eq!(e.p1, 0.0);
        let rp = rate_point(&ch, &out.alloc).unwrap();
        assert!((out.value - rp.r0).abs() < 1e-12);
    }

    #[test]
    fn zero_budget_returns_origin() {
        let ch = ParallelChannel::real(&[(1.0, 2.0)]).unwrap();
        let w = Weights::new(1.0, 1.0).unwrap();
        let spec = GridSpec::default_for(&ch);
        let out = grid_search(&ch, &w, 0.0, &spec).unwrap();
        assert_eq!(out.value, 0.0);
        assert_eq!(out.alloc.total_power(), 0.0);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        // Three subchannels all in A: 6 dimensions > default cap of 4.
        let ch = ParallelChannel::real(&[(1.0, 2.0), (1.0, 2.0), (1.0, 2.0)]).unwrap();
        let w = Weights::new(1.0, 1.0).unwrap();
        let spec = GridSpec::new(1e-2, 4).unwrap();
        match grid_search(&ch, &w, 1.0, &spec) {
            Err(Error::DimensionCap { dims: 6, max_dims: 4 }) => {}
            other => panic!("expected dimension cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn halving_resolution_never_decreases_the_best_value() {
        // The coarse grid is a subset of the refined grid.
        let ch = ParallelChannel::real(&[(1.0, 2.0)]).unwrap();
        let w = Weights::new(1.0, 2.0).unwrap();
        let coarse = grid_search(&ch, &w, 2.0, &GridSpec::new(0.05, 4).unwrap()).unwrap();
        let fine = grid_search(&ch, &w, 2.0, &GridSpec::new(0.025, 4).unwrap()).unwrap();
        assert!(
            fine.value >= coarse.value - 1e-15,
            "refined grid lost value: {} -> {}",
            coarse.value,
            fine.value
        );
    }

    #[test]
    fn secrecy_search_favors_the_wider_noise_gap_at_low_power() {
        // Two confidential-capable subchannels, mu_sq = 1 each, nu_sq = 2 and 8.
        // At budget 1 the marginal secrecy rate is larger on the wider gap, so
        // most power lands on the second subchannel.
        let ch = ParallelChannel::real(&[(1.0, 2.0), (1.0, 8.0)]).unwrap();
        let spec = GridSpec::new(1e-2, 4).unwrap();
        let out = secrecy_only_search(&ch, 1.0, &spec).unwrap();
        let e0 = out.alloc.entries()[0];
        let e1 = out.alloc.entries()[1];
        assert_eq!(e0.p0, 0.0);
        assert_eq!(e1.p0, 0.0);
        assert!(
            e1.p1 > e0.p1,
            "expected the wider-gap subchannel to take more power: {} vs {}",
            e0.p1,
            e1.p1
        );
    }

    #[test]
    fn waterfill_matches_grid_search_on_small_instances() {
        let cases = [
            (vec![(1.0, 2.0)], 2.0),
            (vec![(1.0, 2.0), (1.0, 8.0)], 1.0),
            (vec![(0.5, 4.0), (2.0, 3.0)], 5.0),
            (vec![(1.0, 3.0), (2.0, 1.0)], 2.5),
        ];
        for (pairs, budget) in cases {
            let ch = ParallelChannel::real(&pairs).unwrap();
            let spec = GridSpec::new(1e-3, 4).unwrap();
            let grid = secrecy_only_search(&ch, budget, &spec).unwrap();
            let (_, r1) = secrecy_only_waterfill(&ch, budget).unwrap();
            assert!(
                r1 >= grid.value - 1e-6,
                "waterfill fell below the grid: {} < {} on {pairs:?}",
                r1,
                grid.value
            );
            assert!(
                r1 <= grid.value + 1e-3,
                "grid fell far below the waterfill: {} vs {} on {pairs:?}",
                grid.value,
                r1
            );
        }
    }

    #[test]
    fn waterfill_without_confidential_subchannels_is_zero() {
        let ch = ParallelChannel::real(&[(2.0, 1.0), (3.0, 3.0)]).unwrap();
        let (alloc, r1) = secrecy_only_waterfill(&ch, 4.0).unwrap();
        assert_eq!(r1, 0.0);
        assert_eq!(alloc.total_power(), 0.0);
    }

    #[test]
    fn waterfill_meets_the_budget() {
        let ch = ParallelChannel::real(&[(1.0, 2.0), (0.5, 3.0), (4.0, 1.0)]).unwrap();
        let (alloc, _) = secrecy_only_waterfill(&ch, 3.0).unwrap();
        assert!(
            (alloc.total_power() - 3.0).abs() < 1e-9,
            "budget missed: {}",
            alloc.total_power()
        );
    }
}
