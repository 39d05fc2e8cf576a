//! Boundary tracing and frontier validation.
//!
//! A boundary is swept by solving the weighted problem for a grid of weight
//! ratios `gamma1 / gamma0` (with `gamma0` fixed at 1) and collecting the
//! resulting rate points, sorted by nondecreasing confidential rate. Standard
//! scalarization arguments make the trace a Pareto frontier: each point
//! maximizes its own weighted objective, so no sampled point may dominate
//! another or beat another under its supporting weights. `validate_boundary`
//! checks exactly those two properties.
//!
//! For a single subchannel the frontier has an independent parameterization:
//! sweep the confidential power fraction `beta` over `[0, 1]`, which needs no
//! solver at all. `gaussian_beta_sweep` produces that reference frontier, and
//! `sampled_hausdorff` measures the directed gap from one sampled frontier to
//! the piecewise-linear interpolation of another.

use crate::allocator::{check_case_condition, optimal_allocation, CaseTag, SolverConfig};
use crate::channel::{
    rate_point, Allocation, ParallelChannel, PowerSplit, RatePoint, Weights,
};
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Tolerance (bits) used by [`validate_boundary`] for domination and
/// supporting-objective comparisons.
// Slack for frontier checks, in bits per unit weight. The solver's price
// bisection leaves each point's spend anywhere within `lambda_tol * max(P, 1)`
// of the budget, which at default tolerances perturbs weighted objectives by
// a few 1e-8; violations below that scale are indistinguishable from budget
// jitter.
const VALIDATE_TOL: f64 = 1e-7;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// One traced point: the achieved rates, the weights that support it, the
/// closed form that produced it, the price it was materialized at (absent
/// for constructions that never price power, like the beta sweep), and the
/// full power allocation.
#[derive(Debug, Clone)]
pub struct BoundaryPoint {
    pub rate: RatePoint,
    pub weights: Weights,
    pub case: CaseTag,
    pub lambda: Option<f64>,
    pub alloc: Allocation,
}

/// A sampled boundary, sorted by nondecreasing confidential rate (ties broken
/// by nonincreasing common rate).
#[derive(Debug, Clone)]
pub struct Boundary {
    points: Vec<BoundaryPoint>,
}

impl Boundary {
    pub(crate) fn from_points(mut points: Vec<BoundaryPoint>) -> Self {
        points.sort_by(|a, b| {
            a.rate
                .r1
                .partial_cmp(&b.rate.r1)
                .expect("rates are finite")
                .then(b.rate.r0.partial_cmp(&a.rate.r0).expect("rates are finite"))
        });
        Self { points }
    }

    pub fn points(&self) -> &[BoundaryPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<BoundaryPoint> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The frontier as `(r1, r0)` pairs in sorted order, the shape expected
    /// by [`sampled_hausdorff`].
    pub fn rate_curve(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .map(|p| (p.rate.r1, p.rate.r0))
            .collect()
    }
}

/// A frontier defect found by [`validate_boundary`].
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryViolation {
    /// Point `index` is weakly dominated by point `by` and strictly worse in
    /// at least one coordinate.
    Dominated { index: usize, by: usize },
    /// Point `best_index` beats point `index` under `index`'s own supporting
    /// weights by `deficit_bits` (weights normalized to sum to one).
    NotSupported {
        index: usize,
        best_index: usize,
        deficit_bits: f64,
    },
}

// ---------------------------------------------------------------------------
// Ratio grids
// ---------------------------------------------------------------------------

/// `count` logarithmically spaced ratios spanning `[min, max]`.
pub fn log_spaced_ratios(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min > 0.0 && max >= min) {
        return Err(Error::InvalidRatios(format!(
            "log grid needs 0 < min <= max, got [{min}, {max}]"
        )));
    }
    if count == 0 || (count == 1 && max > min) {
        return Err(Error::InvalidRatios(format!(
            "log grid over [{min}, {max}] needs at least 2 points, got {count}"
        )));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let (lmin, lmax) = (min.ln(), max.ln());
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            (lmin + t * (lmax - lmin)).exp()
        })
        .collect())
}

/// The default sweep: 41 ratios spanning `[1e-3, 1e3]`.
pub fn default_ratio_grid() -> Vec<f64> {
    log_spaced_ratios(1e-3, 1e3, 41).expect("default grid parameters are valid")
}

// ---------------------------------------------------------------------------
// Tracing
// ---------------------------------------------------------------------------

/// Traces the boundary by solving the weighted problem at each ratio
/// `gamma1 / gamma0` in `ratios` (in parallel; the result is deterministic
/// and independent of thread count). Errors are annotated with the ratio
/// that produced them.
pub fn trace_region(
    channel: &ParallelChannel,
    budget: f64,
    ratios: &[f64],
    config: &SolverConfig,
) -> Result<Boundary> {
    if ratios.is_empty() {
        return Err(Error::InvalidRatios("empty ratio grid".into()));
    }
    if let Some(&bad) = ratios.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::InvalidRatios(format!(
            "ratios must be positive and finite, got {bad}"
        )));
    }
    let points = ratios
        .par_iter()
        .map(|&ratio| -> Result<BoundaryPoint> {
            let at_ratio = |e: Error| match e {
                Error::AtRatio { .. } => e,
                other => Error::AtRatio {
                    ratio,
                    source: Box::new(other),
                },
            };
            let weights = Weights::new(1.0, ratio).map_err(at_ratio)?;
            let opt = optimal_allocation(channel, &weights, budget, config).map_err(at_ratio)?;
            let rate = rate_point(channel, &opt.alloc).map_err(at_ratio)?;
            Ok(BoundaryPoint {
                rate,
                weights,
                case: opt.case,
                lambda: Some(opt.lambda),
                alloc: opt.alloc,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Boundary::from_points(points))
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Checks the two frontier properties every traced boundary must satisfy:
/// no point is dominated by another, and each point attains the maximum of
/// its own weighted objective over all sampled points, within `1e-7` bits
/// per unit weight. The checks run on the boundary's own rate coordinates
/// (for an ergodic boundary those are per-symbol rates; the stored
/// allocations are aggregated); the channel is used to validate allocation
/// shapes.
pub fn validate_boundary(
    channel: &ParallelChannel,
    boundary: &Boundary,
) -> Result<Vec<BoundaryViolation>> {
    if let Some(p) = boundary
        .points()
        .iter()
        .find(|p| p.alloc.entries().len() != channel.len())
    {
        return Err(Error::ShapeMismatch {
            expected: channel.len(),
            got: p.alloc.entries().len(),
        });
    }
    let rates: Vec<RatePoint> = boundary.points().iter().map(|p| p.rate).collect();
    let mut violations = Vec::new();
    for (i, ri) in rates.iter().enumerate() {
        for (j, rj) in rates.iter().enumerate() {
            if i == j {
                continue;
            }
            let no_worse =
                rj.r0 >= ri.r0 - VALIDATE_TOL && rj.r1 >= ri.r1 - VALIDATE_TOL;
            let better = rj.r0 > ri.r0 + VALIDATE_TOL || rj.r1 > ri.r1 + VALIDATE_TOL;
            if no_worse && better {
                violations.push(BoundaryViolation::Dominated { index: i, by: j });
                break;
            }
        }

        // Per-unit-weight scalarization keeps the tolerance meaningful at
        // extreme weight ratios.
        let w = &boundary.points()[i].weights;
        let scale = w.gamma0 + w.gamma1;
        let objective = |r: &RatePoint| (w.gamma0 * r.r0 + w.gamma1 * r.r1) / scale;
        let own = objective(ri);
        let (best_index, best) = rates
            .iter()
            .enumerate()
            .map(|(j, r)| (j, objective(r)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("objectives are finite"))
            .expect("boundary is nonempty here");
        if best > own + VALIDATE_TOL {
            violations.push(BoundaryViolation::NotSupported {
                index: i,
                best_index,
                deficit_bits: best - own,
            });
        }
    }
    Ok(violations)
}

// ---------------------------------------------------------------------------
// Single-subchannel reference sweep
// ---------------------------------------------------------------------------

/// Reference frontier for a single-subchannel channel, built by sweeping the
/// confidential power fraction `beta` (so `p1 = beta * budget`,
/// `p0 = (1 - beta) * budget`) with no solver involved.
///
/// Dominated sweep points are discarded, so the result is the Pareto-maximal
/// subset; each survivor is assigned supporting weights from the secant
/// slopes to its neighbors. If the subchannel has no confidential capability
/// (`mu_sq >= nu_sq`), the sweep collapses to the single common-only point.
pub fn gaussian_beta_sweep(
    channel: &ParallelChannel,
    budget: f64,
    betas: &[f64],
) -> Result<Boundary> {
    if channel.len() != 1 {
        return Err(Error::ShapeMismatch {
            expected: 1,
            got: channel.len(),
        });
    }
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::InvalidBudget(budget));
    }
    if betas.is_empty() {
        return Err(Error::InvalidGridSpec("empty beta grid".into()));
    }
    if let Some(&bad) = betas.iter().find(|b| !(b.is_finite() && (0.0..=1.0).contains(*b))) {
        return Err(Error::InvalidGridSpec(format!(
            "betas must lie in [0, 1], got {bad}"
        )));
    }

    let sweep: Vec<f64> = if channel.in_confidential_set(0) {
        betas.to_vec()
    } else {
        vec![0.0]
    };

    let mut sampled: Vec<(RatePoint, Allocation)> = sweep
        .iter()
        .map(|&beta| {
            let split = PowerSplit {
                p0: (1.0 - beta) * budget,
                p1: beta * budget,
            };
            let alloc = Allocation::new(channel, vec![split])?;
            let rate = rate_point(channel, &alloc)?;
            Ok((rate, alloc))
        })
        .collect::<Result<_>>()?;

    // Keep the Pareto-maximal subset: sort by r1 descending and keep points
    // whose r0 strictly improves on everything seen so far.
    sampled.sort_by(|a, b| {
        b.0.r1
            .partial_cmp(&a.0.r1)
            .expect("rates are finite")
            .then(b.0.r0.partial_cmp(&a.0.r0).expect("rates are finite"))
    });
    let mut maximal: Vec<(RatePoint, Allocation)> = Vec::new();
    let mut best_r0 = f64::NEG_INFINITY;
    for (rate, alloc) in sampled {
        if rate.r0 > best_r0 {
            best_r0 = rate.r0;
            maximal.push((rate, alloc));
        }
    }
    maximal.reverse(); // now strictly increasing r1, strictly decreasing r0

    // Supporting ratio for each survivor from the secant slopes
    // s_i = (r0_i - r0_{i+1}) / (r1_{i+1} - r1_i) to its neighbors: the
    // endpoints take half / double the single adjacent slope, interior
    // points the midpoint of the two enclosing slopes.
    let n = maximal.len();
    let slopes: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| {
            let (a, b) = (&maximal[i].0, &maximal[i + 1].0);
            (a.r0 - b.r0) / (b.r1 - a.r1)
        })
        .collect();
    let points = maximal
        .into_iter()
        .enumerate()
        .map(|(i, (rate, alloc))| {
            let ratio = if n == 1 {
                1.0
            } else if i == 0 {
                0.5 * slopes[0]
            } else if i == n - 1 {
                2.0 * slopes[n - 2]
            } else {
                0.5 * (slopes[i - 1] + slopes[i])
            };
            let weights = Weights::new(1.0, ratio.max(f64::MIN_POSITIVE))?;
            let ordering = check_case_condition(channel, &alloc, VALIDATE_TOL)?;
            let case = match ordering {
                crate::allocator::RateOrdering::Less => CaseTag::Case1,
                crate::allocator::RateOrdering::Greater => CaseTag::Case2,
                crate::allocator::RateOrdering::Equal => {
                    if alloc.total_common_power() == 0.0 {
                        CaseTag::Case1
                    } else {
                        CaseTag::Case3 { alpha: 1.0 }
                    }
                }
            };
            Ok(BoundaryPoint {
                rate,
                weights,
                case,
                lambda: None,
                alloc,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Boundary::from_points(points))
}

/// `count` equally spaced betas spanning `[0, 1]`.
pub fn linspace_betas(count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::InvalidGridSpec(format!(
            "beta grid needs at least 2 points, got {count}"
        )));
    }
    Ok((0..count)
        .map(|i| i as f64 / (count - 1) as f64)
        .collect())
}

// ---------------------------------------------------------------------------
// Directed frontier distance
// ---------------------------------------------------------------------------

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Directed Hausdorff distance from the sampled points of `from` to the
/// piecewise-linear interpolation of `to` (whose points must be ordered
/// along the curve, as produced by [`Boundary::rate_curve`]). Note the
/// asymmetry: this measures how far `from` strays, not how finely it covers
/// `to`. Empty `from` gives 0; empty `to` gives infinity.
pub fn sampled_hausdorff(from: &[(f64, f64)], to: &[(f64, f64)]) -> f64 {
    if from.is_empty() {
        return 0.0;
    }
    if to.is_empty() {
        return f64::INFINITY;
    }
    from.iter()
        .map(|&p| {
            if to.len() == 1 {
                point_segment_distance(p, to[0], to[0])
            } else {
                to.windows(2)
                    .map(|seg| point_segment_distance(p, seg[0], seg[1]))
                    .fold(f64::INFINITY, f64::min)
            }
        })
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
