//! Closed-form boundary power allocations.
//!
//! For strictly positive weights `(gamma0, gamma1)` the boundary of the
//! secrecy capacity region is swept by maximizing
//!
//! ```text
//! gamma0 * min(r01, r02) + gamma1 * r1     subject to total power <= P.
//! ```
//!
//! The maximizer always has one of three closed forms, distinguished by which
//! common-rate branch binds at the optimum. Every form is a water-filling
//! family in the level
//!
//! ```text
//! w = gamma0 / (2 * lambda * ln 2)
//! ```
//!
//! where `lambda > 0` is the power price. `lambda` is normalized against the
//! half-log2 rate convention throughout; for a channel with prefactor `c` the
//! multiplier of the actual weighted objective is `2 * c * lambda`. The
//! allocation itself does not depend on the prefactor (scaling the objective
//! merely rescales the price), so the closed forms apply unchanged.
//!
//! Dispatch tries the forms in order: the receiver-1-limited form (accepted
//! when `r01 < r02` at its own optimum), the receiver-2-limited form
//! (accepted when `r01 > r02`), and otherwise the blended family
//! `Case3(alpha)` whose parameter is driven until both branches agree.
//! Total allocated power is nonincreasing in `lambda`, so a bisection meets
//! any budget; `r01 - r02` is continuous in `alpha`, so a scan plus bisection
//! finds the equalizer.

use crate::channel::{
    rate_point, rate_r01, rate_r02, Allocation, ParallelChannel, PowerSplit, RatePoint, Weights,
};
use crate::error::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;

/// Fixed grid used to hunt for a sign change of `r01 - r02` in `alpha`.
const ALPHA_SCAN_POINTS: usize = 33;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Which closed-form family produced an allocation.
///
/// `Case1`: receiver 1 limits the common rate (`r01 < r02`); common power
/// water-fills against receiver 1's noise. `Case2`: receiver 2 limits it
/// (`r01 > r02`); common power water-fills against receiver 2's noise.
/// `Case3(alpha)`: both branches bind (`r01 = r02`); `alpha` blends the two
/// branch gradients, with `alpha = 1` reducing to the Case-1 formulas and
/// `alpha = 0` to the Case-2 formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseTag {
    Case1,
    Case2,
    Case3 { alpha: f64 },
}

impl CaseTag {
    /// True iff `ordering` of `(r01, r02)` is consistent with this form being
    /// the accepted one. Equality is consistent with every form: it is the
    /// `Case3` acceptance condition proper, and the degenerate seam of the
    /// other two (no common rate at all).
    pub fn accepts(&self, ordering: RateOrdering) -> bool {
        match self {
            CaseTag::Case1 => ordering != RateOrdering::Greater,
            CaseTag::Case2 => ordering != RateOrdering::Less,
            CaseTag::Case3 { .. } => ordering == RateOrdering::Equal,
        }
    }

    fn alpha(&self) -> Option<f64> {
        match self {
            CaseTag::Case3 { alpha } => Some(*alpha),
            _ => None,
        }
    }
}

/// Ordering of the two common-rate branches at an allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateOrdering {
    /// r01 < r02 beyond tolerance.
    Less,
    /// r01 > r02 beyond tolerance.
    Greater,
    /// |r01 - r02| within tolerance.
    Equal,
}

/// Compares the two common-rate branches of `alloc`, treating differences of
/// at most `tol_bits` as equal.
pub fn check_case_condition(
    channel: &ParallelChannel,
    alloc: &Allocation,
    tol_bits: f64,
) -> Result<RateOrdering> {
    let r01 = rate_r01(channel, alloc)?;
    let r02 = rate_r02(channel, alloc)?;
    let diff = r01 - r02;
    if diff.abs() <= tol_bits {
        Ok(RateOrdering::Equal)
    } else if diff < 0.0 {
        Ok(RateOrdering::Less)
    } else {
        Ok(RateOrdering::Greater)
    }
}

/// Solver tolerances. `lambda_tol` is relative on the power budget,
/// `alpha_tol` is absolute in bits on `|r01 - r02|`, `lambda_bracket_growth`
/// is the factor used to expand the price bracket, and `max_iters` caps every
/// bracketing or bisection loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub lambda_tol: f64,
    pub alpha_tol: f64,
    pub lambda_bracket_growth: f64,
    pub max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda_tol: 1e-9,
            alpha_tol: 1e-6,
            lambda_bracket_growth: 4.0,
            max_iters: 200,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.lambda_tol.is_finite()
            && self.lambda_tol > 0.0
            && self.alpha_tol.is_finite()
            && self.alpha_tol > 0.0
            && self.lambda_bracket_growth.is_finite()
            && self.lambda_bracket_growth > 1.0
            && self.max_iters >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSolverConfig(format!("{self:?}")))
        }
    }
}

/// Result of the three-step dispatch: the boundary allocation, the accepted
/// form, and the power price it was materialized at.
#[derive(Debug, Clone)]
pub struct OptimalAllocation {
    pub alloc: Allocation,
    pub case: CaseTag,
    pub lambda: f64,
}

// ---------------------------------------------------------------------------
// Per-subchannel closed forms
// ---------------------------------------------------------------------------

/// Water level of the common-power water-filling at price `lambda`.
#[inline]
fn water_level(gamma0: f64, lambda: f64) -> f64 {
    gamma0 / (2.0 * lambda * LN_2)
}

/// Confidential power on a subchannel of `A` when both messages may be
/// active: the unconstrained stationary point capped by the level at which
/// the common power hits zero (`reference_noise` is `nu_sq`, `mu_sq`, or
/// their blend depending on the form).
#[inline]
fn confidential_power(ratio: f64, w: f64, mu_sq: f64, nu_sq: f64, reference_noise: f64) -> f64 {
    let d = nu_sq - mu_sq;
    let stationary = 0.5 * (d * (d + 4.0 * w * ratio)).sqrt() - 0.5 * (mu_sq + nu_sq);
    let cap = ratio * d - reference_noise;
    stationary.min(cap).max(0.0)
}

/// `0.5 * sqrt((d - w)^2 + 4 alpha w d)`, the blended-form root. The argument
/// is nonnegative for either sign of `d`; a clamp guards rounding.
#[inline]
fn blended_root(w: f64, d: f64, alpha: f64) -> f64 {
    let arg = (d - w) * (d - w) + 4.0 * alpha * w * d;
    0.5 * arg.max(0.0).sqrt()
}

/// Closed-form `(p0, p1)` for one subchannel at water level `w`.
fn subchannel_powers(
    case: &CaseTag,
    ratio: f64,
    w: f64,
    mu_sq: f64,
    nu_sq: f64,
    in_a: bool,
) -> (f64, f64) {
    let d = nu_sq - mu_sq;
    match case {
        CaseTag::Case1 => {
            if in_a && ratio > nu_sq / d {
                let p0 = (w - (ratio - 1.0) * d).max(0.0);
                let p1 = confidential_power(ratio, w, mu_sq, nu_sq, nu_sq);
                (p0, p1)
            } else {
                ((w - mu_sq).max(0.0), 0.0)
            }
        }
        CaseTag::Case2 => {
            if in_a && ratio > mu_sq / d {
                let p0 = (w - (ratio + 1.0) * d).max(0.0);
                let p1 = confidential_power(ratio, w, mu_sq, nu_sq, mu_sq);
                (p0, p1)
            } else {
                ((w - nu_sq).max(0.0), 0.0)
            }
        }
        CaseTag::Case3 { alpha } => {
            let blend = alpha * nu_sq + (1.0 - alpha) * mu_sq;
            let root = blended_root(w, d, *alpha);
            if in_a && ratio > blend / d {
                let p0 = (root + 0.5 * w - (ratio - alpha + 0.5) * d).max(0.0);
                let p1 = confidential_power(ratio, w, mu_sq, nu_sq, blend);
                (p0, p1)
            } else {
                ((root - 0.5 * (mu_sq + nu_sq - w)).max(0.0), 0.0)
            }
        }
    }
}

fn validate_case(case: &CaseTag) -> Result<()> {
    if let Some(alpha) = case.alpha() {
        if !(alpha.is_finite() && (0.0..=1.0).contains(&alpha)) {
            return Err(Error::InvalidAlpha(alpha));
        }
    }
    Ok(())
}

/// Evaluates one closed-form family at a given price.
///
/// Every power is nonincreasing in `lambda` (the water level shrinks), which
/// is what makes the budget bisection in [`solve_lambda`] valid.
pub fn case_allocation(
    case: &CaseTag,
    channel: &ParallelChannel,
    weights: &Weights,
    lambda: f64,
) -> Result<Allocation> {
    validate_case(case)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidLambda(lambda));
    }
    let w = water_level(weights.gamma0, lambda);
    let ratio = weights.ratio();
    let entries = (0..channel.len())
        .map(|l| {
            let s = &channel.subchannels()[l];
            let (p0, p1) = subchannel_powers(
                case,
                ratio,
                w,
                s.mu_sq,
                s.nu_sq,
                channel.in_confidential_set(l),
            );
            PowerSplit { p0, p1 }
        })
        .collect();
    Allocation::new(channel, entries)
}

/// Total power of a family at a price, without materializing the allocation.
fn total_power_at(case: &CaseTag, channel: &ParallelChannel, weights: &Weights, lambda: f64) -> f64 {
    let w = water_level(weights.gamma0, lambda);
    let ratio = weights.ratio();
    (0..channel.len())
        .map(|l| {
            let s = &channel.subchannels()[l];
            let (p0, p1) = subchannel_powers(
                case,
                ratio,
                w,
                s.mu_sq,
                s.nu_sq,
                channel.in_confidential_set(l),
            );
            p0 + p1
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Price bisection
// ---------------------------------------------------------------------------

/// Finds the price at which one closed-form family spends the whole
/// `budget`, and returns it with the materialized allocation.
///
/// The bracket starts at `gamma0 / (2 ln2 (budget/L + max_l mu_sq))` and is
/// expanded geometrically until it straddles the budget; bisection then runs
/// until the total is within `lambda_tol * max(budget, 1)` without exceeding
/// the budget. The returned allocation is therefore always feasible, and its
/// budget miss scales with `lambda_tol`: loosening the tolerance degrades the
/// allocation instead of silently returning an overspent one.
pub fn solve_lambda(
    case: &CaseTag,
    channel: &ParallelChannel,
    weights: &Weights,
    budget: f64,
    config: &SolverConfig,
) -> Result<(f64, Allocation)> {
    validate_case(case)?;
    config.validate()?;
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::InvalidBudget(budget));
    }

    let max_mu = channel
        .subchannels()
        .iter()
        .map(|s| s.mu_sq)
        .fold(f64::NEG_INFINITY, f64::max);
    let lambda0 = weights.gamma0 / (2.0 * LN_2 * (budget / channel.len() as f64 + max_mu));

    if budget == 0.0 {
        return Ok((lambda0, Allocation::zero(channel)));
    }

    let total = |lambda: f64| total_power_at(case, channel, weights, lambda);
    let growth = config.lambda_bracket_growth;
    let tol = config.lambda_tol * budget.max(1.0);

    // Total power is nonincreasing in lambda: expand the lower end until it
    // overspends and the upper end until it underspends.
    let mut lo = lambda0;
    let mut hi = lambda0;
    for i in 0.. {
        if total(lo) >= budget {
            break;
        }
        if i >= config.max_iters {
            return Err(Error::NoConvergence {
                max_iters: config.max_iters,
                lo,
                hi,
                residual: budget - total(lo),
            });
        }
        lo /= growth;
    }
    for i in 0.. {
        if total(hi) <= budget {
            break;
        }
        if i >= config.max_iters {
            return Err(Error::NoConvergence {
                max_iters: config.max_iters,
                lo,
                hi,
                residual: total(hi) - budget,
            });
        }
        hi *= growth;
    }

    // Accept only prices on the feasible side: close to the budget and not
    // over it. Total power is continuous in lambda, so feasible prices inside
    // the tolerance band exist and bisection reaches one; once the bracket
    // collapses to float resolution, the upper endpoint is that price.
    let mut lambda = (lo * hi).sqrt();
    let mut residual = total(lambda) - budget;
    let mut converged = residual <= 0.0 && -residual <= tol;
    for _ in 0..config.max_iters {
        if converged {
            break;
        }
        if residual > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        let mid = (lo * hi).sqrt();
        lambda = if lo < mid && mid < hi { mid } else { hi };
        residual = total(lambda) - budget;
        converged = residual <= 0.0 && -residual <= tol;
    }
    if !converged {
        return Err(Error::NoConvergence {
            max_iters: config.max_iters,
            lo,
            hi,
            residual,
        });
    }

    let alloc = case_allocation(case, channel, weights, lambda)?;
    Ok((lambda, alloc))
}

// ---------------------------------------------------------------------------
// Three-step dispatch
// ---------------------------------------------------------------------------

struct Candidate {
    lambda: f64,
    alloc: Allocation,
    rates: RatePoint,
}

fn budgeted(
    case: &CaseTag,
    channel: &ParallelChannel,
    weights: &Weights,
    budget: f64,
    config: &SolverConfig,
) -> Result<Candidate> {
    let (lambda, alloc) = solve_lambda(case, channel, weights, budget, config)?;
    let rates = rate_point(channel, &alloc)?;
    Ok(Candidate {
        lambda,
        alloc,
        rates,
    })
}

fn ordering_of(rates: &RatePoint, tol_bits: f64) -> RateOrdering {
    let diff = rates.r01 - rates.r02;
    if diff.abs() <= tol_bits {
        RateOrdering::Equal
    } else if diff < 0.0 {
        RateOrdering::Less
    } else {
        RateOrdering::Greater
    }
}

/// Maximizes the weighted objective over the power constraint by trying the
/// three closed forms in order.
///
/// Step 1 accepts the receiver-1-limited form iff `r01 < r02` at its own
/// budget-matched optimum; step 2 accepts the receiver-2-limited form iff
/// `r01 > r02`; step 3 scans and bisects `alpha` until the branches agree to
/// within `alpha_tol` bits. An exact tie at step 1 or 2 is returned as the
/// blended form at the corresponding endpoint (`alpha` 1 or 0), except for
/// the degenerate tie with no common power at all (`r01 = r02 = 0`), which
/// keeps the step's own tag: the closed forms coincide there.
pub fn optimal_allocation(
    channel: &ParallelChannel,
    weights: &Weights,
    budget: f64,
    config: &SolverConfig,
) -> Result<OptimalAllocation> {
    config.validate()?;

    // Step 1: assume receiver 1 limits the common rate.
    let c1 = budgeted(&CaseTag::Case1, channel, weights, budget, config)?;
    match ordering_of(&c1.rates, config.alpha_tol) {
        RateOrdering::Less => {
            return Ok(OptimalAllocation {
                alloc: c1.alloc,
                case: CaseTag::Case1,
                lambda: c1.lambda,
            })
        }
        RateOrdering::Equal => {
            let case = if c1.alloc.total_common_power() == 0.0 {
                CaseTag::Case1
            } else {
                CaseTag::Case3 { alpha: 1.0 }
            };
            return Ok(OptimalAllocation {
                alloc: c1.alloc,
                case,
                lambda: c1.lambda,
            });
        }
        RateOrdering::Greater => {}
    }

    // Step 2: assume receiver 2 limits the common rate.
    let c2 = budgeted(&CaseTag::Case2, channel, weights, budget, config)?;
    match ordering_of(&c2.rates, config.alpha_tol) {
        RateOrdering::Greater => {
            return Ok(OptimalAllocation {
                alloc: c2.alloc,
                case: CaseTag::Case2,
                lambda: c2.lambda,
            })
        }
        RateOrdering::Equal => {
            let case = if c2.alloc.total_common_power() == 0.0 {
                CaseTag::Case2
            } else {
                CaseTag::Case3 { alpha: 0.0 }
            };
            return Ok(OptimalAllocation {
                alloc: c2.alloc,
                case,
                lambda: c2.lambda,
            });
        }
        RateOrdering::Less => {}
    }

    // Step 3: equalize the branches. Step 1 left r01 - r02 > 0 at alpha = 1
    // and step 2 left it < 0 at alpha = 0, so a sign change exists; bisect
    // well below alpha_tol so downstream frontier checks see clean ties.
    let g_target = config.alpha_tol * 1e-3;
    let mut scanned = Vec::with_capacity(ALPHA_SCAN_POINTS);
    let mut bracket: Option<((f64, f64), (f64, f64))> = None;
    let mut best: Option<(f64, Candidate, f64)> = None; // (|g|, candidate, alpha)
    for i in 0..ALPHA_SCAN_POINTS {
        let alpha = i as f64 / (ALPHA_SCAN_POINTS - 1) as f64;
        let cand = budgeted(&CaseTag::Case3 { alpha }, channel, weights, budget, config)
            .map_err(|e| Error::AtRatio {
                ratio: weights.ratio(),
                source: Box::new(e),
            })?;
        let g = cand.rates.r01 - cand.rates.r02;
        scanned.push((alpha, g));
        if best.as_ref().map_or(true, |(b, _, _)| g.abs() < *b) {
            best = Some((g.abs(), cand, alpha));
        }
        if let Some(&(prev_alpha, prev_g)) = scanned.get(i.wrapping_sub(1)) {
            if prev_g.signum() != g.signum() && bracket.is_none() {
                bracket = Some(((prev_alpha, prev_g), (alpha, g)));
            }
        }
    }

    let (mut best_abs, mut best_cand, mut best_alpha) =
        best.expect("scan always evaluates at least one alpha");
    if best_abs > g_target {
        let ((mut a_lo, mut g_lo), (mut a_hi, _)) = bracket.ok_or(Error::NoAlphaRoot {
            scanned: scanned.clone(),
        })?;
        for _ in 0..config.max_iters {
            if best_abs <= g_target || (a_hi - a_lo) < 1e-15 {
                break;
            }
            let mid = 0.5 * (a_lo + a_hi);
            let cand = budgeted(&CaseTag::Case3 { alpha: mid }, channel, weights, budget, config)
                .map_err(|e| Error::AtRatio {
                    ratio: weights.ratio(),
                    source: Box::new(e),
                })?;
            let g = cand.rates.r01 - cand.rates.r02;
            if g.abs() < best_abs {
                best_abs = g.abs();
                best_cand = cand;
                best_alpha = mid;
            }
            if g.signum() == g_lo.signum() {
                a_lo = mid;
                g_lo = g;
            } else {
                a_hi = mid;
            }
        }
    }

    if best_abs > config.alpha_tol {
        return Err(Error::AtRatio {
            ratio: weights.ratio(),
            source: Box::new(Error::NoAlphaRoot { scanned }),
        });
    }
    Ok(OptimalAllocation {
        alloc: best_cand.alloc,
        case: CaseTag::Case3 { alpha: best_alpha },
        lambda: best_cand.lambda,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
