//! Parallel Gaussian broadcast channel with a confidential message.
//!
//! A channel is a set of L independent Gaussian subchannels. Receiver 1 sees
//! noise variance `mu_sq[l]`, receiver 2 sees `nu_sq[l]`. Receiver 2 must stay
//! ignorant of the confidential message, so confidential power is only useful
//! on the subchannels where receiver 1 is strictly stronger:
//!
//! ```text
//! A = { l : mu_sq[l] < nu_sq[l] }
//! ```
//!
//! An allocation assigns each subchannel a common-message power `p0` and a
//! confidential-message power `p1` (with `p1 = 0` off `A`). The achievable
//! rates, in bits, with `c` the signalling prefactor (1/2 real, 1 complex):
//!
//! ```text
//! r01 = c * sum_l log2(1 + p0 / (mu_sq + p1))     common rate at receiver 1
//! r02 = c * sum_l log2(1 + p0 / (nu_sq + p1))     common rate at receiver 2
//! r1  = c * sum_{l in A} [ log2(1 + p1 / mu_sq) - log2(1 + p1 / nu_sq) ]
//! r0  = min(r01, r02)                             decodable common rate
//! ```

use crate::error::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;

/// log2(1 + x), accurate for small x.
#[inline]
pub(crate) fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Noise variances of one subchannel: `mu_sq` at receiver 1, `nu_sq` at
/// receiver 2 (the eavesdropper of the confidential message).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subchannel {
    pub mu_sq: f64,
    pub nu_sq: f64,
}

/// A set of parallel Gaussian subchannels plus the rate prefactor
/// (0.5 for real signalling, 1.0 for proper-complex signalling).
///
/// The partition into `A` (confidential-capable, `mu_sq < nu_sq`) and its
/// complement is fixed at construction; ties go to the complement.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelChannel {
    subchannels: Vec<Subchannel>,
    prefactor: f64,
    in_a: Vec<bool>,
}

impl ParallelChannel {
    pub fn new(subchannels: Vec<Subchannel>, prefactor: f64) -> Result<Self> {
        if subchannels.is_empty() {
            return Err(Error::EmptyChannel);
        }
        for (index, s) in subchannels.iter().enumerate() {
            let ok = s.mu_sq.is_finite() && s.nu_sq.is_finite() && s.mu_sq > 0.0 && s.nu_sq > 0.0;
            if !ok {
                return Err(Error::InvalidNoise {
                    index,
                    mu_sq: s.mu_sq,
                    nu_sq: s.nu_sq,
                });
            }
        }
        if prefactor != 0.5 && prefactor != 1.0 {
            return Err(Error::InvalidPrefactor(prefactor));
        }
        let in_a = subchannels.iter().map(|s| s.mu_sq < s.nu_sq).collect();
        Ok(Self {
            subchannels,
            prefactor,
            in_a,
        })
    }

    /// Real-signalling channel (prefactor 1/2) from `(mu_sq, nu_sq)` pairs.
    pub fn real(pairs: &[(f64, f64)]) -> Result<Self> {
        let subs = pairs
            .iter()
            .map(|&(mu_sq, nu_sq)| Subchannel { mu_sq, nu_sq })
            .collect();
        Self::new(subs, 0.5)
    }

    /// Proper-complex channel (prefactor 1) from `(mu_sq, nu_sq)` pairs.
    pub fn complex(pairs: &[(f64, f64)]) -> Result<Self> {
        let subs = pairs
            .iter()
            .map(|&(mu_sq, nu_sq)| Subchannel { mu_sq, nu_sq })
            .collect();
        Self::new(subs, 1.0)
    }

    pub fn len(&self) -> usize {
        self.subchannels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one subchannel by construction
    }

    pub fn subchannels(&self) -> &[Subchannel] {
        &self.subchannels
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    /// True iff subchannel `l` supports confidential power (`mu_sq < nu_sq`).
    pub fn in_confidential_set(&self, l: usize) -> bool {
        self.in_a[l]
    }

    /// Indices split into (A, A-complement), preserving order.
    pub fn classify(&self) -> (Vec<usize>, Vec<usize>) {
        let mut a = Vec::new();
        let mut ac = Vec::new();
        for l in 0..self.len() {
            if self.in_a[l] {
                a.push(l);
            } else {
                ac.push(l);
            }
        }
        (a, ac)
    }
}

/// Power split on one subchannel: `p0` for the common message, `p1` for the
/// confidential message.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PowerSplit {
    pub p0: f64,
    pub p1: f64,
}

/// A per-subchannel power assignment, validated against a channel:
/// entries are finite and nonnegative, and `p1 = 0` outside `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    entries: Vec<PowerSplit>,
}

impl Allocation {
    pub fn new(channel: &ParallelChannel, entries: Vec<PowerSplit>) -> Result<Self> {
        if entries.len() != channel.len() {
            return Err(Error::ShapeMismatch {
                expected: channel.len(),
                got: entries.len(),
            });
        }
        for (index, e) in entries.iter().enumerate() {
            if !(e.p0.is_finite() && e.p1.is_finite() && e.p0 >= 0.0 && e.p1 >= 0.0) {
                return Err(Error::InvalidAllocation {
                    index,
                    reason: format!("powers must be finite and nonnegative, got ({}, {})", e.p0, e.p1),
                });
            }
            if e.p1 > 0.0 && !channel.in_confidential_set(index) {
                return Err(Error::InvalidAllocation {
                    index,
                    reason: format!(
                        "confidential power {} on a subchannel outside the confidential set",
                        e.p1
                    ),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn zero(channel: &ParallelChannel) -> Self {
        Self {
            entries: vec![PowerSplit::default(); channel.len()],
        }
    }

    pub fn entries(&self) -> &[PowerSplit] {
        &self.entries
    }

    /// Sum of all common and confidential powers.
    pub fn total_power(&self) -> f64 {
        self.entries.iter().map(|e| e.p0 + e.p1).sum()
    }

    /// Sum of common powers only.
    pub fn total_common_power(&self) -> f64 {
        self.entries.iter().map(|e| e.p0).sum()
    }
}

/// Strictly positive weights of the scalarized objective
/// `gamma0 * r0 + gamma1 * r1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub gamma0: f64,
    pub gamma1: f64,
}

impl Weights {
    pub fn new(gamma0: f64, gamma1: f64) -> Result<Self> {
        if !(gamma0.is_finite() && gamma1.is_finite() && gamma0 > 0.0 && gamma1 > 0.0) {
            return Err(Error::InvalidWeights { gamma0, gamma1 });
        }
        Ok(Self { gamma0, gamma1 })
    }

    /// gamma1 / gamma0, the only combination the closed forms depend on.
    pub fn ratio(&self) -> f64 {
        self.gamma1 / self.gamma0
    }
}

/// Achievable rates of one allocation, in bits (per real symbol for
/// prefactor 1/2, per complex symbol for prefactor 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    /// Common rate decodable by both receivers: `min(r01, r02)`.
    pub r0: f64,
    /// Confidential rate to receiver 1, secret from receiver 2.
    pub r1: f64,
    /// Common-rate branch seen by receiver 1.
    pub r01: f64,
    /// Common-rate branch seen by receiver 2.
    pub r02: f64,
}

// ---------------------------------------------------------------------------
// Rate evaluation
// ---------------------------------------------------------------------------

fn check_shape(channel: &ParallelChannel, alloc: &Allocation) -> Result<()> {
    if alloc.entries().len() != channel.len() {
        return Err(Error::ShapeMismatch {
            expected: channel.len(),
            got: alloc.entries().len(),
        });
    }
    Ok(())
}

/// Common rate at receiver 1: `c * sum_l log2(1 + p0 / (mu_sq + p1))`.
pub fn rate_r01(channel: &ParallelChannel, alloc: &Allocation) -> Result<f64> {
    check_shape(channel, alloc)?;
    let sum: f64 = channel
        .subchannels()
        .iter()
        .zip(alloc.entries())
        .map(|(s, e)| log2_1p(e.p0 / (s.mu_sq + e.p1)))
        .sum();
    Ok(channel.prefactor() * sum)
}

/// Common rate at receiver 2: `c * sum_l log2(1 + p0 / (nu_sq + p1))`.
pub fn rate_r02(channel: &ParallelChannel, alloc: &Allocation) -> Result<f64> {
    check_shape(channel, alloc)?;
    let sum: f64 = channel
        .subchannels()
        .iter()
        .zip(alloc.entries())
        .map(|(s, e)| log2_1p(e.p0 / (s.nu_sq + e.p1)))
        .sum();
    Ok(channel.prefactor() * sum)
}

/// Confidential rate, accumulated over `A` only:
/// `c * sum_{l in A} [log2(1 + p1 / mu_sq) - log2(1 + p1 / nu_sq)]`.
///
/// Each term is nonnegative because `mu_sq < nu_sq` on `A`.
pub fn rate_r1(channel: &ParallelChannel, alloc: &Allocation) -> Result<f64> {
    check_shape(channel, alloc)?;
    let mut sum = 0.0;
    for (l, (s, e)) in channel.subchannels().iter().zip(alloc.entries()).enumerate() {
        if channel.in_confidential_set(l) && e.p1 > 0.0 {
            sum += log2_1p(e.p1 / s.mu_sq) - log2_1p(e.p1 / s.nu_sq);
        }
    }
    Ok(channel.prefactor() * sum)
}

/// All four rates of an allocation.
pub fn rate_point(channel: &ParallelChannel, alloc: &Allocation) -> Result<RatePoint> {
    let r01 = rate_r01(channel, alloc)?;
    let r02 = rate_r02(channel, alloc)?;
    let r1 = rate_r1(channel, alloc)?;
    Ok(RatePoint {
        r0: r01.min(r02),
        r1,
        r01,
        r02,
    })
}

/// `gamma0 * min(r01, r02) + gamma1 * r1`.
pub fn weighted_objective(
    channel: &ParallelChannel,
    weights: &Weights,
    alloc: &Allocation,
) -> Result<f64> {
    let rp = rate_point(channel, alloc)?;
    Ok(weights.gamma0 * rp.r0 + weights.gamma1 * rp.r1)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
