//! JSON run configurations: one record per subcommand, plus the canonical
//! config hash recorded in manifests.
//!
//! All numeric knobs are validated before any computation starts; unknown
//! fields are rejected so typos fail loudly. Powers may be given in linear
//! or dB units; conversion (`linear = 10^(dB/10)`) happens here and nowhere
//! else.

use crate::error::{CliError, Result};
use secrecy_core::{
    linspace_betas, log_spaced_ratios, GainModel, GridSpec, ParallelChannel, SolverConfig,
    Subchannel,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::path::Path;

// ---------------------------------------------------------------------------
// Shared pieces
// ---------------------------------------------------------------------------

/// A power in linear or decibel units: `{"linear": 3.16}` or `{"db": 5}`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PowerSpec {
    Linear(f64),
    Db(f64),
}

impl PowerSpec {
    pub fn to_linear(self) -> Result<f64> {
        let v = match self {
            PowerSpec::Linear(x) => x,
            PowerSpec::Db(d) => 10f64.powf(d / 10.0),
        };
        if v.is_finite() && v >= 0.0 {
            Ok(v)
        } else {
            Err(CliError::Config(format!(
                "power must be nonnegative and finite, got {v}"
            )))
        }
    }
}

/// Ratio sweep: `{"log_spaced": {"min": .., "max": .., "count": ..}}` or
/// `{"explicit": [..]}`. Omitted entirely, commands fall back to the default
/// 41-point sweep of `[1e-3, 1e3]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RatioGrid {
    LogSpaced { min: f64, max: f64, count: usize },
    Explicit(Vec<f64>),
}

impl RatioGrid {
    pub fn to_ratios(&self) -> Result<Vec<f64>> {
        match self {
            RatioGrid::LogSpaced { min, max, count } => {
                Ok(log_spaced_ratios(*min, *max, *count)?)
            }
            RatioGrid::Explicit(v) => Ok(v.clone()),
        }
    }
}

/// Beta sweep for the single-subchannel command: `{"count": n}` (equally
/// spaced on [0, 1]) or `{"explicit": [..]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BetaGrid {
    Count(usize),
    Explicit(Vec<f64>),
}

impl BetaGrid {
    pub fn to_betas(&self) -> Result<Vec<f64>> {
        match self {
            BetaGrid::Count(n) => Ok(linspace_betas(*n)?),
            BetaGrid::Explicit(v) => Ok(v.clone()),
        }
    }
}

/// Fading gain model: `{"rayleigh": {"sigma1": .., "sigma2": ..}}` or
/// `{"empirical": [[g1, g2], ..]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GainModelConfig {
    Rayleigh { sigma1: f64, sigma2: f64 },
    Empirical(Vec<(f64, f64)>),
}

impl GainModelConfig {
    pub fn to_model(&self) -> GainModel {
        match self {
            GainModelConfig::Rayleigh { sigma1, sigma2 } => GainModel::Rayleigh {
                sigma1: *sigma1,
                sigma2: *sigma2,
            },
            GainModelConfig::Empirical(list) => GainModel::Empirical(list.clone()),
        }
    }
}

/// Optional overrides of the solver tolerances; anything omitted keeps the
/// library default.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    pub lambda_tol: Option<f64>,
    pub alpha_tol: Option<f64>,
    pub lambda_bracket_growth: Option<f64>,
    pub max_iters: Option<usize>,
}

impl SolverOverrides {
    pub fn to_config(self) -> Result<SolverConfig> {
        let d = SolverConfig::default();
        let cfg = SolverConfig {
            lambda_tol: self.lambda_tol.unwrap_or(d.lambda_tol),
            alpha_tol: self.alpha_tol.unwrap_or(d.alpha_tol),
            lambda_bracket_growth: self
                .lambda_bracket_growth
                .unwrap_or(d.lambda_bracket_growth),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn solver_config(overrides: Option<SolverOverrides>) -> Result<SolverConfig> {
    overrides.unwrap_or_default().to_config()
}

/// Optional overrides of the verification oracle's grid.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    pub resolution: Option<f64>,
    pub max_dims: Option<usize>,
}

impl GridOverrides {
    pub fn to_spec(self, channel: &ParallelChannel) -> Result<GridSpec> {
        let d = GridSpec::default_for(channel);
        Ok(GridSpec::new(
            self.resolution.unwrap_or(d.resolution),
            self.max_dims.unwrap_or(d.max_dims),
        )?)
    }
}

fn default_prefactor() -> f64 {
    0.5
}

// ---------------------------------------------------------------------------
// Per-command configs
// ---------------------------------------------------------------------------

/// `region`: trace the boundary of a parallel channel.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    /// `(mu_sq, nu_sq)` noise pairs, one per subchannel.
    pub channel: Vec<(f64, f64)>,
    #[serde(default = "default_prefactor")]
    pub prefactor: f64,
    pub power: PowerSpec,
    #[serde(default)]
    pub ratios: Option<RatioGrid>,
    #[serde(default)]
    pub solver: Option<SolverOverrides>,
}

impl RegionConfig {
    pub fn channel(&self) -> Result<ParallelChannel> {
        let subs = self
            .channel
            .iter()
            .map(|&(mu_sq, nu_sq)| Subchannel { mu_sq, nu_sq })
            .collect();
        Ok(ParallelChannel::new(subs, self.prefactor)?)
    }
}

/// `gaussian`: solver-free beta sweep of a single subchannel.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianConfig {
    pub mu_sq: f64,
    pub nu_sq: f64,
    #[serde(default = "default_prefactor")]
    pub prefactor: f64,
    pub power: PowerSpec,
    #[serde(default)]
    pub betas: Option<BetaGrid>,
}

impl GaussianConfig {
    pub fn channel(&self) -> Result<ParallelChannel> {
        Ok(ParallelChannel::new(
            vec![Subchannel {
                mu_sq: self.mu_sq,
                nu_sq: self.nu_sq,
            }],
            self.prefactor,
        )?)
    }

    /// 101 equally spaced betas unless the config says otherwise.
    pub fn betas(&self) -> Result<Vec<f64>> {
        match &self.betas {
            Some(grid) => grid.to_betas(),
            None => Ok(linspace_betas(101)?),
        }
    }
}

/// `fading`: ergodic boundary of a Monte Carlo discretized fading channel,
/// optionally swept over several `sigma2` values into one combined CSV.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingConfig {
    pub mu_sq: f64,
    pub nu_sq: f64,
    #[serde(default)]
    pub power: Option<PowerSpec>,
    /// Decibel shorthand for the budget: `"P_dB": 5` means `10^0.5` linear.
    #[serde(default, rename = "P_dB")]
    pub p_db: Option<f64>,
    pub model: GainModelConfig,
    pub n_states: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub ratios: Option<RatioGrid>,
    #[serde(default)]
    pub solver: Option<SolverOverrides>,
    #[serde(default)]
    pub sigma2_values: Option<Vec<f64>>,
}

impl FadingConfig {
    pub fn power_linear(&self) -> Result<f64> {
        match (self.power, self.p_db) {
            (Some(p), None) => p.to_linear(),
            (None, Some(db)) => PowerSpec::Db(db).to_linear(),
            (Some(_), Some(_)) => Err(CliError::Config(
                "give either `power` or `P_dB`, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "missing power budget: set `power` or `P_dB`".into(),
            )),
        }
    }

    /// The gain models to run: one per `sigma2_values` entry (Rayleigh only),
    /// or the configured model alone. Each comes with the value for the
    /// CSV's sigma2 column, absent for empirical models.
    pub fn runs(&self) -> Result<Vec<(Option<f64>, GainModel)>> {
        match (&self.sigma2_values, &self.model) {
            (Some(values), GainModelConfig::Rayleigh { sigma1, .. }) => {
                if values.is_empty() {
                    return Err(CliError::Config("sigma2_values must not be empty".into()));
                }
                Ok(values
                    .iter()
                    .map(|&sigma2| {
                        (
                            Some(sigma2),
                            GainModel::Rayleigh {
                                sigma1: *sigma1,
                                sigma2,
                            },
                        )
                    })
                    .collect())
            }
            (Some(_), GainModelConfig::Empirical(_)) => Err(CliError::Config(
                "sigma2_values requires a rayleigh gain model".into(),
            )),
            (None, model) => {
                let sigma2 = match model {
                    GainModelConfig::Rayleigh { sigma2, .. } => Some(*sigma2),
                    GainModelConfig::Empirical(_) => None,
                };
                Ok(vec![(sigma2, model.to_model())])
            }
        }
    }
}

fn default_instances() -> usize {
    50
}

fn default_tolerance_bits() -> f64 {
    1e-3
}

fn default_max_subchannels() -> usize {
    2
}

/// `verify`: certify the closed-form solver against the brute-force oracle
/// on seeded random instances.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_tolerance_bits")]
    pub tolerance_bits: f64,
    #[serde(default = "default_max_subchannels")]
    pub max_subchannels: usize,
    #[serde(default)]
    pub solver: Option<SolverOverrides>,
    #[serde(default)]
    pub grid: Option<GridOverrides>,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.instances == 0 {
            return Err(CliError::Config("instances must be at least 1".into()));
        }
        if !(self.tolerance_bits.is_finite() && self.tolerance_bits > 0.0) {
            return Err(CliError::Config(format!(
                "tolerance_bits must be positive and finite, got {}",
                self.tolerance_bits
            )));
        }
        if self.max_subchannels == 0 {
            return Err(CliError::Config("max_subchannels must be at least 1".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Loading and hashing
// ---------------------------------------------------------------------------

/// Reads and parses a config file, returning the typed record plus the raw
/// text (kept for the manifest hash).
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<(T, String)> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let parsed = serde_json::from_str(&raw)
        .map_err(|e| CliError::Config(format!("cannot parse config {}: {e}", path.display())))?;
    Ok((parsed, raw))
}

/// SHA-256 of the canonicalized config: the JSON re-serialized compactly
/// with object keys sorted, so formatting and key order don't change the
/// hash.
pub fn canonical_sha256(raw: &str) -> Result<String> {
    let value: serde_json::Value = serde_json::from_str(raw)
        .map_err(|e| CliError::Config(format!("cannot canonicalize config: {e}")))?;
    let canonical =
        serde_json::to_string(&value).expect("re-serializing a parsed value cannot fail");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    Ok(hex::encode(hasher.finalize()))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
