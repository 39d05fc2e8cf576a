//! The four subcommands: boundary tracing, the single-subchannel beta sweep,
//! ergodic fading sweeps, and oracle verification. Each writes one CSV plus
//! a manifest sidecar and is byte-deterministic for a fixed config and seed.

use crate::config::{
    load, solver_config, FadingConfig, GaussianConfig, RegionConfig, VerifyConfig,
};
use crate::error::{CliError, Result};
use crate::output::{case_cells, csv, fmt_f64, write_atomic, write_manifest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secrecy_core::{
    default_ratio_grid, ergodic_boundary, gaussian_beta_sweep, grid_search, optimal_allocation,
    sample_states, trace_region, weighted_objective, BoundaryPoint, GridSpec, ParallelChannel,
    Weights,
};
use std::path::Path;

fn ratios_or_default(grid: &Option<crate::config::RatioGrid>) -> Result<Vec<f64>> {
    match grid {
        Some(g) => g.to_ratios(),
        None => Ok(default_ratio_grid()),
    }
}

/// Boundary points sorted by their weight ratio, the CSV row order.
fn by_ratio(mut points: Vec<BoundaryPoint>) -> Vec<BoundaryPoint> {
    points.sort_by(|a, b| {
        a.weights
            .ratio()
            .partial_cmp(&b.weights.ratio())
            .expect("ratios are finite")
    });
    points
}

/// The scalar boundary-point cells shared by the region and fading CSVs:
/// gamma_ratio, rates, case, alpha, lambda.
fn point_cells(p: &BoundaryPoint) -> Vec<String> {
    let (case, alpha) = case_cells(&p.case);
    vec![
        fmt_f64(p.weights.ratio()),
        fmt_f64(p.rate.r0),
        fmt_f64(p.rate.r1),
        fmt_f64(p.rate.r01),
        fmt_f64(p.rate.r02),
        case.to_string(),
        alpha,
        fmt_f64(p.lambda.expect("traced points carry a price")),
    ]
}

const POINT_HEADER: [&str; 8] = [
    "gamma_ratio",
    "R0_bits",
    "R1_bits",
    "R01_bits",
    "R02_bits",
    "case",
    "alpha",
    "lambda",
];

// ---------------------------------------------------------------------------
// region
// ---------------------------------------------------------------------------

pub fn cmd_region(config_path: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let (cfg, raw): (RegionConfig, String) = load(config_path)?;
    let channel = cfg.channel()?;
    let budget = cfg.power.to_linear()?;
    let ratios = ratios_or_default(&cfg.ratios)?;
    let solver = solver_config(cfg.solver)?;

    let boundary = trace_region(&channel, budget, &ratios, &solver)?;
    let points = by_ratio(boundary.into_points());

    let mut header: Vec<String> = POINT_HEADER.iter().map(|s| s.to_string()).collect();
    for l in 0..channel.len() {
        header.push(format!("p0_{l}"));
        header.push(format!("p1_{l}"));
    }
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            let mut row = point_cells(p);
            for e in p.alloc.entries() {
                row.push(fmt_f64(e.p0));
                row.push(fmt_f64(e.p1));
            }
            row
        })
        .collect();

    write_atomic(out, &csv(&header, &rows))?;
    write_manifest(out, "region", &raw, seed)
}

// ---------------------------------------------------------------------------
// gaussian
// ---------------------------------------------------------------------------

pub fn cmd_gaussian(config_path: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let (cfg, raw): (GaussianConfig, String) = load(config_path)?;
    let channel = cfg.channel()?;
    let budget = cfg.power.to_linear()?;
    let betas = cfg.betas()?;

    let boundary = gaussian_beta_sweep(&channel, budget, &betas)?;
    let header: Vec<String> = ["beta", "R0_bits", "R1_bits"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    // Boundary order (nondecreasing r1) is nondecreasing beta for the
    // surviving sweep points.
    let rows: Vec<Vec<String>> = boundary
        .points()
        .iter()
        .map(|p| {
            let beta = if budget > 0.0 {
                p.alloc.entries()[0].p1 / budget
            } else {
                0.0
            };
            vec![fmt_f64(beta), fmt_f64(p.rate.r0), fmt_f64(p.rate.r1)]
        })
        .collect();

    write_atomic(out, &csv(&header, &rows))?;
    write_manifest(out, "gaussian", &raw, seed)
}

// ---------------------------------------------------------------------------
// fading
// ---------------------------------------------------------------------------

pub fn cmd_fading(config_path: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let (cfg, raw): (FadingConfig, String) = load(config_path)?;
    let power = cfg.power_linear()?;
    let ratios = ratios_or_default(&cfg.ratios)?;
    let solver = solver_config(cfg.solver)?;
    let effective_seed = seed.or(cfg.seed).unwrap_or(0);

    let mut header: Vec<String> = vec!["sigma2".to_string()];
    header.extend(POINT_HEADER.iter().map(|s| s.to_string()));
    header.push("n_states".to_string());
    header.push("seed".to_string());

    // Per-state power columns are omitted on purpose: with Monte Carlo state
    // counts they would dwarf the data. The scalar lambda still pins the
    // allocation through the closed forms.
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (sigma2, model) in cfg.runs()? {
        let set = sample_states(&model, cfg.n_states, effective_seed)?;
        let boundary = ergodic_boundary(&set, cfg.mu_sq, cfg.nu_sq, power, &ratios, &solver)?;
        let sigma2_cell = sigma2.map(fmt_f64).unwrap_or_default();
        for p in by_ratio(boundary.into_points()) {
            let mut row = vec![sigma2_cell.clone()];
            row.extend(point_cells(&p));
            row.push(set.len().to_string());
            row.push(effective_seed.to_string());
            rows.push(row);
        }
    }

    write_atomic(out, &csv(&header, &rows))?;
    write_manifest(out, "fading", &raw, Some(effective_seed))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn cmd_verify(config_path: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let (cfg, raw): (VerifyConfig, String) = load(config_path)?;
    cfg.validate()?;
    let solver = solver_config(cfg.solver)?;
    let effective_seed = seed.or(cfg.seed).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(effective_seed);

    let header: Vec<String> = [
        "instance",
        "subchannels",
        "budget",
        "gamma_ratio",
        "solver_bits",
        "oracle_bits",
        "gap_bits",
        "pass",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();

    let mut rows = Vec::with_capacity(cfg.instances);
    let mut failures = 0usize;
    let mut worst_gap = f64::NEG_INFINITY;
    for i in 0..cfg.instances {
        let l = rng.random_range(1..=cfg.max_subchannels);
        let pairs: Vec<(f64, f64)> = (0..l)
            .map(|_| (rng.random_range(0.25..4.0), rng.random_range(0.25..4.0)))
            .collect();
        let channel = ParallelChannel::real(&pairs)?;
        let budget = rng.random_range(0.5..8.0);
        let ratio = 10f64.powf(rng.random_range(-2.0..2.0));
        let weights = Weights::new(1.0, ratio)?;

        let opt = optimal_allocation(&channel, &weights, budget, &solver)?;
        let mine = weighted_objective(&channel, &weights, &opt.alloc)?;
        let spec = match cfg.grid {
            Some(g) => g.to_spec(&channel)?,
            None => GridSpec::default_for(&channel),
        };
        let oracle = grid_search(&channel, &weights, budget, &spec)?;
        let gap = oracle.value - mine;
        let pass = gap <= cfg.tolerance_bits;
        if !pass {
            failures += 1;
        }
        worst_gap = worst_gap.max(gap);
        rows.push(vec![
            i.to_string(),
            l.to_string(),
            fmt_f64(budget),
            fmt_f64(ratio),
            fmt_f64(mine),
            fmt_f64(oracle.value),
            fmt_f64(gap),
            pass.to_string(),
        ]);
    }

    // The report is written even when the gate trips; the exit code carries
    // the verdict.
    write_atomic(out, &csv(&header, &rows))?;
    write_manifest(out, "verify", &raw, Some(effective_seed))?;

    if failures > 0 {
        return Err(CliError::Gap(format!(
            "{failures}/{} instances exceeded {} bits (worst gap {worst_gap:.3e} bits); \
             report written to {}",
            cfg.instances,
            cfg.tolerance_bits,
            out.display()
        )));
    }
    Ok(())
}
