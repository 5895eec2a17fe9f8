//! The four subcommands.

use std::fs;
use std::path::PathBuf;

use clap::Args;

use displace::experiment::{run_grid, Method};
use displace::metrics::{l2_distance, min_l2_distance};
use displace::model::{conversion_rate, normalize_probabilities, Binning, ProbabilityEstimate};
use displace::regress::{build_design, constrained_fit, constrained_probabilities, ols_fit};
use displace::simulate::{simulate, SimConfig};
use displace::Binning64;

use crate::cdffile::{read_cdf, write_cdf};
use crate::countsfile::{read_counts, write_counts};
use crate::dist_lang::{parse_dist, parse_profile};
use crate::gridfile::parse_grid_spec;
use crate::resultsfile::write_results;
use crate::svg::render_figure;
use crate::CliError;

/// Resolves `--m`/`--ell` into a binning. A missing `--ell` defaults to
/// `60/m`, which requires `m` to divide 60; an explicit `--ell` must tile
/// the hour.
fn resolve_binning(m: usize, ell: Option<f64>) -> Result<Binning64, CliError> {
    let ell = match ell {
        Some(ell) => {
            if !(ell > 0.0) {
                return Err(CliError::Usage(format!(
                    "--ell must be positive, got {ell}"
                )));
            }
            let ratio = 60.0 / ell;
            if (ratio - ratio.round()).abs() > 1e-9 || ratio < 1.0 {
                return Err(CliError::Usage(format!(
                    "--ell {ell} does not divide a 60-minute hour"
                )));
            }
            ell
        }
        None => {
            if m == 0 || 60 % m != 0 {
                return Err(CliError::Usage(format!(
                    "60 mod m != 0 for m = {m}; pass an m that divides 60 or set --ell explicitly"
                )));
            }
            60.0 / m as f64
        }
    };
    Binning::new(ell, m).map_err(|e| CliError::Usage(e.to_string()))
}

/// Generate a synthetic counts file.
#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Number of simulated days
    #[arg(long)]
    pub days: usize,
    /// Conversion probability in (0, 1]
    #[arg(long)]
    pub q: f64,
    /// Lag count; displacements must fit in [0, m*ell]
    #[arg(long)]
    pub m: usize,
    /// Interval length in minutes (default 60/m)
    #[arg(long)]
    pub ell: Option<f64>,
    /// Displacement distribution, e.g. `uniform:0,60`, `point:10`,
    /// `mix:0.5*point:0+0.5*uniform:0,60`
    #[arg(long)]
    pub dist: String,
    /// `paper` for the built-in daily profile, or a file of 24 rates
    #[arg(long, default_value = "paper")]
    pub profile: String,
    /// RNG seed; identical flags and seed reproduce the file exactly
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output counts CSV
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let binning = resolve_binning(args.m, args.ell)?;
    let config = SimConfig {
        profile: parse_profile(&args.profile)?,
        dist: parse_dist(&args.dist)?,
        q: args.q,
        days: args.days,
        binning,
        seed: args.seed,
    };
    let out = simulate(&config)?;
    write_counts(&args.out, &out.counts)?;
    println!("intervals: {}", out.counts.len());
    println!("total events: {}", out.total_events);
    println!("total conversions: {}", out.total_conversions);
    Ok(())
}

/// Estimate the displacement distribution from a counts file.
#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Input counts CSV (header `t,n,k`)
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Lag count
    #[arg(long)]
    pub m: usize,
    /// Interval length in minutes (default 60/m)
    #[arg(long)]
    pub ell: Option<f64>,
    /// `ols` (least squares, clip, normalize) or `constrained`
    /// (nonnegative fit summing to the observed conversion rate)
    #[arg(long, default_value = "ols")]
    pub method: String,
    /// Output CDF table (`j,p_hat,i_hat,tau_lo,tau_hi`)
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let binning = resolve_binning(args.m, args.ell)?;
    let method: Method = args
        .method
        .parse()
        .map_err(|e: displace::Error| CliError::Usage(e.to_string()))?;
    let counts = read_counts(&args.input)?;
    let design = build_design(&counts, &binning)?;
    let q_hat: f64 = conversion_rate(&counts)?;

    let estimate = match method {
        Method::OlsNormalized => {
            let beta = ols_fit(&design)?;
            let p = normalize_probabilities(&beta)?;
            ProbabilityEstimate::new(beta, q_hat, p)?
        }
        Method::Constrained => {
            if !(q_hat > 0.0) {
                return Err(displace::Error::InfeasibleInput(
                    "no conversions observed; the constrained fit needs a positive rate".into(),
                )
                .into());
            }
            let solution = constrained_fit(&design, q_hat)?;
            let p = constrained_probabilities(&solution, q_hat)?;
            ProbabilityEstimate::new(solution.b, q_hat, p)?
        }
    };

    let cdf = estimate.step_cdf(binning)?;
    write_cdf(&args.out, &cdf)?;

    let sum: f64 = estimate.probabilities().iter().sum();
    println!("method: {}", method.name());
    println!("q_hat: {q_hat}");
    if q_hat > 1.0 {
        eprintln!("warning: q_hat exceeds 1; more displaced events than sources, the model looks misspecified");
    }
    println!("sum p_hat: {sum} (|sum - 1| = {:.3e})", (sum - 1.0).abs());
    Ok(())
}

/// Score an estimated step CDF against an analytic distribution.
#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// CDF table produced by `estimate`
    #[arg(long)]
    pub cdf: PathBuf,
    /// Analytic displacement distribution to compare against
    #[arg(long)]
    pub dist: String,
    /// Lag count; only checked against the CDF file
    #[arg(long)]
    pub m: Option<usize>,
    /// Interval length; only checked against the CDF file
    #[arg(long)]
    pub ell: Option<f64>,
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let cdf = read_cdf(&args.cdf)?;
    let binning = cdf.binning();
    if let Some(m) = args.m {
        if m != binning.lag_count() {
            return Err(CliError::Usage(format!(
                "--m {m} disagrees with the CDF file (m = {})",
                binning.lag_count()
            )));
        }
    }
    if let Some(ell) = args.ell {
        if (ell - binning.ell()).abs() > 1e-9 * binning.ell().max(1.0) {
            return Err(CliError::Usage(format!(
                "--ell {ell} disagrees with the CDF file (ell = {})",
                binning.ell()
            )));
        }
    }
    let dist = parse_dist(&args.dist)?;
    let distance = l2_distance(&dist, &cdf)?;
    let floor = min_l2_distance(&dist, &binning)?;
    println!("l2_distance: {distance}");
    println!("l2_distance_squared: {}", distance * distance);
    println!("min_l2_distance: {floor}");
    Ok(())
}

/// Run a Monte Carlo grid and write per-cell summaries.
#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Grid config file (see the README for the key=value format)
    #[arg(long)]
    pub grid: PathBuf,
    /// Output results CSV
    #[arg(long = "out-csv")]
    pub out_csv: PathBuf,
    /// Optional output figure (one panel per days/q pair)
    #[arg(long = "out-svg")]
    pub out_svg: Option<PathBuf>,
}

pub fn cmd_experiment(args: &ExperimentArgs) -> Result<(), CliError> {
    let content = fs::read_to_string(&args.grid)
        .map_err(|e| CliError::Runtime(format!("cannot read `{}`: {e}", args.grid.display())))?;
    let spec = parse_grid_spec(&content)?;
    let result = run_grid(&spec)?;
    write_results(&args.out_csv, &result)?;
    if let Some(svg_path) = &args.out_svg {
        let svg = render_figure(&result)?;
        fs::write(svg_path, svg)
            .map_err(|e| CliError::Runtime(format!("cannot write `{}`: {e}", svg_path.display())))?;
    }
    let total_failures: usize = result.rows.iter().map(|r| r.failures).sum();
    println!("cells: {}", result.rows.len());
    println!("replications per cell: {}", spec.replications);
    println!("failed replications: {total_failures}");
    Ok(())
}
