//! Monte Carlo harness: `simulate -> fit -> score` over a parameter grid.
//!
//! Each grid cell fixes `(m, days, q)` with `ell = 60/m`; each replication
//! gets its own seed derived from the base seed and the cell and
//! replication indices, so any single replication can be reproduced in
//! isolation. Replications may run concurrently, but results are collected
//! into a replication-ordered buffer and reduced by pairwise summation, so
//! the aggregates do not depend on scheduling.

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::metrics::{l2_distance, min_l2_distance};
use crate::model::{
    build_step_cdf, conversion_rate, normalize_probabilities, Binning, TrueDistribution,
};
use crate::regress::{build_design, constrained_fit, constrained_probabilities, ols_fit};
use crate::simulate::{simulate, IntensityProfile, SimConfig};

/// Which estimator a grid run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Ordinary least squares, then clip-and-normalize.
    OlsNormalized,
    /// Nonnegative least squares constrained to sum to the observed
    /// conversion rate, then divide by it.
    Constrained,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::OlsNormalized => "ols",
            Method::Constrained => "constrained",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ols" => Ok(Method::OlsNormalized),
            "constrained" => Ok(Method::Constrained),
            other => Err(Error::InvalidInput(format!(
                "unknown method `{other}` (expected `ols` or `constrained`)"
            ))),
        }
    }
}

/// Parameter grid for a Monte Carlo run. Every `m` must divide 60, since
/// the interval length is fixed at `ell = 60/m` minutes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub m_values: Vec<usize>,
    pub n_days_values: Vec<usize>,
    pub q_values: Vec<f64>,
    pub replications: usize,
    pub dist: TrueDistribution<f64>,
    pub profile: IntensityProfile,
    pub base_seed: u64,
    pub method: Method,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() || self.n_days_values.is_empty() || self.q_values.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if self.replications == 0 {
            return Err(Error::InvalidInput("need at least one replication".into()));
        }
        for &m in &self.m_values {
            if m == 0 || 60 % m != 0 {
                return Err(Error::EllDoesNotDivideHour {
                    ell: 60.0 / m.max(1) as f64,
                });
            }
        }
        for &q in &self.q_values {
            if !(q > 0.0 && q <= 1.0) {
                return Err(Error::InvalidInput(format!(
                    "conversion probability must lie in (0, 1], got {q}"
                )));
            }
        }
        for &days in &self.n_days_values {
            if days == 0 {
                return Err(Error::InvalidInput("day counts must be positive".into()));
            }
        }
        self.dist.validate()
    }

    /// Cell enumeration in output order: days, then q, then m. The index
    /// feeds the per-replication seeds, so it is part of the
    /// reproducibility contract.
    pub fn cells(&self) -> Vec<GridCell> {
        let mut cells = Vec::new();
        for &days in &self.n_days_values {
            for &q in &self.q_values {
                for &m in &self.m_values {
                    cells.push(GridCell {
                        index: cells.len(),
                        m,
                        days,
                        q,
                    });
                }
            }
        }
        cells
    }
}

/// One `(m, days, q)` combination of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub index: usize,
    pub m: usize,
    pub days: usize,
    pub q: f64,
}

/// Aggregated outcome of one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub m: usize,
    pub ell: f64,
    pub days: usize,
    pub q: f64,
    pub method: Method,
    /// Mean L2 distance over completed replications (0 when none completed).
    pub mean_l2: f64,
    /// Sample standard deviation over completed replications.
    pub std_l2: f64,
    /// Projection floor for this cell's binning.
    pub min_l2: f64,
    pub failures: usize,
    pub replications_completed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub rows: Vec<GridRow>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one replication: the base seed mixed (splitmix64) with the
/// cell index and the replication index.
pub fn replication_seed(base_seed: u64, cell_index: u64, replication: u64) -> u64 {
    let s = splitmix64(base_seed);
    let s = splitmix64(s ^ cell_index);
    splitmix64(s ^ replication)
}

/// One replication: simulate, fit with the chosen method, build the step
/// CDF, and score it against the configured distribution.
///
/// Estimation failures (no positive coefficient, rank-deficient design,
/// solver non-convergence, zero conversions) come back as errors for the
/// caller to record; they are expected outcomes on degenerate samples, not
/// crashes.
pub fn run_replication(config: &SimConfig, method: Method) -> Result<f64> {
    let out = simulate(config)?;
    let design = build_design(&out.counts, &config.binning)?;
    let p = match method {
        Method::OlsNormalized => normalize_probabilities(&ols_fit(&design)?)?,
        Method::Constrained => {
            let q_hat = conversion_rate::<f64>(&out.counts)?;
            if !(q_hat > 0.0) {
                return Err(Error::InfeasibleInput(
                    "no conversions observed; constrained fit needs a positive rate".into(),
                ));
            }
            let solution = constrained_fit(&design, q_hat)?;
            constrained_probabilities(&solution, q_hat)?
        }
    };
    let cdf = build_step_cdf(&p, config.binning)?;
    l2_distance(&config.dist, &cdf)
}

/// All replications of one cell, in replication order. Replications run in
/// parallel; the output order is fixed regardless.
pub fn run_cell(spec: &GridSpec, cell: &GridCell) -> Result<Vec<Result<f64>>> {
    let binning = Binning::new(60.0 / cell.m as f64, cell.m)?;
    Ok((0..spec.replications)
        .into_par_iter()
        .map(|rep| {
            let config = SimConfig {
                profile: spec.profile.clone(),
                dist: spec.dist.clone(),
                q: cell.q,
                days: cell.days,
                binning,
                seed: replication_seed(spec.base_seed, cell.index as u64, rep as u64),
            };
            run_replication(&config, spec.method)
        })
        .collect())
}

/// Runs the whole grid, one summary row per cell.
pub fn run_grid(spec: &GridSpec) -> Result<GridResult> {
    spec.validate()?;
    let mut rows = Vec::new();
    for cell in spec.cells() {
        let outcomes = run_cell(spec, &cell)?;
        rows.push(summarize_cell(spec, &cell, &outcomes)?);
    }
    Ok(GridResult { rows })
}

fn summarize_cell(spec: &GridSpec, cell: &GridCell, outcomes: &[Result<f64>]) -> Result<GridRow> {
    let completed: Vec<f64> = outcomes.iter().filter_map(|r| r.as_ref().ok()).copied().collect();
    let failures = outcomes.len() - completed.len();
    let mean_l2 = if completed.is_empty() {
        0.0
    } else {
        pairwise_sum(&completed) / completed.len() as f64
    };
    let std_l2 = if completed.len() < 2 {
        0.0
    } else {
        let centered: Vec<f64> = completed.iter().map(|d| (d - mean_l2).powi(2)).collect();
        (pairwise_sum(&centered) / (completed.len() - 1) as f64).sqrt()
    };
    let binning = Binning::new(60.0 / cell.m as f64, cell.m)?;
    let min_l2 = min_l2_distance(&spec.dist, &binning)?;
    Ok(GridRow {
        m: cell.m,
        ell: binning.ell(),
        days: cell.days,
        q: cell.q,
        method: spec.method,
        mean_l2,
        std_l2,
        min_l2,
        failures,
        replications_completed: completed.len(),
    })
}

fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        len => {
            let mid = len / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Paired one-sided comparison of two equally long outcome vectors,
/// testing whether the first mean is smaller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedComparison {
    /// Mean of `first - second`.
    pub mean_difference: f64,
    pub t_statistic: f64,
    /// One-sided Student-t critical value at 95% confidence.
    pub critical_95: f64,
    pub pairs: usize,
}

impl PairedComparison {
    /// True when the first sample's mean is smaller at 95% confidence.
    pub fn significantly_less(&self) -> bool {
        self.t_statistic <= -self.critical_95
    }
}

/// Paired t-statistic for `mean(first - second) < 0`.
pub fn paired_one_sided(first: &[f64], second: &[f64]) -> Result<PairedComparison> {
    if first.len() != second.len() {
        return Err(Error::LengthMismatch {
            expected: first.len(),
            actual: second.len(),
        });
    }
    let pairs = first.len();
    if pairs < 2 {
        return Err(Error::InvalidInput(
            "paired comparison needs at least two pairs".into(),
        ));
    }
    let diffs: Vec<f64> = first.iter().zip(second).map(|(a, b)| a - b).collect();
    let mean = pairwise_sum(&diffs) / pairs as f64;
    let centered: Vec<f64> = diffs.iter().map(|d| (d - mean).powi(2)).collect();
    let sd = (pairwise_sum(&centered) / (pairs - 1) as f64).sqrt();
    let t_statistic = if sd == 0.0 {
        match mean.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Less) => f64::NEG_INFINITY,
            Some(std::cmp::Ordering::Greater) => f64::INFINITY,
            _ => 0.0,
        }
    } else {
        mean / (sd / (pairs as f64).sqrt())
    };
    let critical_95 = StudentsT::new(0.0, 1.0, (pairs - 1) as f64)
        .expect("valid t distribution")
        .inverse_cdf(0.95);
    Ok(PairedComparison {
        mean_difference: mean,
        t_statistic,
        critical_95,
        pairs,
    })
}
