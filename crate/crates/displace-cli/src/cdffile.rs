//! The estimate output CSV: header `j,p_hat,i_hat,tau_lo,tau_hi`, one row
//! per lag with the interval bounds `[j*ell, (j+1)*ell)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use displace::model::{Binning, StepCdf};
use displace::StepCdf64;

use crate::CliError;

pub const HEADER: &str = "j,p_hat,i_hat,tau_lo,tau_hi";

pub fn render(cdf: &StepCdf64) -> String {
    let ell = cdf.binning().ell();
    let probabilities = cdf.probabilities();
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for (j, (p, i)) in probabilities.iter().zip(cdf.partial_sums()).enumerate() {
        let lo = ell * j as f64;
        let hi = ell * (j + 1) as f64;
        let _ = writeln!(out, "{j},{p},{i},{lo},{hi}");
    }
    out
}

pub fn write_cdf(path: &Path, cdf: &StepCdf64) -> Result<(), CliError> {
    fs::write(path, render(cdf))
        .map_err(|e| CliError::Runtime(format!("cannot write `{}`: {e}", path.display())))
}

/// Reads a CDF table back, recovering the binning from the tau bounds.
pub fn parse(content: &str) -> Result<StepCdf64, CliError> {
    let mut lines = content.lines();
    match lines.next() {
        Some(header) if header.trim_end() == HEADER => {}
        other => {
            return Err(CliError::Runtime(format!(
                "cdf file must start with `{HEADER}`, found {other:?}"
            )))
        }
    }
    let mut i_hat: Vec<f64> = Vec::new();
    let mut ell = None;
    for (idx, line) in lines.enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CliError::Runtime(format!(
                "cdf file row {}: expected 5 fields, got `{line}`",
                idx + 1
            )));
        }
        let j: usize = fields[0]
            .parse()
            .map_err(|_| CliError::Runtime(format!("cdf file: bad lag index `{}`", fields[0])))?;
        if j != idx {
            return Err(CliError::Runtime(format!(
                "cdf file: lag indices must run 0, 1, ... without gaps, got {j} at row {}",
                idx + 1
            )));
        }
        let parse_f = |field: &str| -> Result<f64, CliError> {
            field
                .parse()
                .map_err(|_| CliError::Runtime(format!("cdf file: `{field}` is not a number")))
        };
        let i = parse_f(fields[2])?;
        let lo = parse_f(fields[3])?;
        let hi = parse_f(fields[4])?;
        let width = hi - lo;
        let ell = *ell.get_or_insert(width);
        let tol = 1e-9 * ell.abs().max(1.0);
        if (width - ell).abs() > tol || (lo - ell * j as f64).abs() > tol {
            return Err(CliError::Runtime(format!(
                "cdf file: row {} bounds [{lo}, {hi}] do not tile intervals of length {ell}",
                idx + 1
            )));
        }
        i_hat.push(i);
    }
    if i_hat.is_empty() {
        return Err(CliError::Runtime("cdf file has no rows".into()));
    }
    let binning = Binning::new(ell.unwrap(), i_hat.len() - 1).map_err(CliError::from)?;
    StepCdf::new(binning, i_hat).map_err(CliError::from)
}

pub fn read_cdf(path: &Path) -> Result<StepCdf64, CliError> {
    let content = fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read `{}`: {e}", path.display())))?;
    parse(&content)
}
