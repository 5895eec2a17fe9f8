//! The distribution mini-language and intensity-profile flag values.
//!
//! Grammar:
//!
//! ```text
//! DIST    := SIMPLE | "mix:" TERM ("+" TERM)*
//! SIMPLE  := "point:" D | "uniform:" A "," B
//! TERM    := WEIGHT "*" SIMPLE
//! ```
//!
//! e.g. `point:10`, `uniform:0,60`, `mix:0.5*point:0+0.5*uniform:0,60`.
//! Weights must be positive and sum to 1.

use std::fs;
use std::path::Path;

use displace::model::TrueDistribution;
use displace::simulate::IntensityProfile;
use displace::TrueDistribution64;

use crate::CliError;

const GRAMMAR_HINT: &str =
    "expected `point:D`, `uniform:A,B`, or `mix:W*point:D+W*uniform:A,B+...`";

fn parse_number(text: &str, what: &str) -> Result<f64, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{what} `{text}` is not a number; {GRAMMAR_HINT}")))
}

fn parse_simple(text: &str) -> Result<TrueDistribution64, CliError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("point:") {
        let d = parse_number(rest, "point mass delay")?;
        TrueDistribution::point_mass(d).map_err(|e| CliError::Usage(e.to_string()))
    } else if let Some(rest) = text.strip_prefix("uniform:") {
        let (a, b) = rest.split_once(',').ok_or_else(|| {
            CliError::Usage(format!("uniform needs two bounds `a,b`, got `{rest}`"))
        })?;
        let a = parse_number(a, "uniform lower bound")?;
        let b = parse_number(b, "uniform upper bound")?;
        TrueDistribution::uniform(a, b).map_err(|e| CliError::Usage(e.to_string()))
    } else {
        Err(CliError::Usage(format!(
            "cannot parse distribution `{text}`; {GRAMMAR_HINT}"
        )))
    }
}

/// Parses a distribution flag value.
pub fn parse_dist(text: &str) -> Result<TrueDistribution64, CliError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("mix:") {
        let mut parts = Vec::new();
        for term in rest.split('+') {
            let (weight, component) = term.split_once('*').ok_or_else(|| {
                CliError::Usage(format!(
                    "mixture term `{term}` must look like `weight*component`"
                ))
            })?;
            let weight = parse_number(weight, "mixture weight")?;
            parts.push((weight, parse_simple(component)?));
        }
        TrueDistribution::mixture(parts).map_err(|e| CliError::Usage(e.to_string()))
    } else {
        parse_simple(text)
    }
}

/// Resolves a profile flag: the name `paper` selects the built-in daily
/// profile, anything else is read as a file of 24 rates (events per
/// minute), separated by commas and/or newlines.
pub fn parse_profile(text: &str) -> Result<IntensityProfile, CliError> {
    if text == "paper" {
        return Ok(IntensityProfile::builtin_daily());
    }
    let raw = fs::read_to_string(Path::new(text))
        .map_err(|e| CliError::Runtime(format!("cannot read profile file `{text}`: {e}")))?;
    let values: Result<Vec<f64>, CliError> = raw
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| {
                CliError::Runtime(format!("profile file `{text}`: `{tok}` is not a number"))
            })
        })
        .collect();
    let values = values?;
    let hourly: [f64; 24] = values.try_into().map_err(|v: Vec<f64>| {
        CliError::Runtime(format!(
            "profile file `{text}` must hold exactly 24 rates, found {}",
            v.len()
        ))
    })?;
    IntensityProfile::new(hourly).map_err(|e| CliError::Runtime(e.to_string()))
}
