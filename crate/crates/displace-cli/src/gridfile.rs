//! Grid config files for the `experiment` subcommand: `key = value` lines,
//! `#` comments, comma-separated lists for the swept parameters.
//!
//! ```text
//! # desk-scale sweep
//! m = 1,2,3,6,12
//! days = 5,60
//! q = 0.01,0.1
//! reps = 100
//! seed = 7
//! method = ols
//! dist = uniform:0,60
//! profile = paper
//! ```
//!
//! `m`, `days`, `q`, and `reps` are required; `seed` defaults to 0,
//! `method` to `ols`, `dist` to `uniform:0,60`, and `profile` to `paper`.

use displace::experiment::{GridSpec, Method};

use crate::dist_lang::{parse_dist, parse_profile};
use crate::CliError;

fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(|tok| {
            tok.trim().parse::<T>().map_err(|_| {
                CliError::Usage(format!("grid config: bad `{key}` entry `{}`", tok.trim()))
            })
        })
        .collect()
}

pub fn parse_grid_spec(content: &str) -> Result<GridSpec, CliError> {
    let mut m_values = None;
    let mut days = None;
    let mut q_values = None;
    let mut reps = None;
    let mut seed = 0u64;
    let mut method = Method::OlsNormalized;
    let mut dist = None;
    let mut profile = None;

    for (idx, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "grid config line {}: expected `key = value`, got `{raw}`",
                idx + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "m" => m_values = Some(parse_list::<usize>(value, "m")?),
            "days" => days = Some(parse_list::<usize>(value, "days")?),
            "q" => q_values = Some(parse_list::<f64>(value, "q")?),
            "reps" => {
                reps = Some(value.parse::<usize>().map_err(|_| {
                    CliError::Usage(format!("grid config: bad `reps` value `{value}`"))
                })?)
            }
            "seed" => {
                seed = value.parse::<u64>().map_err(|_| {
                    CliError::Usage(format!("grid config: bad `seed` value `{value}`"))
                })?
            }
            "method" => {
                method = value
                    .parse::<Method>()
                    .map_err(|e| CliError::Usage(format!("grid config: {e}")))?
            }
            "dist" => dist = Some(parse_dist(value)?),
            "profile" => profile = Some(parse_profile(value)?),
            other => {
                return Err(CliError::Usage(format!(
                    "grid config: unknown key `{other}`"
                )))
            }
        }
    }

    let missing = |key: &str| CliError::Usage(format!("grid config: missing required key `{key}`"));
    Ok(GridSpec {
        m_values: m_values.ok_or_else(|| missing("m"))?,
        n_days_values: days.ok_or_else(|| missing("days"))?,
        q_values: q_values.ok_or_else(|| missing("q"))?,
        replications: reps.ok_or_else(|| missing("reps"))?,
        dist: match dist {
            Some(d) => d,
            None => parse_dist("uniform:0,60")?,
        },
        profile: match profile {
            Some(p) => p,
            None => parse_profile("paper")?,
        },
        base_seed: seed,
        method,
    })
}
