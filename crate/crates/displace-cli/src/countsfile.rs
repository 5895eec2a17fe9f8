//! The counts CSV format: header `t,n,k`, one row per interval, `t`
//! strictly consecutive from 1, counts nonnegative integers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use displace::model::CountSeries;

use crate::CliError;

pub const HEADER: &str = "t,n,k";

pub fn render(counts: &CountSeries) -> String {
    let mut out = String::with_capacity(16 * counts.len() + 8);
    out.push_str(HEADER);
    out.push('\n');
    for (i, (n, k)) in counts.source().iter().zip(counts.displaced()).enumerate() {
        let _ = writeln!(out, "{},{n},{k}", i + 1);
    }
    out
}

pub fn write_counts(path: &Path, counts: &CountSeries) -> Result<(), CliError> {
    fs::write(path, render(counts))
        .map_err(|e| CliError::Runtime(format!("cannot write `{}`: {e}", path.display())))
}

pub fn parse(content: &str) -> Result<CountSeries, CliError> {
    let mut lines = content.lines();
    match lines.next() {
        Some(header) if header.trim_end() == HEADER => {}
        other => {
            return Err(CliError::Runtime(format!(
                "counts file must start with `{HEADER}`, found {other:?}"
            )))
        }
    }
    let mut n = Vec::new();
    let mut k = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let row = idx + 1;
        let mut fields = line.split(',');
        let (t_field, n_field, k_field) = match (fields.next(), fields.next(), fields.next()) {
            (Some(t), Some(n), Some(k)) if fields.next().is_none() => (t, n, k),
            _ => {
                return Err(CliError::Runtime(format!(
                    "counts file row {row}: expected 3 fields `t,n,k`, got `{line}`"
                )))
            }
        };
        let t: usize = t_field.parse().map_err(|_| {
            CliError::Runtime(format!("counts file row {row}: bad interval index `{t_field}`"))
        })?;
        if t != row {
            return Err(CliError::Runtime(format!(
                "counts file row {row}: interval indices must run 1, 2, ... without gaps, got {t}"
            )));
        }
        // u64 parsing rejects negatives and non-integers
        let n_val: u64 = n_field.parse().map_err(|_| {
            CliError::Runtime(format!(
                "counts file row {row}: `{n_field}` is not a nonnegative integer"
            ))
        })?;
        let k_val: u64 = k_field.parse().map_err(|_| {
            CliError::Runtime(format!(
                "counts file row {row}: `{k_field}` is not a nonnegative integer"
            ))
        })?;
        n.push(n_val);
        k.push(k_val);
    }
    CountSeries::new(n, k).map_err(CliError::from)
}

pub fn read_counts(path: &Path) -> Result<CountSeries, CliError> {
    let content = fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read `{}`: {e}", path.display())))?;
    parse(&content)
}
