//! The experiment results CSV: one row per grid cell.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use displace::experiment::GridResult;

use crate::CliError;

pub const HEADER: &str = "m,ell,days,q,method,mean_l2,std_l2,min_l2,failures,reps";

pub fn render(result: &GridResult) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for row in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            row.m,
            row.ell,
            row.days,
            row.q,
            row.method.name(),
            row.mean_l2,
            row.std_l2,
            row.min_l2,
            row.failures,
            row.failures + row.replications_completed,
        );
    }
    out
}

pub fn write_results(path: &Path, result: &GridResult) -> Result<(), CliError> {
    fs::write(path, render(result))
        .map_err(|e| CliError::Runtime(format!("cannot write `{}`: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use displace::experiment::{GridRow, Method};

    #[test]
    fn renders_rows() {
        let result = GridResult {
            rows: vec![GridRow {
                m: 2,
                ell: 30.0,
                days: 5,
                q: 0.1,
                method: Method::OlsNormalized,
                mean_l2: 1.25,
                std_l2: 0.5,
                min_l2: 1.118,
                failures: 1,
                replications_completed: 99,
            }],
        };
        let text = render(&result);
        assert_eq!(
            text,
            "m,ell,days,q,method,mean_l2,std_l2,min_l2,failures,reps\n\
             2,30,5,0.1,ols,1.25,0.5,1.118,1,100\n"
        );
    }
}
