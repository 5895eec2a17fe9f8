//! Command-line front end: flag parsing helpers, the CSV file formats, the
//! distribution mini-language, grid config files, and SVG figure output.
//!
//! Exit-code contract: 0 on success, 1 for runtime and domain errors
//! (estimation failures, bad data files, I/O), 2 for usage errors (bad
//! flags or config syntax). [`CliError`] carries the distinction.

pub mod cdffile;
pub mod commands;
pub mod countsfile;
pub mod dist_lang;
pub mod gridfile;
pub mod resultsfile;
pub mod svg;

/// Error with the exit code it should produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad flags or config grammar; exits 2.
    Usage(String),
    /// Anything that goes wrong while doing the work; exits 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => msg,
        }
    }
}

impl From<displace::Error> for CliError {
    fn from(err: displace::Error) -> Self {
        CliError::Runtime(format!("{}: {}", err.name(), err))
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(format!("io: {err}"))
    }
}
