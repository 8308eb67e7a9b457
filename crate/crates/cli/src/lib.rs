//! Command-line front end for the conversion simulator: configuration
//! parsing, command dispatch, and CSV/SVG serialization.

pub mod commands;
pub mod config;
pub mod csv;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Simulation(#[from] adiashort_core::Error),

    #[error("{0}")]
    Output(String),
}

impl CliError {
    /// 2 for usage and validation problems, 1 for everything at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Validation { .. } => 2,
            CliError::Io { .. } | CliError::Simulation(_) | CliError::Output(_) => 1,
        }
    }

    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Validation { field: field.into(), reason: reason.into() }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match config::parse_config(args) {
        Ok(config::Parsed::Run(c)) => c,
        Ok(config::Parsed::Info(text)) => {
            print!("{text}");
            return 0;
        }
        Err(e) => {
            eprintln!("adiashort: {e}");
            return e.exit_code();
        }
    };
    match commands::execute(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("adiashort: {e}");
            e.exit_code()
        }
    }
}
