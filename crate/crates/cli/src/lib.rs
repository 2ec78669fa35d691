//! Batch front-end for `netdiff-core`: JSON run specs, the BA/SIR timing
//! benchmark and the embedded REST server.

pub mod bench;
pub mod run;
pub mod spec;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("simulation error: {0}")]
    Simulation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Simulation(_) => 4,
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl From<netdiff_core::Error> for CliError {
    fn from(e: netdiff_core::Error) -> Self {
        use netdiff_core::Error as E;
        match e {
            E::Simulation(_) => CliError::Simulation(e.to_string()),
            E::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}
