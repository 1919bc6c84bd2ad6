//! Library half of the `decoherence-kit` binary: configuration
//! parsing, CSV rendering, the subcommand implementations, and the
//! validation harness. Kept as a library so integration tests can call
//! the pieces directly.

// `!(lo < hi)`-style range checks must reject NaN bounds as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod csv;
pub mod validate;

/// CLI-facing error split by exit code: bad configuration exits 2,
/// numerical failure exits 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerics(deco_core::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numerics(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<deco_core::Error> for CliError {
    fn from(e: deco_core::Error) -> Self {
        CliError::Numerics(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerics(_) => 3,
        }
    }
}
