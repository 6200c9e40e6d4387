//! Front end for `bergman-core`: subcommands, output formats and the
//! verification suite.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bergman_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}
