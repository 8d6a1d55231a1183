// SPDX-License-Identifier: Apache-2.0

//! Configuration, orchestration and file output for the `qbm` command.

use std::path::{Path, PathBuf};

use thiserror::Error;

pub mod chart;
pub mod config;
pub mod run;
pub mod table;

pub use config::ExperimentConfig;
pub use run::RunOutput;
pub use table::{Cell, ResultTable};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("config field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("table has no rows")]
    EmptyTable,

    #[error(transparent)]
    Core(#[from] qbm_core::Error),
}

impl CliError {
    /// 1 when a scientific construction or check failed, 2 for bad input or
    /// IO.
    pub fn exit_code(&self) -> u8 {
        use qbm_core::Error as E;
        match self {
            CliError::Core(
                E::InfeasibleBracket { .. }
                | E::CertificateConstruction { .. }
                | E::CertificateViolated(_)
                | E::InvalidEvolution { .. },
            ) => 1,
            _ => 2,
        }
    }
}

pub fn read_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    ExperimentConfig::from_json(&text)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// `<out>.<suffix>` alongside the main output.
pub fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}
