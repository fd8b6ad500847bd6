//! Graph files, profile files and append-only result directories.
//!
//! The formats are described in `docs/formats.md`.

mod graph_file;
mod profile_file;
mod results;

use std::path::PathBuf;

use thiserror::Error;

pub use graph_file::{parse_graph, read_graph, render_graph, write_graph};
pub use profile_file::{
    parse_profile, parse_profile_spec, read_profile, render_profile, write_profile,
};
pub use results::{
    parse_reports_csv, read_reports_csv, render_reports_csv, write_results, ExperimentManifest,
    REPORTS_CSV_HEADER, SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("results directory {0} already exists")]
    RefuseOverwrite(PathBuf),
    #[error("invalid profile {0}")]
    BadProfileSpec(String),
    #[error("invalid run id `{0}`")]
    BadId(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Mis(#[from] crate::mis::MisError),
}

impl IoError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> IoError {
        let path = path.into();
        move |source| IoError::Io { path, source }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> IoError {
        IoError::Parse {
            line,
            message: message.into(),
        }
    }
}
