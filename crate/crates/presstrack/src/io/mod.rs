//! Readers and writers for every interchange format.
//!
//! All formats are text-first and written deterministically (fixed field
//! order, no map-order leakage), so equal inputs produce byte-identical
//! files. Parse failures carry the file path and line number.

pub mod config;
pub mod crops;
pub mod mot_csv;
pub mod psq;
pub mod tables;

use std::path::Path;

use thiserror::Error;

pub use config::{read_config, RunConfig};
pub use crops::{read_pgm, write_crops};
pub use mot_csv::{read_mot_csv, write_mot_csv, MotCsvRow};
pub use psq::{read_psq, write_psq};
pub use tables::{
    read_annotations, read_trajectories, write_annotations, write_trajectories,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("config: {msg}")]
    Schema { msg: String },
}

pub(crate) fn io_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::Io { path: path.display().to_string(), source }
}

pub(crate) fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { path: path.display().to_string(), line, msg: msg.into() }
}
