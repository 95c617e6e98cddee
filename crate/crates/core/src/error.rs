use std::path::PathBuf;

/// Errors surfaced by the library. The CLI maps these onto exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {what} (requested {requested}, limit {limit})")]
    Capacity { what: String, requested: u64, limit: u64 },
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("failed to load {path}: {reason}")]
    Load { path: PathBuf, reason: String },
    #[error("accuracy insufficient at p = {prime}: {reason}")]
    Accuracy { prime: u64, reason: String },
    #[error("cache is locked by another writer: {0}")]
    Locked(PathBuf),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
