use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex set must be non-empty (n = 0)")]
    EmptyVertexSet,
    #[error("n = {0} exceeds the supported vertex count")]
    TooManyVertices(usize),
    #[error("vertex {label} out of range 1..={n}")]
    VertexOutOfRange { label: u32, n: usize },
    #[error("beta = {0} must lie in (0, 1]")]
    InvalidBeta(f64),
    #[error("restricted set is empty: floor({beta} * {n}) = 0")]
    EmptyRestrictedSet { beta: f64, n: usize },
    #[error("rank {rank} out of range 0..{len}")]
    RankOutOfRange { rank: u64, len: u64 },
    #[error("merge outcome does not match index state: {0}")]
    StaleMerge(String),
    #[error("T_1 is the maximum of an empty set (alpha is always at least 1)")]
    EmptyThresholdSet,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid geometric-sum spec: {0}")]
    InvalidGeomSpec(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
