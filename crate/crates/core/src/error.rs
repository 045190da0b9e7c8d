use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NonSquare { rows: usize, row: usize, cols: usize },
    #[error("matrix has no states")]
    Empty,
    #[error("entry ({row}, {col}) is negative or not finite: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to 1{deviation:+e}")]
    RowSumViolation { row: usize, deviation: f64 },
    #[error("invalid block weights: {0}")]
    InvalidWeights(String),
    #[error("quantity is undefined for a single-state scale")]
    SingleStateScale,
    #[error("state index {index} out of range for {n} states")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partitions have different ground set sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("{n} states exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("partition {0} is not a node of the diagram")]
    NodeNotFound(String),
    #[error("no covering path from {bottom} to {top}")]
    NoPath { bottom: String, top: String },
    #[error("no CP value for partition {0}")]
    MissingCp(String),
    #[error("path distribution is undefined: total ΔCP is not positive")]
    UndefinedDistribution,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
