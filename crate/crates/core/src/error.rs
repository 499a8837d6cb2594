use thiserror::Error;

use crate::invariants::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The configuration failed validation; the report lists every violated rule.
    #[error("invalid configuration: {0}")]
    InvalidConfig(ValidationReport),

    /// Thresholds are only defined when the Kodaira dimension is 1.
    #[error("Kodaira dimension is not 1: 2g-2+chi+t+sum(a_i)/p = {value} <= 0")]
    NotKodairaOne { value: String },

    #[error("scan cap of {cap} exceeded without finding a stable window")]
    ScanCapExceeded { cap: i64 },

    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("contract violation: {0}")]
    ContractViolation(String),
}
