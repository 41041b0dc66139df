use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch in {context}: expected {expected:?}, found {found:?}")]
    ShapeMismatch { context: String, expected: (usize, usize), found: (usize, usize) },

    #[error("ill-formed map: {reason}")]
    IllFormedMap { reason: String },

    #[error("stabilization violated at index {index}: {reason}")]
    StabilizationViolated { index: usize, reason: String },

    #[error("hom-complex source has relations in degree {degree}")]
    TorsionSource { degree: i64 },

    #[error("complex is not degreewise free (relations in degree {degree})")]
    NotCofibrant { degree: i64 },

    #[error("prime partition does not cover torsion prime {prime}")]
    PartitionTooSmall { prime: String },

    #[error("invalid prime partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("fibrancy characterizations disagree: {reason}")]
    CharacterizationMismatch { reason: String },

    #[error("validation failed at {location}: {reason}")]
    Validation { location: String, reason: String },

    #[error("parse error at {location}: {reason}")]
    Parse { location: String, reason: String },
}
