//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    /// Two elements from different monoids were combined.
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),

    /// A monoid description violates its structural invariants.
    #[error("invalid monoid descriptor: {0}")]
    InvalidDescriptor(String),

    /// An algebra generator label is not valid for the owning system, e.g. a
    /// projection modulus outside the constructible family.
    #[error("generator label outside the system: {0}")]
    LabelOutsideSystem(String),

    /// A lazily constructed operator was caught contradicting its own
    /// structural claims on a window column.
    #[error("construction audit failed: {0}")]
    ConstructionAudit(String),

    /// A representation lacks the structure an operation requires, e.g. a
    /// non-diagonal defect fed to the dilation.
    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
