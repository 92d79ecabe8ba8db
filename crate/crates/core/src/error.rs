//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of construction and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Even-length channels have no zero-energy mode, so the switching
    /// protocol is undefined on them.
    #[error("channel with {0} cavities has no zero mode; switching protocol undefined")]
    NoZeroMode(usize),

    /// A matrix that must be symmetric is not.
    #[error("matrix not symmetric: max |H - H^T| = {0:e}")]
    NotSymmetric(f64),

    /// A state vector that must be normalized is not.
    #[error("state not normalized: |norm - 1| = {0:e}")]
    NotNormalized(f64),

    /// An index set for an amplitude block is malformed.
    #[error("bad index set: {0}")]
    BadIndexSet(String),

    /// A piecewise schedule or its sample grid is malformed.
    #[error("bad schedule: {0}")]
    BadSchedule(String),

    /// Reflection-side quantities need a coupled atom with a nonzero
    /// zero-mode overlap.
    #[error("reflection regime undefined: {0}")]
    ReflectionUndefined(String),

    /// A network graph fails validation.
    #[error("bad topology: {0}")]
    BadTopology(String),
}

pub type Result<T> = std::result::Result<T, Error>;
