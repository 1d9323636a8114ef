//! Error type shared by every module of the crate.

use alloc::string::String;
use core::fmt;

/// Errors produced by geometry, cone, problem and solver operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument is outside its supported range.
    Range(String),
    /// The two points are antipodal (within tolerance); logarithm maps and
    /// parallel transport are undefined there.
    Antipodal,
    /// Tangent-space objects are based at different points.
    BaseMismatch,
    /// A cone degenerated: zero aperture, or a polar with empty interior.
    Degenerate(String),
    /// Vector lengths disagree.
    DimensionMismatch { expected: usize, actual: usize },
    /// An operation precondition does not hold.
    Precondition(String),
    /// The candidate point violates a constraint.
    Infeasible,
    /// No sampled point lies in the scalarization feasible region.
    EmptyFeasibleRegion,
    /// A geometric primitive could not be constructed from the given data.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Range(msg) => write!(f, "argument out of range: {msg}"),
            Error::Antipodal => write!(f, "points are antipodal within tolerance"),
            Error::BaseMismatch => write!(f, "tangent objects based at different points"),
            Error::Degenerate(msg) => write!(f, "degenerate cone: {msg}"),
            Error::DimensionMismatch { expected, actual } => {
                write!(f, "dimension mismatch: expected {expected}, got {actual}")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Infeasible => write!(f, "point is not feasible"),
            Error::EmptyFeasibleRegion => {
                write!(f, "no sampled point lies in the feasible region")
            }
            Error::Invalid(msg) => write!(f, "invalid primitive: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
