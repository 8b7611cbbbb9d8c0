use alloc::string::String;
use core::fmt;

/// Errors shared by every module of the crate.
///
/// The distinction between variants matters to callers: `Validation` means
/// the input violates a documented precondition, `PrecisionCap` means an
/// undecided real comparison survived escalation to the configured bit cap,
/// and `ResourceCap` means a dimension or enumeration budget was exceeded.
/// `Internal` flags situations that a theorem rules out; seeing one is a bug.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Input violates a precondition (bad weights, non-prime place, ...).
    Validation(String),
    /// A comparison of real values could not be decided at the precision cap.
    PrecisionCap { bits: u32 },
    /// A configured resource limit (dimension, enumeration count) was hit.
    ResourceCap(String),
    /// An inconsistent congruence system or empty solution window.
    Inconsistent(String),
    /// No witness height available for a twisted construction.
    NoWitness,
    /// A condition guaranteed by a theorem failed; indicates a solver bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::PrecisionCap { bits } => {
                write!(f, "comparison undecided at precision cap of {bits} bits")
            }
            Error::ResourceCap(msg) => write!(f, "resource cap exceeded: {msg}"),
            Error::Inconsistent(msg) => write!(f, "inconsistent system: {msg}"),
            Error::NoWitness => write!(f, "no witness height in the scanned range"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
