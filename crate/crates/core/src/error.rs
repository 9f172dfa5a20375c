//! Error type shared by every layer of the workbench.

use std::fmt;

/// All failure modes surfaced by the library.
///
/// The distinction matters for callers: `Validation` and `Argument` mean bad
/// input data, `Resource` means a configured degree/step budget was exceeded,
/// and `Internal` means a structural invariant the library is supposed to
/// guarantee has failed (a bug, not a user error).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input data fails a structural requirement (bad Cartan matrix, map not
    /// an involution, inadmissible parameter, unparsable expression...).
    Validation(String),
    /// A single argument is outside its contract (index out of range, j > m
    /// in a q-binomial, projection of the zero element...).
    Argument(String),
    /// A degree bound or step budget was exceeded before the computation
    /// finished.
    Resource(String),
    /// An invariant that should hold by construction failed.
    Internal(String),
    /// Specialization at q = 1 hit a pole.
    Pole,
    /// The element is not weight-homogeneous, so the requested quantity is
    /// undefined.
    NotHomogeneous,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation(m) => write!(f, "validation error: {m}"),
            Error::Argument(m) => write!(f, "argument error: {m}"),
            Error::Resource(m) => write!(f, "resource budget exceeded: {m}"),
            Error::Internal(m) => write!(f, "internal invariant violated: {m}"),
            Error::Pole => write!(f, "pole at q = 1"),
            Error::NotHomogeneous => write!(f, "element is not weight-homogeneous"),
        }
    }
}

impl std::error::Error for Error {}

/// Process exit code the CLI maps this error to.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_) | Error::Argument(_) | Error::Pole | Error::NotHomogeneous => 1,
        Error::Resource(_) => 2,
        Error::Internal(_) => 3,
    }
}
