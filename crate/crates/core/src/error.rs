//! Crate error type.

use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Variants carry enough context to report the failure to a CLI user without
/// further lookups.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or vector dimensions do not match the expected shape.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The Gram matrix is singular where a nondegenerate form is required.
    #[error("degenerate form: {0}")]
    Degenerate(String),

    /// The form does not have signature `(n, 1)`.
    #[error("signature ({},1) required, found ({pos},{neg})", .pos + .neg - 1)]
    NotLorentzian { pos: usize, neg: usize },

    /// A vector expected to be a root fails the root conditions.
    #[error("not a root direction: {0}")]
    NotRoot(String),

    /// A claimed mirror does not separate the control point from anything:
    /// the input root is orthogonal to or contains the control vector
    /// improperly.
    #[error("mirror not separating: {0}")]
    MirrorNotSeparating(String),

    /// Two roots meet at an angle outside the Coxeter dictionary because the
    /// pair is obtuse (positive inner product).
    #[error("obtuse pair: roots {i} and {j} have positive inner product {value}")]
    ObtusePair { i: usize, j: usize, value: String },

    /// The normalized pair invariant lies in `(0,1)` but is not one of the
    /// four crystallographic values.
    #[error("non-Coxeter dihedral angle: c = {value} for roots {i} and {j}")]
    NonCoxeterAngle { i: usize, j: usize, value: String },

    /// A constants registry is missing entries needed by a bound.
    #[error("constants registry for n = {n} is missing: {missing:?}")]
    MissingConstants { n: usize, missing: Vec<String> },

    /// A session cache does not belong to the form it is being replayed on.
    #[error("cache/form mismatch: {0}")]
    CacheMismatch(String),

    /// A session cache file is structurally invalid or from another version.
    #[error("cache invalid: {0}")]
    CacheInvalid(String),

    /// Input parsing failed (JSON structure, integer syntax, ...).
    #[error("parse error: {0}")]
    Parse(String),

    /// Catch-all for invalid arguments with a human-readable message.
    #[error("{0}")]
    Invalid(String),
}
