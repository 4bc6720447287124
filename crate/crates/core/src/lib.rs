//! Exact-arithmetic toolkit for deciding reflectivity of integral quadratic
//! forms of signature `(n, 1)`.
//!
//! The library runs Vinberg's algorithm entirely over arbitrary-precision
//! integers and rationals: it enumerates mirror normals (roots) in increasing
//! distance from a chosen control point, accumulates the fundamental Coxeter
//! polyhedron, and certifies finite volume by computing the extreme rays of
//! the associated polyhedral cone.
//!
//! Everything that decides acceptance, termination, or classification is
//! exact. The only floating point lives in [`bounds`], which evaluates the
//! volume-based facet cap with high-precision (256-bit) reals and documented
//! conservative rounding.

// Index loops walk several parallel matrices at once; iterator chains would
// obscure the subscripts the math is written in.
#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod bounds;
pub mod chamber;
pub mod cone;
pub mod diagram;
pub mod engine;
pub mod error;
pub mod forms;
pub mod ratmat;
pub mod roots;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
