//! Exact computations with lines and rational curves on hypersurfaces over
//! finite fields.
//!
//! Everything here is desk-scale and exact: small fields, sparse polynomials,
//! dense linear algebra over F_q, and splitting types of vector bundles on P^1
//! recovered from graded kernel dimensions.
//!
//! Module map:
//!
//! - [`galois`]: arithmetic in F_{p^e} with a deterministic choice of modulus.
//! - [`polyalg`]: sparse homogeneous polynomials, binary forms, linear
//!   subspaces in canonical echelon form, and expansions of a hypersurface
//!   around a point or a flag of subspaces.
//! - [`p1split`]: twisted maps of sheaves on P^1 and their kernel splitting
//!   types.
//! - [`linegeom`]: normal bundles of lines, freeness tests, linear-part
//!   profiles, and tangent-space dimensions of Fano schemes.
//! - [`kersys`]: base-point-free systems, kernel bundles restricted to
//!   rational curves, and free-curve searches.
//! - [`fermatlab`]: Fermat hypersurfaces, their standard free curves, and
//!   exhaustive no-free-line audits.
//! - [`census`]: exhaustive enumeration of k-planes over small fields with
//!   counting and heuristic dimension estimates.
//! - [`oracle`]: deliberately naive reference implementations used to
//!   cross-check the fast paths in tests.

#![forbid(unsafe_code)]

pub mod census;
pub mod error;
pub mod fermatlab;
pub mod galois;
pub mod kersys;
pub mod linalg;
pub mod linegeom;
pub mod oracle;
pub mod p1split;
pub mod polyalg;
pub mod rng;

pub use error::Error;
pub use galois::{FieldCtx, Fq};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
