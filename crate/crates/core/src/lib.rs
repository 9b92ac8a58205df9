//! Exact computations on hypersurfaces with degenerate dual varieties.
//!
//! The crate is organized bottom-up:
//!
//! - [`arith`]: scalars (big rationals and prime fields), dense exact matrices, seeded PRNG.
//! - [`poly`]: sparse multivariate polynomials, binary forms, linear substitutions and the
//!   polynomial text format.
//! - [`polarize`]: Hessians, flags, point sampling on hypersurfaces and the Katz dual-dimension
//!   estimator.
//! - [`dual`]: Euclidean division of binary forms, the remainder equation and its flag-indexed
//!   evaluation, torus weights, membership verdicts and determinantal-complexity bounds.
//! - [`rep`]: partitions, symmetric group characters, immanants and four-term relations.
//! - [`gct`]: named polynomials on matrix space and the checks around the determinant orbit.
//! - [`catalog`]: named-polynomial grammar used by the command-line driver.

pub mod arith;
pub mod catalog;
pub mod dual;
pub mod error;
pub mod gct;
pub mod polarize;
pub mod poly;
pub mod rep;

pub use arith::{ExactMatrix, Field, Prng, Scalar};
pub use error::{Error, Result};
pub use poly::{BinaryForm, LinearSubstitution, Monomial, MultiPoly};
