//! Sparse multivariate polynomials, binary forms and linear substitutions.
//!
//! Variables are named `x0 .. x{N-1}`. Polynomials on the space of `n x n` matrices use the
//! row-major flattening: entry `(i, j)` is variable `x{i*n + j}`.

mod binary;
mod multipoly;
mod subst;
mod text;
pub mod univariate;

pub use binary::BinaryForm;
pub use multipoly::{Monomial, MultiPoly};
pub use subst::LinearSubstitution;
pub use text::{format_poly, parse_poly, parse_poly_with_nvars};

/// Index of matrix entry `(i, j)` in the row-major flattening of `n x n` matrices.
pub fn matrix_var(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}
