//! Exact scalar arithmetic and dense linear algebra.

mod matrix;
mod prng;
mod scalar;

pub use matrix::ExactMatrix;
pub use prng::{Prng, RATIONAL_SAMPLE_BOUND};
pub use scalar::{is_prime, next_prime, Field, Scalar, DEFAULT_PRIME};
