//! Named polynomials on matrix space and the checks around the determinant orbit closure.
//!
//! Matrix-space polynomials use `N = n^2` variables in row-major order: entry `(i, j)` is
//! `x{i*n + j}`.

mod kernel;
mod padded;
mod pfaffian;
mod stabilizer;
mod subspace;

pub use kernel::{
    c_ratio_consistency, det_hessian_form, det_hessian_kernel, random_corank_one, tangent_condition_check,
    CRatioReport, KernelReport, TangentReport, TangentWitness,
};
pub use padded::{padded_dual_check, padded_poly, BlockCheck, PaddedCheck, PaddedPoly};
pub use pfaffian::{
    congruence_action, curve_limit_check, p_lambda, pfaffian, pfaffian_minor, sym_skew_split, CurveLimit, PLambda,
    SymSkewSplit,
};
pub use stabilizer::{infinitesimal_action, stabilizer_dim, MAX_STABILIZER_SIZE};
pub use subspace::{essential_vars, sub_variety_dims, subspace_membership, SubVarietyDims};

use serde::Serialize;

use crate::arith::{Field, Scalar};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::rep::{immanant_poly, Partition, Permutation};

/// Largest matrix size for full Leibniz-type expansions.
pub const MAX_MATRIX_SIZE: usize = 7;

/// A polynomial on `n x n` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSpacePoly {
    pub n: usize,
    pub poly: MultiPoly,
}

impl MatrixSpacePoly {
    pub fn new(n: usize, poly: MultiPoly) -> Result<Self> {
        if poly.nvars() != n * n {
            return Err(Error::VariableCountMismatch(poly.nvars(), n * n));
        }
        Ok(MatrixSpacePoly { n, poly })
    }

    pub fn degree(&self) -> Option<u32> {
        self.poly.homogeneous_degree()
    }
}

/// Row-major layout tag reported alongside matrix-space polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Flattening {
    RowMajor,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix size must be positive".into()));
    }
    if n > MAX_MATRIX_SIZE {
        return Err(Error::SizeCap(format!("full expansion capped at n = {MAX_MATRIX_SIZE}")));
    }
    Ok(())
}

fn permutation_sum(n: usize, field: Field, weight: impl Fn(&Permutation) -> i64) -> MultiPoly {
    let mut p = MultiPoly::zero(field, n * n);
    for sigma in Permutation::all(n) {
        let mut e = vec![0u32; n * n];
        for i in 0..n {
            e[i * n + sigma.image(i)] = 1;
        }
        p.add_term(Monomial::new(e), field.from_i64(weight(&sigma)));
    }
    p
}

/// `det_n` by the Leibniz formula (signs from inversion counts).
pub fn det_poly(n: usize, field: Field) -> Result<MatrixSpacePoly> {
    check_size(n)?;
    MatrixSpacePoly::new(n, permutation_sum(n, field, Permutation::sign_by_inversions))
}

/// `perm_n`.
pub fn perm_poly(n: usize, field: Field) -> Result<MatrixSpacePoly> {
    check_size(n)?;
    MatrixSpacePoly::new(n, permutation_sum(n, field, |_| 1))
}

/// The immanant polynomial `IM_lambda`.
pub fn immanant_matrix_poly(lambda: &Partition, field: Field) -> Result<MatrixSpacePoly> {
    let n = lambda.size() as usize;
    check_size(n)?;
    MatrixSpacePoly::new(n, immanant_poly(lambda, field)?)
}

/// `Some(c)` with `a = c b` when `a` is a scalar multiple of the nonzero `b`.
pub fn scalar_multiple(a: &MultiPoly, b: &MultiPoly) -> Option<Scalar> {
    let (m, bc) = b.terms().next()?;
    let c = a.coeff(m.exponents()).try_div(bc).ok()?;
    (a == &b.scale(&c)).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_models() {
        let q = Field::Rational;
        let d2 = det_poly(2, q).unwrap();
        assert_eq!(d2.poly.to_string(), "x0*x3 - x1*x2");
        let p3 = perm_poly(3, q).unwrap();
        assert_eq!(p3.poly.num_terms(), 6);
        assert!(p3.poly.terms().all(|(_, c)| c.is_one()));
        let d4 = det_poly(4, q).unwrap();
        let pos = d4.poly.terms().filter(|(_, c)| !c.is_negative()).count();
        assert_eq!((d4.poly.num_terms(), pos), (24, 12));
        assert!(det_poly(8, q).is_err());
    }

    #[test]
    fn multiples() {
        let q = Field::Rational;
        let d = det_poly(2, q).unwrap().poly;
        let three = d.scale(&q.from_i64(-3));
        assert_eq!(scalar_multiple(&three, &d), Some(q.from_i64(-3)));
        assert_eq!(scalar_multiple(&perm_poly(2, q).unwrap().poly, &d), None);
    }
}
